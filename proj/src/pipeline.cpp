#include "wmtele/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wmtele {

namespace {

constexpr double kRatioRelTol = 1e-9;

// Below this the state is treated as annihilated.
constexpr double kZeroNorm = 1e-14;

// Single-qubit operator for outcome i and Kraus index j acting on Bob's qubit.
QubitOperator branch_operator(const ProtocolParams& params, const QubitOperator& kraus, int i) {
  return wmr(params, i) * flip(i) * kraus * flip(i) * wm(params, i);
}

double ratio_of(Complex numerator, Complex denominator) {
  if (std::abs(denominator) < kZeroNorm) return std::numeric_limits<double>::infinity();
  return (numerator / denominator).real();
}

bool ratios_agree(double printed, double numeric) {
  if (!std::isfinite(printed) || !std::isfinite(numeric)) return printed == numeric;
  return std::abs(printed - numeric) <= kRatioRelTol * std::max(1.0, std::abs(printed));
}

ClosedFormEntry ratio_entry(std::string name, double printed, const PureState& s) {
  const double numeric = ratio_of(s[0b0000], s[0b0100]);
  const double gap = std::isfinite(printed) && std::isfinite(numeric) ? std::abs(printed - numeric)
                                                                      : std::numeric_limits<double>::infinity();
  return {std::move(name), "amp(0000)/amp(0100)", printed, numeric, gap, ratios_agree(printed, numeric)};
}

// Maximum spread of amplitudes inside each of the two four-ket groups.
ClosedFormEntry group_structure_entry(const PureState& s) {
  double spread = 0.0;
  for (const auto& group : {kResourceKets, kFlippedKets}) {
    for (const auto k : group) spread = std::max(spread, std::abs(s[k] - s[group[0]]));
  }
  return {"group_structure", "max |amp(k) - amp(group head)|", 0.0, spread, spread, spread < kProbabilityTol};
}

ClosedFormEntry support_entry(const PureState& s) {
  const double res = residual_outside(s, kResourceKets);
  return {"resource_support", "squared norm outside {0000,0101,1010,1111}", 0.0, res, res, res < kProbabilityTol};
}

}  // namespace

SharedState::SharedState(PureState state) : state_(std::move(state)) {}

SharedState::SharedState(MixedState state, double success_probability)
    : state_(std::move(state)), success_probability_(success_probability) {}

PipelineMode SharedState::mode() const { return is_pure() ? PipelineMode::PaperLiteral : PipelineMode::PhysicalMixed; }

MixedState SharedState::density() const {
  if (const auto* p = std::get_if<PureState>(&state_)) return MixedState::from_pure(*p);
  return std::get<MixedState>(state_);
}

PureState initial_state() {
  Vector v = Vector::Zero(16);
  for (const auto k : kResourceKets) v(static_cast<Eigen::Index>(k)) = 0.5;
  return {kResourceQubits, std::move(v)};
}

SharedState protect(const ProtocolParams& params, const ChannelSpec& channel, PipelineMode mode) {
  const auto kraus = kraus_set(channel);
  const PureState psi0 = initial_state();

  if (mode == PipelineMode::PaperLiteral) {
    QubitOperator total = QubitOperator::Zero();
    for (int i = 0; i < 2; ++i) {
      for (const auto& e : kraus) total += branch_operator(params, e, i);
    }
    const PureState out = apply(lift(total, kResourceQubits, kBobQubit), psi0);
    if (out.norm_squared() < kZeroNorm) throw ZeroNormError("protection pipeline annihilated the shared state");
    return SharedState(out.normalized());
  }

  const MixedState rho0 = MixedState::from_pure(psi0);
  Matrix acc = Matrix::Zero(16, 16);
  for (int i = 0; i < 2; ++i) {
    for (const auto& e : kraus) acc += conjugate(lift(branch_operator(params, e, i), kResourceQubits, kBobQubit), rho0).matrix();
  }
  const double kept = acc.trace().real();
  if (kept < kZeroNorm) throw ZeroNormError("protection pipeline annihilated the shared state");
  return SharedState(MixedState(kResourceQubits, acc / kept), std::min(kept, 1.0));
}

SharedState transmit_unprotected(const ChannelSpec& channel, PipelineMode mode) {
  const auto kraus = kraus_set(channel);
  const PureState psi0 = initial_state();
  if (mode == PipelineMode::PaperLiteral) {
    const PureState out = apply(lift(kraus[0] + kraus[1], kResourceQubits, kBobQubit), psi0);
    if (out.norm_squared() < kZeroNorm) throw ZeroNormError("channel annihilated the shared state");
    return SharedState(out.normalized());
  }
  const MixedState rho0 = MixedState::from_pure(psi0);
  Matrix acc = Matrix::Zero(16, 16);
  for (const auto& e : kraus) acc += conjugate(lift(e, kResourceQubits, kBobQubit), rho0).matrix();
  return SharedState(MixedState(kResourceQubits, acc), 1.0);
}

double residual_outside(const PureState& s, std::span<const std::size_t> support) {
  double total = 0.0;
  for (std::size_t k = 0; k < s.dim(); ++k) {
    if (std::find(support.begin(), support.end(), k) == support.end()) total += std::norm(s[k]);
  }
  return total;
}

double residual_outside(const MixedState& rho, std::span<const std::size_t> support) {
  double total = 0.0;
  for (std::size_t k = 0; k < rho.dim(); ++k) {
    if (std::find(support.begin(), support.end(), k) == support.end()) {
      total += std::abs(rho.matrix()(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)));
    }
  }
  return total;
}

ClosedFormReport closed_form_check(const ProtocolParams& params, const ChannelSpec& channel) {
  ClosedFormReport report{params.kind(), channel, {}};
  const PureState s = protect(params, channel, PipelineMode::PaperLiteral).pure();
  const double r = channel.r;
  report.entries.push_back(group_structure_entry(s));

  if (const auto* p = std::get_if<ProtocolI>(&params.value())) {
    const double c = std::cos(p->omega / 2.0);
    const double sn = std::sin(p->omega / 2.0);
    const double q = p->q;
    switch (channel.kind) {
      case ChannelKind::ADC: {
        const double lambda = (c * q + sn * std::sqrt(1.0 - r)) /
                              std::sqrt(2.0 * (c * c * q * q + sn * sn * (1.0 - r)));
        report.entries.push_back(ratio_entry("lambda_ADC", lambda, s));
        break;
      }
      case ChannelKind::BFC: {
        const double p_sym = r;
        const double l1 = 0.5 * ((1.0 - p_sym) * sn * sn + q * q * (1.0 - p_sym) * c * c);
        const double l2 = 0.5 * (p_sym * q * q * sn * sn + p_sym * c * c);
        report.entries.push_back(ratio_entry("lambda_BFC1/lambda_BFC2", l1 / l2, s));
        break;
      }
      case ChannelKind::PFC:
        report.entries.push_back(support_entry(s));
        break;
    }
    return report;
  }

  const auto& p = std::get<ProtocolII>(params.value());
  const double a = k_plus(p.k1) * k_plus(p.k2);
  const double b = k_minus(p.k1) * k_minus(p.k2);
  switch (channel.kind) {
    case ChannelKind::ADC: {
      const double lambda = std::sqrt(2.0) * (std::sqrt(a) + std::sqrt(b * (1.0 - r))) /
                            std::sqrt(a * a + (1.0 - r) * b * b);
      report.entries.push_back(ratio_entry("lambda_1", lambda, s));
      break;
    }
    case ChannelKind::BFC: {
      const double x = k_plus(p.k1) * k_minus(p.k2);
      const double y = k_minus(p.k1) * k_plus(p.k2);
      const double l1 = (a + b) / std::sqrt(2.0 * (a * a + b * b));
      const double l2 = (x + y) / std::sqrt(2.0 * (x * x + y * y));
      report.entries.push_back(ratio_entry("lambda_1/lambda_2", l1 / l2, s));
      break;
    }
    case ChannelKind::PFC:
      report.entries.push_back(support_entry(s));
      break;
  }
  return report;
}

std::string_view to_string(PipelineMode mode) { return mode == PipelineMode::PaperLiteral ? "paper" : "physical"; }

PipelineMode parse_mode(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t == "paper" || t == "paper-literal") return PipelineMode::PaperLiteral;
  if (t == "physical" || t == "physical-mixed") return PipelineMode::PhysicalMixed;
  throw std::invalid_argument("unknown mode '" + std::string(text) + "' (expected paper or physical)");
}

}  // namespace wmtele
