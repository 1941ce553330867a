#include "wmtele/teleport.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

namespace wmtele {

namespace {

PureState eta_state(std::array<std::size_t, 4> kets, std::array<double, 4> signs) {
  Vector v = Vector::Zero(16);
  for (std::size_t k = 0; k < 4; ++k) v(static_cast<Eigen::Index>(kets[k])) = 0.5 * signs[k];
  return {4, std::move(v)};
}

}  // namespace

InputQubit InputQubit::make(Complex alpha, Complex beta) {
  const double n = std::norm(alpha) + std::norm(beta);
  if (std::abs(n - 1.0) > kAlgebraTol) throw std::domain_error("input qubit is not normalized");
  return {alpha, beta};
}

PureState InputQubit::state() const {
  Vector v(2);
  v << alpha, beta;
  return {1, std::move(v)};
}

const MeasurementBasis& eta_basis() {
  static const MeasurementBasis basis{{
      eta_state({0b0000, 0b0101, 0b1010, 0b1111}, {1, 1, 1, 1}),
      eta_state({0b0000, 0b0101, 0b1010, 0b1111}, {1, 1, -1, -1}),
      eta_state({0b0010, 0b0111, 0b1000, 0b1101}, {1, 1, 1, 1}),
      eta_state({0b0010, 0b0111, 0b1000, 0b1101}, {1, 1, -1, -1}),
  }};
  return basis;
}

TeleportResult teleport(const SharedState& shared, const InputQubit& input) {
  const PureState in = input.state();
  const auto& basis = eta_basis();

  std::optional<PureState> joint_pure;
  std::optional<MixedState> joint_mixed;
  if (shared.is_pure()) {
    joint_pure = tensor(in, shared.pure());
  } else {
    joint_mixed = tensor(MixedState::from_pure(in), shared.density());
  }

  auto outcome = [&](int i) -> TeleportOutcome {
    const PureState& eta = basis.eta[static_cast<std::size_t>(i)];
    MixedState raw = joint_pure ? MixedState::from_pure(project(*joint_pure, eta, kAliceQubits))
                                : project(*joint_mixed, eta, kAliceQubits);
    const double p = std::max(raw.trace().real(), 0.0);
    if (p < kNegligibleOutcome) {
      return {i + 1, p, raw, MixedState(1, Matrix::Zero(2, 2)), 0.0};
    }
    const QubitOperator u = correction_unitary(i + 1);
    MixedState corrected(1, u * raw.matrix() * u.adjoint() / p);
    const double f = std::clamp(fidelity(in, corrected), 0.0, 1.0);
    return {i + 1, p, std::move(raw), std::move(corrected), f};
  };

  TeleportResult result{{outcome(0), outcome(1), outcome(2), outcome(3)}, 0.0, 0.0};
  for (const auto& o : result.outcomes) {
    result.total_probability += o.probability;
    result.fidelity += o.probability * o.fidelity;
  }
  if (std::abs(1.0 - result.total_probability) > kSpanLeakTol) {
    throw BasisLeakError("joint state has " + std::to_string(1.0 - result.total_probability) +
                         " probability outside the eta basis span");
  }
  return result;
}

const std::vector<InputQubit>& design_points() {
  static const std::vector<InputQubit> points = [] {
    const double h = 1.0 / std::numbers::sqrt2;
    const Complex i{0.0, 1.0};
    return std::vector<InputQubit>{
        {1.0, 0.0}, {0.0, 1.0}, {h, h}, {h, -h}, {h, h * i}, {h, -h * i},
    };
  }();
  return points;
}

double average_fidelity(const SharedState& shared, InputMeasure measure) {
  if (measure == InputMeasure::Haar) {
    double total = 0.0;
    for (const auto& p : design_points()) total += teleport(shared, p).fidelity;
    return std::clamp(total / static_cast<double>(design_points().size()), 0.0, 1.0);
  }

  // Symmetric nodes cancel the odd part exactly.
  auto at = [&](double alpha) { return teleport(shared, InputQubit{alpha, std::sqrt(1.0 - alpha * alpha)}).fidelity; };
  const double total = boost::math::quadrature::gauss<double, 4>::integrate(at, -1.0, 1.0) / 2.0;
  return std::clamp(total, 0.0, 1.0);
}

double unprotected_baseline(const ChannelSpec& channel, PipelineMode mode, InputMeasure measure) {
  return average_fidelity(transmit_unprotected(channel, mode), measure);
}

std::string_view to_string(InputMeasure measure) { return measure == InputMeasure::Haar ? "haar" : "real"; }

InputMeasure parse_measure(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (t == "haar") return InputMeasure::Haar;
  if (t == "real") return InputMeasure::RealAmplitude;
  throw std::invalid_argument("unknown input measure '" + std::string(text) + "' (expected haar or real)");
}

}  // namespace wmtele
