#include "wmtele/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "wmtele/oracle.hpp"

namespace wmtele::app {

namespace {

using json = nlohmann::ordered_json;

constexpr double kPi = std::numbers::pi;

std::string fmt(double v, int digits = 3) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

// Collects the worst deviation seen by one invariant.
struct Tally {
  Tally(std::string n, double t) : name(std::move(n)), tol(t) {}

  std::string name;
  double tol;
  double worst = 0.0;
  std::size_t cases = 0;
  std::string where;
  std::vector<std::string> errors;

  void record(double deviation, const std::string& context) {
    ++cases;
    if (!(deviation <= worst)) {
      worst = deviation;
      where = context;
    }
  }

  void fail(const std::string& message) {
    ++cases;
    errors.push_back(message);
  }

  CheckItem item() const {
    const bool pass = errors.empty() && worst <= tol;
    std::string detail = std::to_string(cases) + " cases, max deviation " + fmt(worst) + " (tol " + fmt(tol) + ")";
    if (!pass && !where.empty()) detail += " at " + where;
    if (!errors.empty()) detail += "; " + std::to_string(errors.size()) + " errors, first: " + errors.front();
    return {name, pass, detail};
  }
};

double identity_gap(const QubitOperator& m) { return (m - QubitOperator::Identity()).cwiseAbs().maxCoeff(); }

std::string params_text(ProtocolKind kind, double a1, double a2) {
  return std::string(to_string(kind)) + "(" + fmt(a1, 6) + ", " + fmt(a2, 6) + ")";
}

KrausPair kraus_under_test(const ChannelSpec& spec, Fault fault) {
  KrausPair k = kraus_set(spec);
  if (fault == Fault::KrausSign) {
    // sqrt(1 - r) -> sqrt(1 + r) in the no-jump element.
    const double keep = std::sqrt(1.0 + spec.r);
    if (spec.kind == ChannelKind::ADC) {
      k[0](1, 1) = keep;
    } else {
      k[0] = keep * QubitOperator::Identity();
    }
  }
  return k;
}

const std::vector<ChannelKind> kChannels = {ChannelKind::ADC, ChannelKind::BFC, ChannelKind::PFC};
const std::vector<ProtocolKind> kProtocols = {ProtocolKind::I, ProtocolKind::II};
const std::vector<PipelineMode> kModes = {PipelineMode::PaperLiteral, PipelineMode::PhysicalMixed};

CheckItem check_povm() {
  Tally t{"povm_completeness", kAlgebraTol};
  for (double a : linspace(0.0, kPi, 11)) {
    const ProtocolParams p(ProtocolI{a, 0.5});
    t.record(identity_gap(wm(p, 0).adjoint() * wm(p, 0) + wm(p, 1).adjoint() * wm(p, 1)), params_text(ProtocolKind::I, a, 0.5));
  }
  for (double k : linspace(-1.0, 1.0, 11)) {
    const ProtocolParams p(ProtocolII{k, 0.0});
    t.record(identity_gap(wm(p, 0).adjoint() * wm(p, 0) + wm(p, 1).adjoint() * wm(p, 1)), params_text(ProtocolKind::II, k, 0.0));
  }
  return t.item();
}

CheckItem check_kraus(Fault fault) {
  Tally t{"kraus_completeness", kAlgebraTol};
  for (ChannelKind c : kChannels) {
    for (double r : linspace(0.0, 1.0, 11)) {
      const auto k = kraus_under_test(ChannelSpec::make(c, r), fault);
      t.record(identity_gap(k[0].adjoint() * k[0] + k[1].adjoint() * k[1]),
               std::string(to_string(c)) + " r=" + fmt(r));
    }
  }
  return t.item();
}

CheckItem check_reversal_sum() {
  Tally t{"reversal_filter_sum", kAlgebraTol};
  for (double q : linspace(0.0, 1.0, 11)) {
    const ProtocolParams p(ProtocolI{1.0, q});
    const QubitOperator sum = wmr(p, 0).adjoint() * wmr(p, 0) + wmr(p, 1).adjoint() * wmr(p, 1);
    t.record((sum - (1.0 + q * q) * QubitOperator::Identity()).cwiseAbs().maxCoeff(), "q=" + fmt(q));
  }
  return t.item();
}

CheckItem check_reversal_completeness() {
  Tally t{"reversal_completeness_II", kAlgebraTol};
  for (double k : linspace(-1.0, 1.0, 11)) {
    const ProtocolParams p(ProtocolII{0.0, k});
    t.record(identity_gap(wmr(p, 0).adjoint() * wmr(p, 0) + wmr(p, 1).adjoint() * wmr(p, 1)), "K2=" + fmt(k));
  }
  return t.item();
}

CheckItem check_eta() {
  Tally t{"eta_orthonormality", kAlgebraTol};
  const auto& b = eta_basis();
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const double expect = i == j ? 1.0 : 0.0;
      t.record(std::abs(inner(b.eta[i], b.eta[j]) - expect), "<eta" + std::to_string(i + 1) + "|eta" + std::to_string(j + 1) + ">");
    }
  }
  return t.item();
}

CheckItem check_probability_sum() {
  Tally t{"outcome_probability_sum", kProbabilityTol};
  std::size_t annihilated = 0;
  for (ProtocolKind kind : kProtocols) {
    const ParamRanges range = ParamRanges::full(kind);
    for (ChannelKind c : kChannels) {
      for (PipelineMode mode : kModes) {
        for (double a1 : linspace(range.axis1.lo, range.axis1.hi, 4)) {
          for (double a2 : linspace(range.axis2.lo, range.axis2.hi, 4)) {
            for (double r : linspace(0.0, 1.0, 4)) {
              const std::string ctx = params_text(kind, a1, a2) + " " + std::string(to_string(c)) + " r=" + fmt(r) +
                                      " " + std::string(to_string(mode));
              try {
                const SharedState s = protect(ProtocolParams::from_axes(kind, a1, a2), ChannelSpec::make(c, r), mode);
                for (const auto& in : design_points()) t.record(std::abs(teleport(s, in).total_probability - 1.0), ctx);
              } catch (const ZeroNormError&) {
                ++annihilated;
              } catch (const BasisLeakError& e) {
                t.fail(ctx + ": " + e.what());
              }
            }
          }
        }
      }
    }
  }
  CheckItem item = t.item();
  item.detail += ", " + std::to_string(annihilated) + " annihilated cells skipped";
  return item;
}

CheckItem check_global_phase(std::mt19937_64& rng) {
  Tally t{"global_phase_invariance", kAlgebraTol};
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 12; ++n) {
    const oracle::Config c = oracle::random_config(rng);
    const SharedState s = protect(ProtocolParams::from_axes(c.protocol, c.axis1, c.axis2), ChannelSpec::make(c.channel, c.r), c.mode);
    const double theta = kPi * u(rng);
    const Complex alpha = std::cos(theta / 2.0);
    const Complex beta = std::polar(std::sin(theta / 2.0), 2.0 * kPi * u(rng));
    const Complex phase = std::polar(1.0, 2.0 * kPi * u(rng));
    const TeleportResult a = teleport(s, InputQubit{alpha, beta});
    const TeleportResult b = teleport(s, InputQubit{phase * alpha, phase * beta});
    double gap = std::abs(a.fidelity - b.fidelity);
    for (std::size_t i = 0; i < 4; ++i) {
      gap = std::max({gap, std::abs(a.outcomes[i].probability - b.outcomes[i].probability),
                      std::abs(a.outcomes[i].fidelity - b.outcomes[i].fidelity)});
    }
    t.record(gap, c.describe());
  }
  return t.item();
}

// Haar average by Gauss-Legendre in cos(theta) and the trapezoid rule in phi.
double quadrature_average(const SharedState& s) {
  constexpr int kPhi = 128;
  auto ring = [&](double z) {
    const double c = std::sqrt((1.0 + z) / 2.0);
    const double sn = std::sqrt((1.0 - z) / 2.0);
    double acc = 0.0;
    for (int k = 0; k < kPhi; ++k) {
      acc += teleport(s, InputQubit{c, std::polar(sn, 2.0 * kPi * k / kPhi)}).fidelity;
    }
    return acc / kPhi;
  };
  return boost::math::quadrature::gauss<double, 64>::integrate(ring, -1.0, 1.0) / 2.0;
}

CheckItem check_design_vs_quadrature(std::mt19937_64& rng) {
  Tally t{"design_vs_quadrature", 1e-9};
  for (int n = 0; n < 5; ++n) {
    const oracle::Config c = oracle::random_config(rng);
    const SharedState s = protect(ProtocolParams::from_axes(c.protocol, c.axis1, c.axis2), ChannelSpec::make(c.channel, c.r), c.mode);
    t.record(std::abs(average_fidelity(s) - quadrature_average(s)), c.describe());
  }
  return t.item();
}

ProtocolParams random_params(ProtocolKind kind, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  if (kind == ProtocolKind::I) return ProtocolParams(ProtocolI{kPi * u(rng), u(rng)});
  return ProtocolParams(ProtocolII{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0});
}

// Parameters for which every surviving branch n_i f_i e_j f_i m_i is
// proportional to one fixed unitary: n_i m_i ~ I at r = 0, n_i X m_i ~ X for
// BFC at r = 1.
ProtocolParams balanced_params(ProtocolKind kind, bool flipped, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 0.95);
  if (kind == ProtocolKind::I) {
    if (!flipped) {
      const double w = u(rng) * kPi / 2.0;
      return ProtocolParams(ProtocolI{w, std::tan(w / 2.0)});
    }
    const double w = kPi / 2.0 + u(rng) * kPi / 2.0;
    return ProtocolParams(ProtocolI{w, 1.0 / std::tan(w / 2.0)});
  }
  const double k = 2.0 * u(rng) - 1.0;
  return ProtocolParams(ProtocolII{k, flipped ? k : -k});
}

CheckItem check_noiseless_paper(std::mt19937_64& rng) {
  Tally t{"noiseless_limit_paper", kProbabilityTol};
  for (ProtocolKind kind : kProtocols) {
    for (ChannelKind c : kChannels) {
      for (int n = 0; n < 8; ++n) {
        const ProtocolParams p = random_params(kind, rng);
        try {
          const SharedState s = protect(p, ChannelSpec::make(c, 0.0), PipelineMode::PaperLiteral);
          t.record(1.0 - average_fidelity(s), params_text(kind, p.axis1(), p.axis2()) + " " + std::string(to_string(c)));
        } catch (const ZeroNormError&) {
        }
      }
    }
  }
  return t.item();
}

CheckItem check_noiseless_balanced(std::mt19937_64& rng) {
  Tally t{"noiseless_limit_balanced_physical", kProbabilityTol};
  for (ProtocolKind kind : kProtocols) {
    for (ChannelKind c : kChannels) {
      for (int n = 0; n < 8; ++n) {
        const ProtocolParams p = balanced_params(kind, false, rng);
        const SharedState s = protect(p, ChannelSpec::make(c, 0.0), PipelineMode::PhysicalMixed);
        t.record(1.0 - average_fidelity(s), params_text(kind, p.axis1(), p.axis2()) + " " + std::string(to_string(c)));
      }
    }
  }
  return t.item();
}

// PFC at r = 1 has no coinciding parameters: X Z X = -Z, so the coherent sum
// cancels exactly when the two branches are balanced, and unbalanced branches
// leave the mixed state impure.
CheckItem check_mode_coincidence(std::mt19937_64& rng) {
  Tally t{"mode_coincidence_balanced", kProbabilityTol};
  struct Case {
    ChannelKind channel;
    double r;
    bool flipped;
  };
  const std::vector<Case> cases = {{ChannelKind::ADC, 0.0, false}, {ChannelKind::BFC, 0.0, false},
                                   {ChannelKind::PFC, 0.0, false}, {ChannelKind::BFC, 1.0, true}};
  for (ProtocolKind kind : kProtocols) {
    for (const Case& c : cases) {
      for (int n = 0; n < 4; ++n) {
        const ProtocolParams p = balanced_params(kind, c.flipped, rng);
        const ChannelSpec spec = ChannelSpec::make(c.channel, c.r);
        const SharedState lit = protect(p, spec, PipelineMode::PaperLiteral);
        const SharedState phys = protect(p, spec, PipelineMode::PhysicalMixed);
        t.record(1.0 - fidelity(lit.pure(), phys.density()),
                 params_text(kind, p.axis1(), p.axis2()) + " " + std::string(to_string(c.channel)) + " r=" + fmt(c.r));
      }
    }
  }
  return t.item();
}

CheckItem check_pfc_support(std::mt19937_64& rng) {
  Tally t{"pfc_resource_support", kProbabilityTol};
  for (ProtocolKind kind : kProtocols) {
    for (int n = 0; n < 8; ++n) {
      const ProtocolParams p = random_params(kind, rng);
      const double r = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      for (PipelineMode mode : kModes) {
        try {
          const SharedState s = protect(p, ChannelSpec::make(ChannelKind::PFC, r), mode);
          t.record(s.is_pure() ? residual_outside(s.pure(), kResourceKets) : residual_outside(s.density(), kResourceKets),
                   params_text(kind, p.axis1(), p.axis2()) + " r=" + fmt(r) + " " + std::string(to_string(mode)));
        } catch (const ZeroNormError&) {
        }
      }
    }
  }
  return t.item();
}

CheckItem check_oracle(std::mt19937_64& rng) {
  Tally t{"oracle_exact_agreement", 1e-10};
  for (int n = 0; n < 10; ++n) {
    const oracle::Config c = oracle::random_config(rng);
    const SharedState s = protect(ProtocolParams::from_axes(c.protocol, c.axis1, c.axis2), ChannelSpec::make(c.channel, c.r), c.mode);
    const double reference = oracle::exact_haar_average(oracle::teleport_map(oracle::shared_density(c)));
    t.record(std::abs(average_fidelity(s) - reference), c.describe());
  }
  return t.item();
}

CheckItem check_monte_carlo(std::mt19937_64& rng, std::int64_t samples) {
  constexpr double kSigmas = 4.0;
  Tally t{"monte_carlo_agreement", kSigmas};
  for (int n = 0; n < 10; ++n) {
    const oracle::Config c = oracle::random_config(rng);
    const SharedState s = protect(ProtocolParams::from_axes(c.protocol, c.axis1, c.axis2), ChannelSpec::make(c.channel, c.r), c.mode);
    const auto mc = oracle::mc_haar_average(oracle::teleport_map(oracle::shared_density(c)), samples, rng());
    const double gap = std::abs(average_fidelity(s) - mc.mean);
    // A constant integrand has zero spread; demand agreement to rounding.
    t.record(mc.std_error > 0.0 ? gap / mc.std_error : (gap < 1e-12 ? 0.0 : kSigmas + 1.0), c.describe());
  }
  CheckItem item = t.item();
  item.detail = std::to_string(samples) + " samples per case, deviation in standard errors: " + item.detail;
  return item;
}

std::string protocol_name(ProtocolKind k) { return std::string(to_string(k)); }

}  // namespace

bool CheckReport::ok() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.pass; });
}

std::vector<std::string> CheckReport::failing() const {
  std::vector<std::string> out;
  for (const auto& i : items) {
    if (!i.pass) out.push_back(i.name);
  }
  return out;
}

std::string CheckReport::text() const {
  std::ostringstream os;
  for (const auto& i : items) os << (i.pass ? "PASS " : "FAIL ") << i.name << ": " << i.detail << '\n';
  const auto bad = failing();
  os << (items.size() - bad.size()) << '/' << items.size() << " invariants hold";
  if (!bad.empty()) {
    os << "; failing:";
    for (const auto& n : bad) os << ' ' << n;
  }
  os << '\n';
  return os.str();
}

CheckReport run_check(const CheckOptions& options) {
  std::mt19937_64 rng(options.seed);
  CheckReport report;
  report.items.push_back(check_povm());
  report.items.push_back(check_kraus(options.fault));
  report.items.push_back(check_reversal_sum());
  report.items.push_back(check_reversal_completeness());
  report.items.push_back(check_eta());
  report.items.push_back(check_probability_sum());
  report.items.push_back(check_global_phase(rng));
  report.items.push_back(check_design_vs_quadrature(rng));
  report.items.push_back(check_noiseless_paper(rng));
  report.items.push_back(check_noiseless_balanced(rng));
  report.items.push_back(check_mode_coincidence(rng));
  report.items.push_back(check_pfc_support(rng));
  report.items.push_back(check_oracle(rng));
  report.items.push_back(check_monte_carlo(rng, options.mc_samples));
  return report;
}

std::string format_real(std::optional<double> value) {
  if (!value || std::isnan(*value)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, *value, std::chars_format::general, 17);
  return {buf, res.ptr};
}

void write_surface_csv(std::ostream& out, const SweepResult& result) {
  const auto& g = result.grid;
  out << "axis1,axis2,r,fidelity,baseline\n";
  for (std::size_t i1 = 0; i1 < g.axis1.size(); ++i1) {
    for (std::size_t i2 = 0; i2 < g.axis2.size(); ++i2) {
      for (std::size_t ir = 0; ir < g.r_values.size(); ++ir) {
        out << format_real(g.axis1[i1]) << ',' << format_real(g.axis2[i2]) << ',' << format_real(g.r_values[ir]) << ','
            << format_real(result.at(i1, i2, ir)) << ',' << format_real(result.baseline[ir]) << '\n';
      }
    }
  }
}

void write_fmax_csv(std::ostream& out, const std::vector<FmaxPoint>& curve) {
  out << "r,fmax,param1,param2,baseline\n";
  for (const auto& p : curve) {
    const auto field = [&](double GridPoint::*m) { return p.best ? std::optional<double>((*p.best).*m) : std::nullopt; };
    out << format_real(p.r) << ',' << format_real(field(&GridPoint::fidelity)) << ',' << format_real(field(&GridPoint::axis1))
        << ',' << format_real(field(&GridPoint::axis2)) << ',' << format_real(p.baseline) << '\n';
  }
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
  out << "r,baseline,fmax_i,fmax_ii\n";
  for (const auto& row : table.rows) {
    out << format_real(row.r) << ',' << format_real(row.baseline) << ',' << format_real(row.fmax_i) << ','
        << format_real(row.fmax_ii) << '\n';
  }
}

std::string comparison_text(const ComparisonTable& table) {
  std::ostringstream os;
  os << "channel " << to_string(table.channel) << ", mode " << to_string(table.mode) << '\n';
  os << "     r  baseline  F_max(I)  F_max(II)\n";
  os.setf(std::ios::fixed);
  os.precision(4);
  for (const auto& row : table.rows) {
    os.width(6);
    os << row.r << "  ";
    os.width(8);
    os << row.baseline << "  ";
    os.width(8);
    os << row.fmax_i << "  ";
    os.width(9);
    os << row.fmax_ii << '\n';
  }
  for (const auto& v : table.verdicts) os << (v.holds ? "HOLDS  " : "FAILS  ") << v.statement << '\n';
  return os.str();
}

const std::vector<Target>& reproduction_targets() {
  using P = ProtocolKind;
  using Ch = ChannelKind;
  static const std::vector<Target> targets = {
      {"I-ADC-0.5", P::I, Ch::ADC, 0.5, 0.999, Comparison::Near, "considering r=0.5 was 0.999"},
      {"I-ADC-0.9", P::I, Ch::ADC, 0.9, 0.97, Comparison::AtLeast, "stayed close to 1"},
      {"I-BFC-0.5", P::I, Ch::BFC, 0.5, 0.7667, Comparison::Near, "r=0.5 is 0.7667"},
      {"I-BFC-0.9", P::I, Ch::BFC, 0.9, 0.58, Comparison::Near,
       "the maximum fidelity is 0.58 ... same as that obtained for no WM protection", true},
      {"I-PFC-0.5", P::I, Ch::PFC, 0.5, 0.733, Comparison::Near, "maximum F values for r=0.5 as 0.733"},
      {"I-PFC-0.9", P::I, Ch::PFC, 0.9, 0.734, Comparison::Near, "for r=0.9 as 0.734"},
      {"II-ADC-0.5", P::II, Ch::ADC, 0.5, 0.81, Comparison::Near, "is F_max=0.81"},
      {"II-ADC-0.9", P::II, Ch::ADC, 0.9, 0.754, Comparison::Near, "goes down to 0.754"},
      {"II-BFC-0.5", P::II, Ch::BFC, 0.5, 0.767, Comparison::Near, "value is ~0.767"},
      {"II-BFC-0.9", P::II, Ch::BFC, 0.9, 0.733, Comparison::Near, "F_max=0.733"},
      {"II-PFC-0.5", P::II, Ch::PFC, 0.5, 0.733, Comparison::Near, "for r=0.5 the F_max value is 0.733"},
      {"II-PFC-0.9", P::II, Ch::PFC, 0.9, 0.733, Comparison::Near, "still remain close to 0.733"},
  };
  return targets;
}

SearchProfile SearchProfile::published() { return {InputMeasure::RealAmplitude, kPi / 2.0, false}; }
SearchProfile SearchProfile::haar() { return {InputMeasure::Haar, kPi, true}; }

ParamRanges SearchProfile::ranges(ProtocolKind kind) const {
  if (kind == ProtocolKind::II) return full_k_range ? ParamRanges::full(kind) : ParamRanges::defaults(kind);
  return ParamRanges::with_omega_max(kind, omega_max);
}

bool target_met(const Target& target, double fmax, double baseline) {
  const bool value_ok = target.comparison == Comparison::AtLeast ? fmax >= target.expected
                                                                 : std::abs(fmax - target.expected) <= kTargetTolerance;
  const bool baseline_ok = !target.matches_baseline || std::abs(fmax - baseline) <= kTargetTolerance;
  return value_ok && baseline_ok;
}

namespace {

json profile_json(const SearchProfile& p) {
  json j;
  j["measure"] = std::string(to_string(p.measure));
  j["omega_range"] = {0.0, p.omega_max};
  j["k_range"] = {p.full_k_range ? -1.0 : 0.0, 1.0};
  return j;
}

json point_json(const Target& target, const FmaxPoint& p) {
  json j;
  if (p.best) {
    j["fmax"] = p.best->fidelity;
    j["param1"] = p.best->axis1;
    j["param2"] = p.best->axis2;
  } else {
    j["fmax"] = nullptr;
    j["param1"] = nullptr;
    j["param2"] = nullptr;
  }
  j["baseline"] = p.baseline;
  j["pass"] = p.best && target_met(target, p.best->fidelity, p.baseline);
  return j;
}

// F_max at each target r for every (protocol, channel) group.
using Evaluations = std::map<std::pair<PipelineMode, std::size_t>, FmaxPoint>;

Evaluations evaluate(const SearchProfile& profile, const ReproduceOptions& options) {
  const auto& targets = reproduction_targets();
  Evaluations out;
  for (PipelineMode mode : kModes) {
    std::vector<bool> done(targets.size(), false);
    for (std::size_t t = 0; t < targets.size(); ++t) {
      if (done[t]) continue;
      std::vector<std::size_t> group;
      std::vector<double> rs;
      for (std::size_t u = t; u < targets.size(); ++u) {
        if (targets[u].protocol == targets[t].protocol && targets[u].channel == targets[t].channel) {
          group.push_back(u);
          rs.push_back(targets[u].r);
          done[u] = true;
        }
      }
      CurveOptions co;
      co.ranges = profile.ranges(targets[t].protocol);
      co.measure = profile.measure;
      co.threads = options.threads;
      const auto curve = fmax_curve(targets[t].protocol, targets[t].channel, rs, options.resolution, mode, co);
      for (std::size_t k = 0; k < group.size(); ++k) out.emplace(std::pair{mode, group[k]}, curve[k]);
    }
  }
  return out;
}

}  // namespace

ReproduceOutcome run_reproduce(const ReproduceOptions& options) {
  const auto& targets = reproduction_targets();
  const SearchProfile published = SearchProfile::published();
  const SearchProfile reference = SearchProfile::haar();
  const Evaluations main = evaluate(published, options);
  const Evaluations ref = options.with_reference ? evaluate(reference, options) : Evaluations{};

  ReproduceOutcome outcome;
  json& m = outcome.manifest;
  m["schema"] = 1;
  if (!options.timestamp.empty()) m["generated_at"] = options.timestamp;
  m["tolerance"] = kTargetTolerance;
  m["resolution"] = options.resolution;
  m["profile"] = profile_json(published);
  if (options.with_reference) m["reference_profile"] = profile_json(reference);

  json list = json::array();
  for (std::size_t t = 0; t < targets.size(); ++t) {
    const Target& target = targets[t];
    json j;
    j["name"] = target.name;
    j["protocol"] = protocol_name(target.protocol);
    j["channel"] = std::string(to_string(target.channel));
    j["r"] = target.r;
    j["expected"] = target.expected;
    j["comparison"] = target.comparison == Comparison::Near ? "within_tolerance" : "at_least";
    j["tolerance"] = kTargetTolerance;
    if (target.matches_baseline) j["also_matches_baseline"] = true;
    j["source"] = target.source;

    bool pass = false;
    json achieved;
    for (PipelineMode mode : kModes) {
      const json pj = point_json(target, main.at({mode, t}));
      pass = pass || pj["pass"].get<bool>();
      achieved[std::string(to_string(mode))] = pj;
    }
    j["achieved"] = achieved;
    if (options.with_reference) {
      json hr;
      for (PipelineMode mode : kModes) hr[std::string(to_string(mode))] = point_json(target, ref.at({mode, t}));
      j["haar_reference"] = hr;
    }
    j["pass"] = pass;
    if (!pass) {
      std::string note = "no mode within tolerance:";
      for (PipelineMode mode : kModes) {
        const auto& v = achieved[std::string(to_string(mode))]["fmax"];
        note += " " + std::string(to_string(mode)) + "=" + (v.is_null() ? std::string("none") : format_real(v.get<double>()));
      }
      j["discrepancy"] = note;
      outcome.failing.push_back(target.name);
    }
    list.push_back(std::move(j));
  }
  m["targets"] = std::move(list);
  m["summary"] = {{"total", targets.size()},
                  {"passed", targets.size() - outcome.failing.size()},
                  {"failing", outcome.failing}};
  return outcome;
}

}  // namespace wmtele::app
