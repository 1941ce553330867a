#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "wmtele/oracle.hpp"
#include "wmtele/teleport.hpp"

using namespace wmtele;

namespace {

constexpr double kPi = std::numbers::pi;

SharedState noiseless(PipelineMode mode = PipelineMode::PaperLiteral) {
  return protect(ProtocolParams(ProtocolI{1.0, 0.7}), ChannelSpec::make(ChannelKind::ADC, 0.0), mode);
}

SharedState shared_for(const oracle::Config& c) {
  return protect(ProtocolParams::from_axes(c.protocol, c.axis1, c.axis2), ChannelSpec::make(c.channel, c.r), c.mode);
}

}  // namespace

TEST(EtaBasis, Orthonormal) {
  const auto& b = eta_basis();
  EXPECT_NEAR(std::abs(inner(b.eta[0], b.eta[1])), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(inner(b.eta[2], b.eta[2]) - 1.0), 0.0, 1e-15);
  EXPECT_EQ(b.eta[0][0b1111], Complex(0.5));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(inner(b.eta[i], b.eta[j])), i == j ? 1.0 : 0.0, 1e-15);
}

TEST(Teleport, NoiselessComputationalInput) {
  const TeleportResult r = teleport(noiseless(), InputQubit::make(1.0, 0.0));
  for (const auto& o : r.outcomes) {
    EXPECT_NEAR(std::abs(o.bob_corrected.matrix()(0, 0) - 1.0), 0.0, 1e-12);
    EXPECT_NEAR(o.fidelity, 1.0, 1e-12);
  }
  EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
}

TEST(Teleport, NoiselessEqualOutcomes) {
  const double h = 1.0 / std::numbers::sqrt2;
  const TeleportResult r = teleport(noiseless(), InputQubit::make(h, Complex(0.0, h)));
  for (const auto& o : r.outcomes) {
    EXPECT_NEAR(o.probability, 0.25, 1e-12);
    EXPECT_NEAR(std::abs(o.bob_raw.trace() - o.probability), 0.0, 1e-15);
  }
  EXPECT_NEAR(r.total_probability, 1.0, 1e-12);
  EXPECT_NEAR(r.fidelity, 1.0, 1e-12);
}

TEST(Teleport, NoiselessEveryOutcomePerfectInLiteralMode) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 10; ++n) {
    const auto kind = n % 2 ? ProtocolKind::I : ProtocolKind::II;
    const ProtocolParams p = kind == ProtocolKind::I ? ProtocolParams(ProtocolI{kPi * u(rng), u(rng)})
                                                     : ProtocolParams(ProtocolII{2 * u(rng) - 1, 2 * u(rng) - 1});
    const SharedState s = protect(p, ChannelSpec::make(ChannelKind::BFC, 0.0), PipelineMode::PaperLiteral);
    const double t = kPi * u(rng);
    const TeleportResult r = teleport(s, InputQubit::make(std::cos(t / 2), std::polar(std::sin(t / 2), 2 * kPi * u(rng))));
    for (const auto& o : r.outcomes) EXPECT_NEAR(o.fidelity, 1.0, 1e-10);
  }
}

TEST(Teleport, ProbabilitiesSumToOneForMixedStates) {
  std::mt19937_64 rng(2);
  for (int n = 0; n < 20; ++n) {
    const oracle::Config c = oracle::random_config(rng);
    const SharedState s = shared_for(c);
    for (const auto& in : design_points()) EXPECT_NEAR(teleport(s, in).total_probability, 1.0, 1e-10) << c.describe();
  }
}

TEST(Teleport, GlobalPhaseInvariance) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 10; ++n) {
    const SharedState s = shared_for(oracle::random_config(rng));
    const Complex a = std::cos(0.4), b = std::polar(std::sin(0.4), 1.3);
    const Complex ph = std::polar(1.0, 2 * kPi * u(rng));
    const TeleportResult x = teleport(s, InputQubit::make(a, b));
    const TeleportResult y = teleport(s, InputQubit::make(ph * a, ph * b));
    for (int i = 0; i < 4; ++i) {
      EXPECT_NEAR(x.outcomes[i].probability, y.outcomes[i].probability, 1e-12);
      EXPECT_NEAR(x.outcomes[i].fidelity, y.outcomes[i].fidelity, 1e-12);
    }
  }
}

TEST(Teleport, MatchesBruteForceOnEveryInput) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  for (int n = 0; n < 10; ++n) {
    const oracle::Config c = oracle::random_config(rng);
    const SharedState s = shared_for(c);
    const oracle::Mat rho = oracle::shared_density(c);
    Eigen::Vector2cd v(Complex(g(rng), g(rng)), Complex(g(rng), g(rng)));
    v.normalize();
    EXPECT_NEAR(teleport(s, InputQubit::make(v(0), v(1))).fidelity, oracle::direct_fidelity(rho, v), 1e-12) << c.describe();
  }
}

TEST(Teleport, LeakOutsideEtaSpanThrows) {
  // Alice's qubits (in, A, A, A) read x011 here, which no eta state contains.
  const SharedState s(PureState::basis(4, 0b0111));
  EXPECT_THROW(teleport(s, InputQubit::make(1.0, 0.0)), BasisLeakError);
}

TEST(InputQubit, RejectsUnnormalized) {
  EXPECT_THROW(InputQubit::make(1.0, 1.0), std::domain_error);
  EXPECT_NO_THROW(InputQubit::make(0.6, Complex(0.0, 0.8)));
}

TEST(AverageFidelity, NoiselessIsOne) {
  EXPECT_NEAR(average_fidelity(noiseless()), 1.0, 1e-12);
  EXPECT_NEAR(average_fidelity(noiseless(), InputMeasure::RealAmplitude), 1.0, 1e-12);
}

TEST(AverageFidelity, DesignMatchesExactSecondMoment) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 20; ++n) {
    const oracle::Config c = oracle::random_config(rng);
    const double exact = oracle::exact_haar_average(oracle::teleport_map(oracle::shared_density(c)));
    EXPECT_NEAR(average_fidelity(shared_for(c)), exact, 1e-12) << c.describe();
  }
}

TEST(AverageFidelity, DesignMatchesSphereQuadrature) {
  std::mt19937_64 rng(6);
  for (int n = 0; n < 5; ++n) {
    const SharedState s = shared_for(oracle::random_config(rng));
    constexpr int kPhi = 128;
    auto ring = [&](double z) {
      double acc = 0.0;
      for (int k = 0; k < kPhi; ++k) {
        acc += teleport(s, InputQubit{std::sqrt((1 + z) / 2), std::polar(std::sqrt((1 - z) / 2), 2 * kPi * k / kPhi)}).fidelity;
      }
      return acc / kPhi;
    };
    const double quad = boost::math::quadrature::gauss<double, 64>::integrate(ring, -1.0, 1.0) / 2.0;
    EXPECT_NEAR(average_fidelity(s), quad, 1e-9);
  }
}

TEST(AverageFidelity, RealAmplitudeRuleIsExact) {
  // Against a fine trapezoid rule in t with weight sin(t) / 2.
  std::mt19937_64 rng(7);
  for (int n = 0; n < 5; ++n) {
    const SharedState s = shared_for(oracle::random_config(rng));
    constexpr int kSteps = 2000;
    double acc = 0.0;
    for (int k = 0; k <= kSteps; ++k) {
      const double t = kPi * k / kSteps;
      const double w = (k == 0 || k == kSteps) ? 0.5 : 1.0;
      acc += w * std::sin(t) / 2.0 * teleport(s, InputQubit{std::cos(t), std::sin(t)}).fidelity;
    }
    EXPECT_NEAR(average_fidelity(s, InputMeasure::RealAmplitude), acc * kPi / kSteps, 1e-6);
  }
}

TEST(AverageFidelity, RealAmplitudeUnprotectedClosedForms) {
  // A Pauli error P costs r (1 - <P>^2). For real inputs <Z> = cos 2t and
  // <X> = sin 2t, and E[sin^2 2t] = 8/15 under the sin(t)/2 weight.
  for (double r : {0.1, 0.5, 0.9}) {
    const auto bfc = ChannelSpec::make(ChannelKind::BFC, r);
    const auto pfc = ChannelSpec::make(ChannelKind::PFC, r);
    EXPECT_NEAR(unprotected_baseline(bfc, PipelineMode::PhysicalMixed, InputMeasure::RealAmplitude), 1.0 - 7.0 * r / 15.0, 1e-12);
    EXPECT_NEAR(unprotected_baseline(pfc, PipelineMode::PhysicalMixed, InputMeasure::RealAmplitude), 1.0 - 8.0 * r / 15.0, 1e-12);
    // Haar: every unit Pauli error costs 2/3.
    EXPECT_NEAR(unprotected_baseline(bfc, PipelineMode::PhysicalMixed), 1.0 - 2.0 * r / 3.0, 1e-12);
    EXPECT_NEAR(unprotected_baseline(pfc, PipelineMode::PhysicalMixed), 1.0 - 2.0 * r / 3.0, 1e-12);
  }
}

TEST(AverageFidelity, MonteCarloOracleAgrees) {
  std::mt19937_64 rng(8);
  for (int n = 0; n < 10; ++n) {
    const oracle::Config c = oracle::random_config(rng);
    const auto mc = oracle::mc_haar_average(oracle::teleport_map(oracle::shared_density(c)), 100000, 1000 + n);
    const double f = average_fidelity(shared_for(c));
    EXPECT_LE(std::abs(f - mc.mean), std::max(3.0 * mc.std_error, 1e-12)) << c.describe();
  }
}

TEST(MeasureNames, Parse) {
  EXPECT_EQ(parse_measure("HAAR"), InputMeasure::Haar);
  EXPECT_EQ(parse_measure(to_string(InputMeasure::RealAmplitude)), InputMeasure::RealAmplitude);
  EXPECT_THROW(parse_measure("uniform"), std::invalid_argument);
}
