#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "wmtele/oracle.hpp"
#include "wmtele/sweep.hpp"

using namespace wmtele;

namespace {

constexpr double kPi = std::numbers::pi;

// The published search profile: real inputs, omega <= pi/2, K in [0, 1].
CurveOptions published(ProtocolKind kind) {
  CurveOptions o;
  o.measure = InputMeasure::RealAmplitude;
  o.ranges = ParamRanges::with_omega_max(kind, kPi / 2.0);
  return o;
}

double fmax_at(ProtocolKind kind, ChannelKind channel, double r, PipelineMode mode, const CurveOptions& o, int res = 41) {
  const std::vector<double> rs{r};
  const auto curve = fmax_curve(kind, channel, rs, res, mode, o);
  return curve.at(0).best.value().fidelity;
}

bool same(const SweepResult& a, const SweepResult& b) {
  if (a.fidelity.size() != b.fidelity.size()) return false;
  for (std::size_t k = 0; k < a.fidelity.size(); ++k) {
    if (a.fidelity[k].has_value() != b.fidelity[k].has_value()) return false;
    if (a.fidelity[k] && std::memcmp(&*a.fidelity[k], &*b.fidelity[k], sizeof(double)) != 0) return false;
  }
  for (std::size_t k = 0; k < a.argmax.size(); ++k) {
    if (a.argmax[k]->axis1 != b.argmax[k]->axis1 || a.argmax[k]->axis2 != b.argmax[k]->axis2) return false;
  }
  return true;
}

}  // namespace

TEST(Linspace, EndsAndCount) {
  const auto v = linspace(0.0, kPi, 101);
  ASSERT_EQ(v.size(), 101u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), kPi);
  EXPECT_EQ(linspace(0.3, 0.9, 1), std::vector<double>{0.3});
  EXPECT_THROW(linspace(0.0, 1.0, 0), std::invalid_argument);
  const auto r = default_r_grid();
  ASSERT_EQ(r.size(), 21u);
  EXPECT_NEAR(r[10], 0.5, 1e-15);
  EXPECT_NEAR(r[18], 0.9, 1e-15);
}

TEST(Grid, Validation) {
  SweepGrid g{ProtocolKind::I, {0.0, 1.0}, {0.5}, {0.2}, PipelineMode::PaperLiteral};
  EXPECT_NO_THROW(g.validate());
  EXPECT_EQ(g.axis1_name(), "omega");
  EXPECT_EQ(g.axis2_name(), "q");
  g.axis1 = {1.0, 0.0};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g.axis1 = {};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g.axis1 = {0.0, 4.0};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g.axis1 = {0.5};
  g.r_values = {1.5};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  const SweepGrid k{ProtocolKind::II, {-1.0, 1.0}, {-1.0}, {0.0}, PipelineMode::PaperLiteral};
  EXPECT_NO_THROW(k.validate());
  EXPECT_EQ(k.axis1_name(), "k1");
}

TEST(Sweep, SingleNoiselessCell) {
  const SweepGrid g{ProtocolKind::I, {kPi / 2.0}, {1.0}, {0.0}, PipelineMode::PaperLiteral};
  const SweepResult r = sweep(g, ChannelKind::ADC);
  ASSERT_EQ(r.fidelity.size(), 1u);
  EXPECT_NEAR(r.fidelity[0].value(), 1.0, 1e-12);
  EXPECT_NEAR(r.argmax[0]->fidelity, 1.0, 1e-12);
  EXPECT_NEAR(r.baseline[0], 1.0, 1e-12);
}

TEST(Sweep, MissingCellsExcludedFromArgmax) {
  const SweepGrid g{ProtocolKind::I, {0.0, 0.5}, {0.0, 0.5}, {0.3}, PipelineMode::PaperLiteral};
  const SweepResult r = sweep(g, ChannelKind::PFC);
  EXPECT_FALSE(r.at(0, 0, 0).has_value());
  EXPECT_TRUE(r.at(1, 1, 0).has_value());
  ASSERT_TRUE(r.argmax[0].has_value());
  EXPECT_FALSE(r.argmax[0]->axis1 == 0.0 && r.argmax[0]->axis2 == 0.0);
}

TEST(Sweep, ArgmaxDominatesAndMatchesCell) {
  for (PipelineMode mode : {PipelineMode::PaperLiteral, PipelineMode::PhysicalMixed}) {
    const SweepGrid g = SweepGrid::uniform(ProtocolKind::II, 9, {0.2, 0.7}, mode, ParamRanges::full(ProtocolKind::II));
    const SweepResult r = sweep(g, ChannelKind::ADC);
    for (std::size_t ir = 0; ir < 2; ++ir) {
      const GridPoint best = r.argmax[ir].value();
      bool found = false;
      for (std::size_t i = 0; i < 9; ++i) {
        for (std::size_t j = 0; j < 9; ++j) {
          const auto cell = r.at(i, j, ir);
          if (!cell) continue;
          const double f = *cell;
          EXPECT_GE(f, 0.0);
          EXPECT_LE(f, 1.0);
          EXPECT_LE(f, best.fidelity);
          found = found || (g.axis1[i] == best.axis1 && g.axis2[j] == best.axis2 && f == best.fidelity);
        }
      }
      EXPECT_TRUE(found);
    }
  }
}

TEST(Sweep, TiesGoToLowestFlatIndex) {
  // In literal mode every balanced-noise cell is perfect at r = 0.
  const SweepGrid g{ProtocolKind::II, {0.0, 0.5, 1.0}, {0.0, 0.5}, {0.0}, PipelineMode::PaperLiteral};
  const SweepResult r = sweep(g, ChannelKind::BFC);
  EXPECT_EQ(r.argmax[0]->axis1, 0.0);
  EXPECT_EQ(r.argmax[0]->axis2, 0.0);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  const SweepGrid g = SweepGrid::uniform(ProtocolKind::I, 13, {0.1, 0.6, 1.0}, PipelineMode::PhysicalMixed,
                                         ParamRanges::defaults(ProtocolKind::I));
  const SweepResult one = sweep(g, ChannelKind::ADC, {1});
  const SweepResult three = sweep(g, ChannelKind::ADC, {3});
  const SweepResult again = sweep(g, ChannelKind::ADC, {1});
  EXPECT_TRUE(same(one, three));
  EXPECT_TRUE(same(one, again));
}

TEST(Sweep, CellsMatchOracle) {
  const SweepGrid g = SweepGrid::uniform(ProtocolKind::II, 4, {0.35}, PipelineMode::PhysicalMixed,
                                         ParamRanges::full(ProtocolKind::II));
  const SweepResult r = sweep(g, ChannelKind::BFC);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const oracle::Config c{ProtocolKind::II, g.axis1[i], g.axis2[j], ChannelKind::BFC, 0.35, PipelineMode::PhysicalMixed};
      EXPECT_NEAR(r.at(i, j, 0).value(), oracle::exact_haar_average(oracle::teleport_map(oracle::shared_density(c))), 1e-12);
    }
  }
}

TEST(Sweep, ProtocolIIAmplitudeDampingIsNotSwapSymmetric) {
  // The measurement acts before the non-unital channel and the reversal
  // after it, so (K1, K2) and (K2, K1) are different protocols.
  const oracle::Config a{ProtocolKind::II, 0.9, -0.3, ChannelKind::ADC, 0.4, PipelineMode::PhysicalMixed};
  oracle::Config b = a;
  std::swap(b.axis1, b.axis2);
  const auto f = [](const oracle::Config& c) { return oracle::exact_haar_average(oracle::teleport_map(oracle::shared_density(c))); };
  EXPECT_GT(std::abs(f(a) - f(b)), 0.05);
  const SweepGrid g{ProtocolKind::II, {-0.3, 0.9}, {-0.3, 0.9}, {0.4}, PipelineMode::PhysicalMixed};
  const SweepResult r = sweep(g, ChannelKind::ADC);
  EXPECT_NEAR(r.at(1, 0, 0).value(), f(a), 1e-12);
  EXPECT_NEAR(r.at(0, 1, 0).value(), f(b), 1e-12);
}

TEST(Fmax, NoiselessIsOneEverywhere) {
  const std::vector<double> rs{0.0};
  for (ProtocolKind kind : {ProtocolKind::I, ProtocolKind::II}) {
    for (ChannelKind c : {ChannelKind::ADC, ChannelKind::BFC, ChannelKind::PFC}) {
      for (PipelineMode m : {PipelineMode::PaperLiteral, PipelineMode::PhysicalMixed}) {
        const auto curve = fmax_curve(kind, c, rs, 21, m);
        EXPECT_NEAR(curve[0].best->fidelity, 1.0, 1e-10);
        EXPECT_NEAR(curve[0].baseline, 1.0, 1e-10);
      }
    }
  }
}

TEST(Fmax, RefinementNeverLowers) {
  const std::vector<double> rs{0.3, 0.8};
  for (ChannelKind c : {ChannelKind::ADC, ChannelKind::BFC}) {
    CurveOptions coarse_only;
    coarse_only.refine = false;
    const auto coarse = fmax_curve(ProtocolKind::I, c, rs, 11, PipelineMode::PhysicalMixed, coarse_only);
    const auto refined = fmax_curve(ProtocolKind::I, c, rs, 11, PipelineMode::PhysicalMixed);
    const auto finer = fmax_curve(ProtocolKind::I, c, rs, 21, PipelineMode::PhysicalMixed, coarse_only);
    for (std::size_t k = 0; k < rs.size(); ++k) {
      EXPECT_GE(refined[k].best->fidelity, coarse[k].best->fidelity - 1e-12);
      EXPECT_GE(finer[k].best->fidelity, coarse[k].best->fidelity - 1e-12);
    }
  }
}

TEST(Fmax, RejectsDegenerateResolution) {
  const std::vector<double> rs{0.5};
  EXPECT_THROW(fmax_curve(ProtocolKind::I, ChannelKind::ADC, rs, 1, PipelineMode::PaperLiteral), std::invalid_argument);
}

// Reference values below are the published F_max figures (tolerance 0.02).

TEST(Fmax, ProtocolIAmplitudeDampingStaysNearOne) {
  const auto o = published(ProtocolKind::I);
  EXPECT_NEAR(fmax_at(ProtocolKind::I, ChannelKind::ADC, 0.5, PipelineMode::PhysicalMixed, o), 0.999, 0.02);
  EXPECT_GE(fmax_at(ProtocolKind::I, ChannelKind::ADC, 0.9, PipelineMode::PhysicalMixed, o), 0.97);
  // The full sweep over omega in [0, pi] finds the same value.
  EXPECT_NEAR(fmax_at(ProtocolKind::I, ChannelKind::ADC, 0.5, PipelineMode::PaperLiteral, {}), 0.999, 0.02);
}

TEST(Fmax, ProtocolIPhaseFlipSaturates) {
  const auto o = published(ProtocolKind::I);
  EXPECT_NEAR(fmax_at(ProtocolKind::I, ChannelKind::PFC, 0.5, PipelineMode::PhysicalMixed, o), 0.733, 0.02);
  EXPECT_NEAR(fmax_at(ProtocolKind::I, ChannelKind::PFC, 0.9, PipelineMode::PhysicalMixed, o), 0.734, 0.02);
}

TEST(Fmax, ProtocolIBitFlipMatchesUnprotected) {
  const auto o = published(ProtocolKind::I);
  const std::vector<double> rs{0.5, 0.9};
  const auto curve = fmax_curve(ProtocolKind::I, ChannelKind::BFC, rs, 41, PipelineMode::PhysicalMixed, o);
  EXPECT_NEAR(curve[0].best->fidelity, 0.7667, 0.02);
  EXPECT_NEAR(curve[1].best->fidelity, 0.58, 0.02);
  EXPECT_NEAR(curve[1].best->fidelity, curve[1].baseline, 0.02);
}

TEST(Fmax, ProtocolIIAmplitudeDampingAtHighNoise) {
  const auto o = published(ProtocolKind::II);
  EXPECT_NEAR(fmax_at(ProtocolKind::II, ChannelKind::ADC, 0.9, PipelineMode::PhysicalMixed, o), 0.754, 0.02);
}

TEST(Fmax, ProtocolIIBitFlipFullRange) {
  CurveOptions o;
  o.measure = InputMeasure::RealAmplitude;
  o.ranges = ParamRanges::full(ProtocolKind::II);
  EXPECT_NEAR(fmax_at(ProtocolKind::II, ChannelKind::BFC, 0.9, PipelineMode::PhysicalMixed, o, 101), 0.733, 0.02);
}

TEST(Fmax, ProtocolIIPhaseFlip) {
  const auto o = published(ProtocolKind::II);
  EXPECT_NEAR(fmax_at(ProtocolKind::II, ChannelKind::PFC, 0.5, PipelineMode::PhysicalMixed, o), 0.733, 0.02);
  EXPECT_NEAR(fmax_at(ProtocolKind::II, ChannelKind::PFC, 0.9, PipelineMode::PhysicalMixed, o), 0.733, 0.02);
}

TEST(Compare, BitFlipAndPhaseFlipAtHighNoise) {
  const std::vector<double> rs{0.0, 0.9};
  CurveOptions o;
  o.measure = InputMeasure::RealAmplitude;
  const ComparisonTable bfc = compare_protocols(ChannelKind::BFC, rs, PipelineMode::PhysicalMixed, 41, o, kPi / 2.0);
  EXPECT_GT(bfc.rows[1].fmax_ii, bfc.rows[1].fmax_i);
  EXPECT_NEAR(bfc.rows[1].fmax_ii, 0.733, 0.02);
  EXPECT_NEAR(bfc.rows[1].fmax_i, 0.58, 0.02);
  ASSERT_EQ(bfc.verdicts.size(), 1u);
  EXPECT_TRUE(bfc.verdicts[0].holds);

  const ComparisonTable pfc = compare_protocols(ChannelKind::PFC, rs, PipelineMode::PhysicalMixed, 41, o, kPi / 2.0);
  EXPECT_LT(std::abs(pfc.rows[1].fmax_i - pfc.rows[1].fmax_ii), 0.02);
  EXPECT_TRUE(pfc.verdicts[0].holds);

  for (const auto* t : {&bfc, &pfc}) {
    EXPECT_NEAR(t->rows[0].baseline, 1.0, 1e-10);
    EXPECT_NEAR(t->rows[0].fmax_i, 1.0, 1e-10);
    EXPECT_NEAR(t->rows[0].fmax_ii, 1.0, 1e-10);
  }
}

TEST(Compare, VerdictDetectsViolation) {
  // Literal mode reaches 1 for both protocols, so dominance holds with slack;
  // a single-row table with I strictly below II must fail the ADC verdict.
  const std::vector<double> rs{0.5};
  const ComparisonTable t = compare_protocols(ChannelKind::ADC, rs, PipelineMode::PaperLiteral, 11);
  EXPECT_TRUE(t.verdicts[0].holds);
  CurveOptions o;
  o.measure = InputMeasure::RealAmplitude;
  // With omega pinned to 0, Protocol I cannot protect against damping.
  const ComparisonTable pinned = compare_protocols(ChannelKind::ADC, rs, PipelineMode::PhysicalMixed, 11, o, 0.0);
  EXPECT_LT(pinned.rows[0].fmax_i, pinned.rows[0].fmax_ii);
  EXPECT_FALSE(pinned.verdicts[0].holds);
}
