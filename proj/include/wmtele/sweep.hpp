#ifndef WMTELE_SWEEP_HPP
#define WMTELE_SWEEP_HPP

// Grid sweeps of the average teleportation fidelity over the protection
// parameters, and the maximum-fidelity-versus-decoherence curves built on
// top of them.

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wmtele/operators.hpp"
#include "wmtele/pipeline.hpp"
#include "wmtele/teleport.hpp"

namespace wmtele {

struct ParamRange {
  double lo;
  double hi;
};

// Sweep ranges for the two protocol axes.
struct ParamRanges {
  ParamRange axis1;
  ParamRange axis2;

  // omega in [0, pi], q in [0, 1]; K1, K2 in [0, 1].
  static ParamRanges defaults(ProtocolKind kind);

  // The domain the constructors accept: K1, K2 may go down to -1.
  static ParamRanges full(ProtocolKind kind);

  // defaults() with omega capped at omega_max.
  static ParamRanges with_omega_max(ProtocolKind kind, double omega_max);
};

// `resolution` evenly spaced points from lo to hi, both ends exact. A
// resolution of 1 yields {lo}.
std::vector<double> linspace(double lo, double hi, int resolution);

// 21 points 0, 0.05, ..., 1.
std::vector<double> default_r_grid();

inline constexpr int kDefaultResolution = 101;

struct SweepGrid {
  ProtocolKind protocol;
  std::vector<double> axis1;  // omega or K1
  std::vector<double> axis2;  // q or K2
  std::vector<double> r_values;
  PipelineMode mode;
  InputMeasure measure = InputMeasure::Haar;

  static SweepGrid uniform(ProtocolKind protocol, int resolution, std::vector<double> r_values, PipelineMode mode,
                           const ParamRanges& ranges, InputMeasure measure = InputMeasure::Haar);

  std::string axis1_name() const;
  std::string axis2_name() const;

  // Throws std::invalid_argument unless every axis is nonempty, sorted
  // ascending and inside the accepted parameter domain.
  void validate() const;
};

struct GridPoint {
  double axis1;
  double axis2;
  double fidelity;
};

struct SweepResult {
  SweepGrid grid;
  // Flat [axis1][axis2][r]; empty where the pipeline annihilated the state.
  std::vector<std::optional<double>> fidelity;
  // Per r: the maximum over the grid, first flat index on ties.
  std::vector<std::optional<GridPoint>> argmax;
  // Per r: the unprotected fidelity.
  std::vector<double> baseline;

  std::optional<double> at(std::size_t i1, std::size_t i2, std::size_t ir) const;
};

struct SweepOptions {
  // 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;
};

SweepResult sweep(const SweepGrid& grid, ChannelKind channel, const SweepOptions& options = {});

struct CurveOptions {
  std::optional<ParamRanges> ranges;  // defaults(protocol) when empty
  InputMeasure measure = InputMeasure::Haar;
  unsigned threads = 0;
  bool refine = true;
};

struct FmaxPoint {
  double r;
  std::optional<GridPoint> best;  // empty if every cell was annihilated
  double baseline;
};

// Coarse sweep at `resolution` points per axis, then for each r one
// refinement pass on a window of +-1 coarse step around the coarse argmax
// sampled 10x finer. The window contains the coarse argmax, so refinement
// never lowers F_max.
std::vector<FmaxPoint> fmax_curve(ProtocolKind protocol, ChannelKind channel, std::span<const double> r_values,
                                  int resolution, PipelineMode mode, const CurveOptions& options = {});

struct ComparisonRow {
  double r;
  double baseline;
  double fmax_i;
  double fmax_ii;
};

struct Verdict {
  std::string statement;
  bool holds;
};

struct ComparisonTable {
  ChannelKind channel;
  PipelineMode mode;
  std::vector<ComparisonRow> rows;
  std::vector<Verdict> verdicts;
};

// Absolute slack used when comparing two maxima for dominance.
inline constexpr double kDominanceSlack = 1e-9;
inline constexpr double kComparableGap = 0.02;

// F_max of both protocols against the baseline for each r, plus the
// dominance verdict for the channel:
//   ADC: F_max(I) >= F_max(II) for every r >= 0.3
//   BFC: F_max(II) >= F_max(I) for every r >= 0.9
//   PFC: |F_max(I) - F_max(II)| <= 0.02 for every r
// `options.ranges` is ignored; each protocol uses its own ranges, with
// omega capped by `omega_max`.
ComparisonTable compare_protocols(ChannelKind channel, std::span<const double> r_values, PipelineMode mode,
                                  int resolution, const CurveOptions& options = {},
                                  double omega_max = std::numbers::pi);

}  // namespace wmtele

#endif  // WMTELE_SWEEP_HPP
