#include "wmtele/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace wmtele {

namespace {

unsigned worker_count(unsigned requested, std::size_t jobs) {
  unsigned n = requested == 0 ? std::max(1U, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

// Runs job(k) for k in [0, jobs) on `threads` workers. Each job writes only
// its own output slot, so the result does not depend on the thread count.
template <typename Job>
void parallel_for(std::size_t jobs, unsigned threads, Job job) {
  const unsigned n = worker_count(threads, jobs);
  if (n <= 1) {
    for (std::size_t k = 0; k < jobs; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < jobs && !failed; k = next++) {
        try {
          job(k);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

void check_axis(const std::vector<double>& axis, ParamRange domain, const char* name) {
  if (axis.empty()) throw std::invalid_argument(std::string(name) + " axis is empty");
  if (!std::is_sorted(axis.begin(), axis.end())) throw std::invalid_argument(std::string(name) + " axis is not ascending");
  if (!(axis.front() >= domain.lo) || !(axis.back() <= domain.hi)) {
    throw std::invalid_argument(std::string(name) + " axis leaves the parameter domain");
  }
}

// Values x0 + k*h for k = -10..10 inside [lo, hi]; k = 0 is x0 itself.
std::vector<double> refinement_window(const std::vector<double>& axis, double x0) {
  const auto it = std::find(axis.begin(), axis.end(), x0);
  const auto i = static_cast<std::size_t>(it - axis.begin());
  double step = 0.0;
  if (i + 1 < axis.size()) step = std::max(step, axis[i + 1] - x0);
  if (i > 0) step = std::max(step, x0 - axis[i - 1]);
  if (step == 0.0) return {x0};
  const double h = step / 10.0;
  std::vector<double> out;
  for (int k = -10; k <= 10; ++k) {
    const double x = k == 0 ? x0 : x0 + k * h;
    if (x >= axis.front() && x <= axis.back()) out.push_back(x);
  }
  return out;
}

}  // namespace

ParamRanges ParamRanges::defaults(ProtocolKind kind) {
  if (kind == ProtocolKind::I) return {{0.0, std::numbers::pi}, {0.0, 1.0}};
  return {{0.0, 1.0}, {0.0, 1.0}};
}

ParamRanges ParamRanges::full(ProtocolKind kind) {
  if (kind == ProtocolKind::I) return {{0.0, std::numbers::pi}, {0.0, 1.0}};
  return {{-1.0, 1.0}, {-1.0, 1.0}};
}

ParamRanges ParamRanges::with_omega_max(ProtocolKind kind, double omega_max) {
  ParamRanges r = defaults(kind);
  if (kind == ProtocolKind::I) r.axis1.hi = std::clamp(omega_max, 0.0, std::numbers::pi);
  return r;
}

std::vector<double> linspace(double lo, double hi, int resolution) {
  if (resolution < 1) throw std::invalid_argument("resolution must be at least 1");
  if (resolution == 1) return {lo};
  std::vector<double> out(static_cast<std::size_t>(resolution));
  for (int k = 0; k < resolution; ++k) out[static_cast<std::size_t>(k)] = lo + (hi - lo) * k / (resolution - 1);
  out.back() = hi;
  return out;
}

std::vector<double> default_r_grid() { return linspace(0.0, 1.0, 21); }

SweepGrid SweepGrid::uniform(ProtocolKind protocol, int resolution, std::vector<double> r_values, PipelineMode mode,
                             const ParamRanges& ranges, InputMeasure measure) {
  return {protocol,
          linspace(ranges.axis1.lo, ranges.axis1.hi, resolution),
          linspace(ranges.axis2.lo, ranges.axis2.hi, resolution),
          std::move(r_values),
          mode,
          measure};
}

std::string SweepGrid::axis1_name() const { return protocol == ProtocolKind::I ? "omega" : "k1"; }
std::string SweepGrid::axis2_name() const { return protocol == ProtocolKind::I ? "q" : "k2"; }

void SweepGrid::validate() const {
  const auto domain = ParamRanges::full(protocol);
  check_axis(axis1, domain.axis1, axis1_name().c_str());
  check_axis(axis2, domain.axis2, axis2_name().c_str());
  check_axis(r_values, {0.0, 1.0}, "r");
}

std::optional<double> SweepResult::at(std::size_t i1, std::size_t i2, std::size_t ir) const {
  const std::size_t n2 = grid.axis2.size();
  const std::size_t nr = grid.r_values.size();
  return fidelity.at((i1 * n2 + i2) * nr + ir);
}

SweepResult sweep(const SweepGrid& grid, ChannelKind channel, const SweepOptions& options) {
  grid.validate();
  const std::size_t n1 = grid.axis1.size();
  const std::size_t n2 = grid.axis2.size();
  const std::size_t nr = grid.r_values.size();

  SweepResult result{grid, std::vector<std::optional<double>>(n1 * n2 * nr), {}, {}};

  parallel_for(n1 * n2, options.threads, [&](std::size_t cell) {
    const auto params = ProtocolParams::from_axes(grid.protocol, grid.axis1[cell / n2], grid.axis2[cell % n2]);
    for (std::size_t ir = 0; ir < nr; ++ir) {
      try {
        const SharedState shared = protect(params, ChannelSpec::make(channel, grid.r_values[ir]), grid.mode);
        result.fidelity[cell * nr + ir] = average_fidelity(shared, grid.measure);
      } catch (const ZeroNormError&) {
        // recorded as missing
      }
    }
  });

  for (std::size_t ir = 0; ir < nr; ++ir) {
    std::optional<GridPoint> best;
    for (std::size_t cell = 0; cell < n1 * n2; ++cell) {
      const auto& f = result.fidelity[cell * nr + ir];
      if (f && (!best || *f > best->fidelity)) best = GridPoint{grid.axis1[cell / n2], grid.axis2[cell % n2], *f};
    }
    result.argmax.push_back(best);
    result.baseline.push_back(unprotected_baseline(ChannelSpec::make(channel, grid.r_values[ir]), grid.mode, grid.measure));
  }
  return result;
}

std::vector<FmaxPoint> fmax_curve(ProtocolKind protocol, ChannelKind channel, std::span<const double> r_values,
                                  int resolution, PipelineMode mode, const CurveOptions& options) {
  if (resolution < 2) throw std::invalid_argument("fmax_curve needs at least 2 points per axis");
  const ParamRanges ranges = options.ranges.value_or(ParamRanges::defaults(protocol));
  const SweepGrid coarse_grid = SweepGrid::uniform(protocol, resolution, {r_values.begin(), r_values.end()}, mode,
                                                   ranges, options.measure);
  const SweepResult coarse = sweep(coarse_grid, channel, {options.threads});

  std::vector<FmaxPoint> curve;
  for (std::size_t ir = 0; ir < r_values.size(); ++ir) {
    FmaxPoint point{r_values[ir], coarse.argmax[ir], coarse.baseline[ir]};
    if (options.refine && point.best) {
      const SweepGrid fine_grid{protocol,
                                refinement_window(coarse_grid.axis1, point.best->axis1),
                                refinement_window(coarse_grid.axis2, point.best->axis2),
                                {r_values[ir]},
                                mode,
                                options.measure};
      const SweepResult fine = sweep(fine_grid, channel, {options.threads});
      if (fine.argmax[0] && fine.argmax[0]->fidelity > point.best->fidelity) point.best = fine.argmax[0];
    }
    curve.push_back(point);
  }
  return curve;
}

ComparisonTable compare_protocols(ChannelKind channel, std::span<const double> r_values, PipelineMode mode,
                                  int resolution, const CurveOptions& options, double omega_max) {
  CurveOptions opt_i = options;
  opt_i.ranges = ParamRanges::with_omega_max(ProtocolKind::I, omega_max);
  CurveOptions opt_ii = options;
  opt_ii.ranges = ParamRanges::defaults(ProtocolKind::II);

  const auto curve_i = fmax_curve(ProtocolKind::I, channel, r_values, resolution, mode, opt_i);
  const auto curve_ii = fmax_curve(ProtocolKind::II, channel, r_values, resolution, mode, opt_ii);

  ComparisonTable table{channel, mode, {}, {}};
  auto value = [](const FmaxPoint& p) { return p.best ? p.best->fidelity : 0.0; };
  for (std::size_t k = 0; k < r_values.size(); ++k) {
    table.rows.push_back({r_values[k], curve_i[k].baseline, value(curve_i[k]), value(curve_ii[k])});
  }

  bool holds = true;
  switch (channel) {
    case ChannelKind::ADC:
      for (const auto& row : table.rows) {
        if (row.r >= 0.3 - 1e-12) holds = holds && row.fmax_i >= row.fmax_ii - kDominanceSlack;
      }
      table.verdicts.push_back({"ADC: F_max(I) >= F_max(II) for r >= 0.3", holds});
      break;
    case ChannelKind::BFC:
      for (const auto& row : table.rows) {
        if (row.r >= 0.9 - 1e-12) holds = holds && row.fmax_ii >= row.fmax_i - kDominanceSlack;
      }
      table.verdicts.push_back({"BFC: F_max(II) >= F_max(I) for r >= 0.9", holds});
      break;
    case ChannelKind::PFC:
      for (const auto& row : table.rows) holds = holds && std::abs(row.fmax_i - row.fmax_ii) <= kComparableGap;
      table.verdicts.push_back({"PFC: |F_max(I) - F_max(II)| <= 0.02 for every r", holds});
      break;
  }
  return table;
}

}  // namespace wmtele
