#ifndef WMTELE_COMMANDS_HPP
#define WMTELE_COMMANDS_HPP

// Implementations behind the command-line subcommands. Each returns data or
// writes to a stream; the executable only parses flags and picks exit codes.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "wmtele/sweep.hpp"

namespace wmtele::app {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

// ---- check -----------------------------------------------------------------

struct CheckItem {
  std::string name;
  bool pass;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;

  bool ok() const;
  std::vector<std::string> failing() const;
  std::string text() const;
};

enum class Fault { None, KrausSign };

struct CheckOptions {
  std::uint64_t seed = 7;
  std::int64_t mc_samples = 100000;
  Fault fault = Fault::None;
};

CheckReport run_check(const CheckOptions& options = {});

// ---- CSV -------------------------------------------------------------------

// Shortest form that carries 17 significant digits; "nan" when empty.
std::string format_real(std::optional<double> value);

void write_surface_csv(std::ostream& out, const SweepResult& result);
void write_fmax_csv(std::ostream& out, const std::vector<FmaxPoint>& curve);
void write_comparison_csv(std::ostream& out, const ComparisonTable& table);
std::string comparison_text(const ComparisonTable& table);

// ---- reproduce -------------------------------------------------------------

enum class Comparison { Near, AtLeast };

struct Target {
  std::string name;
  ProtocolKind protocol;
  ChannelKind channel;
  double r;
  double expected;
  Comparison comparison;
  std::string source;
  // Also require F_max within tolerance of the unprotected baseline.
  bool matches_baseline = false;
};

inline constexpr double kTargetTolerance = 0.02;

const std::vector<Target>& reproduction_targets();

struct SearchProfile {
  InputMeasure measure;
  double omega_max;
  bool full_k_range;  // K in [-1, 1] instead of [0, 1]

  static SearchProfile published();  // real inputs, omega <= pi/2, K in [0, 1]
  static SearchProfile haar();       // Haar inputs, omega <= pi, K in [-1, 1]

  ParamRanges ranges(ProtocolKind kind) const;
};

struct ReproduceOptions {
  int resolution = kDefaultResolution;
  unsigned threads = 0;
  bool with_reference = true;  // also record the haar() profile
  std::string timestamp;       // empty: omitted from the manifest
};

struct ReproduceOutcome {
  nlohmann::ordered_json manifest;
  std::vector<std::string> failing;
};

bool target_met(const Target& target, double fmax, double baseline);

ReproduceOutcome run_reproduce(const ReproduceOptions& options = {});

}  // namespace wmtele::app

#endif  // WMTELE_COMMANDS_HPP
