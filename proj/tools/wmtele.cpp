// Command-line driver: check, surface, fmax, compare, reproduce.

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "wmtele/commands.hpp"

namespace {

using namespace wmtele;
using namespace wmtele::app;

struct Flags {
  std::string protocol = "I";
  std::string channel = "adc";
  std::string mode = "paper";
  std::string measure = "haar";
  double r = 0.5;
  int resolution = kDefaultResolution;
  double omega_max = std::numbers::pi;
  bool full_range = false;
  std::string out;
  std::uint64_t seed = 7;
  unsigned threads = 0;
  std::string fault;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs `write` against the --out file, or stdout when no path was given.
template <typename Write>
void emit(const std::string& path, Write write) {
  if (path.empty()) {
    write(std::cout);
    return;
  }
  std::ostringstream buffer;
  write(buffer);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  file << buffer.str();
  if (!file.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

ParamRanges ranges_for(const Flags& f, ProtocolKind kind) {
  if (kind == ProtocolKind::II) return f.full_range ? ParamRanges::full(kind) : ParamRanges::defaults(kind);
  return ParamRanges::with_omega_max(kind, f.omega_max);
}

template <typename T, typename Parse>
T parse_flag(const std::string& text, Parse parse) {
  try {
    return parse(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

int cmd_check(const Flags& f) {
  CheckOptions opt;
  opt.seed = f.seed;
  if (f.fault == "kraus") {
    opt.fault = Fault::KrausSign;
  } else if (!f.fault.empty()) {
    throw UsageError("unknown fault '" + f.fault + "' (expected kraus)");
  }
  const CheckReport report = run_check(opt);
  emit(f.out, [&](std::ostream& os) { os << report.text(); });
  return report.ok() ? kExitOk : kExitFailure;
}

int cmd_surface(const Flags& f) {
  const auto protocol = parse_flag<ProtocolKind>(f.protocol, parse_protocol);
  const auto channel = parse_flag<ChannelKind>(f.channel, parse_channel);
  const auto mode = parse_flag<PipelineMode>(f.mode, parse_mode);
  const auto measure = parse_flag<InputMeasure>(f.measure, parse_measure);
  const SweepGrid grid = SweepGrid::uniform(protocol, f.resolution, {f.r}, mode, ranges_for(f, protocol), measure);
  const SweepResult result = sweep(grid, channel, {f.threads});
  emit(f.out, [&](std::ostream& os) { write_surface_csv(os, result); });
  return kExitOk;
}

int cmd_fmax(const Flags& f) {
  const auto protocol = parse_flag<ProtocolKind>(f.protocol, parse_protocol);
  const auto channel = parse_flag<ChannelKind>(f.channel, parse_channel);
  const auto mode = parse_flag<PipelineMode>(f.mode, parse_mode);
  CurveOptions co;
  co.ranges = ranges_for(f, protocol);
  co.measure = parse_flag<InputMeasure>(f.measure, parse_measure);
  co.threads = f.threads;
  const auto curve = fmax_curve(protocol, channel, default_r_grid(), f.resolution, mode, co);
  emit(f.out, [&](std::ostream& os) { write_fmax_csv(os, curve); });
  return kExitOk;
}

int cmd_compare(const Flags& f) {
  const auto channel = parse_flag<ChannelKind>(f.channel, parse_channel);
  const auto mode = parse_flag<PipelineMode>(f.mode, parse_mode);
  CurveOptions co;
  co.measure = parse_flag<InputMeasure>(f.measure, parse_measure);
  co.threads = f.threads;
  const ComparisonTable table = compare_protocols(channel, default_r_grid(), mode, f.resolution, co, f.omega_max);
  std::cout << comparison_text(table);
  if (!f.out.empty()) emit(f.out, [&](std::ostream& os) { write_comparison_csv(os, table); });
  for (const auto& v : table.verdicts) {
    if (!v.holds) return kExitFailure;
  }
  return kExitOk;
}

int cmd_reproduce(const Flags& f) {
  ReproduceOptions opt;
  opt.resolution = f.resolution;
  opt.threads = f.threads;
  opt.timestamp = utc_now();
  const ReproduceOutcome outcome = run_reproduce(opt);
  emit(f.out, [&](std::ostream& os) { os << outcome.manifest.dump(2) << '\n'; });
  const auto& summary = outcome.manifest["summary"];
  std::cerr << summary["passed"].get<int>() << '/' << summary["total"].get<int>() << " targets reproduced\n";
  for (const auto& name : outcome.failing) std::cerr << "failing target: " << name << '\n';
  return outcome.failing.empty() ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak-measurement protected teleportation simulator"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", f.out, "Output path (default: stdout)");
    sub->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  };
  auto add_sweep = [&](CLI::App* sub, bool with_r, bool with_protocol) {
    if (with_protocol) sub->add_option("--protocol", f.protocol, "I or II")->capture_default_str();
    sub->add_option("--channel", f.channel, "adc, bfc or pfc")->capture_default_str();
    sub->add_option("--mode", f.mode, "paper or physical")->capture_default_str();
    sub->add_option("--measure", f.measure, "Input average: haar or real")->capture_default_str();
    if (with_r) sub->add_option("--r", f.r, "Decoherence strength in [0, 1]")->capture_default_str();
    sub->add_option("--resolution", f.resolution, "Grid points per axis")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--omega-max", f.omega_max, "Upper end of the omega axis")
        ->capture_default_str()
        ->check(CLI::Range(0.0, std::numbers::pi));
    if (with_protocol) sub->add_flag("--full-range", f.full_range, "Sweep K1, K2 over [-1, 1]");
    add_common(sub);
  };

  auto* check = app.add_subcommand("check", "Run the invariant suite");
  check->add_option("--seed", f.seed, "Seed for randomized cases and the Monte-Carlo oracle")->capture_default_str();
  check->add_option("--inject-fault", f.fault)->group("");
  add_common(check);

  auto* surface = app.add_subcommand("surface", "Fidelity over the parameter grid at one r (CSV)");
  add_sweep(surface, true, true);
  auto* fmax = app.add_subcommand("fmax", "F_max versus r on 21 points (CSV)");
  add_sweep(fmax, false, true);
  auto* compare = app.add_subcommand("compare", "F_max of both protocols and the dominance verdicts");
  add_sweep(compare, false, false);
  auto* reproduce = app.add_subcommand("reproduce", "Evaluate the published F_max values (JSON manifest)");
  reproduce->add_option("--resolution", f.resolution, "Grid points per axis")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000));
  add_common(reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*check) return cmd_check(f);
    if (*surface) return cmd_surface(f);
    if (*fmax) return cmd_fmax(f);
    if (*compare) return cmd_compare(f);
    if (*reproduce) return cmd_reproduce(f);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}
