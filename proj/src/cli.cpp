#include "pactopo/io.hpp"
#include "pactopo/presets.hpp"
#include "pactopo/verify.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>

namespace pac {

namespace {

struct RunArgs {
  std::string target;
  std::optional<std::uint64_t> seed;
  std::optional<int> steps;
  std::string out_dir = "out";
  std::optional<double> scale;
  std::string resolution;
  std::optional<int> snapshot_every;
  bool verbose = false;
};

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::array<int, 3> parse_resolution(const std::string& text, int dim) {
  std::array<int, 3> res{1, 1, 1};
  int axis = 0;
  std::size_t start = 0;
  while (true) {
    const auto x = text.find('x', start);
    const std::string part = text.substr(start, x == std::string::npos ? std::string::npos : x - start);
    if (axis >= 3) throw UsageError("--resolution has too many axes");
    int v = 0;
    const auto r = std::from_chars(part.data(), part.data() + part.size(), v);
    if (r.ec != std::errc() || r.ptr != part.data() + part.size() || v < 1)
      throw UsageError("--resolution expects positive counts like 48x8, got '" + text + "'");
    res[static_cast<std::size_t>(axis++)] = v;
    if (x == std::string::npos) break;
    start = x + 1;
  }
  if (axis != dim) throw UsageError("--resolution needs " + std::to_string(dim) + " counts for this problem");
  return res;
}

RunConfig resolve_run_config(const RunArgs& args) {
  const std::filesystem::path path(args.target);
  RunConfig cfg;
  if (const auto id = parse_preset_id(args.target); id && !std::filesystem::exists(path)) {
    cfg = preset(*id, args.scale.value_or(1.0));
  } else {
    if (args.scale) throw UsageError("--scale applies to preset ids only");
    cfg = load_config(path);
  }
  if (args.seed) cfg.initial.seed = *args.seed;
  if (args.steps) {
    if (*args.steps < 0) throw UsageError("--steps must be nonnegative");
    cfg.flow.max_steps = *args.steps;
  }
  if (!args.resolution.empty()) cfg.box.resolution = parse_resolution(args.resolution, cfg.box.dim);
  if (args.snapshot_every) {
    if (*args.snapshot_every < 0) throw UsageError("--snapshot-every must be nonnegative");
    cfg.output.snapshot_every = *args.snapshot_every;
  }
  return cfg;
}

std::string snapshot_name(int step) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "snapshot_%06d.vtk", step);
  return buf;
}

int run_command(const RunArgs& args, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_run_config(args);
  const Problem problem(cfg);
  for (const std::string& w : problem.warnings()) err << "warning: " << w << "\n";

  const std::filesystem::path dir(args.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  write_file_atomic(dir / "config.cfg", serialize_config(cfg));

  StepObserver observer;
  if (args.verbose)
    observer = [&](const OptState& s) {
      out << "step " << s.step << "  J " << format_double(s.cost.total) << "  E_target "
          << format_double(s.cost.target) << "\n";
    };
  const RunResult result = run_from(problem, problem.initial_phase(), observer);
  write_trace_csv(result.trace, dir / "trace.csv");
  for (const Snapshot& s : result.snapshots)
    write_vtk_snapshot(problem.mesh(), s.phi, s.u_bar, s.u_hat, dir / snapshot_name(s.step));

  if (result.failure) {
    err << "error: " << *result.failure << "\n";
    return 2;
  }
  const TraceRow& first = result.trace.rows().front();
  const TraceRow& last = result.trace.rows().back();
  out << cfg.name << ": " << last.step << " steps, J " << format_double(first.cost) << " -> "
      << format_double(last.cost) << ", E_target " << format_double(first.target_energy) << " -> "
      << format_double(last.target_energy) << "\n";
  out << "wrote " << (dir / "trace.csv").string() << " and " << result.snapshots.size() << " snapshot(s)\n";
  return 0;
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase-field topology optimization of printed active composites", "pac-topopt"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Run a gradient-flow optimization");
  run->add_option("target", run_args.target, "Configuration file or preset id")->required();
  run->add_option("--seed", run_args.seed, "Seed of the initial mixture");
  run->add_option("--steps", run_args.steps, "Maximum number of gradient-flow steps");
  run->add_option("--out", run_args.out_dir, "Output directory")->capture_default_str();
  run->add_option("--scale", run_args.scale, "Mesh resolution factor for presets");
  run->add_option("--resolution", run_args.resolution, "Cells per axis, e.g. 48x8");
  run->add_option("--snapshot-every", run_args.snapshot_every, "Snapshot cadence in steps (0: first and last)");
  run->add_flag("-v,--verbose", run_args.verbose, "Print every step");

  std::string suite = "all";
  auto* verify = app.add_subcommand("verify", "Run the numerical oracle suites");
  verify->add_option("suite", suite, "gradient, duality, elasticity, vi, interface or all")->capture_default_str();

  std::string show_id;
  auto* preset_cmd = app.add_subcommand("preset", "List or show experiment presets");
  preset_cmd->require_subcommand(1);
  auto* list = preset_cmd->add_subcommand("list", "List preset ids");
  auto* show = preset_cmd->add_subcommand("show", "Print a preset as a configuration file");
  show->add_option("id", show_id, "Preset id")->required();

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  if (const char* threads = std::getenv("PAC_TOPOPT_THREADS"); threads != nullptr && std::string(threads) != "1")
    err << "note: PAC_TOPOPT_THREADS is reserved; running single-threaded\n";

  try {
    if (run->parsed()) return run_command(run_args, out, err);
    if (verify->parsed()) {
      const auto reports = run_suite(suite);
      if (!reports) {
        err << "error: unknown suite '" << suite << "'\n";
        return 1;
      }
      out << format_table(*reports);
      const bool ok = std::all_of(reports->begin(), reports->end(), [](const OracleReport& r) { return r.passed(); });
      return ok ? 0 : 2;
    }
    if (list->parsed()) {
      for (PresetId id : kAllPresets) out << to_string(id) << "  " << preset_summary(id) << "\n";
      return 0;
    }
    if (show->parsed()) {
      const auto id = parse_preset_id(show_id);
      if (!id) {
        err << "error: unknown preset '" << show_id << "'\n";
        return 1;
      }
      out << serialize_config(preset(*id));
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

} // namespace pac
