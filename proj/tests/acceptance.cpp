// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance <path to pac-topopt>

#include "pactopo/io.hpp"
#include "pactopo/presets.hpp"
#include "pactopo/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <unistd.h>

using namespace pac;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

PhaseField random_phase(std::size_t n, std::uint64_t seed, double amp) {
  std::mt19937_64 gen(seed);
  std::vector<double> v(n);
  for (double& x : v) x = amp * (2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0);
  return PhaseField(std::move(v));
}

RunConfig strip(int nx, int ny) {
  RunConfig c = preset(PresetId::T1R1);
  c.box.resolution = {nx, ny, 1};
  return c;
}

Outcome gradient() {
  const auto t0 = Clock::now();
  const RunConfig c = strip(24, 4);
  const PhaseField phi = random_phase(build_box_mesh(c.box).num_vertices(), 0, 0.5);
  const OracleReport r = fd_gradient_check(c, phi, 20, FdOptions{1e-5, 1e-3, 1e-11}, 0);
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.require(r.passed() && r.checks.size() == 1 && r.checks[0].name == "fd_gradient 20 probes",
            "max relative error " + fmt("%.3e", r.max_measured()) + " <= 1e-3 (" + r.checks[0].name + ")");
  o.require(elapsed <= 60.0, "runtime " + fmt("%.1f", elapsed) + " s <= 60 s");
  return o;
}

Outcome duality() {
  const auto t0 = Clock::now();
  const RunConfig c = strip(12, 2);
  const std::size_t nv = build_box_mesh(c.box).num_vertices();
  const PhaseField phi = random_phase(nv, 3, 0.7);
  const PhaseField h = random_phase(nv, 11, 1.0);
  const DualityResult d = linearized_derivatives(c, phi, h.values, 1e-12);
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.require(d.relative <= 1e-8 && d.direct != 0.0, "relative difference " + fmt("%.3e", d.relative) + " <= 1e-8");
  o.require(elapsed <= 10.0, "runtime " + fmt("%.2f", elapsed) + " s <= 10 s");
  return o;
}

Outcome elasticity() {
  const std::vector<ConvergenceLevel> levels = manufactured_errors(3);
  const double rate = convergence_rate(levels);
  const double patch = std::max(patch_test_error(2), patch_test_error(3));
  Outcome o;
  o.require(rate >= 1.8, "L2 rate " + fmt("%.3f", rate) + " >= 1.8");
  o.require(patch <= 1e-10, "patch test " + fmt("%.3e", patch) + " <= 1e-10");
  return o;
}

Outcome vi() {
  CsrMatrix a({0, 2, 4}, {0, 1, 0, 1});
  a.add(0, 0, 2.0);
  a.add(0, 1, -1.0);
  a.add(1, 0, -1.0);
  a.add(1, 1, 2.0);
  const std::vector<double> b{10.0, 0.0};
  const BoxQpSolution s = solve_box_qp(a, b, std::vector<double>{0.0, 0.0}, BoxQpOptions{});
  const double err = std::max(std::abs(s.x[0] - 1.0), std::abs(s.x[1] - 0.5));

  RunConfig c2 = strip(48, 8);
  RunConfig c3 = preset(PresetId::T2R1);
  c3.box.resolution = {24, 6, 4};
  c3.flow.max_steps = 20;
  const RunKktSummary r2 = run_with_kkt_check(c2);
  const RunKktSummary r3 = run_with_kkt_check(c3);

  Outcome o;
  o.require(err <= 1e-10, "2-dof error " + fmt("%.1e", err) + " <= 1e-10");
  const double worst = std::max(r2.worst_violation, r3.worst_violation);
  o.require(worst <= 1e-8, "complementarity " + fmt("%.2e", worst) + " <= 1e-8 over " +
                               std::to_string(r2.steps + r3.steps) + " steps");
  const double excess = std::max(r2.worst_bound_excess, r3.worst_bound_excess);
  o.require(excess == 0.0, "max|phi| - 1 = " + fmt("%.1e", excess));
  return o;
}

Outcome interface() {
  const double eps = 1.0 / (8.0 * std::numbers::pi);
  const double e = interface_energy_sample(eps, eps / 4.0, 1);
  const double rel = std::abs(e - std::numbers::pi / 2.0) / (std::numbers::pi / 2.0);
  Outcome o;
  o.require(rel <= 0.03, "energy " + fmt("%.6f", e) + " vs pi/2, relative " + fmt("%.2e", rel) + " <= 3%");
  return o;
}

Outcome experiment() {
  const auto t0 = Clock::now();
  RunConfig c = strip(48, 8);
  c.flow.max_steps = 200;
  c.initial.seed = 0;
  const RunResult r = run(c);
  const auto& rows = r.trace.rows();
  double worst_rise = 0.0;
  int rises = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double rise = (rows[i].cost - rows[i - 1].cost) / rows[i - 1].cost;
    if (rise > 1e-8) ++rises;
    worst_rise = std::max(worst_rise, rise);
  }
  const double drop = 1.0 - rows.back().target_energy / rows.front().target_energy;

  RunConfig c3 = preset(PresetId::T2R1);
  c3.box.resolution = {24, 6, 4};
  c3.flow.max_steps = 50;
  const RunResult r3 = run(c3);
  const double elapsed = seconds_since(t0);

  Outcome o;
  o.require(!r.failure, "strip run completes (" + std::to_string(rows.size() - 1) + " steps)");
  o.require(rises == 0, "J non-increasing: " + std::to_string(rises) + " steps rise by more than 1e-8, worst " +
                            fmt("%.3e", worst_rise));
  o.require(drop >= 0.8, "E_target drop " + fmt("%.1f", 100.0 * drop) + "% >= 80%");
  o.require(elapsed <= 600.0, "runtime " + fmt("%.0f", elapsed) + " s <= 600 s");
  const bool plate_ok = !r3.failure && r3.trace.rows().back().cost < r3.trace.rows().front().cost;
  o.require(plate_ok, "plate run J " + fmt("%.4g", r3.trace.rows().front().cost) + " -> " +
                          fmt("%.4g", r3.trace.rows().back().cost));
  return o;
}

Outcome determinism(const std::string& cli) {
  const fs::path base = fs::temp_directory_path() / ("pac_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(base);
  Outcome o;
  std::string traces[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = base / std::to_string(i);
    const std::string cmd = "\"" + cli + "\" run T1R1 --seed 7 --steps 20 --out \"" + out.string() + "\" > /dev/null 2>&1";
    const int code = std::system(cmd.c_str());
    o.require(code == 0, "run " + std::to_string(i + 1) + " exit " + std::to_string(code));
    traces[i] = fs::exists(out / "trace.csv") ? read_file(out / "trace.csv") : std::string();
  }
  fs::remove_all(base);
  const auto lines = std::count(traces[0].begin(), traces[0].end(), '\n');
  o.require(!traces[0].empty() && traces[0] == traces[1],
            "trace.csv byte-identical (" + std::to_string(traces[0].size()) + " bytes, " + std::to_string(lines) + " lines)");
  return o;
}

Outcome sanity() {
  RunConfig c = strip(24, 4);
  c.loads = Loads{};
  c.target.weight = Mat3{};
  const Problem p(c);
  const std::size_t nv = p.mesh().num_vertices();
  double worst = 0.0;
  for (double value : {-1.0, 1.0}) {
    OptState s = p.initial_state(PhaseField::constant(nv, value));
    for (int n = 0; n < 10; ++n) {
      const OptState next = p.gradient_flow_step(s);
      for (std::size_t i = 0; i < nv; ++i) worst = std::max(worst, std::abs(next.phi[i] - s.phi[i]));
      s = next;
    }
  }

  // Stage-1 load present, no stage-2 load.
  const Problem loaded(strip(24, 4));
  const PhaseField passive = PhaseField::constant(nv, -1.0);
  const DisplacementField ub = loaded.solve_stage1(passive);
  const DisplacementField uh = loaded.solve_stage2(passive, ub);
  double uh_max = 0.0, ub_max = 0.0;
  for (double v : uh.values) uh_max = std::max(uh_max, std::abs(v));
  for (double v : ub.values) ub_max = std::max(ub_max, std::abs(v));

  Outcome o;
  o.require(worst <= 1e-12, "pure phases move " + fmt("%.1e", worst) + " <= 1e-12 in 10 steps");
  o.require(uh_max == 0.0 && ub_max > 0.0, "passive composite max|u_hat| = " + fmt("%.1e", uh_max) +
                                               " (max|u_bar| = " + fmt("%.2e", ub_max) + ")");
  return o;
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <pac-topopt executable>\n", argv[0]);
    return 1;
  }
  const std::string cli = argv[1];

  struct Criterion {
    const char* title;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"adjoint gradient vs finite differences", gradient},
      {"discrete duality of the linearized systems", duality},
      {"elasticity discretization", elasticity},
      {"variational inequality exactness", vi},
      {"interfacial energy constant", interface},
      {"scaled experiment behavior", experiment},
      {"determinism of the CLI trace", [&] { return determinism(cli); }},
      {"trivial-physics sanity", sanity},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s  %s (%.1f s): %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].title,
                seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
  return failed == 0 ? 0 : 1;
}
