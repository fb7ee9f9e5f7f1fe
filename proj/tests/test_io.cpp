#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pactopo/errors.hpp"
#include "pactopo/io.hpp"
#include "pactopo/presets.hpp"
#include "pactopo/verify.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <unistd.h>
#include <random>
#include <sstream>

using namespace pac;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("pac_io_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_CASE("configuration round trip") {
  for (PresetId id : kAllPresets) {
    CAPTURE(to_string(id));
    const RunConfig c = preset(id);
    const std::string text = serialize_config(c);
    const RunConfig back = parse_config(text);
    CHECK(serialize_config(back) == text);
    // Empty document on a preset base keeps every value.
    CHECK(serialize_config(parse_config("", c)) == text);
    CHECK(serialize_config(parse_config("preset = " + std::string(to_string(id)))) == text);
  }
}

TEST_CASE("parsing applies overrides") {
  const RunConfig c = parse_config(R"(preset = T1R2
# comment
[mesh]
resolution = 24 4   # trailing comment
[flow]
seed = 9
steps = 5
target.c = 0.5
)");
  CHECK(c.box.resolution[0] == 24);
  CHECK(c.box.resolution[1] == 4);
  CHECK(c.initial.seed == 9);
  CHECK(c.flow.max_steps == 5);
  CHECK(c.target.c == 0.5);
  CHECK(c.target.profile == TargetProfile::Cosine);

  const RunConfig m = parse_config("[material]\nstage1_plus_youngs = 4\nstage1_plus_poisson = 0.25\n");
  CHECK(m.material.stage1_plus.lambda == doctest::Approx(4.0 * 0.25 / (1.25 * 0.5)));
  CHECK(m.material.stage1_plus.mu == doctest::Approx(4.0 / 2.5));
}

TEST_CASE("oversized time step names the bound") {
  const std::string text = "flow.tau = 1e9\n";
  CHECK_THROWS_AS(parse_config(text, preset(PresetId::T1R1)), TimeStepError);
  const std::string msg = message_of([&] { parse_config(text, preset(PresetId::T1R1)); });
  CHECK(msg.find("epsilon^2/gamma") != std::string::npos);
}

TEST_CASE("malformed documents report line numbers and keys") {
  const std::string unknown = message_of([] { parse_config("[flow]\nsteps = 3\nbogus = 1\n"); });
  CHECK(unknown.find("line 3") != std::string::npos);
  CHECK(unknown.find("bogus") != std::string::npos);
  CHECK_THROWS_AS(parse_config("[flow]\nbogus = 1\n"), ConfigParseError);

  const std::string dup = message_of([] { parse_config("[flow]\nsteps = 3\nsteps = 4\n"); });
  CHECK(dup.find("line 3") != std::string::npos);

  CHECK(message_of([] { parse_config("[nope]\n"); }).find("line 1") != std::string::npos);
  CHECK(message_of([] { parse_config("[flow\n"); }).find("line 1") != std::string::npos);
  CHECK(message_of([] { parse_config("\n\njust text\n"); }).find("line 3") != std::string::npos);

  const std::string bad_value = message_of([] { parse_config("[flow]\n\nsteps = three\n"); });
  CHECK(bad_value.find("line 3") != std::string::npos);
  CHECK(bad_value.find("flow.steps") != std::string::npos);

  const std::string bad_material = message_of([] { parse_config("material.stage2_minus_poisson = 0.5\n"); });
  CHECK(bad_material.find("stage2_minus_poisson") != std::string::npos);

  CHECK_THROWS_AS(parse_config("mesh.dim = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("preset = T7R7\n"), ConfigError);
}

TEST_CASE("trace csv") {
  EnergyTrace t;
  const std::string header = "step,time,J,E_target,E_interface,vi_iters,cg_iters\n";
  CHECK(trace_csv(t) == header);

  t.append({0, 0.0, 0.1, 1.0 / 3.0, 2e-17, 0, 12});
  const std::string one = trace_csv(t);
  CHECK(count_lines(one) == 2);
  CHECK(one == header + "0,0,0.10000000000000001,0.33333333333333331,2.0000000000000001e-17,0,12\n");

  // 17 significant digits round-trip every double.
  std::mt19937_64 gen(1);
  EnergyTrace r;
  std::vector<double> values;
  for (int i = 0; i < 50; ++i) {
    const double v = std::ldexp(static_cast<double>(gen() >> 11), -40);
    values.push_back(v);
    r.append({i, 0.0, v, v, 0.0, 0, 0});
  }
  std::istringstream in(trace_csv(r));
  std::string line;
  std::getline(in, line);
  for (double v : values) {
    std::getline(in, line);
    const auto a = line.find(',', line.find(',') + 1);
    CHECK(std::stod(line.substr(a + 1)) == v);
  }

  TempDir dir;
  write_trace_csv(t, dir.path / "t.csv");
  CHECK(read_file(dir.path / "t.csv") == one);
  CHECK_FALSE(fs::exists(dir.path / "t.csv.tmp"));
}

TEST_CASE("vtk snapshot round trip") {
  for (const PresetId id : {PresetId::T1R1, PresetId::T2R1}) {
    RunConfig cfg = preset(id);
    cfg.box.resolution = cfg.box.dim == 2 ? std::array<int, 3>{6, 2, 1} : std::array<int, 3>{3, 2, 2};
    const SimplexMesh m = build_box_mesh(cfg.box);
    const std::size_t nv = m.num_vertices();
    const int d = m.dim();
    std::mt19937_64 gen(static_cast<std::uint64_t>(d));
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> phi(nv), ub(nv * static_cast<std::size_t>(d)), uh(ub.size());
    for (double& x : phi) x = u(gen);
    for (double& x : ub) x = u(gen) * 1e-3;
    for (double& x : uh) x = u(gen) * 1e5;
    phi[0] = 1.0 / 3.0;

    const std::string text = vtk_snapshot(m, PhaseField(phi), DisplacementField(d, ub), DisplacementField(d, uh));
    CHECK(text.rfind("# vtk DataFile Version 3.0\n", 0) == 0);
    CHECK(text.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
    CHECK(text.find("SCALARS phi double 1") != std::string::npos);
    CHECK(text.find("VECTORS u_bar double") != std::string::npos);
    CHECK(text.find("VECTORS u_hat double") != std::string::npos);

    const VtkData back = parse_vtk(text);
    CHECK(back.dim == d);
    REQUIRE(back.points.size() == nv);
    REQUIRE(back.cells.size() == m.num_cells());
    CHECK(back.phi == phi);
    for (std::size_t v = 0; v < nv; ++v) {
      const Vec3& x = m.vertex(static_cast<Index>(v));
      for (int a = 0; a < 3; ++a) {
        CHECK(back.points[v][a] == x[a]);
        CHECK(back.u_bar[v][a] == (a < d ? ub[v * static_cast<std::size_t>(d) + static_cast<std::size_t>(a)] : 0.0));
        CHECK(back.u_hat[v][a] == (a < d ? uh[v * static_cast<std::size_t>(d) + static_cast<std::size_t>(a)] : 0.0));
      }
    }
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
      CHECK(back.cell_types[c] == (d == 2 ? 5 : 10));
      const auto cell = m.cell(static_cast<Index>(c));
      CHECK(std::equal(cell.begin(), cell.end(), back.cells[c].begin(), back.cells[c].end()));
    }
  }
  CHECK_THROWS_AS(parse_vtk("# vtk DataFile Version 3.0\nx\nBINARY\n"), IoError);
  CHECK(message_of([] { parse_vtk("# vtk DataFile Version 3.0\nx\nASCII\nDATASET UNSTRUCTURED_GRID\nPOINTS 2 double\n0 0"); })
            .find("byte") != std::string::npos);
}

TEST_CASE("file errors name the path") {
  const std::string msg = message_of([] { read_file("/nonexistent/dir/file.cfg"); });
  CHECK(msg.find("/nonexistent/dir/file.cfg") != std::string::npos);
  CHECK_THROWS_AS(write_file_atomic("/nonexistent/dir/out.csv", "x"), IoError);
  CHECK_THROWS_AS(load_config("/nonexistent/dir/file.cfg"), IoError);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(6.0) == "6");
  CHECK(format_double(1e-9) == "1e-09");
  const double x = 1.0 / (8.0 * 3.141592653589793);
  CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("cli: preset commands") {
  const CliResult list = cli({"preset", "list"});
  CHECK(list.code == 0);
  CHECK(count_lines(list.out) == 8);
  for (PresetId id : kAllPresets) CHECK(list.out.find(std::string(to_string(id)) + " ") != std::string::npos);

  const CliResult show = cli({"preset", "show", "T2R4"});
  CHECK(show.code == 0);
  CHECK(show.out == serialize_config(preset(PresetId::T2R4)));
  CHECK(cli({"preset", "show", "X"}).code == 1);
  CHECK(cli({"preset"}).code == 1);
}

TEST_CASE("cli: usage errors") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"run"}).code == 1);
  CHECK(cli({"run", "T1R1", "--steps", "x"}).code == 1);
  CHECK(cli({"run", "T1R1", "--steps", "-1"}).code == 1);
  CHECK(cli({"run", "T1R1", "--resolution", "12"}).code == 1);
  CHECK(cli({"verify", "nonsense"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("cli: run writes its artifacts") {
  TempDir dir;
  const fs::path out = dir.path / "d";
  const CliResult r = cli({"run", "T1R1", "--steps", "0", "--out", out.string(), "--resolution", "24x4"});
  CHECK(r.code == 0);
  const std::string trace = read_file(out / "trace.csv");
  CHECK(count_lines(trace) == 2);
  CHECK(trace.rfind("step,time,J,E_target,E_interface,vi_iters,cg_iters\n0,0,", 0) == 0);
  CHECK(fs::exists(out / "snapshot_000000.vtk"));
  const RunConfig saved = load_config(out / "config.cfg");
  CHECK(saved.box.resolution[0] == 24);
  CHECK(saved.flow.max_steps == 0);

  // The saved configuration replays to the same trace.
  const fs::path again = dir.path / "e";
  CHECK(cli({"run", (out / "config.cfg").string(), "--out", again.string()}).code == 0);
  CHECK(read_file(again / "trace.csv") == trace);
  CHECK(cli({"run", (out / "config.cfg").string(), "--scale", "2", "--out", again.string()}).code == 1);

  const fs::path steps = dir.path / "f";
  CHECK(cli({"run", "T1R1", "--steps", "3", "--snapshot-every", "2", "--seed", "4", "--out", steps.string(),
             "--resolution", "24x4"})
            .code == 0);
  CHECK(count_lines(read_file(steps / "trace.csv")) == 5);
  CHECK(fs::exists(steps / "snapshot_000002.vtk"));
  CHECK(fs::exists(steps / "snapshot_000003.vtk"));
  const VtkData last = parse_vtk(read_file(steps / "snapshot_000003.vtk"));
  for (double v : last.phi) CHECK(std::abs(v) <= 1.0);
}

TEST_CASE("cli: runtime failures") {
  TempDir dir;
  const CliResult missing = cli({"run", (dir.path / "nonexistent.cfg").string(), "--out", (dir.path / "o").string()});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("nonexistent.cfg") != std::string::npos);

  write_file_atomic(dir.path / "bad.cfg", "[flow]\ntau = 1e9\n");
  const CliResult bad = cli({"run", (dir.path / "bad.cfg").string(), "--out", (dir.path / "o").string()});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("epsilon^2/gamma") != std::string::npos);
}

TEST_CASE("cli: verify runs a suite") {
  const CliResult v = cli({"verify", "vi"});
  CHECK(v.code == 0);
  CHECK(v.out.find("PASS") != std::string::npos);
  CHECK(v.out.find("FAIL") == std::string::npos);
}
