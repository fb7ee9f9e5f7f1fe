#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pactopo/errors.hpp"
#include "pactopo/presets.hpp"
#include "pactopo/verify.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace pac;

namespace {

RunConfig strip(int nx, int ny) {
  RunConfig c = preset(PresetId::T1R1);
  c.box.resolution = {nx, ny, 1};
  return c;
}

RunConfig quiet(RunConfig c) {
  c.loads = Loads{};
  c.target.weight = Mat3{};
  return c;
}

PhaseField random_phase(std::size_t n, std::uint64_t seed, double amp) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(-amp, amp);
  std::vector<double> v(n);
  for (double& x : v) x = u(gen);
  return PhaseField(std::move(v));
}

std::size_t vertices(const RunConfig& c) { return build_box_mesh(c.box).num_vertices(); }

} // namespace

TEST_CASE("report bookkeeping") {
  OracleReport r{"demo", {}};
  r.add("a", 1e-4, 1e-3);
  r.add("b", 2.0, 1.0, "too big");
  CHECK(r.checks[0].pass);
  CHECK_FALSE(r.checks[1].pass);
  CHECK_FALSE(r.passed());
  CHECK(r.max_measured() == 2.0);
  r.add("c", 1.0, 1.0);
  CHECK(r.checks[2].pass);

  const std::vector<OracleReport> reports{r};
  const std::string table = format_table(reports);
  CHECK(table.find("PASS") != std::string::npos);
  CHECK(table.find("FAIL") != std::string::npos);
  CHECK(table.find("too big") != std::string::npos);
  CHECK(table.find("3 checks, 1 failed") != std::string::npos);
}

TEST_CASE("relative difference") {
  CHECK(relative_difference(1.0, 1.0) == 0.0);
  CHECK(relative_difference(2.0, 1.0) == doctest::Approx(0.5));
  CHECK(relative_difference(-1.0, 1.0) == doctest::Approx(2.0));
  CHECK(relative_difference(0.0, 0.0) == 0.0);
  CHECK(relative_difference(1e-16, -1e-16) == doctest::Approx(2e-16));
}

TEST_CASE("finite-difference gradient") {
  SUBCASE("zero design without loads") {
    const RunConfig c = quiet(strip(12, 2));
    const std::vector<Index> probes{3, 10, 20};
    const OracleReport r = fd_gradient_check(c, PhaseField::constant(vertices(c), 0.0), probes);
    CHECK(r.passed());
    CHECK(r.max_measured() == 0.0);
  }
  SUBCASE("interface energy alone") {
    const RunConfig c = quiet(strip(12, 2));
    const OracleReport r = fd_gradient_check(c, random_phase(vertices(c), 1, 0.8), 10, FdOptions{1e-5, 1e-6, 1e-11});
    CHECK(r.passed());
  }
  SUBCASE("full coupling on a small strip") {
    const RunConfig c = strip(12, 2);
    const OracleReport r = fd_gradient_check(c, random_phase(vertices(c), 2, 0.5), 8);
    CHECK(r.passed());
    CHECK(r.max_measured() <= 1e-3);
  }
  SUBCASE("probes at the bounds are rejected") {
    const RunConfig c = strip(12, 2);
    PhaseField phi = PhaseField::constant(vertices(c), 0.0);
    phi.values[5] = 0.95;
    const std::vector<Index> probes{5};
    CHECK_THROWS_AS(fd_gradient_check(c, phi, probes), PreconditionError);
    CHECK_THROWS_AS(fd_gradient_check(c, PhaseField::constant(vertices(c), 1.0), 3), PreconditionError);
  }
}

TEST_CASE("linearized duality") {
  const RunConfig c = strip(12, 2);
  const std::size_t nv = vertices(c);
  const PhaseField phi = random_phase(nv, 3, 0.7);
  const PhaseField h = random_phase(nv, 4, 1.0);

  const DualityResult d = linearized_derivatives(c, phi, h.values);
  CHECK(d.direct != 0.0);
  CHECK(d.relative <= 1e-8);
  CHECK(linearized_consistency(c, phi, h.values).passed());

  const std::vector<double> zero(nv, 0.0);
  const DualityResult z = linearized_derivatives(c, phi, zero);
  CHECK(z.direct == 0.0);
  CHECK(z.adjoint == 0.0);

  RunConfig no_weight = c;
  no_weight.target.weight = Mat3{};
  const DualityResult w = linearized_derivatives(no_weight, phi, h.values);
  CHECK(w.direct == 0.0);
  CHECK(w.adjoint == 0.0);

  std::vector<double> big = h.values;
  big[0] = 1.5;
  CHECK_THROWS_AS(linearized_derivatives(c, phi, big), PreconditionError);
}

TEST_CASE("manufactured solution") {
  const std::vector<ConvergenceLevel> levels = manufactured_errors(3);
  REQUIRE(levels.size() == 3);
  CHECK(levels[0].resolution == 4);
  CHECK(levels[2].resolution == 16);
  for (std::size_t i = 1; i < levels.size(); ++i) {
    CHECK(levels[i].l2_error < levels[i - 1].l2_error);
    CHECK(levels[i - 1].l2_error / levels[i].l2_error == doctest::Approx(4.0).epsilon(0.2));
  }
  CHECK(convergence_rate(levels) == doctest::Approx(2.0).epsilon(0.1));
  CHECK(manufactured_convergence().passed());
  CHECK_THROWS_AS(manufactured_errors(2), PreconditionError);

  const std::vector<ConvergenceLevel> synthetic{{1, 1.0, 3.0}, {2, 0.5, 0.75}, {4, 0.25, 0.1875}};
  CHECK(convergence_rate(synthetic) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK(patch_test_error(2) <= 1e-10);
  CHECK(patch_test_error(3) <= 1e-10);
}

TEST_CASE("interface energy") {
  const double eps = 1.0 / (8.0 * std::numbers::pi);
  CHECK(interface_energy_sample(eps, eps / 4.0, 0) == 0.0);
  const double one = interface_energy_sample(eps, eps / 4.0, 1);
  CHECK(one == doctest::Approx(std::numbers::pi / 2.0).epsilon(0.03));
  CHECK(interface_energy_sample(eps, eps / 4.0, 2) == doctest::Approx(2.0 * one).epsilon(0.03));
  CHECK(interface_energy_check(eps, eps / 4.0).passed());
  CHECK_THROWS_AS(interface_energy_check(eps, eps), PreconditionError);
}

TEST_CASE("complementarity residual") {
  // A = [[2,-1],[-1,2]], b = (10, 0): solution (1, 0.5) with the first bound active.
  CsrMatrix a({0, 2, 4}, {0, 1, 0, 1});
  a.add(0, 0, 2.0);
  a.add(0, 1, -1.0);
  a.add(1, 0, -1.0);
  a.add(1, 1, 2.0);
  const std::vector<double> b{10.0, 0.0};
  CHECK(complementarity_violation(a, b, std::vector<double>{1.0, 0.5}) == 0.0);
  CHECK(complementarity_violation(a, b, std::vector<double>{1.0, 0.4}) > 0.0);
  // Interior point with a nonzero residual.
  CHECK(complementarity_violation(a, b, std::vector<double>{0.5, 0.25}) > 0.1);
  // Lower bound with the wrong sign.
  CHECK(complementarity_violation(a, std::vector<double>{-10.0, 0.0}, std::vector<double>{1.0, 0.5}) > 0.1);
}

TEST_CASE("kkt conditions along a short run") {
  RunConfig c = strip(24, 4);
  c.flow.max_steps = 4;
  const RunKktSummary s = run_with_kkt_check(c);
  CHECK(s.steps == 4);
  CHECK(s.worst_violation <= 1e-8);
  CHECK(s.worst_bound_excess == 0.0);
  CHECK(vi_checks(c).passed());
}

TEST_CASE("suite registry") {
  const std::vector<std::string> names = suite_names();
  for (const char* n : {"gradient", "duality", "elasticity", "vi", "interface", "all"})
    CHECK(std::find(names.begin(), names.end(), n) != names.end());
  CHECK_FALSE(run_suite("bogus").has_value());
  const auto interface = run_suite("interface");
  REQUIRE(interface.has_value());
  CHECK((*interface)[0].passed());
}
