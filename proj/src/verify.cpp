#include "pactopo/verify.hpp"

#include "pactopo/errors.hpp"
#include "pactopo/presets.hpp"
#include "pactopo/solver.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

namespace pac {

OracleCheck& OracleReport::add(std::string name, double measured, double bound, std::string detail) {
  checks.push_back({std::move(name), measured, bound, measured <= bound, std::move(detail)});
  return checks.back();
}

bool OracleReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.pass; });
}

double OracleReport::max_measured() const {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.measured);
  return m;
}

std::string format_table(std::span<const OracleReport> reports) {
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%-11s %-34s %13s %13s  %s\n", "suite", "check", "measured", "bound", "result");
  out += buf;
  int total = 0, failed = 0;
  for (const OracleReport& r : reports)
    for (const OracleCheck& c : r.checks) {
      ++total;
      if (!c.pass) ++failed;
      std::snprintf(buf, sizeof(buf), "%-11s %-34s %13.6e %13.6e  %s%s%s\n", r.suite.c_str(), c.name.c_str(),
                    c.measured, c.bound, c.pass ? "PASS" : "FAIL", c.detail.empty() ? "" : "  ",
                    c.detail.c_str());
      out += buf;
    }
  std::snprintf(buf, sizeof(buf), "%d checks, %d failed\n", total, failed);
  out += buf;
  return out;
}

double relative_difference(double a, double b, double floor) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale < floor) return std::abs(a - b);
  return std::abs(a - b) / scale;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

// Independent cell kinematics: strain from barycentric gradients and the
// interpolated isotropic law.
Mat3 strain_of(const SimplexMesh& mesh, const CellGeometry& g, Index c, std::span<const double> u) {
  const int d = mesh.dim();
  Mat3 e;
  const auto verts = mesh.cell(c);
  for (int k = 0; k <= d; ++k)
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        const double uka = u[static_cast<std::size_t>(verts[k] * d + a)];
        const double ukb = u[static_cast<std::size_t>(verts[k] * d + b)];
        e(a, b) += 0.5 * (uka * g.grad[k][b] + ukb * g.grad[k][a]);
      }
  return e;
}

Lame mix(const IsotropicElasticity& plus, const IsotropicElasticity& minus, double s) {
  return {0.5 * (1.0 + s) * plus.lambda + 0.5 * (1.0 - s) * minus.lambda,
          0.5 * (1.0 + s) * plus.mu + 0.5 * (1.0 - s) * minus.mu};
}

Lame slope(const IsotropicElasticity& plus, const IsotropicElasticity& minus) {
  return {0.5 * (plus.lambda - minus.lambda), 0.5 * (plus.mu - minus.mu)};
}

Mat3 hooke(const Lame& l, const Mat3& e, int d) {
  Mat3 s = (2.0 * l.mu) * e;
  const double tr = e.trace();
  for (int a = 0; a < d; ++a) s(a, a) += l.lambda * tr;
  return s;
}

std::vector<double> load_of(const SimplexMesh& mesh, std::span<const Mat3> stress) {
  const int d = mesh.dim();
  std::vector<double> f(mesh.num_vertices() * static_cast<std::size_t>(d), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = static_cast<Index>(c);
    const CellGeometry g = mesh.geometry(cell);
    const auto verts = mesh.cell(cell);
    for (int k = 0; k <= d; ++k)
      for (int a = 0; a < d; ++a) {
        double v = 0.0;
        for (int b = 0; b < d; ++b) v += stress[c](a, b) * g.grad[k][b];
        f[static_cast<std::size_t>(verts[k] * d + a)] += g.volume * v;
      }
  }
  return f;
}

double cell_mean(const SimplexMesh& mesh, Index c, std::span<const double> nodal) {
  double s = 0.0;
  for (Index v : mesh.cell(c)) s += nodal[static_cast<std::size_t>(v)];
  return s / (mesh.dim() + 1);
}

} // namespace

OracleReport fd_gradient_check(const RunConfig& config, const PhaseField& phi, std::span<const Index> probes,
                               const FdOptions& options) {
  const double delta = options.delta;
  for (Index i : probes) {
    if (i < 0 || static_cast<std::size_t>(i) >= phi.size())
      throw PreconditionError("probe node " + std::to_string(i) + " out of range");
    const double v = phi[static_cast<std::size_t>(i)];
    if (std::abs(v) > 0.9 || std::abs(v) + delta > 1.0)
      throw PreconditionError("probe node " + std::to_string(i) + " is not interior (phi = " + fmt(v) + ")");
  }
  RunConfig cfg = config;
  cfg.solver.cg_tol = options.cg_tol;
  const Problem problem(cfg);
  const std::vector<double> grad = problem.reduced_gradient(phi);

  OracleReport report;
  report.suite = "gradient";
  double worst = 0.0;
  Index worst_node = -1;
  double worst_a = 0.0, worst_f = 0.0;
  for (Index i : probes) {
    PhaseField plus = phi, minus = phi;
    plus.values[static_cast<std::size_t>(i)] += delta;
    minus.values[static_cast<std::size_t>(i)] -= delta;
    const double fd = (problem.reduced_cost(plus) - problem.reduced_cost(minus)) / (2.0 * delta);
    const double a = grad[static_cast<std::size_t>(i)];
    const double rel = relative_difference(a, fd);
    if (rel >= worst) {
      worst = rel;
      worst_node = i;
      worst_a = a;
      worst_f = fd;
    }
  }
  report.add("fd_gradient " + std::to_string(probes.size()) + " probes", worst, options.bound,
             probes.empty() ? std::string()
                            : "node " + std::to_string(worst_node) + " adjoint " + fmt(worst_a) + " fd " + fmt(worst_f));
  return report;
}

OracleReport fd_gradient_check(const RunConfig& config, const PhaseField& phi, int probe_count,
                               const FdOptions& options, std::uint64_t seed) {
  std::vector<Index> interior;
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (std::abs(phi[i]) <= 0.9 && std::abs(phi[i]) + options.delta <= 1.0) interior.push_back(static_cast<Index>(i));
  if (probe_count < 0 || static_cast<std::size_t>(probe_count) > interior.size())
    throw PreconditionError("only " + std::to_string(interior.size()) + " interior nodes for " +
                            std::to_string(probe_count) + " probes");
  std::mt19937_64 engine(seed);
  // Partial Fisher-Yates with raw engine output keeps the draw portable.
  for (std::size_t k = 0; k < static_cast<std::size_t>(probe_count); ++k) {
    const std::size_t j = k + static_cast<std::size_t>(engine() % (interior.size() - k));
    std::swap(interior[k], interior[j]);
  }
  interior.resize(static_cast<std::size_t>(probe_count));
  return fd_gradient_check(config, phi, interior, options);
}

DualityResult linearized_derivatives(const RunConfig& config, const PhaseField& phi, std::span<const double> h,
                                     double cg_tol) {
  RunConfig cfg = config;
  cfg.solver.cg_tol = cg_tol;
  const Problem problem(cfg);
  const SimplexMesh& mesh = problem.mesh();
  const MaterialModel& mat = cfg.material;
  const int d = mesh.dim();
  if (h.size() != phi.size()) throw PreconditionError("direction size does not match the phase field");
  for (double v : h)
    if (!(std::abs(v) <= 1.0)) throw PreconditionError("direction must satisfy |h_i| <= 1");

  const DisplacementField u_bar = problem.solve_stage1(phi);
  const DisplacementField u_hat = problem.solve_stage2(phi, u_bar);
  const DisplacementField q_hat = problem.solve_adjoint_q(phi, u_hat);
  const DisplacementField p_bar = problem.solve_adjoint_p(phi, q_hat);

  const std::size_t nc = mesh.num_cells();
  std::vector<Mat3> s_vbar(nc), s_theta(nc);
  std::vector<double> h_cell(nc), adjoint_density(nc);
  const Lame dbar = slope(mat.stage1_plus, mat.stage1_minus);
  const Lame dhat = slope(mat.stage2_plus, mat.stage2_minus);
  const double chi_prime = mat.fixity_scale;
  for (std::size_t c = 0; c < nc; ++c) {
    const auto cell = static_cast<Index>(c);
    h_cell[c] = cell_mean(mesh, cell, h);
    const CellGeometry g = mesh.geometry(cell);
    s_vbar[c] = (-h_cell[c]) * hooke(dbar, strain_of(mesh, g, cell, u_bar.values), d);
  }
  CgOptions cg{cg_tol, 100000, false};
  const SparseSpdSystem kbar = assemble_stiffness(mesh, mat, Stage::Programming, phi, cfg.boundary);
  const SparseSpdSystem khat = assemble_stiffness(mesh, mat, Stage::Programmed, phi, cfg.boundary);
  const std::vector<double> v_bar = solve_spd(kbar, load_of(mesh, s_vbar), cg).x;

  for (std::size_t c = 0; c < nc; ++c) {
    const auto cell = static_cast<Index>(c);
    const CellGeometry g = mesh.geometry(cell);
    const double s = cell_mean(mesh, cell, phi.values);
    const double chi = mat.fixity_scale * (1.0 + s);
    const Lame chat = mix(mat.stage2_plus, mat.stage2_minus, s);
    const Lame cbar_lin = dbar;
    const Mat3 eub = strain_of(mesh, g, cell, u_bar.values);
    const Mat3 euh = strain_of(mesh, g, cell, u_hat.values);
    const Mat3 evb = strain_of(mesh, g, cell, v_bar);
    const Mat3 eq = strain_of(mesh, g, cell, q_hat.values);
    const Mat3 ep = strain_of(mesh, g, cell, p_bar.values);
    s_theta[c] = (chi_prime * h_cell[c]) * hooke(chat, eub, d) + chi * hooke(chat, evb, d) -
                 h_cell[c] * hooke(dhat, euh - chi * eub, d);
    const double rho = chi_prime * ddot(hooke(chat, eub, d), eq) - ddot(hooke(dhat, euh - chi * eub, d), eq) -
                       ddot(hooke(cbar_lin, eub, d), ep);
    adjoint_density[c] = g.volume * h_cell[c] * rho;
  }
  const std::vector<double> theta = solve_spd(khat, load_of(mesh, s_theta), cg).x;
  const std::vector<double> t = assemble_target_rhs(mesh, cfg.boundary, u_hat, cfg.target);

  DualityResult r;
  r.direct = dot(t, theta);
  for (double v : adjoint_density) r.adjoint += v;
  r.relative = relative_difference(r.direct, r.adjoint, 1e-300);
  if (r.direct == 0.0 && r.adjoint == 0.0) r.relative = 0.0;
  return r;
}

OracleReport linearized_consistency(const RunConfig& config, const PhaseField& phi, std::span<const double> h,
                                    double cg_tol, double bound) {
  const DualityResult r = linearized_derivatives(config, phi, h, cg_tol);
  OracleReport report;
  report.suite = "duality";
  report.add("linearized vs adjoint", r.relative, bound, "direct " + fmt(r.direct) + " adjoint " + fmt(r.adjoint));
  return report;
}

namespace {

double exact_sine(const Vec3& x) { return std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]); }

// Degree-5 seven-point rule on the reference triangle (barycentric, weights
// sum to one).
struct TriPoint {
  double l0, l1, l2, w;
};
constexpr double kA1 = 0.059715871789770, kB1 = 0.470142064105115, kW1 = 0.132394152788506;
constexpr double kA2 = 0.797426985353087, kB2 = 0.101286507323456, kW2 = 0.125939180544827;
constexpr TriPoint kTriRule[7] = {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.225},
                                  {kA1, kB1, kB1, kW1}, {kB1, kA1, kB1, kW1}, {kB1, kB1, kA1, kW1},
                                  {kA2, kB2, kB2, kW2}, {kB2, kA2, kB2, kW2}, {kB2, kB2, kA2, kW2}};

} // namespace

std::vector<ConvergenceLevel> manufactured_errors(int levels, int base_resolution) {
  if (levels < 3) throw PreconditionError("manufactured convergence needs at least 3 levels");
  if (base_resolution < 1) throw PreconditionError("base resolution must be positive");
  const IsotropicElasticity mat = MaterialModel::printed_composite().stage1_plus;
  const double lam = mat.lambda, mu = mat.mu;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  std::vector<ConvergenceLevel> out;
  for (int k = 0; k < levels; ++k) {
    const int n = base_resolution << k;
    BoxSpec box;
    box.dim = 2;
    box.lower = {0.0, 0.0, 0.0};
    box.upper = {1.0, 1.0, 0.0};
    box.resolution = {n, n, 1};
    const SimplexMesh mesh = build_box_mesh(box);
    std::vector<Lame> lame(mesh.num_cells(), Lame{lam, mu});
    SparseSpdSystem sys;
    sys.matrix = assemble_stiffness_matrix(mesh, lame);
    sys.constrained = dirichlet_mask(mesh, kAllFacetTags);
    const auto force = [&](const Vec3& x) {
      const double s = exact_sine(x);
      const double cc = std::cos(std::numbers::pi * x[0]) * std::cos(std::numbers::pi * x[1]);
      const double f = pi2 * (2.0 * mu * s + (lam + mu) * (s - cc));
      return Vec3{f, f, 0.0};
    };
    const std::vector<double> rhs = assemble_lumped_body_force(mesh, force);
    const std::vector<double> u = solve_spd(sys, rhs, CgOptions{1e-12, 100000, false}).x;

    double err2 = 0.0;
    for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
      const auto verts = mesh.cell(static_cast<Index>(c));
      const double area = mesh.geometry(static_cast<Index>(c)).volume;
      const Vec3& p0 = mesh.vertex(verts[0]);
      const Vec3& p1 = mesh.vertex(verts[1]);
      const Vec3& p2 = mesh.vertex(verts[2]);
      for (const TriPoint& q : kTriRule) {
        const Vec3 x{q.l0 * p0[0] + q.l1 * p1[0] + q.l2 * p2[0], q.l0 * p0[1] + q.l1 * p1[1] + q.l2 * p2[1], 0.0};
        const double ex = exact_sine(x);
        for (int a = 0; a < 2; ++a) {
          const double uh = q.l0 * u[static_cast<std::size_t>(verts[0] * 2 + a)] +
                            q.l1 * u[static_cast<std::size_t>(verts[1] * 2 + a)] +
                            q.l2 * u[static_cast<std::size_t>(verts[2] * 2 + a)];
          err2 += q.w * area * (uh - ex) * (uh - ex);
        }
      }
    }
    out.push_back({n, 1.0 / n, std::sqrt(err2)});
  }
  return out;
}

double convergence_rate(std::span<const ConvergenceLevel> levels) {
  const double n = static_cast<double>(levels.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& l : levels) {
    const double x = std::log(l.h), y = std::log(l.l2_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double patch_test_error(int dim) {
  if (dim != 2 && dim != 3) throw PreconditionError("dimension must be 2 or 3");
  BoxSpec box;
  box.dim = dim;
  box.lower = {-0.5, 0.25, 0.0};
  box.upper = {1.5, 1.0, dim == 3 ? 0.75 : 0.0};
  box.resolution = dim == 2 ? std::array<int, 3>{5, 3, 1} : std::array<int, 3>{3, 2, 2};
  const SimplexMesh mesh = build_box_mesh(box);
  const MaterialModel mat = MaterialModel::printed_composite();
  const PhaseField phi = PhaseField::constant(mesh.num_vertices(), 0.3);
  BoundarySpec all;
  all.dirichlet_stage1.assign(kAllFacetTags.begin(), kAllFacetTags.end());
  all.dirichlet_stage2 = all.dirichlet_stage1;
  const SparseSpdSystem sys = assemble_stiffness(mesh, mat, Stage::Programming, phi, all);

  const double b[3][3] = {{0.3, -0.2, 0.15}, {0.05, 0.4, -0.1}, {-0.25, 0.1, 0.2}};
  const double c0[3] = {0.1, -0.3, 0.2};
  const auto du = static_cast<std::size_t>(dim);
  std::vector<double> exact(mesh.num_vertices() * du);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const Vec3& x = mesh.vertex(static_cast<Index>(v));
    for (int a = 0; a < dim; ++a) {
      double val = c0[a];
      for (int j = 0; j < dim; ++j) val += b[a][j] * x[j];
      exact[v * du + static_cast<std::size_t>(a)] = val;
    }
  }
  const std::vector<double> zero(exact.size(), 0.0);
  const std::vector<double> u = solve_spd(sys, zero, CgOptions{1e-14, 100000, false}, exact).x;
  double err = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - exact[i]));
  return err;
}

OracleReport manufactured_convergence(int levels, int base_resolution) {
  const std::vector<ConvergenceLevel> errs = manufactured_errors(levels, base_resolution);
  const double rate = convergence_rate(errs);
  OracleReport report;
  report.suite = "elasticity";
  report.add("l2 rate |rate - 2|", std::abs(rate - 2.0), 0.2, "rate " + fmt(rate));
  for (std::size_t k = 1; k < errs.size(); ++k) {
    const double ratio = errs[k - 1].l2_error / errs[k].l2_error;
    report.add("error ratio n=" + std::to_string(errs[k].resolution) + " |r/4 - 1|", std::abs(ratio / 4.0 - 1.0), 0.2,
               "ratio " + fmt(ratio));
  }
  report.add("patch test 2d", patch_test_error(2), 1e-10);
  report.add("patch test 3d", patch_test_error(3), 1e-10);
  return report;
}

double interface_energy_sample(double epsilon, double h, int strips) {
  if (!(epsilon > 0.0) || !(h > 0.0) || strips < 0) throw PreconditionError("invalid interface sample");
  const int n = std::max(1, static_cast<int>(std::lround(1.0 / h)));
  BoxSpec box;
  box.dim = 2;
  box.lower = {0.0, 0.0, 0.0};
  box.upper = {1.0, 1.0, 0.0};
  box.resolution = {n, n, 1};
  const SimplexMesh mesh = build_box_mesh(box);
  const double half_pi = 0.5 * std::numbers::pi;
  std::vector<double> phi(mesh.num_vertices(), 1.0);
  for (std::size_t v = 0; v < phi.size(); ++v) {
    const double x = mesh.vertex(static_cast<Index>(v))[0];
    if (strips == 0) continue;
    int nearest = 1;
    for (int j = 2; j <= strips; ++j)
      if (std::abs(x - j / (strips + 1.0)) < std::abs(x - nearest / (strips + 1.0))) nearest = j;
    const double sign = nearest % 2 == 1 ? 1.0 : -1.0;
    const double t = std::clamp((x - nearest / (strips + 1.0)) / epsilon, -half_pi, half_pi);
    phi[v] = sign * std::sin(t);
  }
  // Gradient term exact per cell, potential lumped to vertices.
  double e = 0.0;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = static_cast<Index>(c);
    const CellGeometry g = mesh.geometry(cell);
    Vec3 grad{0.0, 0.0, 0.0};
    double pot = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double pv = phi[static_cast<std::size_t>(mesh.cell(cell)[k])];
      grad[0] += pv * g.grad[k][0];
      grad[1] += pv * g.grad[k][1];
      pot += 0.5 * (1.0 - pv * pv);
    }
    e += g.volume * (0.5 * epsilon * (grad[0] * grad[0] + grad[1] * grad[1]) + pot / (3.0 * epsilon));
  }
  return e;
}

OracleReport interface_energy_check(double epsilon, double h) {
  if (!(h <= 0.5 * epsilon)) throw PreconditionError("interface energy check needs h <= epsilon / 2");
  const double exact = 0.5 * std::numbers::pi;
  OracleReport report;
  report.suite = "interface";
  const double e1 = interface_energy_sample(epsilon, h, 1);
  const double e2 = interface_energy_sample(epsilon, h, 2);
  report.add("pure phase energy", std::abs(interface_energy_sample(epsilon, h, 0)), 1e-14);
  report.add("one interface vs pi/2", std::abs(e1 / exact - 1.0), 0.03, "E " + fmt(e1));
  report.add("two interfaces vs 2 x one", std::abs(e2 / (2.0 * e1) - 1.0), 0.03, "E " + fmt(e2));
  return report;
}

double complementarity_violation(const CsrMatrix& a, std::span<const double> b, std::span<const double> x,
                                 double lower, double upper) {
  const std::size_t n = a.rows();
  const std::vector<double> ax = a.multiply(x);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, a.get(i, i) + std::abs(b[i]));
  if (scale == 0.0) scale = 1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ax[i] - b[i];
    double v;
    if (x[i] >= upper) v = std::max(r, 0.0);
    else if (x[i] <= lower) v = std::max(-r, 0.0);
    else v = std::abs(r);
    if (x[i] > upper || x[i] < lower) v = std::numeric_limits<double>::infinity();
    worst = std::max(worst, v / scale);
  }
  return worst;
}

RunKktSummary run_with_kkt_check(const RunConfig& config) {
  const Problem problem(config);
  RunKktSummary summary;
  std::optional<OptState> previous;
  const ObstacleParameters params{config.flow.epsilon, config.flow.gamma, config.flow.tau};
  const auto observer = [&](const OptState& s) {
    summary.worst_bound_excess = std::max(summary.worst_bound_excess, std::max(0.0, s.phi.max_abs() - 1.0));
    if (previous) {
      const std::vector<double> w = assemble_vi_source(problem.mesh(), config.material, previous->phi,
                                                       previous->u_bar, previous->u_hat, s.q_hat, s.p_bar);
      const ObstacleSystem sys = obstacle_system(problem.lumped_mass(), problem.laplacian(), w, previous->phi, params);
      summary.worst_violation = std::max(summary.worst_violation, complementarity_violation(sys.matrix, sys.rhs, s.phi.values));
      ++summary.steps;
    }
    previous = s;
  };
  const RunResult result = run_from(problem, problem.initial_phase(), observer);
  if (result.failure) throw std::runtime_error("run failed: " + *result.failure);
  return summary;
}

OracleReport vi_checks(const RunConfig& run_config) {
  OracleReport report;
  report.suite = "vi";
  CsrMatrix a({0, 2, 4}, {0, 1, 0, 1});
  a.add(0, 0, 2.0);
  a.add(0, 1, -1.0);
  a.add(1, 0, -1.0);
  a.add(1, 1, 2.0);
  const std::vector<double> b{10.0, 0.0};
  const BoxQpSolution sol = solve_box_qp(a, b, std::vector<double>{0.0, 0.0}, BoxQpOptions{});
  const double err = std::max(std::abs(sol.x[0] - 1.0), std::abs(sol.x[1] - 0.5));
  report.add("2-dof instance (1, 0.5)", err, 1e-10);
  report.add("2-dof complementarity", complementarity_violation(a, b, sol.x), 1e-8);
  const RunKktSummary run = run_with_kkt_check(run_config);
  report.add("run complementarity " + run_config.name, run.worst_violation, 1e-8,
             std::to_string(run.steps) + " steps");
  report.add("run max|phi| - 1", run.worst_bound_excess, 0.0);
  return report;
}

namespace {

struct Tokens {
  std::string_view text;
  std::size_t pos = 0;

  std::string_view next() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    const std::size_t b = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (b == pos) throw IoError("vtk: unexpected end of file at byte " + std::to_string(pos));
    return text.substr(b, pos - b);
  }
  std::string_view line() {
    const std::size_t b = pos;
    while (pos < text.size() && text[pos] != '\n') ++pos;
    std::string_view l = text.substr(b, pos - b);
    if (pos < text.size()) ++pos;
    return l;
  }
  void expect(std::string_view word) {
    const std::size_t at = pos;
    const auto got = next();
    if (got != word)
      throw IoError("vtk: expected '" + std::string(word) + "' at byte " + std::to_string(at) + ", got '" +
                    std::string(got) + "'");
  }
  template <class T>
  T number() {
    const std::size_t at = pos;
    const auto s = next();
    T v{};
    const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size())
      throw IoError("vtk: bad number '" + std::string(s) + "' at byte " + std::to_string(at));
    return v;
  }
};

} // namespace

VtkData parse_vtk(std::string_view text) {
  Tokens t{text};
  if (t.line().rfind("# vtk DataFile", 0) != 0) throw IoError("vtk: missing header");
  t.line();  // title
  t.expect("ASCII");
  t.expect("DATASET");
  t.expect("UNSTRUCTURED_GRID");
  t.expect("POINTS");
  VtkData data;
  const auto np = t.number<std::size_t>();
  t.next();  // scalar type
  data.points.resize(np);
  for (auto& p : data.points)
    for (double& c : p) c = t.number<double>();
  t.expect("CELLS");
  const auto nc = t.number<std::size_t>();
  t.number<std::size_t>();
  data.cells.resize(nc);
  for (auto& c : data.cells) {
    const auto k = t.number<std::size_t>();
    c.resize(k);
    for (Index& v : c) {
      v = t.number<Index>();
      if (v < 0 || static_cast<std::size_t>(v) >= np) throw IoError("vtk: cell vertex out of range");
    }
  }
  t.expect("CELL_TYPES");
  if (t.number<std::size_t>() != nc) throw IoError("vtk: CELL_TYPES count mismatch");
  data.cell_types.resize(nc);
  for (int& ty : data.cell_types) ty = t.number<int>();
  data.dim = nc == 0 ? 0 : (data.cell_types[0] == 10 ? 3 : 2);
  t.expect("POINT_DATA");
  if (t.number<std::size_t>() != np) throw IoError("vtk: POINT_DATA count mismatch");
  while (true) {
    while (t.pos < text.size() && std::isspace(static_cast<unsigned char>(text[t.pos]))) ++t.pos;
    if (t.pos >= text.size()) break;
    const auto kind = t.next();
    const auto name = t.next();
    t.next();  // type
    if (kind == "SCALARS") {
      t.number<int>();
      t.expect("LOOKUP_TABLE");
      t.next();
      std::vector<double> values(np);
      for (double& v : values) v = t.number<double>();
      if (name == "phi") data.phi = std::move(values);
    } else if (kind == "VECTORS") {
      std::vector<Vec3> values(np);
      for (auto& v : values)
        for (double& c : v) c = t.number<double>();
      if (name == "u_bar") data.u_bar = std::move(values);
      else if (name == "u_hat") data.u_hat = std::move(values);
    } else {
      throw IoError("vtk: unsupported section '" + std::string(kind) + "'");
    }
  }
  return data;
}

std::vector<std::string> suite_names() { return {"gradient", "duality", "elasticity", "vi", "interface", "all"}; }

namespace {

RunConfig coarse_t1r1(int nx, int ny) {
  RunConfig cfg = preset(PresetId::T1R1);
  cfg.box.resolution = {nx, ny, 1};
  return cfg;
}

PhaseField seeded_phase(const RunConfig& cfg, double amplitude, std::uint64_t seed) {
  RunConfig c = cfg;
  c.initial.amplitude = amplitude;
  c.initial.seed = seed;
  return Problem(c).initial_phase();
}

std::vector<OracleReport> gradient_suite() {
  const RunConfig cfg = coarse_t1r1(24, 4);
  OracleReport full = fd_gradient_check(cfg, seeded_phase(cfg, 0.5, 0), 20, FdOptions{});
  full.checks.back().name = "fd T1R1 24x4, 20 probes";

  RunConfig gl = cfg;
  gl.target.weight = Mat3{};
  gl.loads = Loads{};
  OracleReport gl_report = fd_gradient_check(gl, seeded_phase(gl, 0.5, 1), 20, FdOptions{1e-5, 1e-6, 1e-11}, 1);
  gl_report.checks.back().name = "fd interface energy only";

  const PhaseField zero = PhaseField::constant(Problem(gl).mesh().num_vertices(), 0.0);
  const std::vector<Index> probes{3, 40, 77};
  OracleReport zero_report = fd_gradient_check(gl, zero, probes, FdOptions{1e-5, 1e-10, 1e-11});
  zero_report.checks.back().name = "fd zero design";

  full.checks.push_back(gl_report.checks.back());
  full.checks.push_back(zero_report.checks.back());
  return {full};
}

std::vector<OracleReport> duality_suite() {
  const RunConfig cfg = coarse_t1r1(12, 2);
  const PhaseField phi = seeded_phase(cfg, 0.5, 3);
  std::mt19937_64 engine(11);
  std::vector<double> h(phi.size());
  for (double& v : h) v = 2.0 * (static_cast<double>(engine() >> 11) * 0x1.0p-53) - 1.0;
  OracleReport r = linearized_consistency(cfg, phi, h);
  const std::vector<double> zero(phi.size(), 0.0);
  const DualityResult z = linearized_derivatives(cfg, phi, zero);
  r.add("zero direction", std::max(std::abs(z.direct), std::abs(z.adjoint)), 0.0);
  return {r};
}

} // namespace

std::optional<std::vector<OracleReport>> run_suite(std::string_view name) {
  std::vector<OracleReport> out;
  const bool all = name == "all";
  bool known = all;
  if (all || name == "gradient") {
    known = true;
    for (auto& r : gradient_suite()) out.push_back(std::move(r));
  }
  if (all || name == "duality") {
    known = true;
    for (auto& r : duality_suite()) out.push_back(std::move(r));
  }
  if (all || name == "elasticity") {
    known = true;
    out.push_back(manufactured_convergence(3));
  }
  if (all || name == "vi") {
    known = true;
    RunConfig cfg = coarse_t1r1(24, 4);
    cfg.flow.max_steps = 20;
    cfg.name = "T1R1-24x4";
    out.push_back(vi_checks(cfg));
  }
  if (all || name == "interface") {
    known = true;
    const double eps = 1.0 / (8.0 * std::numbers::pi);
    out.push_back(interface_energy_check(eps, eps / 4.0));
  }
  if (!known) return std::nullopt;
  return out;
}

} // namespace pac
