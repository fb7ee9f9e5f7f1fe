#pragma once

#include "pactopo/config.hpp"
#include "pactopo/pipeline.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pac {

/// One measured quantity against its bound; passes iff measured <= bound.
struct OracleCheck {
  std::string name;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string detail;
};

struct OracleReport {
  std::string suite;
  std::vector<OracleCheck> checks;

  OracleCheck& add(std::string name, double measured, double bound, std::string detail = {});
  bool passed() const;
  double max_measured() const;
};

/// Fixed-width pass/fail table, one line per check plus a summary line.
std::string format_table(std::span<const OracleReport> reports);

/// |a - b| / max(|a|, |b|), or |a - b| when both are below `floor`.
double relative_difference(double a, double b, double floor = 1e-14);

struct FdOptions {
  double delta = 1e-5;
  double bound = 1e-3;
  /// CG tolerance of every state solve; difference quotients amplify solver
  /// error by 1/delta.
  double cg_tol = 1e-11;
};

/// Compares the adjoint-assembled reduced gradient at `probes` with central
/// differences of the reduced cost. Throws PreconditionError if a probe has
/// |phi_i| > 0.9 or phi_i +- delta leaves [-1, 1].
OracleReport fd_gradient_check(const RunConfig& config, const PhaseField& phi, std::span<const Index> probes,
                               const FdOptions& options = {});
/// Same with `probe_count` distinct nodes drawn from {|phi_i| <= 0.9} with
/// a seeded generator.
OracleReport fd_gradient_check(const RunConfig& config, const PhaseField& phi, int probe_count,
                               const FdOptions& options = {}, std::uint64_t seed = 0);

struct DualityResult {
  double direct = 0.0;   // target-term derivative through the linearized states
  double adjoint = 0.0;  // same derivative through q_hat and p_bar
  double relative = 0.0;
};

/// Solves the linearized state systems in direction h at phi and compares
/// both evaluations of the target-term derivative.
DualityResult linearized_derivatives(const RunConfig& config, const PhaseField& phi, std::span<const double> h,
                                     double cg_tol = 1e-12);
OracleReport linearized_consistency(const RunConfig& config, const PhaseField& phi, std::span<const double> h,
                                    double cg_tol = 1e-12, double bound = 1e-8);

struct ConvergenceLevel {
  int resolution = 0;
  double h = 0.0;
  double l2_error = 0.0;
};

/// L2 errors of the manufactured solution u = sin(pi x) sin(pi y) (1, 1) on
/// the unit square at resolutions base * 2^k, k < levels. Throws
/// PreconditionError for levels < 3.
std::vector<ConvergenceLevel> manufactured_errors(int levels, int base_resolution = 4);
/// Least-squares slope of log(error) against log(h).
double convergence_rate(std::span<const ConvergenceLevel> levels);
OracleReport manufactured_convergence(int levels = 3, int base_resolution = 4);

/// Largest nodal error when an affine field is imposed on the whole boundary
/// with zero body force (2D and 3D).
double patch_test_error(int dim);

/// Discrete Ginzburg-Landau energy of phi = sin(clamp(d(x) / eps, -pi/2,
/// pi/2)) on the unit square, where d is the signed distance to `strips`
/// vertical interfaces at x1 = j / (strips + 1) with alternating
/// orientation. Mesh width is the nearest 1/n to h.
double interface_energy_sample(double epsilon, double h, int strips);
OracleReport interface_energy_check(double epsilon, double h);

/// Largest scaled violation of the box-constrained KKT conditions of
/// A x = b on [lower, upper]: interior nodes need r_i = 0, nodes at the upper
/// bound r_i <= 0, nodes at the lower bound r_i >= 0, with r = A x - b and
/// the scale max_i (A_ii + |b_i|).
double complementarity_violation(const CsrMatrix& a, std::span<const double> b, std::span<const double> x,
                                 double lower = -1.0, double upper = 1.0);

struct RunKktSummary {
  int steps = 0;
  double worst_violation = 0.0;
  double worst_bound_excess = 0.0;  // max(0, max|phi_i| - 1) over all emitted designs
};

/// Runs `config` and checks every phase-field step against its KKT
/// conditions, rebuilding the subproblem from the recorded states.
RunKktSummary run_with_kkt_check(const RunConfig& config);
OracleReport vi_checks(const RunConfig& run_config);

struct VtkData {
  int dim = 0;
  std::vector<Vec3> points;
  std::vector<std::vector<Index>> cells;
  std::vector<int> cell_types;
  std::vector<double> phi;
  std::vector<Vec3> u_bar;
  std::vector<Vec3> u_hat;
};

/// Reader for the legacy ASCII files produced by write_vtk_snapshot. Throws
/// IoError on malformed input.
VtkData parse_vtk(std::string_view text);

/// Names accepted by run_suite.
std::vector<std::string> suite_names();
/// Runs "gradient", "duality", "elasticity", "vi", "interface" or "all";
/// nullopt for an unknown name.
std::optional<std::vector<OracleReport>> run_suite(std::string_view name);

} // namespace pac
