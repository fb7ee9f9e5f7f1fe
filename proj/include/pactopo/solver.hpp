#pragma once

#include "pactopo/assembly.hpp"
#include "pactopo/sparse.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace pac {

struct SolveReport {
  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  /// Set when the requested tolerance lies below the rounding floor of the
  /// residual in double precision and the solve stopped at that floor.
  bool at_rounding_floor = false;
};

class ConvergenceError : public std::runtime_error {
public:
  ConvergenceError(const std::string& what, SolveReport report) : std::runtime_error(what), report_(report) {}
  const SolveReport& report() const { return report_; }

private:
  SolveReport report_;
};

struct CgOptions {
  double tol = 1e-10;
  int max_iter = 20000;
  bool record_residuals = false;
};

struct SpdSolution {
  std::vector<double> x;
  SolveReport report;
  std::vector<double> residual_history;  // relative residuals, when recorded
};

/// Jacobi-preconditioned conjugate gradients on the unconstrained dofs of
/// `system`. Constrained dofs take the `prescribed` values (zero when empty),
/// which are lifted to the right-hand side. Stops once
/// ||K x - f|| <= tol ||f - K_{FD} g|| over the free dofs, checked against the
/// true residual. When tol ||f|| is below the rounding floor
/// c eps || |K| |x| + |f| || of the residual itself, reaching that floor counts
/// as convergence (report.at_rounding_floor). Throws ConvergenceError after
/// max_iter iterations.
SpdSolution solve_spd(const SparseSpdSystem& system, std::span<const double> rhs, const CgOptions& options,
                      std::span<const double> prescribed = {}, std::span<const double> initial_guess = {});

struct BoxQpOptions {
  double tol = 1e-12;
  int max_sweeps = 100000;
  bool record_energy = false;
  double lower = -1.0;
  double upper = 1.0;
};

struct BoxQpSolution {
  std::vector<double> x;
  SolveReport report;
  std::vector<double> energy_history;  // 1/2 x.Ax - b.x after each sweep, when recorded
};

/// Projected Gauss-Seidel for min 1/2 x.Ax - b.x on [lower, upper]^n with
/// A symmetric and positive diagonal, i.e. the variational inequality
/// (Ax - b).(z - x) >= 0 for all z in the box. Sweeps in ascending index
/// order until max_i |x_i - clip(x_i - (Ax - b)_i / A_ii)| <= tol.
BoxQpSolution solve_box_qp(const CsrMatrix& a, std::span<const double> b, std::span<const double> initial,
                           const BoxQpOptions& options);

struct ObstacleParameters {
  double epsilon = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
};

/// Operator and right-hand side of the semi-implicit phase-field step:
///   A = (eps/tau - gamma/eps) M + gamma eps K,  b = (eps/tau) M phi_prev - w.
/// Throws TimeStepError when eps/tau <= gamma/eps.
struct ObstacleSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;
};
ObstacleSystem obstacle_system(std::span<const double> mass_diag, const CsrMatrix& laplacian,
                               std::span<const double> linear_term, const PhaseField& previous,
                               const ObstacleParameters& params);

struct ObstacleSolution {
  PhaseField phi;
  SolveReport report;
  std::vector<double> energy_history;
};

ObstacleSolution solve_obstacle_vi(std::span<const double> mass_diag, const CsrMatrix& laplacian,
                                   std::span<const double> linear_term, const PhaseField& previous,
                                   const ObstacleParameters& params, const BoxQpOptions& options);

} // namespace pac
