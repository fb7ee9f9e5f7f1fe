#include "pactopo/solver.hpp"

#include "pactopo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace pac {

namespace {

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

} // namespace

SpdSolution solve_spd(const SparseSpdSystem& system, std::span<const double> rhs, const CgOptions& options,
                      std::span<const double> prescribed, std::span<const double> initial_guess) {
  if (!(options.tol > 0.0)) throw PreconditionError("CG tolerance must be positive");
  const std::size_t n = system.size();
  if (rhs.size() != n) throw PreconditionError("right-hand side size does not match the system");
  const CsrMatrix& k = system.matrix;
  const auto is_free = [&](std::size_t i) { return system.constrained.empty() || !system.constrained[i]; };

  SpdSolution sol;
  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_free(i))
      sol.x[i] = prescribed.empty() ? 0.0 : prescribed[i];
  }

  // Norm of the lifted right-hand side over the free dofs.
  std::vector<double> work = k.multiply(sol.x);
  double bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (is_free(i)) bnorm += (rhs[i] - work[i]) * (rhs[i] - work[i]);
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) {
    sol.report = {0, 0.0, true};
    return sol;
  }

  if (!initial_guess.empty())
    for (std::size_t i = 0; i < n; ++i)
      if (is_free(i)) sol.x[i] = initial_guess[i];

  std::vector<double> inv_diag(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_free(i)) continue;
    const double d = k.get(i, i);
    if (!(d > 0.0)) throw ConvergenceError("non-positive diagonal entry in SPD system", {});
    inv_diag[i] = 1.0 / d;
  }

  std::vector<double> r(n, 0.0);
  const auto true_residual = [&]() {
    k.multiply(sol.x, work);
    for (std::size_t i = 0; i < n; ++i) r[i] = is_free(i) ? rhs[i] - work[i] : 0.0;
    return norm2(r);
  };

  // Residual of the exactly rounded solution is about eps |K| |x|; no
  // iteration can push the computed residual much below this.
  const auto rounding_floor = [&]() {
    double acc = 0.0;
    std::size_t widest = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_free(i)) continue;
      const auto cols = k.row_cols(i);
      const auto vals = k.row_values(i);
      widest = std::max(widest, cols.size());
      double a = std::abs(rhs[i]);
      for (std::size_t j = 0; j < cols.size(); ++j) a += std::abs(vals[j] * sol.x[static_cast<std::size_t>(cols[j])]);
      acc += a * a;
    }
    return 4.0 * std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(widest)) * std::sqrt(acc);
  };
  const double target = options.tol * bnorm;
  double rnorm = true_residual();
  if (options.record_residuals) sol.residual_history.push_back(rnorm / bnorm);
  if (rnorm <= target) {
    sol.report = {0, rnorm / bnorm, true};
    return sol;
  }

  std::vector<double> z(n), p(n), ap(n);
  const auto precondition = [&]() {
    double rz = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = inv_diag[i] * r[i];
      rz += r[i] * z[i];
    }
    return rz;
  };
  double rz = precondition();
  p = z;

  for (int it = 1; it <= options.max_iter; ++it) {
    k.multiply(p, ap);
    for (std::size_t i = 0; i < n; ++i)
      if (!is_free(i)) ap[i] = 0.0;
    const double pap = dot(p, ap);
    if (!(pap > 0.0))
      throw ConvergenceError("system is not positive definite (p.Kp = " + std::to_string(pap) + ")",
                             {it, rnorm / bnorm, false});
    const double alpha = rz / pap;
    for (std::size_t i = 0; i < n; ++i) {
      sol.x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    rnorm = norm2(r);
    if (options.record_residuals) sol.residual_history.push_back(rnorm / bnorm);

    if (rnorm <= target) {
      rnorm = true_residual();
      if (rnorm <= target) {
        sol.report = {it, rnorm / bnorm, true, false};
        return sol;
      }
      if (rnorm <= rounding_floor()) {
        sol.report = {it, rnorm / bnorm, true, true};
        return sol;
      }
      // Recurrence drifted from the true residual: restart from it.
      rz = precondition();
      p = z;
      continue;
    }
    const double rz_new = precondition();
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }

  const SolveReport report{options.max_iter, true_residual() / bnorm, false};
  throw ConvergenceError("CG did not converge in " + std::to_string(options.max_iter) +
                             " iterations (relative residual " + sci(report.final_residual) + ")",
                         report);
}

namespace {

double quadratic_energy(const CsrMatrix& a, std::span<const double> b, std::span<const double> x) {
  const std::vector<double> ax = a.multiply(x);
  return 0.5 * dot(x, ax) - dot(b, x);
}

} // namespace

BoxQpSolution solve_box_qp(const CsrMatrix& a, std::span<const double> b, std::span<const double> initial,
                           const BoxQpOptions& options) {
  const std::size_t n = a.rows();
  if (b.size() != n || initial.size() != n) throw PreconditionError("box QP size mismatch");
  const auto clip = [&](double v) { return std::clamp(v, options.lower, options.upper); };

  const std::vector<double> diag = a.diagonal();
  for (std::size_t i = 0; i < n; ++i)
    if (!(diag[i] > 0.0)) throw PreconditionError("box QP requires a positive diagonal (row " + std::to_string(i) + ")");

  BoxQpSolution sol;
  sol.x.assign(initial.begin(), initial.end());
  for (double& v : sol.x) v = clip(v);

  std::vector<double> res(n);
  const auto projected_residual = [&]() {
    a.multiply(sol.x, res);
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ri = res[i] - b[i];
      m = std::max(m, std::abs(sol.x[i] - clip(sol.x[i] - ri / diag[i])));
    }
    return m;
  };

  double pr = projected_residual();
  if (options.record_energy) sol.energy_history.push_back(quadratic_energy(a, b, sol.x));
  if (pr <= options.tol) {
    sol.report = {0, pr, true};
    return sol;
  }
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto cols = a.row_cols(i);
      const auto vals = a.row_values(i);
      double ri = -b[i];
      for (std::size_t k = 0; k < cols.size(); ++k) ri += vals[k] * sol.x[static_cast<std::size_t>(cols[k])];
      sol.x[i] = clip(sol.x[i] - ri / diag[i]);
    }
    pr = projected_residual();
    if (options.record_energy) sol.energy_history.push_back(quadratic_energy(a, b, sol.x));
    if (pr <= options.tol) {
      sol.report = {sweep, pr, true};
      return sol;
    }
  }
  throw ConvergenceError("projected Gauss-Seidel did not converge in " + std::to_string(options.max_sweeps) +
                             " sweeps (projected residual " + std::to_string(pr) + ")",
                         {options.max_sweeps, pr, false});
}

ObstacleSystem obstacle_system(std::span<const double> mass_diag, const CsrMatrix& laplacian,
                               std::span<const double> linear_term, const PhaseField& previous,
                               const ObstacleParameters& params) {
  const auto& [eps, gamma, tau] = params;
  if (!(eps > 0.0) || !(gamma > 0.0) || !(tau > 0.0))
    throw PreconditionError("epsilon, gamma and tau must be positive");
  const double mass_coeff = eps / tau - gamma / eps;
  if (!(mass_coeff > 0.0))
    throw TimeStepError("time step tau = " + std::to_string(tau) + " violates tau < epsilon^2/gamma = " +
                        std::to_string(eps * eps / gamma));
  const std::size_t n = laplacian.rows();
  if (mass_diag.size() != n || linear_term.size() != n || previous.size() != n)
    throw PreconditionError("obstacle problem size mismatch");

  ObstacleSystem sys;
  sys.matrix = laplacian.combine(gamma * eps, laplacian, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(mass_diag[i] > 0.0)) throw PreconditionError("lumped mass must be positive");
    sys.matrix.add(i, i, mass_coeff * mass_diag[i]);
  }
  sys.rhs.resize(n);
  for (std::size_t i = 0; i < n; ++i) sys.rhs[i] = eps / tau * mass_diag[i] * previous[i] - linear_term[i];
  return sys;
}

ObstacleSolution solve_obstacle_vi(std::span<const double> mass_diag, const CsrMatrix& laplacian,
                                   std::span<const double> linear_term, const PhaseField& previous,
                                   const ObstacleParameters& params, const BoxQpOptions& options) {
  const ObstacleSystem sys = obstacle_system(mass_diag, laplacian, linear_term, previous, params);
  BoxQpSolution qp = solve_box_qp(sys.matrix, sys.rhs, previous.values, options);
  return {PhaseField(std::move(qp.x)), qp.report, std::move(qp.energy_history)};
}

} // namespace pac
