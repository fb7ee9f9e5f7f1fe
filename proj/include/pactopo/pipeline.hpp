#pragma once

#include "pactopo/assembly.hpp"
#include "pactopo/config.hpp"
#include "pactopo/solver.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pac {

/// J^h = gamma E^h + E^{h,tar}; `interface` already carries the gamma factor.
struct CostBreakdown {
  double total = 0.0;
  double target = 0.0;
  double interface = 0.0;
};

/// Phase field together with the fields computed from it. u_bar and u_hat
/// are the states of `phi`; q_hat and p_bar are the adjoints of the previous
/// design that produced `phi` (zero for the initial state).
struct OptState {
  int step = 0;
  PhaseField phi;
  DisplacementField u_bar;
  DisplacementField u_hat;
  DisplacementField q_hat;
  DisplacementField p_bar;
  CostBreakdown cost;
  int vi_iterations = 0;
  int cg_iterations = 0;
};

struct TraceRow {
  int step = 0;
  double time = 0.0;
  double cost = 0.0;
  double target_energy = 0.0;
  double interface_energy = 0.0;
  int vi_iterations = 0;
  int cg_iterations = 0;
};

/// Per-step energy log. Steps strictly increase and energies are
/// nonnegative.
class EnergyTrace {
public:
  void append(const TraceRow& row);
  const std::vector<TraceRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }

private:
  std::vector<TraceRow> rows_;
};

struct Snapshot {
  int step = 0;
  PhaseField phi;
  DisplacementField u_bar;
  DisplacementField u_hat;
};

/// Mesh, operators and loads of one experiment; solves the four linear
/// systems and the phase-field inequality of a gradient-flow step.
class Problem {
public:
  explicit Problem(RunConfig config);

  const RunConfig& config() const { return config_; }
  const SimplexMesh& mesh() const { return mesh_; }
  const std::vector<double>& lumped_mass() const { return mass_; }
  const CsrMatrix& laplacian() const { return laplacian_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Optional report receives the CG statistics; `warm` seeds CG.
  DisplacementField solve_stage1(const PhaseField& phi, SolveReport* report = nullptr,
                                 const DisplacementField* warm = nullptr) const;
  DisplacementField solve_stage2(const PhaseField& phi, const DisplacementField& u_bar,
                                 SolveReport* report = nullptr, const DisplacementField* warm = nullptr) const;
  DisplacementField solve_adjoint_q(const PhaseField& phi, const DisplacementField& u_hat,
                                    SolveReport* report = nullptr, const DisplacementField* warm = nullptr) const;
  DisplacementField solve_adjoint_p(const PhaseField& phi, const DisplacementField& q_hat,
                                    SolveReport* report = nullptr, const DisplacementField* warm = nullptr) const;

  /// Discrete Ginzburg-Landau energy (eps/2)|grad phi|^2 + psi(phi)/eps with
  /// the potential lumped; no gamma factor.
  double interface_energy(const PhaseField& phi) const;
  double target_energy(const DisplacementField& u_hat) const;
  CostBreakdown evaluate_cost(const PhaseField& phi, const DisplacementField& u_hat) const;

  /// J^h as a function of phi alone (both states re-solved).
  double reduced_cost(const PhaseField& phi) const;
  /// Nodal gradient of reduced_cost: w + gamma eps K phi - (gamma/eps) M phi.
  std::vector<double> reduced_gradient(const PhaseField& phi) const;

  /// Random zero-mean mixture from the configured seed and amplitude.
  PhaseField initial_phase() const;
  OptState initial_state(const PhaseField& phi) const;
  /// Adjoints and inequality at state.phi, then states and cost at the new
  /// design. All coefficients of the step are frozen at state.phi.
  OptState gradient_flow_step(const OptState& state) const;

  CgOptions cg_options() const { return {config_.solver.cg_tol, config_.solver.cg_max_iter, false}; }

private:
  DisplacementField solve(const SparseSpdSystem& system, const std::vector<double>& rhs, SolveReport* report,
                          const DisplacementField* warm) const;

  RunConfig config_;
  std::vector<std::string> warnings_;
  SimplexMesh mesh_;
  std::vector<double> mass_;
  CsrMatrix laplacian_;
  std::vector<double> load_stage1_;
  std::vector<double> load_stage2_;
};

struct RunResult {
  EnergyTrace trace;
  std::vector<Snapshot> snapshots;
  OptState final_state;
  /// Set when a step failed; the trace holds every completed step.
  std::optional<std::string> failure;
};

using StepObserver = std::function<void(const OptState&)>;

/// Random initial mixture followed by gradient-flow steps until
/// flow.max_steps or stagnation of J^h.
RunResult run(const RunConfig& config, const StepObserver& observer = {});
/// Same loop from a given initial design.
RunResult run_from(const Problem& problem, const PhaseField& phi0, const StepObserver& observer = {});

} // namespace pac
