#include "pactopo/pipeline.hpp"

#include "pactopo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace pac {

void EnergyTrace::append(const TraceRow& row) {
  if (!rows_.empty() && row.step <= rows_.back().step)
    throw PreconditionError("trace steps must strictly increase");
  if (row.cost < 0.0 || row.target_energy < 0.0 || row.interface_energy < 0.0)
    throw PreconditionError("trace energies must be nonnegative");
  rows_.push_back(row);
}

Problem::Problem(RunConfig config)
    : config_(std::move(config)),
      warnings_(config_.validate()),
      mesh_(build_box_mesh(config_.box)),
      mass_(lumped_mass_diagonal(mesh_)),
      laplacian_(assemble_laplacian(mesh_)) {
  load_stage1_ = assemble_body_and_traction(mesh_, config_.boundary, Stage::Programming, config_.loads.body_stage1,
                                            config_.loads.traction_stage1);
  load_stage2_ = assemble_body_and_traction(mesh_, config_.boundary, Stage::Programmed, config_.loads.body_stage2,
                                            config_.loads.traction_stage2);
}

DisplacementField Problem::solve(const SparseSpdSystem& system, const std::vector<double>& rhs, SolveReport* report,
                                 const DisplacementField* warm) const {
  std::span<const double> guess;
  if (warm != nullptr && warm->values.size() == rhs.size()) guess = warm->values;
  SpdSolution sol = solve_spd(system, rhs, cg_options(), {}, guess);
  if (report != nullptr) *report = sol.report;
  return DisplacementField(mesh_.dim(), std::move(sol.x));
}

DisplacementField Problem::solve_stage1(const PhaseField& phi, SolveReport* report,
                                        const DisplacementField* warm) const {
  const SparseSpdSystem sys = assemble_stiffness(mesh_, config_.material, Stage::Programming, phi, config_.boundary);
  return solve(sys, load_stage1_, report, warm);
}

DisplacementField Problem::solve_stage2(const PhaseField& phi, const DisplacementField& u_bar, SolveReport* report,
                                        const DisplacementField* warm) const {
  const SparseSpdSystem sys = assemble_stiffness(mesh_, config_.material, Stage::Programmed, phi, config_.boundary);
  std::vector<double> rhs = assemble_eigenstrain_rhs(mesh_, config_.material, phi, u_bar);
  for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += load_stage2_[i];
  return solve(sys, rhs, report, warm);
}

DisplacementField Problem::solve_adjoint_q(const PhaseField& phi, const DisplacementField& u_hat,
                                           SolveReport* report, const DisplacementField* warm) const {
  const SparseSpdSystem sys = assemble_stiffness(mesh_, config_.material, Stage::Programmed, phi, config_.boundary);
  const std::vector<double> rhs = assemble_target_rhs(mesh_, config_.boundary, u_hat, config_.target);
  return solve(sys, rhs, report, warm);
}

DisplacementField Problem::solve_adjoint_p(const PhaseField& phi, const DisplacementField& q_hat,
                                           SolveReport* report, const DisplacementField* warm) const {
  const SparseSpdSystem sys = assemble_stiffness(mesh_, config_.material, Stage::Programming, phi, config_.boundary);
  const std::vector<double> rhs = assemble_eigenstrain_rhs(mesh_, config_.material, phi, q_hat);
  return solve(sys, rhs, report, warm);
}

double Problem::interface_energy(const PhaseField& phi) const {
  const double eps = config_.flow.epsilon;
  const std::vector<double> kphi = laplacian_.multiply(phi.values);
  double e = 0.5 * eps * dot(phi.values, kphi);
  for (std::size_t i = 0; i < phi.size(); ++i) e += mass_[i] * potential(phi[i]) / eps;
  return e;
}

double Problem::target_energy(const DisplacementField& u_hat) const {
  return pac::target_energy(mesh_, config_.boundary, u_hat, config_.target);
}

CostBreakdown Problem::evaluate_cost(const PhaseField& phi, const DisplacementField& u_hat) const {
  CostBreakdown c;
  c.interface = config_.flow.gamma * interface_energy(phi);
  c.target = target_energy(u_hat);
  c.total = c.interface + c.target;
  return c;
}

double Problem::reduced_cost(const PhaseField& phi) const {
  const DisplacementField u_bar = solve_stage1(phi);
  const DisplacementField u_hat = solve_stage2(phi, u_bar);
  return evaluate_cost(phi, u_hat).total;
}

std::vector<double> Problem::reduced_gradient(const PhaseField& phi) const {
  const DisplacementField u_bar = solve_stage1(phi);
  const DisplacementField u_hat = solve_stage2(phi, u_bar);
  const DisplacementField q_hat = solve_adjoint_q(phi, u_hat);
  const DisplacementField p_bar = solve_adjoint_p(phi, q_hat);
  std::vector<double> g = assemble_vi_source(mesh_, config_.material, phi, u_bar, u_hat, q_hat, p_bar);
  const double eps = config_.flow.epsilon;
  const double gamma = config_.flow.gamma;
  const std::vector<double> kphi = laplacian_.multiply(phi.values);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] += gamma * eps * kphi[i] - gamma / eps * mass_[i] * phi[i];
  return g;
}

PhaseField Problem::initial_phase() const {
  // Raw engine bits rather than std::uniform_real_distribution, whose output
  // is implementation-defined.
  std::mt19937_64 engine(config_.initial.seed);
  const double a = config_.initial.amplitude;
  std::vector<double> v(mesh_.num_vertices());
  for (double& x : v) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    x = a * (2.0 * u - 1.0);
  }
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  for (double& x : v) x = std::clamp(x - mean, -1.0, 1.0);
  return PhaseField(std::move(v));
}

OptState Problem::initial_state(const PhaseField& phi) const {
  phi.check_bounds();
  OptState s;
  s.step = 0;
  s.phi = phi;
  SolveReport r1, r2;
  s.u_bar = solve_stage1(phi, &r1);
  s.u_hat = solve_stage2(phi, s.u_bar, &r2);
  s.q_hat = DisplacementField(mesh_.dim(), mesh_.num_vertices());
  s.p_bar = DisplacementField(mesh_.dim(), mesh_.num_vertices());
  s.cost = evaluate_cost(phi, s.u_hat);
  s.cg_iterations = r1.iterations + r2.iterations;
  return s;
}

OptState Problem::gradient_flow_step(const OptState& state) const {
  const PhaseField& phi = state.phi;
  OptState next;
  next.step = state.step + 1;
  SolveReport rq, rp, r1, r2;
  next.q_hat = solve_adjoint_q(phi, state.u_hat, &rq, &state.q_hat);
  next.p_bar = solve_adjoint_p(phi, next.q_hat, &rp, &state.p_bar);
  const std::vector<double> w =
      assemble_vi_source(mesh_, config_.material, phi, state.u_bar, state.u_hat, next.q_hat, next.p_bar);

  const ObstacleParameters params{config_.flow.epsilon, config_.flow.gamma, config_.flow.tau};
  BoxQpOptions vi_options;
  vi_options.tol = config_.solver.vi_tol;
  vi_options.max_sweeps = config_.solver.vi_max_sweeps;
  ObstacleSolution vi = solve_obstacle_vi(mass_, laplacian_, w, phi, params, vi_options);
  next.phi = std::move(vi.phi);
  next.vi_iterations = vi.report.iterations;

  next.u_bar = solve_stage1(next.phi, &r1, &state.u_bar);
  next.u_hat = solve_stage2(next.phi, next.u_bar, &r2, &state.u_hat);
  next.cost = evaluate_cost(next.phi, next.u_hat);
  next.cg_iterations = rq.iterations + rp.iterations + r1.iterations + r2.iterations;
  return next;
}

namespace {

TraceRow row_of(const OptState& s, double tau) {
  return {s.step, s.step * tau, s.cost.total, s.cost.target, s.cost.interface, s.vi_iterations, s.cg_iterations};
}

Snapshot snapshot_of(const OptState& s) { return {s.step, s.phi, s.u_bar, s.u_hat}; }

} // namespace

RunResult run_from(const Problem& problem, const PhaseField& phi0, const StepObserver& observer) {
  const RunConfig& cfg = problem.config();
  RunResult result;
  try {
    result.final_state = problem.initial_state(phi0);
  } catch (const std::exception& e) {
    result.failure = std::string("initial state: ") + e.what();
    return result;
  }
  result.trace.append(row_of(result.final_state, cfg.flow.tau));
  result.snapshots.push_back(snapshot_of(result.final_state));
  if (observer) observer(result.final_state);

  int stalled = 0;
  for (int n = 1; n <= cfg.flow.max_steps; ++n) {
    OptState next;
    try {
      next = problem.gradient_flow_step(result.final_state);
    } catch (const std::exception& e) {
      result.failure = "step " + std::to_string(n) + ": " + e.what();
      break;
    }
    const double previous = result.final_state.cost.total;
    result.final_state = std::move(next);
    const OptState& s = result.final_state;
    result.trace.append(row_of(s, cfg.flow.tau));
    if (observer) observer(s);
    if (cfg.output.snapshot_every > 0 && n % cfg.output.snapshot_every == 0) result.snapshots.push_back(snapshot_of(s));

    stalled = std::abs(s.cost.total - previous) <= cfg.flow.stop_rtol * s.cost.total ? stalled + 1 : 0;
    if (stalled >= cfg.flow.stop_patience) break;
  }
  if (result.snapshots.back().step != result.final_state.step) result.snapshots.push_back(snapshot_of(result.final_state));
  return result;
}

RunResult run(const RunConfig& config, const StepObserver& observer) {
  const Problem problem(config);
  return run_from(problem, problem.initial_phase(), observer);
}

} // namespace pac
