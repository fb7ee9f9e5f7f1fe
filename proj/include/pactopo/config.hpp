#pragma once

#include "pactopo/assembly.hpp"
#include "pactopo/material.hpp"
#include "pactopo/mesh.hpp"
#include "pactopo/targets.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pac {

struct Loads {
  Vec3 body_stage1{0.0, 0.0, 0.0};
  Vec3 body_stage2{0.0, 0.0, 0.0};
  TractionMap traction_stage1;
  TractionMap traction_stage2;
};

/// Pseudo-time gradient flow parameters.
struct FlowParameters {
  double epsilon = 1.0;
  double gamma = 0.01;
  double tau = 0.0;
  int max_steps = 200;
  /// Stop once |J_n - J_{n-1}| <= stop_rtol * J_n for stop_patience
  /// consecutive steps.
  double stop_rtol = 1e-9;
  int stop_patience = 20;

  /// Largest admissible time step eps^2 / gamma (exclusive).
  double max_tau() const { return epsilon * epsilon / gamma; }
};

struct SolverSettings {
  double cg_tol = 1e-10;
  int cg_max_iter = 50000;
  double vi_tol = 1e-12;
  int vi_max_sweeps = 200000;
};

/// Random mixture: i.i.d. uniform on [-amplitude, amplitude], shifted to zero
/// mean.
struct InitialCondition {
  std::uint64_t seed = 0;
  double amplitude = 0.1;
};

struct OutputSettings {
  /// Snapshot cadence in steps; 0 keeps only the initial and final states.
  int snapshot_every = 0;
};

/// Complete description of one optimization run.
struct RunConfig {
  std::string name = "custom";
  BoxSpec box;
  BoundarySpec boundary;
  MaterialModel material = MaterialModel::printed_composite();
  Loads loads;
  TargetSpec target;
  FlowParameters flow;
  SolverSettings solver;
  InitialCondition initial;
  OutputSettings output;

  /// Checks every invariant; throws ConfigError (TimeStepError for tau).
  /// Returns non-fatal warnings, e.g. a mesh coarser than the interface
  /// width guideline h <= epsilon.
  std::vector<std::string> validate() const;
};

} // namespace pac
