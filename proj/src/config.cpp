#include "pactopo/config.hpp"

#include "pactopo/errors.hpp"

#include <algorithm>
#include <sstream>

namespace pac {

std::vector<std::string> RunConfig::validate() const {
  if (box.dim != 2 && box.dim != 3) throw ConfigError("mesh.dim must be 2 or 3");
  for (int a = 0; a < box.dim; ++a) {
    if (!(box.upper[a] > box.lower[a])) throw ConfigError("mesh extents are degenerate on axis " + std::to_string(a));
    if (box.resolution[a] < 1) throw ConfigError("mesh.resolution must be >= 1 on every axis");
  }
  boundary.validate();
  if (boundary.target.empty()) throw ConfigError("target.tags must not be empty");
  const auto check_tag_dim = [&](FacetTag t) {
    if (box.dim == 2 && (t == FacetTag::Front || t == FacetTag::Back))
      throw ConfigError("face '" + std::string(to_string(t)) + "' does not exist in 2D");
  };
  for (const auto* set : {&boundary.dirichlet_stage1, &boundary.dirichlet_stage2, &boundary.target})
    for (FacetTag t : *set) check_tag_dim(t);

  for (const auto* m : {&material.stage1_plus, &material.stage1_minus, &material.stage2_plus, &material.stage2_minus}) {
    if (!(m->mu > 0.0)) throw ConfigError("material shear modulus must be positive");
    if (!(m->lambda + 2.0 * m->mu / 3.0 > 0.0)) throw ConfigError("material bulk modulus must be positive");
  }
  if (!(material.fixity_scale >= 0.0)) throw ConfigError("material.fixity_scale must be nonnegative");

  const auto check_traction = [&](const TractionMap& tm, Stage stage, const char* key) {
    const auto& dir = boundary.dirichlet(stage);
    for (const auto& [tag, g] : tm) {
      (void)g;
      check_tag_dim(tag);
      if (std::find(dir.begin(), dir.end(), tag) != dir.end())
        throw ConfigError(std::string(key) + " assigns a traction to Dirichlet face '" + std::string(to_string(tag)) + "'");
    }
  };
  check_traction(loads.traction_stage1, Stage::Programming, "loads.traction_stage1");
  check_traction(loads.traction_stage2, Stage::Programmed, "loads.traction_stage2");

  target.validate(box.dim);

  if (!(flow.epsilon > 0.0)) throw ConfigError("flow.epsilon must be positive");
  if (!(flow.gamma > 0.0)) throw ConfigError("flow.gamma must be positive");
  if (!(flow.tau > 0.0)) throw TimeStepError("flow.tau must be positive");
  if (!(flow.tau < flow.max_tau())) {
    std::ostringstream os;
    os.precision(6);
    os << "flow.tau = " << flow.tau << " violates tau < epsilon^2/gamma = " << flow.max_tau();
    throw TimeStepError(os.str());
  }
  if (flow.max_steps < 0) throw ConfigError("flow.steps must be >= 0");
  if (!(flow.stop_rtol >= 0.0)) throw ConfigError("flow.stop_rtol must be >= 0");
  if (flow.stop_patience < 1) throw ConfigError("flow.stop_patience must be >= 1");

  if (!(solver.cg_tol > 0.0) || solver.cg_max_iter < 1) throw ConfigError("solver CG settings must be positive");
  if (!(solver.vi_tol > 0.0) || solver.vi_max_sweeps < 1) throw ConfigError("solver VI settings must be positive");
  if (!(initial.amplitude >= 0.0 && initial.amplitude <= 1.0)) throw ConfigError("flow.init_amplitude must lie in [0, 1]");
  if (output.snapshot_every < 0) throw ConfigError("output.snapshot_every must be >= 0");

  std::vector<std::string> warnings;
  const double h = box.max_spacing();
  if (h > flow.epsilon) {
    std::ostringstream os;
    os.precision(6);
    os << "mesh spacing h = " << h << " exceeds epsilon = " << flow.epsilon
       << "; the diffuse interface is under-resolved";
    warnings.push_back(os.str());
  }
  return warnings;
}

} // namespace pac
