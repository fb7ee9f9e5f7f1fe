#include "pactopo/targets.hpp"

#include "pactopo/errors.hpp"

#include <cmath>
#include <numbers>

namespace pac {

std::string_view to_string(TargetProfile profile) {
  switch (profile) {
  case TargetProfile::Parabolic: return "parabolic";
  case TargetProfile::Cosine: return "cosine";
  case TargetProfile::Twist: return "twist";
  }
  return "?";
}

std::optional<TargetProfile> parse_target_profile(std::string_view name) {
  for (TargetProfile p : {TargetProfile::Parabolic, TargetProfile::Cosine, TargetProfile::Twist})
    if (to_string(p) == name) return p;
  return std::nullopt;
}

void TargetSpec::validate(int dim) const {
  if (!(c > 0.0)) throw ConfigError("target.c must be positive");
  if (profile == TargetProfile::Cosine && !(k > 0.0)) throw ConfigError("target.k must be positive for a cosine profile");
  if (profile == TargetProfile::Twist && dim != 3) throw ConfigError("twist target requires a 3D domain");
  if (profile != TargetProfile::Twist) {
    double n = 0.0;
    for (int a = 0; a < dim; ++a) n += axis[a] * axis[a];
    if (!(n > 0.0)) throw ConfigError("target.axis must be nonzero");
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if ((i >= dim || j >= dim) && weight(i, j) != 0.0)
        throw ConfigError("target.weight has entries outside the domain dimension");
      if (std::abs(weight(i, j) - weight(j, i)) > 1e-12) throw ConfigError("target.weight must be symmetric");
    }
  // Positive semidefinite iff all principal minors are nonnegative.
  const double tol = -1e-12;
  for (int i = 0; i < dim; ++i)
    if (weight(i, i) < tol) throw ConfigError("target.weight must be positive semidefinite");
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      if (weight(i, i) * weight(j, j) - weight(i, j) * weight(j, i) < tol)
        throw ConfigError("target.weight must be positive semidefinite");
  if (dim == 3) {
    const Mat3& w = weight;
    const double det = w(0, 0) * (w(1, 1) * w(2, 2) - w(1, 2) * w(2, 1)) -
                       w(0, 1) * (w(1, 0) * w(2, 2) - w(1, 2) * w(2, 0)) +
                       w(0, 2) * (w(1, 0) * w(2, 1) - w(1, 1) * w(2, 0));
    if (det < tol) throw ConfigError("target.weight must be positive semidefinite");
  }
}

Vec3 eval_target(const TargetSpec& spec, const Vec3& x, double domain_length) {
  double amplitude = 0.0;
  Vec3 direction = spec.axis;
  switch (spec.profile) {
  case TargetProfile::Parabolic:
    amplitude = spec.c * x[0] * x[0];
    break;
  case TargetProfile::Cosine:
    amplitude = spec.c * (1.0 - std::cos(spec.k * std::numbers::pi * x[0] / domain_length));
    break;
  case TargetProfile::Twist:
    amplitude = spec.c * x[0] * x[1];
    direction = {0.0, 0.0, 1.0};
    break;
  default:
    throw ConfigError("unknown target profile");
  }
  return {amplitude * direction[0], amplitude * direction[1], amplitude * direction[2]};
}

} // namespace pac
