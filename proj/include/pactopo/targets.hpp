#pragma once

#include "pactopo/material.hpp"
#include "pactopo/mesh.hpp"

#include <optional>
#include <string_view>

namespace pac {

enum class TargetProfile { Parabolic, Cosine, Twist };

std::string_view to_string(TargetProfile profile);
std::optional<TargetProfile> parse_target_profile(std::string_view name);

/// Target displacement of the programmed stage on the target boundary and
/// the weight W of the mismatch energy 1/2 W(u - u_tar).(u - u_tar).
struct TargetSpec {
  TargetProfile profile = TargetProfile::Parabolic;
  double c = 1.0;
  double k = 0.0;  // Cosine only
  Vec3 axis{0.0, 1.0, 0.0};
  Mat3 weight = Mat3::identity(2);

  /// Throws ConfigError for c <= 0, k <= 0 with a cosine profile, a zero
  /// axis, a twist profile outside 3D or a non-symmetric / indefinite W.
  void validate(int dim) const;
};

/// Target displacement at x for a domain of length `domain_length` along x1:
///   Parabolic  c x1^2 axis
///   Cosine     c (1 - cos(k pi x1 / L1)) axis
///   Twist      c x1 x2 e3
Vec3 eval_target(const TargetSpec& spec, const Vec3& x, double domain_length);

} // namespace pac
