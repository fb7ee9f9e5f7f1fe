#include "pactopo/presets.hpp"

#include "pactopo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace pac {

std::string_view to_string(PresetId id) {
  switch (id) {
  case PresetId::T1R1: return "T1R1";
  case PresetId::T1R2: return "T1R2";
  case PresetId::T1R3: return "T1R3";
  case PresetId::T1R4: return "T1R4";
  case PresetId::T2R1: return "T2R1";
  case PresetId::T2R2: return "T2R2";
  case PresetId::T2R3: return "T2R3";
  case PresetId::T2R4: return "T2R4";
  }
  return "?";
}

std::optional<PresetId> parse_preset_id(std::string_view name) {
  for (PresetId id : kAllPresets)
    if (to_string(id) == name) return id;
  return std::nullopt;
}

std::string_view preset_summary(PresetId id) {
  switch (id) {
  case PresetId::T1R1: return "2D [0,6]x[-1/2,1/2], parabolic c=0.075, W=Id, target right/bottom/top";
  case PresetId::T1R2: return "2D [0,6]x[-1/2,1/2], cosine c=0.25 k=2, W=e2(x)e2, target right/bottom/top";
  case PresetId::T1R3: return "2D [0,12]x[-1/2,1/2], parabolic c=0.02, W=Id, target right/bottom/top";
  case PresetId::T1R4: return "2D [0,12]x[-1/2,1/2], cosine c=1 k=1.5, W=Id, target top";
  case PresetId::T2R1: return "3D [0,6]x[-3/2,3/2]x[0,1], parabolic c=0.075, W=Id, target top";
  case PresetId::T2R2: return "3D [0,12]x[-3/2,3/2]x[0,1], cosine c=1 k=2, W=e3(x)e3, target top, gamma=0.1";
  case PresetId::T2R3: return "3D [0,12]x[-3/2,3/2]x[0,1], cosine c=1 k=2, W=Id, target top";
  case PresetId::T2R4: return "3D [0,6]x[-3,3]x[0,1], twist c=0.1, W=e3(x)e3, target right";
  }
  return "";
}

namespace {

Mat3 outer_unit(int axis) {
  Mat3 m;
  m(axis, axis) = 1.0;
  return m;
}

struct Row {
  int dim;
  Vec3 lower;
  Vec3 upper;
  TargetProfile profile;
  double c;
  double k;
  Mat3 weight;
  std::vector<FacetTag> target;
  double epsilon;
  double gamma;
};

Row row_of(PresetId id) {
  using enum FacetTag;
  const double pi = std::numbers::pi;
  const std::vector<FacetTag> strip_boundary{Right, Bottom, Top};
  switch (id) {
  case PresetId::T1R1:
    return {2, {0, -0.5, 0}, {6, 0.5, 0}, TargetProfile::Parabolic, 0.075, 0.0, Mat3::identity(2), strip_boundary, 1 / (8 * pi), 0.01};
  case PresetId::T1R2:
    return {2, {0, -0.5, 0}, {6, 0.5, 0}, TargetProfile::Cosine, 0.25, 2.0, outer_unit(1), strip_boundary, 1 / (8 * pi), 0.01};
  case PresetId::T1R3:
    return {2, {0, -0.5, 0}, {12, 0.5, 0}, TargetProfile::Parabolic, 0.02, 0.0, Mat3::identity(2), strip_boundary, 1 / (8 * pi), 0.01};
  case PresetId::T1R4:
    return {2, {0, -0.5, 0}, {12, 0.5, 0}, TargetProfile::Cosine, 1.0, 1.5, Mat3::identity(2), {Top}, 1 / (8 * pi), 0.01};
  case PresetId::T2R1:
    return {3, {0, -1.5, 0}, {6, 1.5, 1}, TargetProfile::Parabolic, 0.075, 0.0, Mat3::identity(3), {Top}, 1 / (4 * pi), 0.01};
  case PresetId::T2R2:
    return {3, {0, -1.5, 0}, {12, 1.5, 1}, TargetProfile::Cosine, 1.0, 2.0, outer_unit(2), {Top}, 1 / (4 * pi), 0.1};
  case PresetId::T2R3:
    return {3, {0, -1.5, 0}, {12, 1.5, 1}, TargetProfile::Cosine, 1.0, 2.0, Mat3::identity(3), {Top}, 1 / (4 * pi), 0.01};
  case PresetId::T2R4:
    return {3, {0, -3, 0}, {6, 3, 1}, TargetProfile::Twist, 0.1, 0.0, outer_unit(2), {Right}, 1 / (2 * pi), 0.02};
  }
  throw ConfigError("unknown preset");
}

} // namespace

RunConfig preset(PresetId id, double scale) {
  if (!(scale > 0.0)) throw ConfigError("preset scale must be positive");
  const Row row = row_of(id);
  RunConfig cfg;
  cfg.name = std::string(to_string(id));

  cfg.box.dim = row.dim;
  cfg.box.lower = row.lower;
  cfg.box.upper = row.upper;
  for (int a = 0; a < 3; ++a) {
    cfg.box.resolution[a] =
        a < row.dim ? std::max(1, static_cast<int>(std::lround(scale * cfg.box.length(a) * 2.0 / row.epsilon))) : 1;
  }

  cfg.boundary.dirichlet_stage1 = {FacetTag::Left};
  cfg.boundary.dirichlet_stage2 = {FacetTag::Left};
  cfg.boundary.target = row.target;

  cfg.material = MaterialModel::printed_composite();
  cfg.loads.traction_stage1[FacetTag::Right] = {0.1, 0.0, 0.0};

  cfg.target.profile = row.profile;
  cfg.target.c = row.c;
  cfg.target.k = row.k;
  cfg.target.axis = row.dim == 2 ? Vec3{0.0, 1.0, 0.0} : Vec3{0.0, 0.0, 1.0};
  cfg.target.weight = row.weight;

  cfg.flow.epsilon = row.epsilon;
  cfg.flow.gamma = row.gamma;
  cfg.flow.tau = 0.5 * row.epsilon * row.epsilon / row.gamma;
  return cfg;
}

RunConfig preset(std::string_view id, double scale) {
  const auto parsed = parse_preset_id(id);
  if (!parsed) throw ConfigError("unknown preset id '" + std::string(id) + "'");
  return preset(*parsed, scale);
}

} // namespace pac
