#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pactopo/errors.hpp"
#include "pactopo/presets.hpp"
#include "pactopo/targets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace pac;

namespace {

// Reference formulas written out per component.
std::array<double, 3> reference(TargetProfile p, double c, double k, const std::array<double, 3>& axis, double x1,
                                double x2, double len) {
  double s = 0.0;
  switch (p) {
  case TargetProfile::Parabolic: s = c * x1 * x1; break;
  case TargetProfile::Cosine: s = c * (1.0 - std::cos(k * std::numbers::pi * x1 / len)); break;
  case TargetProfile::Twist: return {0.0, 0.0, c * x1 * x2};
  }
  return {s * axis[0], s * axis[1], s * axis[2]};
}

bool same_tags(std::vector<FacetTag> a, std::vector<FacetTag> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

} // namespace

TEST_CASE("closed-form examples") {
  TargetSpec par;
  par.c = 0.075;
  const Vec3 v = eval_target(par, {6.0, 0.3, 0.0}, 6.0);
  CHECK(v[1] == doctest::Approx(2.7).epsilon(1e-15));
  CHECK(v[0] == 0.0);

  TargetSpec cosine;
  cosine.profile = TargetProfile::Cosine;
  cosine.c = 0.25;
  cosine.k = 2.0;
  CHECK(eval_target(cosine, {3.0, 0.0, 0.0}, 6.0)[1] == doctest::Approx(0.5).epsilon(1e-15));

  TargetSpec twist;
  twist.profile = TargetProfile::Twist;
  twist.c = 0.1;
  twist.weight = Mat3::identity(3);
  for (const TargetSpec& t : {par, cosine, twist}) {
    const Vec3 z = eval_target(t, {0.0, -0.7, 0.4}, 6.0);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
    CHECK(z[2] == 0.0);
  }
}

TEST_CASE("random points against the reference formulas") {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> ux(0.0, 12.0), uy(-3.0, 3.0);
  for (TargetProfile p : {TargetProfile::Parabolic, TargetProfile::Cosine, TargetProfile::Twist}) {
    TargetSpec s;
    s.profile = p;
    s.c = 0.3;
    s.k = 1.5;
    s.axis = {0.0, 0.6, 0.8};
    for (int i = 0; i < 10; ++i) {
      const double x1 = ux(gen), x2 = uy(gen);
      const Vec3 got = eval_target(s, {x1, x2, 0.5}, 12.0);
      const auto want = reference(p, 0.3, 1.5, {0.0, 0.6, 0.8}, x1, x2, 12.0);
      for (int a = 0; a < 3; ++a)
        CHECK(std::abs(got[a] - want[static_cast<std::size_t>(a)]) <= 1e-14 * std::max(1.0, std::abs(want[static_cast<std::size_t>(a)])));
    }
  }
}

TEST_CASE("profile names") {
  for (TargetProfile p : {TargetProfile::Parabolic, TargetProfile::Cosine, TargetProfile::Twist})
    CHECK(parse_target_profile(to_string(p)) == p);
  CHECK_FALSE(parse_target_profile("helix").has_value());
}

TEST_CASE("TargetSpec validation") {
  TargetSpec s;
  CHECK_NOTHROW(s.validate(2));
  s.c = 0.0;
  CHECK_THROWS_AS(s.validate(2), ConfigError);
  s.c = 1.0;
  s.profile = TargetProfile::Cosine;
  s.k = 0.0;
  CHECK_THROWS_AS(s.validate(2), ConfigError);
  s.k = 1.0;
  CHECK_NOTHROW(s.validate(2));
  s.profile = TargetProfile::Twist;
  CHECK_THROWS_AS(s.validate(2), ConfigError);
  s.profile = TargetProfile::Parabolic;
  s.axis = {0.0, 0.0, 0.0};
  CHECK_THROWS_AS(s.validate(2), ConfigError);
  s.axis = {0.0, 1.0, 0.0};
  s.weight(0, 1) = 0.5;
  CHECK_THROWS_AS(s.validate(2), ConfigError);
  s.weight(1, 0) = 0.5;
  CHECK_NOTHROW(s.validate(2));
  s.weight(0, 0) = -1.0;
  CHECK_THROWS_AS(s.validate(2), ConfigError);
}

TEST_CASE("strip preset with parabolic target") {
  const RunConfig c = preset(PresetId::T1R1);
  CHECK(c.box.dim == 2);
  CHECK(c.box.lower[0] == 0.0);
  CHECK(c.box.upper[0] == 6.0);
  CHECK(c.box.lower[1] == -0.5);
  CHECK(c.box.upper[1] == 0.5);
  CHECK(c.target.profile == TargetProfile::Parabolic);
  CHECK(c.target.c == 0.075);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(c.target.weight(i, j) == (i == j ? 1.0 : 0.0));
  CHECK(same_tags(c.boundary.target, {FacetTag::Right, FacetTag::Bottom, FacetTag::Top}));
  CHECK(same_tags(c.boundary.dirichlet_stage1, {FacetTag::Left}));
  CHECK(same_tags(c.boundary.dirichlet_stage2, {FacetTag::Left}));
  CHECK(c.flow.epsilon == doctest::Approx(1.0 / (8.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(c.flow.gamma == 0.01);
  CHECK(c.flow.tau == doctest::Approx(0.5 * c.flow.max_tau()));
  CHECK(c.loads.traction_stage1.at(FacetTag::Right)[0] == 0.1);
  CHECK(c.loads.traction_stage2.empty());
  CHECK(c.material.fixity_scale == 0.4);
  CHECK(c.material.stage1_plus.youngs_modulus == 3.0);
  CHECK(c.material.stage1_minus.youngs_modulus == 0.7);
  CHECK(c.material.stage2_plus.youngs_modulus == 13.0);
  CHECK(c.material.stage2_minus.youngs_modulus == 0.6);
  // h ~ eps/2 at scale 1.
  const double h = c.box.length(0) / c.box.resolution[0];
  CHECK(h == doctest::Approx(c.flow.epsilon / 2.0).epsilon(0.02));
}

TEST_CASE("long strip with cosine target on the top face") {
  const RunConfig c = preset(PresetId::T1R4);
  CHECK(c.box.upper[0] == 12.0);
  CHECK(c.box.lower[1] == -0.5);
  CHECK(c.target.profile == TargetProfile::Cosine);
  CHECK(c.target.c == 1.0);
  CHECK(c.target.k == 1.5);
  CHECK(same_tags(c.boundary.target, {FacetTag::Top}));
}

TEST_CASE("plate with twist target") {
  const RunConfig c = preset(PresetId::T2R4);
  CHECK(c.box.dim == 3);
  CHECK(c.box.upper[0] == 6.0);
  CHECK(c.box.lower[1] == -3.0);
  CHECK(c.box.upper[1] == 3.0);
  CHECK(c.box.lower[2] == 0.0);
  CHECK(c.box.upper[2] == 1.0);
  CHECK(c.target.profile == TargetProfile::Twist);
  CHECK(c.target.c == 0.1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(c.target.weight(i, j) == (i == 2 && j == 2 ? 1.0 : 0.0));
  CHECK(same_tags(c.boundary.target, {FacetTag::Right}));
  CHECK(c.flow.epsilon == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-15));
  CHECK(c.flow.gamma == 0.02);
}

TEST_CASE("every preset validates") {
  for (PresetId id : kAllPresets) {
    CAPTURE(to_string(id));
    const RunConfig c = preset(id);
    CHECK_NOTHROW(c.validate());
    CHECK(c.name == to_string(id));
    CHECK(parse_preset_id(to_string(id)) == id);
    CHECK_FALSE(preset_summary(id).empty());
    // Target faces avoid the stage-2 Dirichlet face.
    for (FacetTag t : c.boundary.target) CHECK(t != FacetTag::Left);
  }
}

TEST_CASE("preset scale and unknown ids") {
  const RunConfig half = preset(PresetId::T1R1, 0.5);
  const RunConfig full = preset(PresetId::T1R1);
  CHECK(half.box.resolution[0] == doctest::Approx(full.box.resolution[0] / 2.0).epsilon(0.02));
  CHECK_THROWS_AS(preset("T9R9"), ConfigError);
  CHECK_THROWS_AS(preset(PresetId::T1R1, 0.0), ConfigError);
  CHECK(preset("T2R2").name == "T2R2");
}
