#pragma once

#include <array>

namespace pac {

/// Dense 3x3 matrix used for strains and stresses. 2D quantities live in the
/// upper-left 2x2 block with the remaining entries zero.
struct Mat3 {
  std::array<double, 9> v{};

  double& operator()(int i, int j) { return v[static_cast<std::size_t>(3 * i + j)]; }
  double operator()(int i, int j) const { return v[static_cast<std::size_t>(3 * i + j)]; }

  static Mat3 identity(int dim);

  Mat3& operator+=(const Mat3& o);
  Mat3& operator-=(const Mat3& o);
  Mat3& operator*=(double s);
  double trace() const { return v[0] + v[4] + v[8]; }
  Mat3 transpose() const;
};

Mat3 operator+(Mat3 a, const Mat3& b);
Mat3 operator-(Mat3 a, const Mat3& b);
Mat3 operator*(double s, Mat3 a);

/// Frobenius product A : B.
double ddot(const Mat3& a, const Mat3& b);

enum class Stage { Programming, Programmed };

struct Lame {
  double lambda = 0.0;
  double mu = 0.0;
};

/// Lamé parameters from Young's modulus and Poisson ratio. The 3D formulas
/// are used in 2D as well (plane strain). Throws PreconditionError for
/// E <= 0, nu <= -1 or nu >= 1/2 (incompressible limit).
Lame lame_from_youngs(double youngs, double poisson);

struct IsotropicElasticity {
  double youngs_modulus = 1.0;
  double poisson_ratio = 0.0;
  double lambda = 0.0;
  double mu = 0.5;

  static IsotropicElasticity from_youngs(double youngs, double poisson);
  /// C A = 2 mu A + lambda tr(A) Id.
  Mat3 apply(const Mat3& strain, int dim) const;
};

/// Two-phase constitutive data. Phase value s = +1 is the active material,
/// s = -1 the passive one; tensors are interpolated linearly in s.
struct MaterialModel {
  IsotropicElasticity stage1_plus;
  IsotropicElasticity stage1_minus;
  IsotropicElasticity stage2_plus;
  IsotropicElasticity stage2_minus;
  /// chi(s) = fixity_scale * (1 + s).
  double fixity_scale = 0.4;

  /// Shape-memory polymer / elastomer data used for all presets.
  static MaterialModel printed_composite();
  static MaterialModel from_youngs(std::array<double, 4> youngs, std::array<double, 4> poisson,
                                   double fixity_scale);

  const IsotropicElasticity& plus(Stage stage) const;
  const IsotropicElasticity& minus(Stage stage) const;

  Lame lame(Stage stage, double s) const;
  /// d/ds of the interpolated Lamé pair (constant in s).
  Lame lame_phase_derivative(Stage stage) const;

  Mat3 stress(Stage stage, double s, const Mat3& strain, int dim) const;
  Mat3 stress_phase_derivative(Stage stage, const Mat3& strain, int dim) const;

  double fixity(double s) const { return fixity_scale * (1.0 + s); }
  double fixity_prime(double /*s*/) const { return fixity_scale; }
};

/// Smooth part of the obstacle potential, (1 - s^2) / 2.
inline double potential(double s) { return 0.5 * (1.0 - s * s); }
inline double potential_prime(double s) { return -s; }

/// C A for explicit Lamé parameters.
Mat3 isotropic_apply(const Lame& lame, const Mat3& strain, int dim);

} // namespace pac
