#include "pactopo/material.hpp"

#include "pactopo/errors.hpp"

#include <string>

namespace pac {

Mat3 Mat3::identity(int dim) {
  Mat3 m;
  for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Mat3& Mat3::operator+=(const Mat3& o) {
  for (std::size_t k = 0; k < 9; ++k) v[k] += o.v[k];
  return *this;
}

Mat3& Mat3::operator-=(const Mat3& o) {
  for (std::size_t k = 0; k < 9; ++k) v[k] -= o.v[k];
  return *this;
}

Mat3& Mat3::operator*=(double s) {
  for (double& x : v) x *= s;
  return *this;
}

Mat3 Mat3::transpose() const {
  Mat3 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t(i, j) = (*this)(j, i);
  return t;
}

Mat3 operator+(Mat3 a, const Mat3& b) { return a += b; }
Mat3 operator-(Mat3 a, const Mat3& b) { return a -= b; }
Mat3 operator*(double s, Mat3 a) { return a *= s; }

double ddot(const Mat3& a, const Mat3& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < 9; ++k) s += a.v[k] * b.v[k];
  return s;
}

Lame lame_from_youngs(double youngs, double poisson) {
  if (!(youngs > 0.0))
    throw PreconditionError("Young's modulus must be positive, got " + std::to_string(youngs));
  if (!(poisson > -1.0))
    throw PreconditionError("Poisson ratio must exceed -1, got " + std::to_string(poisson));
  if (!(poisson < 0.5))
    throw PreconditionError("Poisson ratio " + std::to_string(poisson) +
                            " reaches the incompressible limit 1/2");
  Lame l;
  l.mu = youngs / (2.0 * (1.0 + poisson));
  l.lambda = youngs * poisson / ((1.0 + poisson) * (1.0 - 2.0 * poisson));
  return l;
}

Mat3 isotropic_apply(const Lame& lame, const Mat3& strain, int dim) {
  Mat3 s = (2.0 * lame.mu) * strain;
  const double tr = lame.lambda * strain.trace();
  for (int i = 0; i < dim; ++i) s(i, i) += tr;
  return s;
}

IsotropicElasticity IsotropicElasticity::from_youngs(double youngs, double poisson) {
  const Lame l = lame_from_youngs(youngs, poisson);
  return {youngs, poisson, l.lambda, l.mu};
}

Mat3 IsotropicElasticity::apply(const Mat3& strain, int dim) const {
  return isotropic_apply({lambda, mu}, strain, dim);
}

MaterialModel MaterialModel::printed_composite() {
  return from_youngs({3.0, 0.7, 13.0, 0.6}, {0.45, 0.45, 0.45, 0.45}, 0.4);
}

MaterialModel MaterialModel::from_youngs(std::array<double, 4> youngs, std::array<double, 4> poisson,
                                         double fixity_scale) {
  MaterialModel m;
  m.stage1_plus = IsotropicElasticity::from_youngs(youngs[0], poisson[0]);
  m.stage1_minus = IsotropicElasticity::from_youngs(youngs[1], poisson[1]);
  m.stage2_plus = IsotropicElasticity::from_youngs(youngs[2], poisson[2]);
  m.stage2_minus = IsotropicElasticity::from_youngs(youngs[3], poisson[3]);
  m.fixity_scale = fixity_scale;
  return m;
}

const IsotropicElasticity& MaterialModel::plus(Stage stage) const {
  return stage == Stage::Programming ? stage1_plus : stage2_plus;
}

const IsotropicElasticity& MaterialModel::minus(Stage stage) const {
  return stage == Stage::Programming ? stage1_minus : stage2_minus;
}

Lame MaterialModel::lame(Stage stage, double s) const {
  const auto& p = plus(stage);
  const auto& m = minus(stage);
  const double wp = 0.5 * (1.0 + s);
  const double wm = 0.5 * (1.0 - s);
  return {wp * p.lambda + wm * m.lambda, wp * p.mu + wm * m.mu};
}

Lame MaterialModel::lame_phase_derivative(Stage stage) const {
  const auto& p = plus(stage);
  const auto& m = minus(stage);
  return {0.5 * (p.lambda - m.lambda), 0.5 * (p.mu - m.mu)};
}

Mat3 MaterialModel::stress(Stage stage, double s, const Mat3& strain, int dim) const {
  Mat3 out = (0.5 * (1.0 + s)) * plus(stage).apply(strain, dim);
  out += (0.5 * (1.0 - s)) * minus(stage).apply(strain, dim);
  return out;
}

Mat3 MaterialModel::stress_phase_derivative(Stage stage, const Mat3& strain, int dim) const {
  return 0.5 * (plus(stage).apply(strain, dim) - minus(stage).apply(strain, dim));
}

} // namespace pac
