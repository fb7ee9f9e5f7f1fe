#pragma once

#include "pactopo/mesh.hpp"

#include <span>
#include <vector>

namespace pac {

/// Square matrix in compressed-row layout with a fixed sparsity pattern.
/// Column indices within a row are sorted ascending.
class CsrMatrix {
public:
  CsrMatrix() = default;
  CsrMatrix(std::vector<Index> row_ptr, std::vector<Index> cols);

  std::size_t rows() const { return row_ptr_.empty() ? 0 : row_ptr_.size() - 1; }
  std::size_t nonzeros() const { return cols_.size(); }

  std::span<const Index> row_cols(std::size_t i) const {
    return {cols_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {values_.data() + row_ptr_[i], static_cast<std::size_t>(row_ptr_[i + 1] - row_ptr_[i])};
  }

  /// Entry (i, j); zero when outside the pattern.
  double get(std::size_t i, std::size_t j) const;
  /// Adds v to entry (i, j), which must be in the pattern.
  void add(std::size_t i, std::size_t j, double v);

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  std::vector<double> diagonal() const;

  /// max |a_ij - a_ji| / max |a_ij|.
  double asymmetry() const;

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  /// Same pattern scaled and summed: alpha * this + beta * other.
  CsrMatrix combine(double alpha, const CsrMatrix& other, double beta) const;

private:
  std::vector<Index> row_ptr_;
  std::vector<Index> cols_;
  std::vector<double> values_;
};

/// Pattern coupling every pair of vertices sharing a cell, with `block`
/// unknowns per vertex (dof = vertex * block + component).
CsrMatrix vertex_pattern(const SimplexMesh& mesh, int block);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

} // namespace pac
