#include "pactopo/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pac {

CsrMatrix::CsrMatrix(std::vector<Index> row_ptr, std::vector<Index> cols)
    : row_ptr_(std::move(row_ptr)), cols_(std::move(cols)), values_(cols_.size(), 0.0) {}

double CsrMatrix::get(std::size_t i, std::size_t j) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<Index>(j));
  if (it == cols.end() || *it != static_cast<Index>(j)) return 0.0;
  return values_[static_cast<std::size_t>(row_ptr_[i] + (it - cols.begin()))];
}

void CsrMatrix::add(std::size_t i, std::size_t j, double v) {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), static_cast<Index>(j));
  if (it == cols.end() || *it != static_cast<Index>(j))
    throw std::out_of_range("entry outside sparsity pattern");
  values_[static_cast<std::size_t>(row_ptr_[i] + (it - cols.begin()))] += v;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = rows();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (Index k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      s += values_[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(cols_[static_cast<std::size_t>(k)])];
    y[i] = s;
  }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows(), 0.0);
  multiply(x, y);
  return y;
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(rows(), 0.0);
  for (std::size_t i = 0; i < rows(); ++i) d[i] = get(i, i);
  return d;
}

double CsrMatrix::asymmetry() const {
  double defect = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < rows(); ++i) {
    const auto cols = row_cols(i);
    const auto vals = row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      scale = std::max(scale, std::abs(vals[k]));
      defect = std::max(defect, std::abs(vals[k] - get(static_cast<std::size_t>(cols[k]), i)));
    }
  }
  return scale > 0.0 ? defect / scale : 0.0;
}

CsrMatrix CsrMatrix::combine(double alpha, const CsrMatrix& other, double beta) const {
  if (other.row_ptr_ != row_ptr_ || other.cols_ != cols_)
    throw std::invalid_argument("combine requires identical sparsity patterns");
  CsrMatrix out = *this;
  for (std::size_t k = 0; k < values_.size(); ++k) out.values_[k] = alpha * values_[k] + beta * other.values_[k];
  return out;
}

CsrMatrix vertex_pattern(const SimplexMesh& mesh, int block) {
  const std::size_t nv = mesh.num_vertices();
  std::vector<std::vector<Index>> adjacency(nv);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto verts = mesh.cell(static_cast<Index>(c));
    for (Index a : verts)
      for (Index b : verts) adjacency[static_cast<std::size_t>(a)].push_back(b);
  }
  for (auto& row : adjacency) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }

  const auto b = static_cast<std::size_t>(block);
  std::vector<Index> row_ptr{0};
  std::vector<Index> cols;
  row_ptr.reserve(nv * b + 1);
  for (std::size_t v = 0; v < nv; ++v)
    for (std::size_t comp = 0; comp < b; ++comp) {
      for (Index w : adjacency[v])
        for (std::size_t c2 = 0; c2 < b; ++c2) cols.push_back(static_cast<Index>(static_cast<std::size_t>(w) * b + c2));
      row_ptr.push_back(static_cast<Index>(cols.size()));
    }
  return CsrMatrix(std::move(row_ptr), std::move(cols));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

} // namespace pac
