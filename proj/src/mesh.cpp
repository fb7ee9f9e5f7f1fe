#include "pactopo/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace pac {

std::string_view to_string(FacetTag tag) {
  switch (tag) {
  case FacetTag::Left: return "left";
  case FacetTag::Right: return "right";
  case FacetTag::Bottom: return "bottom";
  case FacetTag::Top: return "top";
  case FacetTag::Front: return "front";
  case FacetTag::Back: return "back";
  }
  return "?";
}

std::optional<FacetTag> parse_facet_tag(std::string_view name) {
  for (FacetTag t : kAllFacetTags)
    if (to_string(t) == name) return t;
  return std::nullopt;
}

double BoxSpec::volume() const {
  double v = 1.0;
  for (int a = 0; a < dim; ++a) v *= length(a);
  return v;
}

double BoxSpec::surface_measure() const {
  if (dim == 2) return 2.0 * (length(0) + length(1));
  return 2.0 * (length(0) * length(1) + length(0) * length(2) + length(1) * length(2));
}

double BoxSpec::max_spacing() const {
  double h = 0.0;
  for (int a = 0; a < dim; ++a) h = std::max(h, length(a) / resolution[a]);
  return h;
}

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double signed_volume_of(int dim, std::span<const Vec3> x) {
  const Vec3 e1 = sub(x[1], x[0]);
  const Vec3 e2 = sub(x[2], x[0]);
  if (dim == 2) return 0.5 * (e1[0] * e2[1] - e1[1] * e2[0]);
  const Vec3 e3 = sub(x[3], x[0]);
  return dot(e1, cross(e2, e3)) / 6.0;
}

// Coordinate of grid line i out of n on [lo, hi], hitting hi exactly.
double grid_coordinate(double lo, double hi, int i, int n) {
  if (i == n) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
}

} // namespace

double SimplexMesh::signed_volume(Index c) const {
  std::array<Vec3, 4> x{};
  const auto verts = cell(c);
  for (int k = 0; k <= dim_; ++k) x[k] = vertex(verts[k]);
  return signed_volume_of(dim_, std::span<const Vec3>(x.data(), dim_ + 1));
}

CellGeometry SimplexMesh::geometry(Index c) const {
  const auto verts = cell(c);
  const Vec3& x0 = vertex(verts[0]);
  CellGeometry g;
  if (dim_ == 2) {
    const Vec3 e1 = sub(vertex(verts[1]), x0);
    const Vec3 e2 = sub(vertex(verts[2]), x0);
    const double det = e1[0] * e2[1] - e1[1] * e2[0];
    g.volume = 0.5 * det;
    // Rows of the inverse Jacobian [e1 e2]^{-1}.
    g.grad[1] = {e2[1] / det, -e2[0] / det, 0.0};
    g.grad[2] = {-e1[1] / det, e1[0] / det, 0.0};
  } else {
    const Vec3 e1 = sub(vertex(verts[1]), x0);
    const Vec3 e2 = sub(vertex(verts[2]), x0);
    const Vec3 e3 = sub(vertex(verts[3]), x0);
    const Vec3 c23 = cross(e2, e3);
    const double det = dot(e1, c23);
    g.volume = det / 6.0;
    const Vec3 c31 = cross(e3, e1);
    const Vec3 c12 = cross(e1, e2);
    for (int a = 0; a < 3; ++a) {
      g.grad[1][a] = c23[a] / det;
      g.grad[2][a] = c31[a] / det;
      g.grad[3][a] = c12[a] / det;
    }
  }
  for (int a = 0; a < 3; ++a) {
    double s = 0.0;
    for (int k = 1; k <= dim_; ++k) s += g.grad[k][a];
    g.grad[0][a] = -s;
  }
  return g;
}

double SimplexMesh::facet_area(Index f) const {
  if (f < 0 || static_cast<std::size_t>(f) >= num_boundary_facets())
    throw std::invalid_argument("facet id " + std::to_string(f) + " out of range");
  const auto verts = facet(f);
  if (dim_ == 2) {
    const Vec3 e = sub(vertex(verts[1]), vertex(verts[0]));
    return std::sqrt(dot(e, e));
  }
  const Vec3 n = cross(sub(vertex(verts[1]), vertex(verts[0])), sub(vertex(verts[2]), vertex(verts[0])));
  return 0.5 * std::sqrt(dot(n, n));
}

std::vector<Index> SimplexMesh::vertices_on(std::span<const FacetTag> tags) const {
  std::vector<char> mark(num_vertices(), 0);
  for (std::size_t f = 0; f < num_boundary_facets(); ++f) {
    if (std::find(tags.begin(), tags.end(), facet_tags_[f]) == tags.end()) continue;
    for (Index v : facet(static_cast<Index>(f))) mark[static_cast<std::size_t>(v)] = 1;
  }
  std::vector<Index> out;
  for (std::size_t v = 0; v < mark.size(); ++v)
    if (mark[v]) out.push_back(static_cast<Index>(v));
  return out;
}

SimplexMesh build_box_mesh(const BoxSpec& box) {
  if (box.dim != 2 && box.dim != 3)
    throw std::invalid_argument("mesh dimension must be 2 or 3");
  for (int a = 0; a < box.dim; ++a) {
    if (!(box.upper[a] > box.lower[a]))
      throw std::invalid_argument("degenerate extent on axis " + std::to_string(a));
    if (box.resolution[a] < 1)
      throw std::invalid_argument("resolution on axis " + std::to_string(a) + " must be >= 1");
  }

  const int d = box.dim;
  SimplexMesh mesh;
  mesh.dim_ = d;
  mesh.box_ = box;
  for (int a = d; a < 3; ++a) {
    mesh.box_.lower[a] = 0.0;
    mesh.box_.upper[a] = 0.0;
    mesh.box_.resolution[a] = 0;
  }

  const int n0 = box.resolution[0];
  const int n1 = box.resolution[1];
  const int n2 = d == 3 ? box.resolution[2] : 0;
  const auto vid = [&](int i, int j, int k) -> Index { return static_cast<Index>(i + (n0 + 1) * (j + (n1 + 1) * k)); };

  mesh.vertices_.reserve(static_cast<std::size_t>((n0 + 1) * (n1 + 1) * (n2 + 1)));
  for (int k = 0; k <= n2; ++k)
    for (int j = 0; j <= n1; ++j)
      for (int i = 0; i <= n0; ++i)
        mesh.vertices_.push_back({grid_coordinate(box.lower[0], box.upper[0], i, n0),
                                  grid_coordinate(box.lower[1], box.upper[1], j, n1),
                                  d == 3 ? grid_coordinate(box.lower[2], box.upper[2], k, n2) : 0.0});

  if (d == 2) {
    mesh.cells_.reserve(static_cast<std::size_t>(6 * n0 * n1));
    for (int j = 0; j < n1; ++j)
      for (int i = 0; i < n0; ++i) {
        const Index v00 = vid(i, j, 0), v10 = vid(i + 1, j, 0);
        const Index v01 = vid(i, j + 1, 0), v11 = vid(i + 1, j + 1, 0);
        mesh.cells_.insert(mesh.cells_.end(), {v00, v10, v11, v00, v11, v01});
      }
  } else {
    static constexpr std::array<std::array<int, 3>, 6> kPermutations = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    mesh.cells_.reserve(static_cast<std::size_t>(24 * n0 * n1 * n2));
    for (int k = 0; k < n2; ++k)
      for (int j = 0; j < n1; ++j)
        for (int i = 0; i < n0; ++i)
          for (const auto& perm : kPermutations) {
            std::array<int, 3> corner{i, j, k};
            std::array<Index, 4> tet{};
            tet[0] = vid(corner[0], corner[1], corner[2]);
            for (int s = 0; s < 3; ++s) {
              ++corner[perm[s]];
              tet[s + 1] = vid(corner[0], corner[1], corner[2]);
            }
            std::array<Vec3, 4> x{};
            for (int s = 0; s < 4; ++s) x[s] = mesh.vertices_[static_cast<std::size_t>(tet[s])];
            if (signed_volume_of(3, x) < 0.0) std::swap(tet[2], tet[3]);
            mesh.cells_.insert(mesh.cells_.end(), tet.begin(), tet.end());
          }
  }

  // Boundary facets are faces owned by exactly one cell.
  using FaceKey = std::array<Index, 3>;
  const auto face_of = [&](std::span<const Index> cell, int omit) {
    std::array<Index, 3> f{-1, -1, -1};
    int n = 0;
    for (int k = 0; k <= d; ++k)
      if (k != omit) f[n++] = cell[k];
    return f;
  };
  const auto key_of = [&](FaceKey f) {
    std::sort(f.begin(), f.begin() + d);
    return f;
  };
  std::map<FaceKey, int> counts;
  for (std::size_t c = 0; c < mesh.num_cells(); ++c)
    for (int omit = 0; omit <= d; ++omit) ++counts[key_of(face_of(mesh.cell(static_cast<Index>(c)), omit))];

  const std::array<int, 3> ns{n0, n1, n2};
  const auto grid_index = [&](Index v, int axis) {
    const int vi = static_cast<int>(v);
    if (axis == 0) return vi % (n0 + 1);
    if (axis == 1) return (vi / (n0 + 1)) % (n1 + 1);
    return vi / ((n0 + 1) * (n1 + 1));
  };
  const auto tag_of = [&](const FaceKey& f) -> FacetTag {
    for (int axis = 0; axis < d; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const int target = side == 0 ? 0 : ns[axis];
        bool all = true;
        for (int s = 0; s < d; ++s) all = all && grid_index(f[s], axis) == target;
        if (!all) continue;
        if (axis == 0) return side == 0 ? FacetTag::Left : FacetTag::Right;
        if (axis == d - 1) return side == 0 ? FacetTag::Bottom : FacetTag::Top;
        return side == 0 ? FacetTag::Front : FacetTag::Back;
      }
    }
    throw std::logic_error("boundary facet not on a box face");
  };

  for (std::size_t c = 0; c < mesh.num_cells(); ++c)
    for (int omit = 0; omit <= d; ++omit) {
      const FaceKey f = face_of(mesh.cell(static_cast<Index>(c)), omit);
      if (counts[key_of(f)] != 1) continue;
      mesh.facets_.insert(mesh.facets_.end(), f.begin(), f.begin() + d);
      mesh.facet_tags_.push_back(tag_of(f));
    }
  return mesh;
}

} // namespace pac
