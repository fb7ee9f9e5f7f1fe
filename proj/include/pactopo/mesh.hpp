#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pac {

using Index = std::int32_t;
using Vec3 = std::array<double, 3>;

/// Box face a boundary facet lies on. Left/Right are x1 = min/max. In 2D
/// Bottom/Top are x2 = min/max; in 3D Front/Back are x2 = min/max and
/// Bottom/Top are x3 = min/max.
enum class FacetTag : std::uint8_t { Left, Right, Bottom, Top, Front, Back };

inline constexpr std::array<FacetTag, 6> kAllFacetTags = {
    FacetTag::Left, FacetTag::Right, FacetTag::Bottom,
    FacetTag::Top,  FacetTag::Front, FacetTag::Back};

std::string_view to_string(FacetTag tag);
std::optional<FacetTag> parse_facet_tag(std::string_view name);

/// Axis-aligned box and its uniform subdivision. Only the first `dim`
/// entries of each array are meaningful.
struct BoxSpec {
  int dim = 2;
  Vec3 lower{0.0, 0.0, 0.0};
  Vec3 upper{1.0, 1.0, 1.0};
  std::array<int, 3> resolution{1, 1, 1};

  double length(int axis) const { return upper[axis] - lower[axis]; }
  double volume() const;
  double surface_measure() const;
  /// Largest cell edge along the coordinate axes.
  double max_spacing() const;
};

/// Volume and barycentric-coordinate gradients of one P1 simplex.
struct CellGeometry {
  double volume = 0.0;
  std::array<Vec3, 4> grad{};  // grad[k] = ∇λ_k, first dim+1 entries used
};

/// Conforming simplex mesh of a box with tagged boundary facets. Immutable
/// once built.
class SimplexMesh {
public:
  int dim() const { return dim_; }
  int vertices_per_cell() const { return dim_ + 1; }
  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_cells() const { return cells_.size() / static_cast<std::size_t>(dim_ + 1); }
  std::size_t num_boundary_facets() const { return facet_tags_.size(); }

  const BoxSpec& box() const { return box_; }
  const Vec3& vertex(Index v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const std::vector<Vec3>& vertices() const { return vertices_; }

  std::span<const Index> cell(Index c) const {
    const auto n = static_cast<std::size_t>(dim_ + 1);
    return {cells_.data() + static_cast<std::size_t>(c) * n, n};
  }
  std::span<const Index> facet(Index f) const {
    const auto n = static_cast<std::size_t>(dim_);
    return {facets_.data() + static_cast<std::size_t>(f) * n, n};
  }
  FacetTag facet_tag(Index f) const { return facet_tags_[static_cast<std::size_t>(f)]; }

  /// Signed volume under the stored vertex order (positive for every cell).
  double signed_volume(Index c) const;
  CellGeometry geometry(Index c) const;

  /// (d-1)-measure of a boundary facet. Throws std::invalid_argument for an
  /// out-of-range id.
  double facet_area(Index f) const;

  /// Vertices lying on any facet carrying `tag`, ascending.
  std::vector<Index> vertices_on(std::span<const FacetTag> tags) const;

  const std::vector<Index>& raw_cells() const { return cells_; }

private:
  friend SimplexMesh build_box_mesh(const BoxSpec& box);

  int dim_ = 2;
  BoxSpec box_;
  std::vector<Vec3> vertices_;
  std::vector<Index> cells_;
  std::vector<Index> facets_;
  std::vector<FacetTag> facet_tags_;
};

/// Uniform triangulation of a box: each rectangle split along its
/// lower-left/upper-right diagonal in 2D, each cube split into the six Kuhn
/// tetrahedra around its main diagonal in 3D. Numbering is lexicographic with
/// x1 fastest.
SimplexMesh build_box_mesh(const BoxSpec& box);

inline double facet_area(const SimplexMesh& mesh, Index f) { return mesh.facet_area(f); }

} // namespace pac
