#pragma once

#include "pactopo/material.hpp"
#include "pactopo/mesh.hpp"
#include "pactopo/sparse.hpp"
#include "pactopo/targets.hpp"

#include <functional>
#include <map>
#include <span>
#include <vector>

namespace pac {

/// Assignment of box faces to boundary roles. Faces not listed as Dirichlet
/// for a stage are Neumann for that stage.
struct BoundarySpec {
  std::vector<FacetTag> dirichlet_stage1;
  std::vector<FacetTag> dirichlet_stage2;
  std::vector<FacetTag> target;

  const std::vector<FacetTag>& dirichlet(Stage stage) const {
    return stage == Stage::Programming ? dirichlet_stage1 : dirichlet_stage2;
  }
  /// Both Dirichlet sets nonempty, target disjoint from the stage-2 Dirichlet
  /// set. Throws ConfigError.
  void validate() const;
};

/// Nodal design variable with |phi_i| <= 1.
struct PhaseField {
  std::vector<double> values;

  PhaseField() = default;
  explicit PhaseField(std::vector<double> v) : values(std::move(v)) {}
  static PhaseField constant(std::size_t n, double value) { return PhaseField(std::vector<double>(n, value)); }

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double max_abs() const;
  /// Throws PreconditionError if some |phi_i| > 1.
  void check_bounds() const;
};

/// Nodal vector field, dof = vertex * dim + component.
struct DisplacementField {
  int dim = 2;
  std::vector<double> values;

  DisplacementField() = default;
  DisplacementField(int d, std::size_t num_vertices) : dim(d), values(num_vertices * static_cast<std::size_t>(d), 0.0) {}
  DisplacementField(int d, std::vector<double> v) : dim(d), values(std::move(v)) {}

  std::size_t num_vertices() const { return values.size() / static_cast<std::size_t>(dim); }
  Vec3 at(Index v) const;
};

/// Symmetric stiffness operator together with its constrained-dof mask. The
/// matrix is stored without Dirichlet elimination; the solver eliminates the
/// masked rows and columns symmetrically.
struct SparseSpdSystem {
  CsrMatrix matrix;
  std::vector<char> constrained;

  std::size_t size() const { return matrix.rows(); }
};

using TractionMap = std::map<FacetTag, Vec3>;

/// Mask of dofs on vertices touching the given faces.
std::vector<char> dirichlet_mask(const SimplexMesh& mesh, std::span<const FacetTag> tags);

/// Mean of the vertex values of phi on a cell (P1 interpolant at the
/// barycenter).
double elementwise_phase(const SimplexMesh& mesh, const PhaseField& phi, Index cell);
std::vector<double> elementwise_phases(const SimplexMesh& mesh, const PhaseField& phi);

/// Constant symmetric gradient of a P1 field on one cell.
Mat3 cell_strain(const SimplexMesh& mesh, const CellGeometry& geom, Index cell, const DisplacementField& u);

/// Stiffness of `stage` with cellwise coefficients C(phi_cell).
SparseSpdSystem assemble_stiffness(const SimplexMesh& mesh, const MaterialModel& material, Stage stage,
                                   const PhaseField& phi, const BoundarySpec& boundary);

/// Stiffness for explicit per-cell Lamé pairs on a given pattern (used by
/// the linearized systems and tests).
CsrMatrix assemble_stiffness_matrix(const SimplexMesh& mesh, std::span<const Lame> cell_lame);

/// Lumped body force plus exact facet integral of piecewise-constant
/// tractions. Throws ConfigError if a traction sits on a Dirichlet face of
/// the stage.
std::vector<double> assemble_body_and_traction(const SimplexMesh& mesh, const BoundarySpec& boundary, Stage stage,
                                               const Vec3& body_force, const TractionMap& traction);

/// Lumped body force with a spatially varying density: node i receives
/// f(x_i) m_i.
std::vector<double> assemble_lumped_body_force(const SimplexMesh& mesh,
                                               const std::function<Vec3(const Vec3&)>& force);

/// Entries sum_cells |cell| (sigma_cell grad N_i)_a for per-cell stresses.
std::vector<double> assemble_stress_load(const SimplexMesh& mesh, std::span<const Mat3> cell_stress);

/// <chi(phi) E(u), E(N_i e_a)>_{C_hat(phi)}, the eigenstrain coupling of the
/// programmed stage. Also the right-hand side of the stage-1 adjoint when
/// applied to q_hat.
std::vector<double> assemble_eigenstrain_rhs(const SimplexMesh& mesh, const MaterialModel& material,
                                             const PhaseField& phi, const DisplacementField& u);

/// Nodal target values u_tar(x_v) for every vertex.
DisplacementField target_field(const SimplexMesh& mesh, const TargetSpec& target);

/// Facet-vertex quadrature of W(u_hat - u_tar).N_i e_a over the target faces.
/// Throws ConfigError for an empty target set.
std::vector<double> assemble_target_rhs(const SimplexMesh& mesh, const BoundarySpec& boundary,
                                        const DisplacementField& u_hat, const TargetSpec& target);

/// Same quadrature for 1/2 W r.r.
double target_energy(const SimplexMesh& mesh, const BoundarySpec& boundary, const DisplacementField& u_hat,
                     const TargetSpec& target);

/// Cellwise density of the elastic part of the phase-field gradient,
///   chi' C_hat E(u):E(q) - C_hat'(E(u_hat) - chi E(u)):E(q) - C_bar' E(u):E(p).
std::vector<double> vi_source_densities(const SimplexMesh& mesh, const MaterialModel& material,
                                        const PhaseField& phi, const DisplacementField& u_bar,
                                        const DisplacementField& u_hat, const DisplacementField& q_hat,
                                        const DisplacementField& p_bar);

/// Nodal elastic source w of the phase-field inequality: densities lumped to
/// vertices with weight |cell| / (d + 1).
std::vector<double> assemble_vi_source(const SimplexMesh& mesh, const MaterialModel& material,
                                       const PhaseField& phi, const DisplacementField& u_bar,
                                       const DisplacementField& u_hat, const DisplacementField& q_hat,
                                       const DisplacementField& p_bar);

/// m_i = sum over incident cells of |cell| / (d + 1).
std::vector<double> lumped_mass_diagonal(const SimplexMesh& mesh);

/// Scalar P1 stiffness (grad N_i, grad N_j).
CsrMatrix assemble_laplacian(const SimplexMesh& mesh);

} // namespace pac
