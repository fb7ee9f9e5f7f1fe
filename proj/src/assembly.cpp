#include "pactopo/assembly.hpp"

#include "pactopo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pac {

void BoundarySpec::validate() const {
  if (dirichlet_stage1.empty()) throw ConfigError("stage-1 Dirichlet boundary must not be empty");
  if (dirichlet_stage2.empty()) throw ConfigError("stage-2 Dirichlet boundary must not be empty");
  for (FacetTag t : target)
    if (std::find(dirichlet_stage2.begin(), dirichlet_stage2.end(), t) != dirichlet_stage2.end())
      throw ConfigError("target face '" + std::string(to_string(t)) +
                        "' must be a Neumann face of the programmed stage");
}

double PhaseField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

void PhaseField::check_bounds() const {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!(std::abs(values[i]) <= 1.0))
      throw PreconditionError("phase value " + std::to_string(values[i]) + " at node " + std::to_string(i) +
                              " outside [-1, 1]");
}

Vec3 DisplacementField::at(Index v) const {
  Vec3 out{0.0, 0.0, 0.0};
  const auto base = static_cast<std::size_t>(v) * static_cast<std::size_t>(dim);
  for (int a = 0; a < dim; ++a) out[a] = values[base + static_cast<std::size_t>(a)];
  return out;
}

std::vector<char> dirichlet_mask(const SimplexMesh& mesh, std::span<const FacetTag> tags) {
  const auto d = static_cast<std::size_t>(mesh.dim());
  std::vector<char> mask(mesh.num_vertices() * d, 0);
  for (Index v : mesh.vertices_on(tags))
    for (std::size_t a = 0; a < d; ++a) mask[static_cast<std::size_t>(v) * d + a] = 1;
  return mask;
}

double elementwise_phase(const SimplexMesh& mesh, const PhaseField& phi, Index cell) {
  double s = 0.0;
  for (Index v : mesh.cell(cell)) s += phi.values[static_cast<std::size_t>(v)];
  return s / static_cast<double>(mesh.vertices_per_cell());
}

std::vector<double> elementwise_phases(const SimplexMesh& mesh, const PhaseField& phi) {
  std::vector<double> out(mesh.num_cells());
  for (std::size_t c = 0; c < out.size(); ++c) out[c] = elementwise_phase(mesh, phi, static_cast<Index>(c));
  return out;
}

Mat3 cell_strain(const SimplexMesh& mesh, const CellGeometry& geom, Index cell, const DisplacementField& u) {
  const int d = mesh.dim();
  Mat3 grad;  // grad(a, b) = d u_a / d x_b
  const auto verts = mesh.cell(cell);
  for (int k = 0; k <= d; ++k) {
    const Vec3 uk = u.at(verts[k]);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) grad(a, b) += uk[a] * geom.grad[k][b];
  }
  return 0.5 * (grad + grad.transpose());
}

CsrMatrix assemble_stiffness_matrix(const SimplexMesh& mesh, std::span<const Lame> cell_lame) {
  const int d = mesh.dim();
  CsrMatrix k = vertex_pattern(mesh, d);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = static_cast<Index>(c);
    const CellGeometry g = mesh.geometry(cell);
    const Lame& lm = cell_lame[c];
    const auto verts = mesh.cell(cell);
    for (int i = 0; i <= d; ++i) {
      const Vec3& gi = g.grad[i];
      for (int j = 0; j <= d; ++j) {
        const Vec3& gj = g.grad[j];
        const double gij = gi[0] * gj[0] + gi[1] * gj[1] + gi[2] * gj[2];
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) {
            // C E(N_j e_b) : E(N_i e_a)
            double val = lm.mu * ((a == b ? gij : 0.0) + gi[b] * gj[a]) + lm.lambda * gi[a] * gj[b];
            k.add(static_cast<std::size_t>(verts[i] * d + a), static_cast<std::size_t>(verts[j] * d + b),
                  g.volume * val);
          }
      }
    }
  }
  return k;
}

SparseSpdSystem assemble_stiffness(const SimplexMesh& mesh, const MaterialModel& material, Stage stage,
                                   const PhaseField& phi, const BoundarySpec& boundary) {
  phi.check_bounds();
  if (phi.size() != mesh.num_vertices()) throw PreconditionError("phase field size does not match mesh");
  std::vector<Lame> lame(mesh.num_cells());
  for (std::size_t c = 0; c < lame.size(); ++c)
    lame[c] = material.lame(stage, elementwise_phase(mesh, phi, static_cast<Index>(c)));
  SparseSpdSystem sys;
  sys.matrix = assemble_stiffness_matrix(mesh, lame);
  sys.constrained = dirichlet_mask(mesh, boundary.dirichlet(stage));
  return sys;
}

std::vector<double> assemble_body_and_traction(const SimplexMesh& mesh, const BoundarySpec& boundary, Stage stage,
                                               const Vec3& body_force, const TractionMap& traction) {
  const auto& dir = boundary.dirichlet(stage);
  for (const auto& [tag, g] : traction) {
    (void)g;
    if (std::find(dir.begin(), dir.end(), tag) != dir.end())
      throw ConfigError("traction assigned to Dirichlet face '" + std::string(to_string(tag)) + "'");
  }
  const int d = mesh.dim();
  const auto du = static_cast<std::size_t>(d);
  std::vector<double> f(mesh.num_vertices() * du, 0.0);
  const std::vector<double> m = lumped_mass_diagonal(mesh);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v)
    for (std::size_t a = 0; a < du; ++a) f[v * du + a] += body_force[a] * m[v];

  for (std::size_t fi = 0; fi < mesh.num_boundary_facets(); ++fi) {
    const auto facet = static_cast<Index>(fi);
    const auto it = traction.find(mesh.facet_tag(facet));
    if (it == traction.end()) continue;
    const double share = mesh.facet_area(facet) / d;
    for (Index v : mesh.facet(facet))
      for (std::size_t a = 0; a < du; ++a) f[static_cast<std::size_t>(v) * du + a] += it->second[a] * share;
  }
  return f;
}

std::vector<double> assemble_lumped_body_force(const SimplexMesh& mesh,
                                               const std::function<Vec3(const Vec3&)>& force) {
  const auto du = static_cast<std::size_t>(mesh.dim());
  const std::vector<double> m = lumped_mass_diagonal(mesh);
  std::vector<double> f(mesh.num_vertices() * du, 0.0);
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const Vec3 fv = force(mesh.vertex(static_cast<Index>(v)));
    for (std::size_t a = 0; a < du; ++a) f[v * du + a] = fv[a] * m[v];
  }
  return f;
}

std::vector<double> assemble_stress_load(const SimplexMesh& mesh, std::span<const Mat3> cell_stress) {
  const int d = mesh.dim();
  std::vector<double> f(mesh.num_vertices() * static_cast<std::size_t>(d), 0.0);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = static_cast<Index>(c);
    const CellGeometry g = mesh.geometry(cell);
    const Mat3& s = cell_stress[c];
    const auto verts = mesh.cell(cell);
    for (int i = 0; i <= d; ++i)
      for (int a = 0; a < d; ++a) {
        double v = 0.0;
        for (int b = 0; b < d; ++b) v += s(a, b) * g.grad[i][b];
        f[static_cast<std::size_t>(verts[i] * d + a)] += g.volume * v;
      }
  }
  return f;
}

std::vector<double> assemble_eigenstrain_rhs(const SimplexMesh& mesh, const MaterialModel& material,
                                             const PhaseField& phi, const DisplacementField& u) {
  const int d = mesh.dim();
  std::vector<Mat3> stress(mesh.num_cells());
  for (std::size_t c = 0; c < stress.size(); ++c) {
    const auto cell = static_cast<Index>(c);
    const double s = elementwise_phase(mesh, phi, cell);
    const Mat3 e = cell_strain(mesh, mesh.geometry(cell), cell, u);
    stress[c] = material.fixity(s) * material.stress(Stage::Programmed, s, e, d);
  }
  return assemble_stress_load(mesh, stress);
}

DisplacementField target_field(const SimplexMesh& mesh, const TargetSpec& target) {
  DisplacementField out(mesh.dim(), mesh.num_vertices());
  const double length = mesh.box().length(0);
  const auto du = static_cast<std::size_t>(mesh.dim());
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const Vec3 t = eval_target(target, mesh.vertex(static_cast<Index>(v)), length);
    for (std::size_t a = 0; a < du; ++a) out.values[v * du + a] = t[a];
  }
  return out;
}

namespace {

// Calls visit(vertex, weight) for the vertex quadrature of every target facet.
template <class Visit>
void for_each_target_node(const SimplexMesh& mesh, const BoundarySpec& boundary, Visit&& visit) {
  if (boundary.target.empty()) throw ConfigError("target boundary is empty");
  const auto& tags = boundary.target;
  for (std::size_t fi = 0; fi < mesh.num_boundary_facets(); ++fi) {
    const auto facet = static_cast<Index>(fi);
    if (std::find(tags.begin(), tags.end(), mesh.facet_tag(facet)) == tags.end()) continue;
    const double w = mesh.facet_area(facet) / mesh.dim();
    for (Index v : mesh.facet(facet)) visit(v, w);
  }
}

Vec3 apply(const Mat3& w, const Vec3& r) {
  Vec3 out{0.0, 0.0, 0.0};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) out[a] += w(a, b) * r[b];
  return out;
}

} // namespace

std::vector<double> assemble_target_rhs(const SimplexMesh& mesh, const BoundarySpec& boundary,
                                        const DisplacementField& u_hat, const TargetSpec& target) {
  const int d = mesh.dim();
  const double length = mesh.box().length(0);
  std::vector<double> f(mesh.num_vertices() * static_cast<std::size_t>(d), 0.0);
  for_each_target_node(mesh, boundary, [&](Index v, double w) {
    const Vec3 ut = eval_target(target, mesh.vertex(v), length);
    const Vec3 uh = u_hat.at(v);
    const Vec3 wr = apply(target.weight, {uh[0] - ut[0], uh[1] - ut[1], uh[2] - ut[2]});
    for (int a = 0; a < d; ++a) f[static_cast<std::size_t>(v * d + a)] += w * wr[a];
  });
  return f;
}

double target_energy(const SimplexMesh& mesh, const BoundarySpec& boundary, const DisplacementField& u_hat,
                     const TargetSpec& target) {
  const double length = mesh.box().length(0);
  double e = 0.0;
  for_each_target_node(mesh, boundary, [&](Index v, double w) {
    const Vec3 ut = eval_target(target, mesh.vertex(v), length);
    const Vec3 uh = u_hat.at(v);
    const Vec3 r{uh[0] - ut[0], uh[1] - ut[1], uh[2] - ut[2]};
    const Vec3 wr = apply(target.weight, r);
    e += 0.5 * w * (wr[0] * r[0] + wr[1] * r[1] + wr[2] * r[2]);
  });
  return e;
}

std::vector<double> vi_source_densities(const SimplexMesh& mesh, const MaterialModel& material,
                                        const PhaseField& phi, const DisplacementField& u_bar,
                                        const DisplacementField& u_hat, const DisplacementField& q_hat,
                                        const DisplacementField& p_bar) {
  const std::size_t nv = mesh.num_vertices();
  if (phi.size() != nv || u_bar.num_vertices() != nv || u_hat.num_vertices() != nv || q_hat.num_vertices() != nv ||
      p_bar.num_vertices() != nv)
    throw PreconditionError("fields do not match the mesh");
  const int d = mesh.dim();
  std::vector<double> rho(mesh.num_cells());
  for (std::size_t c = 0; c < rho.size(); ++c) {
    const auto cell = static_cast<Index>(c);
    const CellGeometry g = mesh.geometry(cell);
    const double s = elementwise_phase(mesh, phi, cell);
    const Mat3 eu = cell_strain(mesh, g, cell, u_bar);
    const Mat3 eh = cell_strain(mesh, g, cell, u_hat);
    const Mat3 eq = cell_strain(mesh, g, cell, q_hat);
    const Mat3 ep = cell_strain(mesh, g, cell, p_bar);
    const Mat3 elastic_strain = eh - material.fixity(s) * eu;
    rho[c] = material.fixity_prime(s) * ddot(material.stress(Stage::Programmed, s, eu, d), eq) -
             ddot(material.stress_phase_derivative(Stage::Programmed, elastic_strain, d), eq) -
             ddot(material.stress_phase_derivative(Stage::Programming, eu, d), ep);
  }
  return rho;
}

std::vector<double> assemble_vi_source(const SimplexMesh& mesh, const MaterialModel& material,
                                       const PhaseField& phi, const DisplacementField& u_bar,
                                       const DisplacementField& u_hat, const DisplacementField& q_hat,
                                       const DisplacementField& p_bar) {
  const std::vector<double> rho = vi_source_densities(mesh, material, phi, u_bar, u_hat, q_hat, p_bar);
  std::vector<double> w(mesh.num_vertices(), 0.0);
  const double share = 1.0 / mesh.vertices_per_cell();
  for (std::size_t c = 0; c < rho.size(); ++c) {
    const auto cell = static_cast<Index>(c);
    const double contrib = rho[c] * mesh.signed_volume(cell) * share;
    for (Index v : mesh.cell(cell)) w[static_cast<std::size_t>(v)] += contrib;
  }
  return w;
}

std::vector<double> lumped_mass_diagonal(const SimplexMesh& mesh) {
  std::vector<double> m(mesh.num_vertices(), 0.0);
  const double share = 1.0 / mesh.vertices_per_cell();
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = static_cast<Index>(c);
    const double vol = mesh.signed_volume(cell) * share;
    for (Index v : mesh.cell(cell)) m[static_cast<std::size_t>(v)] += vol;
  }
  return m;
}

CsrMatrix assemble_laplacian(const SimplexMesh& mesh) {
  const int d = mesh.dim();
  CsrMatrix k = vertex_pattern(mesh, 1);
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    const auto cell = static_cast<Index>(c);
    const CellGeometry g = mesh.geometry(cell);
    const auto verts = mesh.cell(cell);
    for (int i = 0; i <= d; ++i)
      for (int j = 0; j <= d; ++j) {
        const double gij = g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1] + g.grad[i][2] * g.grad[j][2];
        k.add(static_cast<std::size_t>(verts[i]), static_cast<std::size_t>(verts[j]), g.volume * gij);
      }
  }
  return k;
}

} // namespace pac
