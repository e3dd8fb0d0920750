#include "core/assemble.hpp"

#include <array>
#include <cmath>

#include "core/tangent.hpp"

namespace cutmem {

namespace {

constexpr double kG0 = 0.5 - 0.28867513459481287;
constexpr double kG1 = 0.5 + 0.28867513459481287;

struct FaceQuad {
  Vec3 x;
  double w;
};

// Full-face quadrature: centroid for triangles (gradients of simplex cells
// are constant), 2x2 tensor rule on bilinear quads.
int face_quadrature(const BackgroundMesh& mesh, const Face& face,
                    FaceQuad* out) {
  if (face.n_nodes == 3) {
    const Vec3& a = mesh.vertices[face.nodes[0]];
    const Vec3& b = mesh.vertices[face.nodes[1]];
    const Vec3& c = mesh.vertices[face.nodes[2]];
    out[0].x = (a + b + c) / 3.0;
    out[0].w = 0.5 * (b - a).cross(c - a).norm();
    return 1;
  }
  const Vec3& q0 = mesh.vertices[face.nodes[0]];
  const Vec3& q1 = mesh.vertices[face.nodes[1]];
  const Vec3& q2 = mesh.vertices[face.nodes[2]];
  const Vec3& q3 = mesh.vertices[face.nodes[3]];
  int n = 0;
  for (double gu : {kG0, kG1})
    for (double gv : {kG0, kG1}) {
      const Vec3 x = (1 - gu) * (1 - gv) * q0 + gu * (1 - gv) * q1 +
                     gu * gv * q2 + (1 - gu) * gv * q3;
      const Vec3 xu = -(1 - gv) * q0 + (1 - gv) * q1 + gv * q2 - gv * q3;
      const Vec3 xv = -(1 - gu) * q0 - gu * q1 + gu * q2 + (1 - gu) * q3;
      out[n].x = x;
      out[n].w = 0.25 * xu.cross(xv).norm();
      ++n;
    }
  return n;
}

void cell_gradients_at(const BackgroundMesh& mesh, const ReferenceBasis& basis,
                       int cell, const Vec3& x, Vec3* grad) {
  std::array<Vec3, 8> xs;
  mesh.cell_coords(cell, xs.data());
  std::span<const Vec3> span(xs.data(),
                             static_cast<std::size_t>(mesh.nodes_per_cell()));
  const Vec3 xi = mesh.kind == CellKind::Tet4
                      ? Vec3(0.25, 0.25, 0.25)
                      : basis.map_to_reference(span, x);
  double N[8];
  basis.eval(span, xi, N, grad);
}

} // namespace

void assemble_membrane(const CutSurface& surface,
                       const MembraneMaterial& material, const DofMap& dofs,
                       SparseSystem& system) {
  require(dofs.n_dofs() == system.dim(), Status::InvalidArgument,
          "dof map does not match system size");
  const BackgroundMesh& mesh = *surface.mesh;
  const ReferenceBasis basis(mesh.kind);
  const int nn = mesh.nodes_per_cell();
  const double mu = material.mu();
  const double lambda = material.lambda();
  const double t = material.thickness;

  std::array<Vec3, 8> xs;
  double N[8];
  Vec3 grad[8], q[8];
  Eigen::Matrix<double, 24, 24> K;

  for (const SurfaceTriangle& tri : surface.tris) {
    mesh.cell_coords(tri.cell, xs.data());
    std::span<const Vec3> span(xs.data(), static_cast<std::size_t>(nn));
    const Mat3 P = projector(tri.normal);
    K.setZero();

    for (int iq = 0; iq < tri.n_qp; ++iq) {
      const SurfaceQuadPoint& qp = tri.qp[iq];
      basis.eval(span, qp.xi, N, grad);
      for (int i = 0; i < nn; ++i) q[i] = P * grad[i];
      const double wt = t * qp.weight;
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) {
          const double qq = q[i].dot(q[j]);
          for (int k = 0; k < 3; ++k)
            for (int l = 0; l < 3; ++l)
              K(3 * i + k, 3 * j + l) +=
                  wt * (mu * (P(k, l) * qq + q[j][k] * q[i][l]) +
                        lambda * q[i][k] * q[j][l]);
        }
    }

    auto ids = mesh.cell(tri.cell);
    for (int i = 0; i < nn; ++i)
      for (int k = 0; k < 3; ++k) {
        const int gi = dofs.dof(ids[i], k);
        for (int j = 0; j < nn; ++j)
          for (int l = 0; l < 3; ++l)
            system.add(gi, dofs.dof(ids[j], l), K(3 * i + k, 3 * j + l));
      }
  }
}

void assemble_stabilization(const ActiveMesh& active, double tau0,
                            const DofMap& dofs, SparseSystem& system) {
  require(tau0 >= 0.0, Status::InvalidArgument, "tau0 must be nonnegative");
  if (tau0 == 0.0) return;
  const BackgroundMesh& mesh = *active.mesh;
  const ReferenceBasis basis(mesh.kind);
  const int nn = mesh.nodes_per_cell();

  Vec3 grad_pos[8], grad_neg[8];
  FaceQuad fq[4];

  for (const BandFace& bf : active.interior_faces) {
    const Face& face = mesh.faces[bf.face];
    auto ids_pos = mesh.cell(bf.cell_pos);
    auto ids_neg = mesh.cell(bf.cell_neg);

    // union of the two cells' nodes; shared nodes get one slot
    int slots[16], nslots = 0;
    int slot_pos[8], slot_neg[8];
    auto slot_of = [&](int node) {
      for (int s = 0; s < nslots; ++s)
        if (slots[s] == node) return s;
      slots[nslots] = node;
      return nslots++;
    };
    for (int i = 0; i < nn; ++i) slot_pos[i] = slot_of(ids_pos[i]);
    for (int i = 0; i < nn; ++i) slot_neg[i] = slot_of(ids_neg[i]);

    const int nq = face_quadrature(mesh, face, fq);
    for (int iq = 0; iq < nq; ++iq) {
      cell_gradients_at(mesh, basis, bf.cell_pos, fq[iq].x, grad_pos);
      cell_gradients_at(mesh, basis, bf.cell_neg, fq[iq].x, grad_neg);

      double jump[16] = {};
      for (int i = 0; i < nn; ++i) {
        jump[slot_pos[i]] += bf.normal.dot(grad_pos[i]);
        jump[slot_neg[i]] -= bf.normal.dot(grad_neg[i]);
      }

      const double w = tau0 * fq[iq].w;
      for (int a = 0; a < nslots; ++a) {
        if (jump[a] == 0.0) continue;
        for (int b = 0; b < nslots; ++b) {
          const double v = w * jump[a] * jump[b];
          if (v == 0.0) continue;
          for (int k = 0; k < 3; ++k)
            system.add(dofs.dof(slots[a], k), dofs.dof(slots[b], k), v);
        }
      }
    }
  }
}

void assemble_membrane_load(const CutSurface& surface, const VectorField& f,
                            const DofMap& dofs, SparseSystem& system) {
  const BackgroundMesh& mesh = *surface.mesh;
  const ReferenceBasis basis(mesh.kind);
  const int nn = mesh.nodes_per_cell();
  std::array<Vec3, 8> xs;
  double N[8];
  Vec3 grad[8];

  for (const SurfaceTriangle& tri : surface.tris) {
    mesh.cell_coords(tri.cell, xs.data());
    std::span<const Vec3> span(xs.data(), static_cast<std::size_t>(nn));
    auto ids = mesh.cell(tri.cell);
    for (int iq = 0; iq < tri.n_qp; ++iq) {
      const SurfaceQuadPoint& qp = tri.qp[iq];
      basis.eval(span, qp.xi, N, grad);
      const Vec3 fx = f(qp.x);
      for (int i = 0; i < nn; ++i)
        for (int k = 0; k < 3; ++k)
          system.add_rhs(dofs.dof(ids[i], k), qp.weight * N[i] * fx[k]);
    }
  }
}

void assemble_bulk(const BackgroundMesh& mesh, const BulkMaterial& material,
                   const VectorField* body_force, const DofMap& dofs,
                   SparseSystem& system) {
  require(dofs.n_dofs() == system.dim(), Status::InvalidArgument,
          "dof map does not match system size");
  const ReferenceBasis basis(mesh.kind);
  const int nn = mesh.nodes_per_cell();
  const double mu = material.mu();
  const double lambda = material.lambda();

  std::vector<Vec3> qpts;
  std::vector<double> qw; // reference weights
  if (mesh.kind == CellKind::Tet4) {
    qpts = {Vec3(0.25, 0.25, 0.25)};
    qw = {1.0 / 6.0};
  } else {
    for (double gx : {kG0, kG1})
      for (double gy : {kG0, kG1})
        for (double gz : {kG0, kG1}) {
          qpts.emplace_back(gx, gy, gz);
          qw.push_back(0.125);
        }
  }

  std::array<Vec3, 8> xs;
  double N[8];
  Vec3 grad[8];
  Eigen::Matrix<double, 24, 24> K;

  for (int c = 0; c < mesh.num_cells(); ++c) {
    mesh.cell_coords(c, xs.data());
    std::span<const Vec3> span(xs.data(), static_cast<std::size_t>(nn));
    auto ids = mesh.cell(c);
    K.setZero();
    for (std::size_t iq = 0; iq < qpts.size(); ++iq) {
      const double det = basis.eval(span, qpts[iq], N, grad);
      const double w = det * qw[iq];
      for (int i = 0; i < nn; ++i)
        for (int j = 0; j < nn; ++j) {
          const double gg = grad[i].dot(grad[j]);
          for (int k = 0; k < 3; ++k) {
            K(3 * i + k, 3 * j + k) += w * mu * gg;
            for (int l = 0; l < 3; ++l)
              K(3 * i + k, 3 * j + l) +=
                  w * (mu * grad[j][k] * grad[i][l] +
                       lambda * grad[i][k] * grad[j][l]);
          }
        }
      if (body_force) {
        const Vec3 fx = (*body_force)(basis.map_to_physical(span, qpts[iq]));
        for (int i = 0; i < nn; ++i)
          for (int k = 0; k < 3; ++k)
            system.add_rhs(dofs.dof(ids[i], k), w * N[i] * fx[k]);
      }
    }
    for (int i = 0; i < nn; ++i)
      for (int k = 0; k < 3; ++k) {
        const int gi = dofs.dof(ids[i], k);
        for (int j = 0; j < nn; ++j)
          for (int l = 0; l < 3; ++l)
            system.add(gi, dofs.dof(ids[j], l), K(3 * i + k, 3 * j + l));
      }
  }
}

void assemble_boundary_traction(const BackgroundMesh& mesh,
                                const NodePredicate& where,
                                const Vec3& traction, const DofMap& dofs,
                                SparseSystem& system) {
  FaceQuad fq[4];
  for (const Face& face : mesh.faces) {
    if (face.cell_neg >= 0) continue;
    bool all = true;
    for (int i = 0; i < face.n_nodes && all; ++i)
      all = where(mesh.vertices[face.nodes[i]]);
    if (!all) continue;

    if (face.n_nodes == 3) {
      const int nq = face_quadrature(mesh, face, fq);
      for (int iq = 0; iq < nq; ++iq)
        for (int i = 0; i < 3; ++i)
          for (int k = 0; k < 3; ++k)
            system.add_rhs(dofs.dof(face.nodes[i], k),
                           fq[iq].w * (1.0 / 3.0) * traction[k]);
    } else {
      const Vec3& q0 = mesh.vertices[face.nodes[0]];
      const Vec3& q1 = mesh.vertices[face.nodes[1]];
      const Vec3& q2 = mesh.vertices[face.nodes[2]];
      const Vec3& q3 = mesh.vertices[face.nodes[3]];
      for (double gu : {kG0, kG1})
        for (double gv : {kG0, kG1}) {
          const Vec3 xu = -(1 - gv) * q0 + (1 - gv) * q1 + gv * q2 - gv * q3;
          const Vec3 xv = -(1 - gu) * q0 - gu * q1 + gu * q2 + (1 - gu) * q3;
          const double w = 0.25 * xu.cross(xv).norm();
          const double Nf[4] = {(1 - gu) * (1 - gv), gu * (1 - gv), gu * gv,
                                (1 - gu) * gv};
          for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 3; ++k)
              system.add_rhs(dofs.dof(face.nodes[i], k),
                             w * Nf[i] * traction[k]);
        }
    }
  }
}

void assemble_coupled(const BackgroundMesh& mesh, const BulkMaterial& bulk,
                      std::span<const EmbeddedMembrane> membranes, double tau0,
                      const DofMap& dofs, SparseSystem& system) {
  assemble_bulk(mesh, bulk, nullptr, dofs, system);
  for (const EmbeddedMembrane& m : membranes) {
    assemble_membrane(*m.surface, m.material, dofs, system);
    if (tau0 > 0.0) assemble_stabilization(*m.active, tau0, dofs, system);
  }
}

} // namespace cutmem
