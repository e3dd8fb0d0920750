#include "core/level_set.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace cutmem {

double LevelSet::eval(const Vec3& x) const {
  const Vec3 y = x - shift;
  switch (kind) {
    case Kind::Cylinder: {
      const int u = (axis + 1) % 3, v = (axis + 2) % 3;
      const double du = y[u] - c1, dv = y[v] - c2;
      return std::sqrt(du * du + dv * dv) - radius;
    }
    case Kind::Oblate: {
      const double z2 = 2.0 * y.z();
      return y.x() * y.x() + y.y() * y.y() + z2 * z2 - 1.0;
    }
    case Kind::Plane:
      return normal.dot(y) - offset;
  }
  fail(Status::Internal, "unknown level set kind");
}

LevelSet LevelSet::cylinder(int axis, double c1, double c2, double radius) {
  require(axis >= 0 && axis <= 2, Status::InvalidArgument,
          "cylinder axis must be 0, 1, or 2");
  require(radius > 0.0, Status::InvalidArgument,
          "cylinder radius must be positive");
  LevelSet ls;
  ls.kind = Kind::Cylinder;
  ls.axis = axis;
  ls.c1 = c1;
  ls.c2 = c2;
  ls.radius = radius;
  return ls;
}

LevelSet LevelSet::oblate() {
  LevelSet ls;
  ls.kind = Kind::Oblate;
  return ls;
}

LevelSet LevelSet::plane(const Vec3& normal, double offset) {
  const double len = normal.norm();
  require(len > 0.0, Status::InvalidArgument, "plane normal must be nonzero");
  LevelSet ls;
  ls.kind = Kind::Plane;
  ls.normal = normal / len;
  ls.offset = offset;
  return ls;
}

LevelSet LevelSet::translated(const Vec3& d) const {
  LevelSet ls = *this;
  ls.shift += d;
  return ls;
}

Vec3 oblate_gradient(const Vec3& x) {
  return Vec3(2.0 * x.x(), 2.0 * x.y(), 8.0 * x.z());
}

DiscreteLevelSet discretize(const LevelSet& ls, const BackgroundMesh& mesh) {
  DiscreteLevelSet d;
  d.mesh = &mesh;
  d.phi.resize(mesh.vertices.size());
  const double tie = 1e-12 * mesh_size(mesh);
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    double v = ls.eval(mesh.vertices[i]);
    d.phi[i] = (v == 0.0) ? tie : v;
  }
  return d;
}

namespace {

Vec3 face_normal(const BackgroundMesh& mesh, const Face& face) {
  if (face.n_nodes == 3) {
    const Vec3& a = mesh.vertices[face.nodes[0]];
    const Vec3& b = mesh.vertices[face.nodes[1]];
    const Vec3& c = mesh.vertices[face.nodes[2]];
    return (b - a).cross(c - a);
  }
  // Newell normal handles mildly warped quads
  Vec3 n = Vec3::Zero();
  for (int i = 0; i < face.n_nodes; ++i) {
    const Vec3& p = mesh.vertices[face.nodes[i]];
    const Vec3& q = mesh.vertices[face.nodes[(i + 1) % face.n_nodes]];
    n.x() += (p.y() - q.y()) * (p.z() + q.z());
    n.y() += (p.z() - q.z()) * (p.x() + q.x());
    n.z() += (p.x() - q.x()) * (p.y() + q.y());
  }
  return n;
}

} // namespace

double ActiveMesh::band_volume() const {
  double v = 0.0;
  for (int c : cells) v += mesh->cell_volume(c);
  return v;
}

ActiveMesh classify(const DiscreteLevelSet& phi) {
  require(phi.mesh != nullptr && !phi.phi.empty(), Status::InvalidArgument,
          "level set not discretized");
  require(!phi.mesh->faces.empty(), Status::InvalidArgument,
          "mesh faces not built");
  const BackgroundMesh& mesh = *phi.mesh;

  ActiveMesh active;
  active.mesh = &mesh;
  active.phi = &phi;
  active.is_active.assign(mesh.num_cells(), 0);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    bool pos = false, neg = false;
    for (int id : mesh.cell(c)) (phi.phi[id] > 0.0 ? pos : neg) = true;
    if (pos && neg) {
      active.is_active[c] = 1;
      active.cells.push_back(c);
    }
  }
  require(!active.cells.empty(), Status::SurfaceMiss,
          "level set does not intersect the mesh");

  std::set<int> band, boundary;
  for (int c : active.cells)
    for (int id : mesh.cell(c)) band.insert(id);

  for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
    const Face& face = mesh.faces[f];
    const bool pos_active = active.is_active[face.cell_pos] != 0;
    const bool neg_active = face.cell_neg >= 0 && active.is_active[face.cell_neg] != 0;
    if (pos_active && neg_active) {
      BandFace bf;
      bf.face = static_cast<int>(f);
      bf.cell_pos = face.cell_pos;
      bf.cell_neg = face.cell_neg;
      Vec3 n = face_normal(mesh, face).normalized();
      const Vec3 d = mesh.cell_centroid(face.cell_neg) -
                     mesh.cell_centroid(face.cell_pos);
      if (n.dot(d) < 0.0) n = -n;
      bf.normal = n;
      active.interior_faces.push_back(bf);
    } else if (pos_active != neg_active) {
      // band boundary: one active side only (mesh boundary included)
      for (int i = 0; i < face.n_nodes; ++i) boundary.insert(face.nodes[i]);
    }
  }

  active.band_nodes.assign(band.begin(), band.end());
  active.band_boundary_nodes.assign(boundary.begin(), boundary.end());
  return active;
}

NodePredicate NodePredicate::plane(int axis, double value, double tol) {
  NodePredicate p;
  p.type = Type::Plane;
  p.axis = axis;
  p.value = value;
  p.tol = tol;
  return p;
}

NodePredicate NodePredicate::inside(const Box& box) {
  NodePredicate p;
  p.type = Type::Box;
  p.box = box;
  return p;
}

NodePredicate NodePredicate::all() { return NodePredicate{}; }

bool NodePredicate::operator()(const Vec3& x) const {
  switch (type) {
    case Type::Plane:
      return std::abs(x[axis] - value) <= tol;
    case Type::Box:
      return (x.array() >= box.lo.array()).all() &&
             (x.array() <= box.hi.array()).all();
    case Type::All:
      return true;
  }
  return false;
}

DirichletSet dirichlet_nodes(const ActiveMesh& active, NodePool pool,
                             const NodePredicate& predicate,
                             unsigned components, std::string tag) {
  require(components != 0 && (components & ~kCompAll) == 0,
          Status::InvalidArgument, "component mask must select x, y, or z");
  const BackgroundMesh& mesh = *active.mesh;

  std::vector<int> candidates;
  switch (pool) {
    case NodePool::BandBoundary:
      candidates = active.band_boundary_nodes;
      break;
    case NodePool::Band:
      candidates = active.band_nodes;
      break;
    case NodePool::DomainBoundary: {
      std::set<int> nodes;
      for (const Face& face : mesh.faces)
        if (face.cell_neg < 0)
          for (int i = 0; i < face.n_nodes; ++i) nodes.insert(face.nodes[i]);
      candidates.assign(nodes.begin(), nodes.end());
      break;
    }
  }

  DirichletSet set;
  set.components = components;
  set.tag = std::move(tag);
  for (int id : candidates)
    if (predicate(mesh.vertices[id])) set.nodes.push_back(id);
  set.empty = set.nodes.empty();
  return set;
}

} // namespace cutmem
