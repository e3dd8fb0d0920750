#include "core/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace cutmem {

namespace {

// Local face vertex tables, cyclic order.
constexpr int kTetFaces[4][3] = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
constexpr int kHexFaces[6][4] = {{0, 3, 2, 1}, {4, 5, 6, 7}, {0, 1, 5, 4},
                                 {1, 2, 6, 5}, {2, 3, 7, 6}, {3, 0, 4, 7}};

struct FaceKey {
  std::array<int, 4> v;
  bool operator==(const FaceKey& o) const { return v == o.v; }
};

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : k.v) {
      h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

FaceKey make_key(const int* nodes, int n) {
  FaceKey k;
  k.v = {-1, -1, -1, -1};
  for (int i = 0; i < n; ++i) k.v[i] = nodes[i];
  std::sort(k.v.begin(), k.v.end());
  return k;
}

double tet_signed_volume(const Vec3& a, const Vec3& b, const Vec3& c,
                         const Vec3& d) {
  return (b - a).cross(c - a).dot(d - a) / 6.0;
}

// Gauss points of the 2-point rule on [0,1].
constexpr double kG0 = 0.5 - 0.28867513459481287;
constexpr double kG1 = 0.5 + 0.28867513459481287;

} // namespace

Vec3 BackgroundMesh::cell_centroid(int c) const {
  Vec3 s = Vec3::Zero();
  for (int id : cell(c)) s += vertices[id];
  return s / static_cast<double>(nodes_per_cell());
}

double BackgroundMesh::cell_volume(int c) const {
  std::array<Vec3, 8> xs;
  cell_coords(c, xs.data());
  if (kind == CellKind::Tet4)
    return tet_signed_volume(xs[0], xs[1], xs[2], xs[3]);
  ReferenceBasis basis(CellKind::Hex8);
  double vol = 0.0;
  for (double gx : {kG0, kG1})
    for (double gy : {kG0, kG1})
      for (double gz : {kG0, kG1})
        vol += basis.jacobian({xs.data(), 8}, Vec3(gx, gy, gz)).determinant() /
               8.0;
  return vol;
}

const std::vector<std::vector<int>>& BackgroundMesh::vertex_cells() const {
  if (vertex_cells_.empty() && num_cells() > 0) {
    vertex_cells_.resize(vertices.size());
    for (int c = 0; c < num_cells(); ++c)
      for (int id : cell(c)) vertex_cells_[id].push_back(c);
  }
  return vertex_cells_;
}

void BackgroundMesh::build_faces() {
  faces.clear();
  std::unordered_map<FaceKey, int, FaceKeyHash> index;
  const int nfaces = kind == CellKind::Tet4 ? 4 : 6;
  const int fsize = kind == CellKind::Tet4 ? 3 : 4;
  index.reserve(static_cast<std::size_t>(num_cells()) * nfaces);
  for (int c = 0; c < num_cells(); ++c) {
    auto ids = cell(c);
    for (int f = 0; f < nfaces; ++f) {
      int fn[4] = {-1, -1, -1, -1};
      for (int i = 0; i < fsize; ++i)
        fn[i] = ids[kind == CellKind::Tet4 ? kTetFaces[f][i] : kHexFaces[f][i]];
      FaceKey key = make_key(fn, fsize);
      auto it = index.find(key);
      if (it == index.end()) {
        Face face;
        for (int i = 0; i < fsize; ++i) face.nodes[i] = fn[i];
        face.n_nodes = fsize;
        face.cell_pos = c;
        index.emplace(key, static_cast<int>(faces.size()));
        faces.push_back(face);
      } else {
        Face& face = faces[it->second];
        require(face.cell_neg < 0, Status::Geometry,
                "face shared by more than two cells");
        face.cell_neg = c;
      }
    }
  }
}

BackgroundMesh build_structured(const Box& box, int nx, int ny, int nz,
                                CellKind kind) {
  require(nx >= 1 && ny >= 1 && nz >= 1, Status::InvalidArgument,
          "cell counts must be positive");
  require((box.hi - box.lo).minCoeff() > 0.0, Status::InvalidArgument,
          "box extents must be positive");

  BackgroundMesh mesh;
  mesh.kind = kind;
  mesh.box = box;
  mesh.spacing = Vec3((box.hi.x() - box.lo.x()) / nx,
                      (box.hi.y() - box.lo.y()) / ny,
                      (box.hi.z() - box.lo.z()) / nz);

  const int vx = nx + 1, vy = ny + 1, vz = nz + 1;
  mesh.vertices.reserve(static_cast<std::size_t>(vx) * vy * vz);
  for (int k = 0; k < vz; ++k)
    for (int j = 0; j < vy; ++j)
      for (int i = 0; i < vx; ++i)
        mesh.vertices.emplace_back(box.lo.x() + i * mesh.spacing.x(),
                                   box.lo.y() + j * mesh.spacing.y(),
                                   box.lo.z() + k * mesh.spacing.z());

  auto vid = [vx, vy](int i, int j, int k) { return (k * vy + j) * vx + i; };

  // Grid-cube corners indexed by bits (x, y<<1, z<<2).
  // Six-tet split: each tet follows one monotone corner-to-corner path, the
  // same in every cube, so shared cube faces carry matching diagonals.
  constexpr int kPathTets[6][4] = {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
                                   {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};

  if (kind == CellKind::Hex8) {
    mesh.conn.reserve(static_cast<std::size_t>(nx) * ny * nz * 8);
  } else {
    mesh.conn.reserve(static_cast<std::size_t>(nx) * ny * nz * 6 * 4);
  }
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        int gid[8];
        for (int b = 0; b < 8; ++b)
          gid[b] = vid(i + (b & 1), j + ((b >> 1) & 1), k + ((b >> 2) & 1));
        if (kind == CellKind::Hex8) {
          const int order[8] = {0, 1, 3, 2, 4, 5, 7, 6}; // bits -> cyclic quads
          for (int b : order) mesh.conn.push_back(gid[b]);
        } else {
          for (const auto& t : kPathTets) {
            int ids[4] = {gid[t[0]], gid[t[1]], gid[t[2]], gid[t[3]]};
            if (tet_signed_volume(mesh.vertices[ids[0]], mesh.vertices[ids[1]],
                                  mesh.vertices[ids[2]],
                                  mesh.vertices[ids[3]]) < 0.0)
              std::swap(ids[2], ids[3]);
            for (int id : ids) mesh.conn.push_back(id);
          }
        }
      }

  mesh.build_faces();
  return mesh;
}

BackgroundMesh jitter_interior(const BackgroundMesh& mesh, double magnitude,
                               std::uint64_t seed) {
  require(magnitude >= 0.0 && magnitude < 0.5, Status::InvalidArgument,
          "jitter magnitude must lie in [0, 0.5)");

  BackgroundMesh out = mesh;
  const auto& adjacency = out.vertex_cells();
  const Vec3 d = mesh.spacing;
  const double vol_tol =
      1e-12 * d.x() * d.y() * d.z(); // inverted-cell guard
  const double btol = 1e-12 * (mesh.box.hi - mesh.box.lo).norm();

  auto on_boundary = [&](const Vec3& x) {
    for (int a = 0; a < 3; ++a)
      if (std::abs(x[a] - mesh.box.lo[a]) < btol ||
          std::abs(x[a] - mesh.box.hi[a]) < btol)
        return true;
    return false;
  };

  ReferenceBasis hex_basis(CellKind::Hex8);
  auto cell_valid = [&](int c) {
    std::array<Vec3, 8> xs;
    out.cell_coords(c, xs.data());
    if (out.kind == CellKind::Tet4)
      return tet_signed_volume(xs[0], xs[1], xs[2], xs[3]) > vol_tol;
    static const Vec3 corners[8] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                                    {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};
    for (const Vec3& xi : corners)
      if (hex_basis.jacobian({xs.data(), 8}, xi).determinant() <= vol_tol)
        return false;
    return true;
  };

  for (int v = 0; v < out.num_vertices(); ++v) {
    if (on_boundary(mesh.vertices[v])) continue;
    std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ull +
                                static_cast<std::uint64_t>(v) * 0xbf58476d1ce4e5b9ull));
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    const Vec3 base = mesh.vertices[v];
    bool placed = false;
    for (int attempt = 0; attempt < 64 && !placed; ++attempt) {
      Vec3 offset(magnitude * d.x() * uni(rng), magnitude * d.y() * uni(rng),
                  magnitude * d.z() * uni(rng));
      out.vertices[v] = base + offset;
      placed = true;
      for (int c : adjacency[v])
        if (!cell_valid(c)) {
          placed = false;
          break;
        }
    }
    if (!placed) {
      out.vertices[v] = base;
      fail(Status::Geometry, "jitter failed to keep cells positively oriented");
    }
  }
  return out;
}

double mesh_size(const BackgroundMesh& mesh) {
  require(mesh.num_vertices() > 0, Status::InvalidArgument, "empty mesh");
  return 1.0 / std::cbrt(static_cast<double>(mesh.num_vertices()));
}

void ReferenceBasis::shape(const Vec3& xi, double* N) const {
  if (kind_ == CellKind::Tet4) {
    N[0] = 1.0 - xi.x() - xi.y() - xi.z();
    N[1] = xi.x();
    N[2] = xi.y();
    N[3] = xi.z();
    return;
  }
  const double x = xi.x(), y = xi.y(), z = xi.z();
  const double mx = 1.0 - x, my = 1.0 - y, mz = 1.0 - z;
  N[0] = mx * my * mz;
  N[1] = x * my * mz;
  N[2] = x * y * mz;
  N[3] = mx * y * mz;
  N[4] = mx * my * z;
  N[5] = x * my * z;
  N[6] = x * y * z;
  N[7] = mx * y * z;
}

void ReferenceBasis::shape_grad_ref(const Vec3& xi, Vec3* dN) const {
  if (kind_ == CellKind::Tet4) {
    dN[0] = Vec3(-1, -1, -1);
    dN[1] = Vec3(1, 0, 0);
    dN[2] = Vec3(0, 1, 0);
    dN[3] = Vec3(0, 0, 1);
    return;
  }
  const double x = xi.x(), y = xi.y(), z = xi.z();
  const double mx = 1.0 - x, my = 1.0 - y, mz = 1.0 - z;
  dN[0] = Vec3(-my * mz, -mx * mz, -mx * my);
  dN[1] = Vec3(my * mz, -x * mz, -x * my);
  dN[2] = Vec3(y * mz, x * mz, -x * y);
  dN[3] = Vec3(-y * mz, mx * mz, -mx * y);
  dN[4] = Vec3(-my * z, -mx * z, mx * my);
  dN[5] = Vec3(my * z, -x * z, x * my);
  dN[6] = Vec3(y * z, x * z, x * y);
  dN[7] = Vec3(-y * z, mx * z, mx * y);
}

Mat3 ReferenceBasis::jacobian(std::span<const Vec3> xs, const Vec3& xi) const {
  Vec3 dN[8];
  shape_grad_ref(xi, dN);
  Mat3 J = Mat3::Zero();
  for (int i = 0; i < n_nodes(); ++i) J += xs[i] * dN[i].transpose();
  return J;
}

Vec3 ReferenceBasis::map_to_physical(std::span<const Vec3> xs,
                                     const Vec3& xi) const {
  double N[8];
  shape(xi, N);
  Vec3 x = Vec3::Zero();
  for (int i = 0; i < n_nodes(); ++i) x += N[i] * xs[i];
  return x;
}

Vec3 ReferenceBasis::map_to_reference(std::span<const Vec3> xs,
                                      const Vec3& x) const {
  if (kind_ == CellKind::Tet4) {
    Mat3 J = jacobian(xs, Vec3::Zero());
    require(std::abs(J.determinant()) > 0.0, Status::Geometry,
            "degenerate tet in reference map");
    return J.partialPivLu().solve(x - xs[0]);
  }
  Vec3 lo = xs[0], hi = xs[0];
  for (int i = 1; i < 8; ++i) {
    lo = lo.cwiseMin(xs[i]);
    hi = hi.cwiseMax(xs[i]);
  }
  const double scale = (hi - lo).norm();
  Vec3 xi(0.5, 0.5, 0.5);
  for (int it = 0; it < 20; ++it) {
    Vec3 r = map_to_physical(xs, xi) - x;
    if (r.norm() <= 1e-12 * scale) return xi;
    Mat3 J = jacobian(xs, xi);
    require(std::abs(J.determinant()) > 1e-30 * scale * scale * scale,
            Status::Geometry, "singular hex jacobian in reference map");
    xi -= J.partialPivLu().solve(r);
  }
  fail(Status::Geometry, "hex reference-map iteration did not converge");
}

double ReferenceBasis::eval(std::span<const Vec3> xs, const Vec3& xi,
                            double* N, Vec3* grad_phys) const {
  shape(xi, N);
  Vec3 dN[8];
  shape_grad_ref(xi, dN);
  Mat3 J = Mat3::Zero();
  for (int i = 0; i < n_nodes(); ++i) J += xs[i] * dN[i].transpose();
  const double det = J.determinant();
  require(det > 0.0, Status::Geometry, "non-positive cell jacobian");
  Eigen::PartialPivLU<Mat3> lu(J.transpose());
  for (int i = 0; i < n_nodes(); ++i) grad_phys[i] = lu.solve(dN[i]);
  return det;
}

} // namespace cutmem
