#pragma once

/**
 * @file mesh.hpp
 * @brief Background volume mesh: structured tet/hex builder, face topology,
 *        reference-cell shape functions and coordinate maps.
 */

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "core/types.hpp"

namespace cutmem {

enum class CellKind { Tet4, Hex8 };

struct Box {
  Vec3 lo = Vec3::Zero();
  Vec3 hi = Vec3::Ones();
};

// Mesh face. nodes[] holds vertex ids in cyclic order (nodes[3] = -1 for
// triangles). cell_neg = -1 on the domain boundary.
struct Face {
  std::array<int, 4> nodes{-1, -1, -1, -1};
  int n_nodes = 0;
  int cell_pos = -1;
  int cell_neg = -1;
};

class BackgroundMesh {
public:
  CellKind kind = CellKind::Tet4;
  Box box;
  Vec3 spacing = Vec3::Zero(); // structured grid spacing at build time
  std::vector<Vec3> vertices;
  std::vector<int> conn; // nodes_per_cell * num_cells
  std::vector<Face> faces;

  int nodes_per_cell() const { return kind == CellKind::Tet4 ? 4 : 8; }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_cells() const {
    return static_cast<int>(conn.size()) / nodes_per_cell();
  }

  std::span<const int> cell(int c) const {
    const int nn = nodes_per_cell();
    return {conn.data() + static_cast<std::size_t>(c) * nn,
            static_cast<std::size_t>(nn)};
  }

  void cell_coords(int c, Vec3* xs) const {
    auto ids = cell(c);
    for (std::size_t i = 0; i < ids.size(); ++i) xs[i] = vertices[ids[i]];
  }

  Vec3 cell_centroid(int c) const;
  double cell_volume(int c) const;

  // Vertex -> incident cells adjacency (built on first use).
  const std::vector<std::vector<int>>& vertex_cells() const;

  void build_faces();

private:
  mutable std::vector<std::vector<int>> vertex_cells_;
};

// Structured mesh over an axis-aligned box. Hex cells use the usual
// bottom-quad/top-quad vertex order; tet cells come from a six-tet
// decomposition of each grid cube that is identical in every cube, so
// faces of neighboring cubes match.
BackgroundMesh build_structured(const Box& box, int nx, int ny, int nz,
                                CellKind kind);

// Perturbs interior vertices by a uniform random offset of at most
// `magnitude` times the local grid spacing per axis. Vertices are visited in
// index order with a per-vertex seeded generator; an offset that would
// invert an incident cell is re-drawn. magnitude must be < 0.5.
BackgroundMesh jitter_interior(const BackgroundMesh& mesh, double magnitude,
                               std::uint64_t seed);

// Global resolution measure h = 1 / NNO^(1/3).
double mesh_size(const BackgroundMesh& mesh);

// Shape functions on the reference cell ([0,1]^3 cube for hexes, unit
// simplex for tets) plus the maps between reference and physical frames.
class ReferenceBasis {
public:
  explicit ReferenceBasis(CellKind kind) : kind_(kind) {}

  CellKind kind() const { return kind_; }
  int n_nodes() const { return kind_ == CellKind::Tet4 ? 4 : 8; }

  void shape(const Vec3& xi, double* N) const;
  void shape_grad_ref(const Vec3& xi, Vec3* dN) const;

  Mat3 jacobian(std::span<const Vec3> xs, const Vec3& xi) const;
  Vec3 map_to_physical(std::span<const Vec3> xs, const Vec3& xi) const;

  // Physical -> reference. Closed form for tets; Newton iteration for
  // hexes (tolerance 1e-12 relative to the cell size, at most 20 steps).
  Vec3 map_to_reference(std::span<const Vec3> xs, const Vec3& x) const;

  // Shape values and physical-frame gradients at xi; returns det(J).
  double eval(std::span<const Vec3> xs, const Vec3& xi, double* N,
              Vec3* grad_phys) const;

private:
  CellKind kind_;
};

} // namespace cutmem
