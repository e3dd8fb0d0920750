/**
 * @file test_mesh.cpp
 * @brief Structured mesh builder, jitter, face topology, and reference-cell
 *        shape functions.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstring>
#include <random>

#include "core/mesh.hpp"

using namespace cutmem;

namespace {

Box unit_box() { return Box{Vec3(0, 0, 0), Vec3(1, 1, 1)}; }

// Captures the status thrown by fn, or Status::Ok when nothing throws.
template <typename Fn>
Status status_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Status::Ok;
}

bool on_box_boundary(const Vec3& x, const Box& box, double tol = 1e-12) {
  for (int a = 0; a < 3; ++a)
    if (std::abs(x[a] - box.lo[a]) < tol || std::abs(x[a] - box.hi[a]) < tol)
      return true;
  return false;
}

} // namespace

TEST_CASE("single-cube hex mesh has the expected counts") {
  const BackgroundMesh mesh = build_structured(unit_box(), 1, 1, 1, CellKind::Hex8);
  CHECK(mesh.num_cells() == 1);
  CHECK(mesh.num_vertices() == 8);
  CHECK(mesh.cell_volume(0) == doctest::Approx(1.0).epsilon(1e-14));

  int boundary = 0, interior = 0;
  for (const Face& f : mesh.faces) (f.cell_neg < 0 ? boundary : interior)++;
  CHECK(boundary == 6);
  CHECK(interior == 0);
}

TEST_CASE("single-cube tet mesh splits into six tets of total volume one") {
  const BackgroundMesh mesh = build_structured(unit_box(), 1, 1, 1, CellKind::Tet4);
  CHECK(mesh.num_cells() == 6);
  CHECK(mesh.num_vertices() == 8);

  double volume = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    CHECK(mesh.cell_volume(c) > 0.0);
    volume += mesh.cell_volume(c);
  }
  CHECK(volume == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("mesh size follows the inverse cube root of the vertex count") {
  const BackgroundMesh coarse = build_structured(unit_box(), 2, 2, 2, CellKind::Hex8);
  CHECK(coarse.num_vertices() == 27);
  CHECK(mesh_size(coarse) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));

  // 42 x 7 x 3 subdivisions give 43 * 8 * 4 = 1376 vertices.
  const BackgroundMesh odd = build_structured(unit_box(), 42, 7, 3, CellKind::Hex8);
  CHECK(odd.num_vertices() == 1376);
  CHECK(mesh_size(odd) == doctest::Approx(0.0899).epsilon(6e-3));
  CHECK(mesh_size(odd) == doctest::Approx(std::pow(1376.0, -1.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("structured builder validates its arguments") {
  CHECK(status_of([] { build_structured(unit_box(), 0, 1, 1, CellKind::Tet4); }) ==
        Status::InvalidArgument);
  Box flipped{Vec3(0, 0, 0), Vec3(1, -1, 1)};
  CHECK(status_of([&] { build_structured(flipped, 2, 2, 2, CellKind::Hex8); }) ==
        Status::InvalidArgument);
}

TEST_CASE("face topology satisfies the incidence count for both cell kinds") {
  for (CellKind kind : {CellKind::Tet4, CellKind::Hex8}) {
    const BackgroundMesh mesh = build_structured(unit_box(), 3, 3, 2, kind);
    int boundary = 0, interior = 0;
    for (const Face& f : mesh.faces) {
      CHECK(f.cell_pos >= 0);
      (f.cell_neg < 0 ? boundary : interior)++;
    }
    const int faces_per_cell = kind == CellKind::Tet4 ? 4 : 6;
    CHECK(faces_per_cell * mesh.num_cells() == 2 * interior + boundary);
  }
}

TEST_CASE("jitter with zero magnitude is the identity") {
  const BackgroundMesh mesh = build_structured(unit_box(), 3, 3, 3, CellKind::Tet4);
  const BackgroundMesh same = jitter_interior(mesh, 0.0, 7);
  REQUIRE(same.num_vertices() == mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v)
    CHECK((same.vertices[v] - mesh.vertices[v]).norm() == 0.0);
}

TEST_CASE("jitter is deterministic, keeps the boundary, and keeps cells valid") {
  const BackgroundMesh mesh = build_structured(unit_box(), 4, 4, 4, CellKind::Tet4);
  const BackgroundMesh a = jitter_interior(mesh, 0.2, 42);
  const BackgroundMesh b = jitter_interior(mesh, 0.2, 42);

  bool identical = true;
  bool moved_someone = false;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    identical = identical && std::memcmp(a.vertices[v].data(), b.vertices[v].data(),
                                         3 * sizeof(double)) == 0;
    if (on_box_boundary(mesh.vertices[v], mesh.box)) {
      CHECK((a.vertices[v] - mesh.vertices[v]).norm() == 0.0);
    } else if ((a.vertices[v] - mesh.vertices[v]).norm() > 0.0) {
      moved_someone = true;
    }
  }
  CHECK(identical);
  CHECK(moved_someone);

  for (int c = 0; c < a.num_cells(); ++c) CHECK(a.cell_volume(c) > 0.0);

  const BackgroundMesh other = jitter_interior(mesh, 0.2, 43);
  bool differs = false;
  for (int v = 0; v < mesh.num_vertices() && !differs; ++v)
    differs = (a.vertices[v] - other.vertices[v]).norm() > 0.0;
  CHECK(differs);

  CHECK(status_of([&] { jitter_interior(mesh, 0.5, 1); }) == Status::InvalidArgument);
}

TEST_CASE("shape functions interpolate the cell vertices") {
  const ReferenceBasis tet(CellKind::Tet4);
  double N[8];
  tet.shape(Vec3(0, 0, 0), N);
  CHECK(N[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(N[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(N[2] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(N[3] == doctest::Approx(0.0).epsilon(1e-15));
  tet.shape(Vec3(1, 0, 0), N);
  CHECK(N[1] == doctest::Approx(1.0).epsilon(1e-15));

  const ReferenceBasis hex(CellKind::Hex8);
  hex.shape(Vec3(0.5, 0.5, 0.5), N);
  for (int i = 0; i < 8; ++i) CHECK(N[i] == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("tet gradients are constant and match the unit tet") {
  const ReferenceBasis tet(CellKind::Tet4);
  Vec3 dN[4];
  tet.shape_grad_ref(Vec3(0.2, 0.3, 0.1), dN);
  CHECK((dN[0] - Vec3(-1, -1, -1)).norm() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK((dN[1] - Vec3(1, 0, 0)).norm() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK((dN[2] - Vec3(0, 1, 0)).norm() == doctest::Approx(0.0).epsilon(1e-15));
  CHECK((dN[3] - Vec3(0, 0, 1)).norm() == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("shape values and gradients satisfy partition of unity on jittered cells") {
  std::mt19937 gen(2024);
  std::uniform_real_distribution<double> unif(0.05, 0.95);

  for (CellKind kind : {CellKind::Tet4, CellKind::Hex8}) {
    const BackgroundMesh mesh =
        jitter_interior(build_structured(unit_box(), 3, 3, 3, kind), 0.2, 11);
    const ReferenceBasis basis(kind);
    const int nn = basis.n_nodes();
    std::vector<Vec3> xs(nn);

    for (int trial = 0; trial < 50; ++trial) {
      const int c = static_cast<int>(gen() % mesh.num_cells());
      mesh.cell_coords(c, xs.data());
      Vec3 xi(unif(gen), unif(gen), unif(gen));
      if (kind == CellKind::Tet4) xi /= 3.0; // keep inside the simplex

      double N[8];
      Vec3 grad[8];
      const double det = basis.eval(xs, xi, N, grad);
      CHECK(det > 0.0);

      double sum = 0.0;
      Vec3 gsum = Vec3::Zero();
      for (int i = 0; i < nn; ++i) {
        sum += N[i];
        gsum += grad[i];
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(gsum.norm() < 1e-12);
    }
  }
}

TEST_CASE("physical gradients reproduce linear fields exactly") {
  std::mt19937 gen(99);
  std::uniform_real_distribution<double> unif(0.1, 0.9);
  const Vec3 a(0.7, -1.3, 2.1);
  const double b = 0.37;

  for (CellKind kind : {CellKind::Tet4, CellKind::Hex8}) {
    const BackgroundMesh mesh =
        jitter_interior(build_structured(unit_box(), 2, 2, 2, kind), 0.15, 5);
    const ReferenceBasis basis(kind);
    const int nn = basis.n_nodes();
    std::vector<Vec3> xs(nn);
    mesh.cell_coords(0, xs.data());

    Vec3 xi(unif(gen), unif(gen), unif(gen));
    if (kind == CellKind::Tet4) xi /= 3.0;

    double N[8];
    Vec3 grad[8];
    basis.eval(xs, xi, N, grad);

    double value = 0.0;
    Vec3 gradient = Vec3::Zero();
    for (int i = 0; i < nn; ++i) {
      const double nodal = a.dot(xs[i]) + b;
      value += N[i] * nodal;
      gradient += grad[i] * nodal;
    }
    const Vec3 x = basis.map_to_physical(xs, xi);
    CHECK(value == doctest::Approx(a.dot(x) + b).epsilon(1e-12));
    CHECK((gradient - a).norm() < 1e-12);
  }
}

TEST_CASE("hex reference-map inversion round-trips interior points") {
  const BackgroundMesh mesh =
      jitter_interior(build_structured(unit_box(), 2, 2, 2, CellKind::Hex8), 0.2, 17);
  const ReferenceBasis basis(CellKind::Hex8);
  std::vector<Vec3> xs(8);
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> unif(0.05, 0.95);

  for (int c = 0; c < mesh.num_cells(); ++c) {
    mesh.cell_coords(c, xs.data());
    for (int trial = 0; trial < 5; ++trial) {
      const Vec3 xi(unif(gen), unif(gen), unif(gen));
      const Vec3 x = basis.map_to_physical(xs, xi);
      const Vec3 back = basis.map_to_reference(xs, x);
      CHECK((back - xi).norm() < 1e-10);
    }
  }
}

TEST_CASE("degenerate cells are rejected at evaluation") {
  const ReferenceBasis tet(CellKind::Tet4);
  const std::vector<Vec3> flat = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0),
                                  Vec3(0.5, 0.5, 0)};
  double N[4];
  Vec3 grad[4];
  CHECK(status_of([&] { tet.eval(flat, Vec3(0.25, 0.25, 0.25), N, grad); }) ==
        Status::Geometry);
}

TEST_CASE("cell centroids average the cell vertices") {
  const BackgroundMesh mesh = build_structured(unit_box(), 2, 2, 2, CellKind::Hex8);
  const Vec3 c0 = mesh.cell_centroid(0);
  CHECK((c0 - Vec3(0.25, 0.25, 0.25)).norm() < 1e-14);

  const auto& adjacency = mesh.vertex_cells();
  REQUIRE(static_cast<int>(adjacency.size()) == mesh.num_vertices());
  // The body-center vertex of a 2x2x2 grid touches all eight cells.
  int center = -1;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if ((mesh.vertices[v] - Vec3(0.5, 0.5, 0.5)).norm() < 1e-14) center = v;
  REQUIRE(center >= 0);
  CHECK(adjacency[center].size() == 8);
}
