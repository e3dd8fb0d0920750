#include "core/cut.hpp"

#include <algorithm>
#include <cmath>

namespace cutmem {

namespace {

constexpr int kTetEdges[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
constexpr int kHexEdges[12][2] = {{0, 1}, {1, 2}, {2, 3}, {3, 0},
                                  {4, 5}, {5, 6}, {6, 7}, {7, 4},
                                  {0, 4}, {1, 5}, {2, 6}, {3, 7}};

// Components of one sign class on the hex corner graph. A cut through a
// cell is only meaningful when both classes are connected; otherwise the
// zero level splits into disjoint patches inside the cell.
bool hex_signs_connected(const double* phi, bool positive) {
  int start = -1, count = 0;
  for (int i = 0; i < 8; ++i)
    if ((phi[i] > 0.0) == positive) {
      if (start < 0) start = i;
      ++count;
    }
  if (count == 0) return true;
  bool seen[8] = {};
  int stack[8], top = 0;
  stack[top++] = start;
  seen[start] = true;
  int reached = 0;
  while (top > 0) {
    int v = stack[--top];
    ++reached;
    for (const auto& e : kHexEdges) {
      int w = -1;
      if (e[0] == v) w = e[1];
      if (e[1] == v) w = e[0];
      if (w >= 0 && !seen[w] && (phi[w] > 0.0) == positive) {
        seen[w] = true;
        stack[top++] = w;
      }
    }
  }
  return reached == count;
}

Vec3 nodal_gradient_fit(const BackgroundMesh& mesh, int cell,
                        const double* phi) {
  const int nn = mesh.nodes_per_cell();
  std::array<Vec3, 8> xs;
  mesh.cell_coords(cell, xs.data());
  Vec3 xbar = Vec3::Zero();
  double pbar = 0.0;
  for (int i = 0; i < nn; ++i) {
    xbar += xs[i];
    pbar += phi[i];
  }
  xbar /= nn;
  pbar /= nn;
  Mat3 M = Mat3::Zero();
  Vec3 r = Vec3::Zero();
  for (int i = 0; i < nn; ++i) {
    const Vec3 dx = xs[i] - xbar;
    M += dx * dx.transpose();
    r += dx * (phi[i] - pbar);
  }
  return M.ldlt().solve(r);
}

// Andrew monotone chain; returns hull vertex indices in counterclockwise
// order for the (u, v) frame.
std::vector<int> convex_hull_2d(const std::vector<double>& u,
                                const std::vector<double>& v) {
  const int n = static_cast<int>(u.size());
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (u[a] != u[b]) return u[a] < u[b];
    return v[a] < v[b];
  });
  auto cross = [&](int o, int a, int b) {
    return (u[a] - u[o]) * (v[b] - v[o]) - (v[a] - v[o]) * (u[b] - u[o]);
  };
  std::vector<int> hull(2 * n);
  int k = 0;
  for (int ii = 0; ii < n; ++ii) {
    int i = idx[ii];
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], i) <= 0.0) --k;
    hull[k++] = i;
  }
  const int lower = k + 1;
  for (int ii = n - 2; ii >= 0; --ii) {
    int i = idx[ii];
    while (k >= lower && cross(hull[k - 2], hull[k - 1], i) <= 0.0) --k;
    hull[k++] = i;
  }
  hull.resize(k > 0 ? k - 1 : 0);
  return hull;
}

} // namespace

Vec3 edge_cut_point(const Vec3& xm, const Vec3& xn, double phi_m,
                    double phi_n) {
  require(phi_m != 0.0 && phi_n != 0.0 && (phi_m > 0.0) != (phi_n > 0.0),
          Status::InvalidArgument,
          "edge cut requires nonzero values of opposite sign");
  const double t = phi_m / (phi_m - phi_n);
  return xm + t * (xn - xm);
}

CutResult cut_polygon(const DiscreteLevelSet& phi, int cell) {
  const BackgroundMesh& mesh = *phi.mesh;
  const int nn = mesh.nodes_per_cell();
  auto ids = mesh.cell(cell);
  double p[8];
  std::array<Vec3, 8> xs;
  for (int i = 0; i < nn; ++i) {
    p[i] = phi.phi[ids[i]];
    xs[i] = mesh.vertices[ids[i]];
  }

  CutResult result;
  result.polygon.cell = cell;

  if (mesh.kind == CellKind::Hex8 &&
      (!hex_signs_connected(p, true) || !hex_signs_connected(p, false))) {
    result.skip = CutSkip::Disconnected;
    return result;
  }

  const int nedges = mesh.kind == CellKind::Tet4 ? 6 : 12;
  Vec3 n_phi = Vec3::Zero();
  for (int e = 0; e < nedges; ++e) {
    const int a = mesh.kind == CellKind::Tet4 ? kTetEdges[e][0] : kHexEdges[e][0];
    const int b = mesh.kind == CellKind::Tet4 ? kTetEdges[e][1] : kHexEdges[e][1];
    if ((p[a] > 0.0) == (p[b] > 0.0)) continue;
    result.polygon.points.push_back(edge_cut_point(xs[a], xs[b], p[a], p[b]));
    n_phi += (p[a] > 0.0) ? (xs[a] - xs[b]) : (xs[b] - xs[a]);
  }

  const int npts = static_cast<int>(result.polygon.points.size());
  const int max_pts = mesh.kind == CellKind::Tet4 ? 4 : 6;
  if (npts < 3 || npts > max_pts) {
    result.skip = CutSkip::Degenerate;
    return result;
  }

  const double h = mesh_size(mesh);
  if (n_phi.norm() <= 1e-14 * h) n_phi = nodal_gradient_fit(mesh, cell, p);
  if (n_phi.norm() <= 0.0) {
    result.skip = CutSkip::Degenerate;
    return result;
  }
  result.polygon.n_phi = n_phi;
  return result;
}

std::vector<SurfaceTriangle> tessellate(const CutPolygon& polygon,
                                        const BackgroundMesh& mesh,
                                        double area_tol) {
  std::vector<SurfaceTriangle> tris;
  if (polygon.points.size() < 3) return tris;

  const Vec3 nref = polygon.n_phi.normalized();
  int drop = 0;
  for (int a = 1; a < 3; ++a)
    if (std::abs(nref[a]) < std::abs(nref[drop])) drop = a;
  const Vec3 t1 = Vec3::Unit(drop).cross(nref).normalized();
  const Vec3 t2 = nref.cross(t1);

  // merge numerically coincident cut points before taking the hull
  std::vector<Vec3> pts;
  const double merge_tol = 1e-13 * mesh.spacing.norm();
  for (const Vec3& q : polygon.points) {
    bool dup = false;
    for (const Vec3& r : pts)
      if ((q - r).norm() <= merge_tol) {
        dup = true;
        break;
      }
    if (!dup) pts.push_back(q);
  }
  if (pts.size() < 3) return tris;

  std::vector<double> u(pts.size()), v(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    u[i] = pts[i].dot(t1);
    v[i] = pts[i].dot(t2);
  }
  const std::vector<int> hull = convex_hull_2d(u, v);
  if (hull.size() < 3) return tris;

  for (std::size_t k = 1; k + 1 < hull.size(); ++k) {
    SurfaceTriangle tri;
    tri.v = {pts[hull[0]], pts[hull[k]], pts[hull[k + 1]]};
    Vec3 cr = (tri.v[1] - tri.v[0]).cross(tri.v[2] - tri.v[0]);
    const double area = 0.5 * cr.norm();
    if (area <= area_tol) continue;
    if (cr.dot(nref) < 0.0) {
      std::swap(tri.v[1], tri.v[2]);
      cr = -cr;
    }
    tri.area = area;
    tri.normal = cr.normalized();
    tri.cell = polygon.cell;
    tris.push_back(tri);
  }
  return tris;
}

void surface_quadrature(SurfaceTriangle& tri, const BackgroundMesh& mesh,
                        SurfaceRule rule) {
  if (rule == SurfaceRule::ParentDefault)
    rule = mesh.kind == CellKind::Tet4 ? SurfaceRule::Centroid
                                       : SurfaceRule::ThreePoint;

  std::array<Vec3, 8> xs;
  mesh.cell_coords(tri.cell, xs.data());
  std::span<const Vec3> cell_xs(xs.data(),
                                static_cast<std::size_t>(mesh.nodes_per_cell()));
  ReferenceBasis basis(mesh.kind);

  Vec3 phys[3];
  double w[3];
  if (rule == SurfaceRule::Centroid) {
    tri.n_qp = 1;
    phys[0] = (tri.v[0] + tri.v[1] + tri.v[2]) / 3.0;
    w[0] = tri.area;
  } else {
    tri.n_qp = 3;
    phys[0] = 0.5 * (tri.v[0] + tri.v[1]);
    phys[1] = 0.5 * (tri.v[1] + tri.v[2]);
    phys[2] = 0.5 * (tri.v[2] + tri.v[0]);
    w[0] = w[1] = w[2] = tri.area / 3.0;
  }

  const double tol = 1e-6;
  for (int q = 0; q < tri.n_qp; ++q) {
    SurfaceQuadPoint& qp = tri.qp[q];
    qp.x = phys[q];
    qp.weight = w[q];
    qp.xi = basis.map_to_reference(cell_xs, phys[q]);
    if (mesh.kind == CellKind::Tet4) {
      require(qp.xi.minCoeff() > -tol && qp.xi.sum() < 1.0 + tol,
              Status::Geometry, "surface point left its parent tet");
    } else {
      require(qp.xi.minCoeff() > -tol && qp.xi.maxCoeff() < 1.0 + tol,
              Status::Geometry, "surface point left its parent hex");
    }
  }
}

CutSurface extract_surface(const ActiveMesh& active, SurfaceRule rule) {
  const BackgroundMesh& mesh = *active.mesh;
  CutSurface surface;
  surface.mesh = &mesh;
  const double h = mesh_size(mesh);
  const double area_tol = 1e-12 * h * h;

  for (int c : active.cells) {
    CutResult cut = cut_polygon(*active.phi, c);
    if (cut.skip == CutSkip::Disconnected) {
      ++surface.skipped_disconnected;
      surface.skipped_cells.push_back(c);
      continue;
    }
    if (cut.skip == CutSkip::Degenerate) {
      ++surface.skipped_degenerate;
      surface.skipped_cells.push_back(c);
      continue;
    }
    std::vector<SurfaceTriangle> tris = tessellate(cut.polygon, mesh, area_tol);
    if (tris.empty()) {
      ++surface.skipped_degenerate;
      surface.skipped_cells.push_back(c);
      continue;
    }
    for (SurfaceTriangle& tri : tris) {
      surface_quadrature(tri, mesh, rule);
      surface.total_area += tri.area;
      surface.tris.push_back(tri);
    }
  }
  return surface;
}

} // namespace cutmem
