#pragma once

/**
 * @file cut.hpp
 * @brief Zero-level extraction: per-cell cut polygons, their triangulation,
 *        and quadrature on the resulting discrete surface.
 */

#include <vector>

#include "core/level_set.hpp"
#include "core/mesh.hpp"
#include "core/types.hpp"

namespace cutmem {

// Point where the nodal interpolant changes sign along the edge (xm, xn).
// Both values must be nonzero and of opposite sign.
Vec3 edge_cut_point(const Vec3& xm, const Vec3& xn, double phi_m, double phi_n);

struct CutPolygon {
  int cell = -1;
  std::vector<Vec3> points; // one per sign-change edge, cell edge order
  Vec3 n_phi = Vec3::Zero(); // orientation vector, points toward phi > 0
};

// Reasons a cut cell produces no surface triangles; counted per extraction.
enum class CutSkip {
  None,
  Degenerate,   // fewer than 3 usable cut points
  Disconnected, // hex corner signs split into multiple components
};

struct CutResult {
  CutPolygon polygon;
  CutSkip skip = CutSkip::None;
};

// Cut points of one active cell plus the edge-based orientation vector
// (sum over cut edges of the vector from the negative to the positive
// endpoint; least-squares nodal gradient when that sum degenerates).
CutResult cut_polygon(const DiscreteLevelSet& phi, int cell);

struct SurfaceQuadPoint {
  Vec3 x;         // physical position
  Vec3 xi;        // reference coords in the parent cell
  double weight;  // physical area weight
};

struct SurfaceTriangle {
  std::array<Vec3, 3> v;
  double area = 0.0;
  Vec3 normal = Vec3::Zero(); // unit, aligned with the polygon's n_phi
  int cell = -1;
  int n_qp = 0;
  std::array<SurfaceQuadPoint, 3> qp;
};

enum class SurfaceRule {
  ParentDefault, // centroid on tet parents, three-point on hex parents
  Centroid,
  ThreePoint
};

// Triangulates a cut polygon: project along n_phi, take the planar convex
// hull, fan out triangles, orient them with n_phi, and drop slivers below
// 1e-12 * h^2.
std::vector<SurfaceTriangle> tessellate(const CutPolygon& polygon,
                                        const BackgroundMesh& mesh,
                                        double area_tol);

// Fills quadrature data for a triangle whose vertices lie in parent cell
// `cell`: centroid rule or the edge-midpoint three-point rule, with
// reference coordinates recovered through the parent cell map.
void surface_quadrature(SurfaceTriangle& tri, const BackgroundMesh& mesh,
                        SurfaceRule rule);

struct CutSurface {
  const BackgroundMesh* mesh = nullptr;
  std::vector<SurfaceTriangle> tris;
  double total_area = 0.0;
  int skipped_degenerate = 0;
  int skipped_disconnected = 0;
  std::vector<int> skipped_cells;
};

// Runs the full per-cell pipeline over the active band in ascending cell
// order.
CutSurface extract_surface(const ActiveMesh& active,
                           SurfaceRule rule = SurfaceRule::ParentDefault);

} // namespace cutmem
