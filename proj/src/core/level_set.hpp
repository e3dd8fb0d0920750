#pragma once

/**
 * @file level_set.hpp
 * @brief Implicit surface descriptions, their nodal discretization, and the
 *        classification of the background mesh into the active band.
 */

#include <string>
#include <vector>

#include "core/mesh.hpp"
#include "core/types.hpp"

namespace cutmem {

// Implicit surface rho(x) = 0 with rho < 0 inside. A shift vector supports
// translated copies of any shape: rho'(x) = rho(x - shift).
struct LevelSet {
  enum class Kind { Cylinder, Oblate, Plane };

  Kind kind = Kind::Plane;
  // cylinder: distance to the axis line minus radius; axis picks the
  // invariant coordinate, (c1, c2) is the center in the transverse plane.
  int axis = 2;
  double c1 = 0.0, c2 = 0.0, radius = 1.0;
  // plane: n . x - offset with unit n
  Vec3 normal = Vec3(0, 0, 1);
  double offset = 0.0;
  Vec3 shift = Vec3::Zero();

  double eval(const Vec3& x) const;

  static LevelSet cylinder(int axis, double c1, double c2, double radius);
  static LevelSet oblate(); // x^2 + y^2 + (2z)^2 - 1
  static LevelSet plane(const Vec3& normal, double offset);
  LevelSet translated(const Vec3& d) const;
};

// Gradient of the oblate shape function, used by the manufactured solution.
Vec3 oblate_gradient(const Vec3& x);

struct DiscreteLevelSet {
  const BackgroundMesh* mesh = nullptr;
  std::vector<double> phi; // one value per mesh vertex, never exactly zero
};

// Nodal interpolation of the level set. Exact zeros are nudged to
// +1e-12 * mesh_size so every vertex has a definite sign.
DiscreteLevelSet discretize(const LevelSet& ls, const BackgroundMesh& mesh);

struct BandFace {
  int face = -1;     // index into mesh.faces
  int cell_pos = -1; // matches Face::cell_pos
  int cell_neg = -1;
  Vec3 normal = Vec3::Zero(); // unit, points from cell_pos into cell_neg
};

struct ActiveMesh {
  const BackgroundMesh* mesh = nullptr;
  const DiscreteLevelSet* phi = nullptr;
  std::vector<int> cells;              // active cells, ascending
  std::vector<char> is_active;         // per mesh cell
  std::vector<BandFace> interior_faces; // faces between two active cells
  std::vector<int> band_nodes;          // nodes of active cells, ascending
  std::vector<int> band_boundary_nodes; // nodes on the band boundary, ascending

  double band_volume() const;
};

// A cell is active when its nodal level-set values carry both signs. Throws
// a surface-miss error when no cell qualifies.
ActiveMesh classify(const DiscreteLevelSet& phi);

enum class NodePool {
  BandBoundary,   // nodes on the boundary of the active band
  DomainBoundary, // nodes on the boundary of the background mesh
  Band            // every node of an active cell
};

struct NodePredicate {
  enum class Type { Plane, Box, All };
  Type type = Type::All;
  int axis = 0;
  double value = 0.0;
  double tol = 1e-9;
  Box box;

  static NodePredicate plane(int axis, double value, double tol = 1e-9);
  static NodePredicate inside(const Box& box);
  static NodePredicate all();

  bool operator()(const Vec3& x) const;
};

constexpr unsigned kCompX = 1u, kCompY = 2u, kCompZ = 4u;
constexpr unsigned kCompAll = kCompX | kCompY | kCompZ;

struct DirichletSet {
  std::vector<int> nodes;  // ascending
  unsigned components = 0; // bit mask over x, y, z
  bool empty = false;      // predicate matched nothing
  std::string tag;
};

DirichletSet dirichlet_nodes(const ActiveMesh& active, NodePool pool,
                             const NodePredicate& predicate,
                             unsigned components, std::string tag = {});

} // namespace cutmem
