#pragma once

/**
 * @file analysis.hpp
 * @brief Benchmark drivers: convergence studies on cut membranes, coupled
 *        beam problems, and an ill-conditioning sweep, plus the exact
 *        solutions and error norms they rely on.
 */

#include "core/assemble.hpp"
#include "core/cut.hpp"
#include "core/level_set.hpp"
#include "core/material.hpp"
#include "core/mesh.hpp"
#include "core/solve.hpp"
#include "core/system.hpp"

#include <json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace cutmem {

// ---------------------------------------------------------------------------
// Exact solutions
// ---------------------------------------------------------------------------

// Axial Cauchy stress in a cylindrical membrane of radius r and length L,
// pulled by a total force F distributed as an axial surface load
// f(x) = F/(2 pi r) * x/L^2. The axial coordinate runs from 0 (held end)
// to L (loaded end).
double exact_cylinder_stress(double x_axial, double F, double r, double L,
                             double thickness);

// The matching axial load density at relative axial coordinate x_axial.
double cylinder_load_density(double x_axial, double F, double r, double L);

// Manufactured fields on the oblate spheroid x^2 + y^2 + 4 z^2 = 1 for the
// displacement u = (x, 0, 0). All fields extend off the surface through the
// normal of the level set, so they may be evaluated at points that are close
// to but not exactly on the spheroid. Evaluation further than 1e-6 from the
// zero set is a contract violation.
struct OblateExact {
  Vec3 u;     // displacement
  Mat3 sigma; // membrane stress
  Vec3 f;     // balancing surface load
};

OblateExact oblate_manufactured(const Vec3& x, const MembraneMaterial& material);

// Closest-point projection onto the oblate spheroid (Newton along the level
// set gradient).
Vec3 project_to_oblate(const Vec3& x);

// ---------------------------------------------------------------------------
// Stress recovery and error norms
// ---------------------------------------------------------------------------

// Membrane stress at every surface quadrature point, flattened in triangle
// order (tri 0 qp 0, tri 0 qp 1, ..., tri 1 qp 0, ...).
std::vector<Mat3> recover_stress(const CutSurface& surface, const DofMap& dofs,
                                 const Eigen::VectorXd& u,
                                 const MembraneMaterial& material);

// Exact stress evaluated at a quadrature point; the owning triangle is
// passed along so the field can use the facet tangent plane.
using StressField = std::function<Mat3(const Vec3& x, const SurfaceTriangle& tri)>;

// Frobenius L2 norm of (sigma_h - exact) over the discrete surface.
double stress_error_l2(const CutSurface& surface, const std::vector<Mat3>& sigma_h,
                       const StressField& exact);

// Frobenius L2 norm of a stress field over the discrete surface.
double stress_l2_norm(const CutSurface& surface, const StressField& field);

// Displacement interpolated at the three vertices of every surface triangle,
// flattened in triangle order.
std::vector<Vec3> surface_displacement(const CutSurface& surface, const DofMap& dofs,
                                       const Eigen::VectorXd& u);

// Per-triangle stress (quadrature average), for surface output.
std::vector<Mat3> triangle_stress(const CutSurface& surface,
                                  const std::vector<Mat3>& sigma_qp);

// Nodal interpolant of a smooth field over the unknowns of a dof map.
Eigen::VectorXd interpolate_field(const BackgroundMesh& mesh, const DofMap& dofs,
                                  const VectorField& field);

// Solves A (g + w) = b with w = 0 on the constrained dofs, where the system
// holds A and b before constraints are applied and g carries the prescribed
// boundary values. Returns u = g + w; the system is left in its constrained
// state.
SolveReport solve_with_lifting(SparseSystem& system, const DofMap& dofs,
                               const Eigen::VectorXd& lift, const CgOptions& options);

// ---------------------------------------------------------------------------
// Benchmark drivers
// ---------------------------------------------------------------------------

struct ConvergenceRow {
  double h = 0.0;     // NNO^(-1/3) over the background mesh
  long nno = 0;       // background mesh vertices
  long ndof = 0;      // unknowns in the solve
  double error = 0.0; // stress error in the Frobenius L2 surface norm
  double rate = 0.0;  // log-log slope against the previous row; NaN on row 0
};

// Observed order between two refinement levels: log(e_prev/e) / log(h_prev/h).
double convergence_rate(double error_prev, double error, double h_prev, double h);

struct BenchmarkResult {
  std::string name;
  std::vector<ConvergenceRow> rows; // convergence benchmarks only
  nlohmann::json log;               // full machine-readable run record
};

// Runs one benchmark. `overrides` is deep-merged over the built-in defaults;
// artifacts (CSV tables, VTK files, run log) are written under out_dir when
// it is non-empty.
BenchmarkResult run_benchmark(const std::string& name, const nlohmann::json& overrides,
                              const std::string& out_dir, bool deterministic);

void write_convergence_csv(const std::string& path,
                           const std::vector<ConvergenceRow>& rows);

} // namespace cutmem
