#pragma once

/**
 * @file solve.hpp
 * @brief Conjugate-gradient solver with Jacobi preconditioning and
 *        power/inverse-iteration condition estimates.
 */

#include <limits>
#include <vector>

#include "core/system.hpp"

namespace cutmem {

struct CgOptions {
  double tol = 1e-10; // relative residual target
  int max_iter = 0;   // 0 selects 20 * n
  // Optional orthonormal basis of known zero-energy fields; right-hand side
  // and iterates are kept orthogonal to it (closed surfaces carry exact
  // rigid-body modes).
  const std::vector<Eigen::VectorXd>* deflation = nullptr;
};

struct SolveReport {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
  std::vector<double> residual_history; // preconditioned norms sqrt(r' M^-1 r)
};

SolveReport solve_cg(const SparseSystem& system, const CgOptions& opt = {});
SolveReport solve_cg(const SparseSystem& system, const Eigen::VectorXd& rhs,
                     const CgOptions& opt);

struct ConditionEstimate {
  double lambda_max = 0.0;
  double lambda_min = 0.0;
  double kappa = std::numeric_limits<double>::infinity();
  // Set when the inverse iteration could not converge; kappa is then only a
  // lower bound (numerically singular operator).
  bool lower_bound_only = false;
};

ConditionEstimate estimate_condition(const SparseSystem& system);

// Orthonormalized rigid-body fields (3 translations, 3 rotations about the
// node centroid) over the nodes of a dof map.
std::vector<Eigen::VectorXd> rigid_body_modes(const BackgroundMesh& mesh,
                                              const DofMap& dofs);

} // namespace cutmem
