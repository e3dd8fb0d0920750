#pragma once

/**
 * @file tangent.hpp
 * @brief Pointwise tangential calculus on an oriented surface: projector,
 *        in-plane gradient, strain, divergence, and the membrane stress law.
 */

#include <cmath>

#include "core/types.hpp"

namespace cutmem {

// P = I - n n^T for a unit normal n.
inline Mat3 projector(const Vec3& n) {
  require(std::abs(n.norm() - 1.0) < 1e-10, Status::InvalidArgument,
          "projector needs a unit normal");
  return Mat3::Identity() - n * n.transpose();
}

inline Vec3 tangential_gradient(const Vec3& grad, const Mat3& P) {
  return P * grad;
}

// In-plane strain of a displacement with full-space Jacobian J (J_ab =
// du_a/dx_b): project the symmetric part from both sides.
inline Mat3 surface_strain(const Mat3& J, const Mat3& P) {
  const Mat3 eps = 0.5 * (J + J.transpose());
  return P * eps * P;
}

inline double surface_divergence(const Mat3& J, const Mat3& P) {
  return (P * J).trace();
}

inline Mat3 membrane_stress(const Mat3& eps_t, const Mat3& P, double mu,
                            double lambda) {
  return 2.0 * mu * eps_t + lambda * eps_t.trace() * P;
}

} // namespace cutmem
