#pragma once

/**
 * @file assemble.hpp
 * @brief Builds the discrete forms: membrane stiffness on the cut surface,
 *        gradient-jump stabilization on band faces, bulk elasticity, and the
 *        load vectors.
 */

#include <functional>
#include <span>

#include "core/cut.hpp"
#include "core/material.hpp"
#include "core/system.hpp"

namespace cutmem {

using VectorField = std::function<Vec3(const Vec3&)>;

// In-plane stiffness integrated over the cut surface, scaled by the
// membrane thickness.
void assemble_membrane(const CutSurface& surface,
                       const MembraneMaterial& material, const DofMap& dofs,
                       SparseSystem& system);

// Penalty on the jump of the full normal gradient across every face shared
// by two active cells, integrated over the whole face.
void assemble_stabilization(const ActiveMesh& active, double tau0,
                            const DofMap& dofs, SparseSystem& system);

// Surface load against the displacement test functions.
void assemble_membrane_load(const CutSurface& surface, const VectorField& f,
                            const DofMap& dofs, SparseSystem& system);

// Standard linear elasticity over every cell of the background mesh;
// body force optional.
void assemble_bulk(const BackgroundMesh& mesh, const BulkMaterial& material,
                   const VectorField* body_force, const DofMap& dofs,
                   SparseSystem& system);

// Constant traction on the boundary faces whose nodes all satisfy the
// predicate.
void assemble_boundary_traction(const BackgroundMesh& mesh,
                                const NodePredicate& where,
                                const Vec3& traction, const DofMap& dofs,
                                SparseSystem& system);

struct EmbeddedMembrane {
  const ActiveMesh* active = nullptr;
  const CutSurface* surface = nullptr;
  MembraneMaterial material;
};

// Bulk stiffness plus every membrane's stiffness on shared displacement
// dofs; tau0 applies to each membrane's band faces.
void assemble_coupled(const BackgroundMesh& mesh, const BulkMaterial& bulk,
                      std::span<const EmbeddedMembrane> membranes, double tau0,
                      const DofMap& dofs, SparseSystem& system);

} // namespace cutmem
