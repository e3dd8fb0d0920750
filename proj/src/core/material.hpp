#pragma once

#include "core/types.hpp"

namespace cutmem {

// Membrane elasticity: plane-stress moduli, so nu = 1/2 stays finite. E = 0
// is allowed and makes the membrane mechanically inert.
struct MembraneMaterial {
  double E = 1.0;
  double nu = 0.0;
  double thickness = 1.0;

  MembraneMaterial() = default;
  MembraneMaterial(double E_, double nu_, double t_)
      : E(E_), nu(nu_), thickness(t_) {
    require(E >= 0.0, Status::InvalidArgument, "E must be nonnegative");
    require(nu > -1.0 && nu < 1.0, Status::InvalidArgument,
            "membrane nu must lie in (-1, 1)");
    require(thickness > 0.0, Status::InvalidArgument,
            "thickness must be positive");
  }

  double mu() const { return E / (2.0 * (1.0 + nu)); }
  double lambda() const { return E * nu / (1.0 - nu * nu); }
};

// Bulk elasticity with the usual 3D Lame parameters; nu = 1/2 is excluded.
struct BulkMaterial {
  double E = 1.0;
  double nu = 0.3;

  BulkMaterial() = default;
  BulkMaterial(double E_, double nu_) : E(E_), nu(nu_) {
    require(E > 0.0, Status::InvalidArgument, "E must be positive");
    require(nu > -1.0 && nu < 0.5, Status::InvalidArgument,
            "bulk nu must lie in (-1, 1/2)");
  }

  double mu() const { return E / (2.0 * (1.0 + nu)); }
  double lambda() const { return E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu)); }
};

} // namespace cutmem
