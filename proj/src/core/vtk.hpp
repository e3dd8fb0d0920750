#pragma once

/**
 * @file vtk.hpp
 * @brief Legacy-format VTK writers for the volume mesh and the cut surface,
 *        plus a count reader used to validate written files.
 */

#include <string>
#include <vector>

#include "core/cut.hpp"
#include "core/mesh.hpp"

namespace cutmem {

// Unstructured-grid file with optional per-vertex displacement (3 * NNO
// values) and per-vertex scalars.
void write_mesh_vtk(const std::string& path, const BackgroundMesh& mesh,
                    const std::vector<double>* displacement = nullptr,
                    const std::vector<double>* scalars = nullptr,
                    const std::string& scalar_name = "phi");

// Polydata file: one polygon per surface triangle (vertices duplicated per
// triangle), per-triangle normals, parent cell ids, optional per-triangle
// stress tensors and per-vertex displacements.
void write_surface_vtk(const std::string& path, const CutSurface& surface,
                       const std::vector<Mat3>* cell_stress = nullptr,
                       const std::vector<Vec3>* point_displacement = nullptr);

struct VtkCounts {
  long points = 0;
  long cells = 0;
};

// Reads back POINTS/CELLS (or POLYGONS) counts from a legacy VTK file.
VtkCounts read_vtk_counts(const std::string& path);

} // namespace cutmem
