#include "core/vtk.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace cutmem {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  require(out.good(), Status::Io, "cannot open file for writing: " + path);
  out << std::setprecision(17);
  return out;
}

} // namespace

void write_mesh_vtk(const std::string& path, const BackgroundMesh& mesh,
                    const std::vector<double>* displacement,
                    const std::vector<double>* scalars,
                    const std::string& scalar_name) {
  if (displacement)
    require(static_cast<int>(displacement->size()) == 3 * mesh.num_vertices(),
            Status::InvalidArgument, "displacement length mismatch");
  if (scalars)
    require(static_cast<int>(scalars->size()) == mesh.num_vertices(),
            Status::InvalidArgument, "scalar length mismatch");

  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "background mesh\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const Vec3& v : mesh.vertices)
    out << v.x() << " " << v.y() << " " << v.z() << "\n";

  const int nn = mesh.nodes_per_cell();
  const int nc = mesh.num_cells();
  out << "CELLS " << nc << " " << static_cast<long>(nc) * (nn + 1) << "\n";
  for (int c = 0; c < nc; ++c) {
    out << nn;
    for (int id : mesh.cell(c)) out << " " << id;
    out << "\n";
  }
  out << "CELL_TYPES " << nc << "\n";
  const int vtk_type = mesh.kind == CellKind::Tet4 ? 10 : 12;
  for (int c = 0; c < nc; ++c) out << vtk_type << "\n";

  if (displacement || scalars) {
    out << "POINT_DATA " << mesh.num_vertices() << "\n";
    if (displacement) {
      out << "VECTORS displacement double\n";
      for (int i = 0; i < mesh.num_vertices(); ++i)
        out << (*displacement)[3 * i] << " " << (*displacement)[3 * i + 1]
            << " " << (*displacement)[3 * i + 2] << "\n";
    }
    if (scalars) {
      out << "SCALARS " << scalar_name << " double 1\n";
      out << "LOOKUP_TABLE default\n";
      for (double v : *scalars) out << v << "\n";
    }
  }
}

void write_surface_vtk(const std::string& path, const CutSurface& surface,
                       const std::vector<Mat3>* cell_stress,
                       const std::vector<Vec3>* point_displacement) {
  const long ntri = static_cast<long>(surface.tris.size());
  if (cell_stress)
    require(static_cast<long>(cell_stress->size()) == ntri,
            Status::InvalidArgument, "stress array length mismatch");
  if (point_displacement)
    require(static_cast<long>(point_displacement->size()) == 3 * ntri,
            Status::InvalidArgument, "displacement array length mismatch");

  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n";
  out << "cut surface\n";
  out << "ASCII\n";
  out << "DATASET POLYDATA\n";
  out << "POINTS " << 3 * ntri << " double\n";
  for (const SurfaceTriangle& tri : surface.tris)
    for (const Vec3& v : tri.v)
      out << v.x() << " " << v.y() << " " << v.z() << "\n";
  out << "POLYGONS " << ntri << " " << 4 * ntri << "\n";
  for (long t = 0; t < ntri; ++t)
    out << "3 " << 3 * t << " " << 3 * t + 1 << " " << 3 * t + 2 << "\n";

  out << "CELL_DATA " << ntri << "\n";
  out << "VECTORS normal double\n";
  for (const SurfaceTriangle& tri : surface.tris)
    out << tri.normal.x() << " " << tri.normal.y() << " " << tri.normal.z()
        << "\n";
  out << "SCALARS parent_cell int 1\n";
  out << "LOOKUP_TABLE default\n";
  for (const SurfaceTriangle& tri : surface.tris) out << tri.cell << "\n";
  if (cell_stress) {
    out << "TENSORS stress double\n";
    for (const Mat3& s : *cell_stress) {
      for (int r = 0; r < 3; ++r)
        out << s(r, 0) << " " << s(r, 1) << " " << s(r, 2) << "\n";
      out << "\n";
    }
  }
  if (point_displacement) {
    out << "POINT_DATA " << 3 * ntri << "\n";
    out << "VECTORS displacement double\n";
    for (const Vec3& u : *point_displacement)
      out << u.x() << " " << u.y() << " " << u.z() << "\n";
  }
}

VtkCounts read_vtk_counts(const std::string& path) {
  std::ifstream in(path);
  require(in.good(), Status::Io, "cannot open file for reading: " + path);
  VtkCounts counts;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    if (word == "POINTS") {
      ss >> counts.points;
    } else if (word == "CELLS" || word == "POLYGONS") {
      ss >> counts.cells;
    }
  }
  return counts;
}

} // namespace cutmem
