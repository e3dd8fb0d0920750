#include "cutmem.h"

#include "core/analysis.hpp"
#include "core/config.hpp"
#include "core/cut.hpp"
#include "core/level_set.hpp"
#include "core/mesh.hpp"
#include "core/types.hpp"
#include "core/vtk.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

namespace {

thread_local std::string g_last_error;

cutmem_status status_of(cutmem::Status s) {
  switch (s) {
    case cutmem::Status::Ok: return CUTMEM_OK;
    case cutmem::Status::InvalidArgument: return CUTMEM_ERR_INVALID_ARGUMENT;
    case cutmem::Status::Geometry: return CUTMEM_ERR_GEOMETRY;
    case cutmem::Status::SurfaceMiss: return CUTMEM_ERR_SURFACE_MISS;
    case cutmem::Status::Solver: return CUTMEM_ERR_SOLVER;
    case cutmem::Status::Io: return CUTMEM_ERR_IO;
    case cutmem::Status::Internal: return CUTMEM_ERR_INTERNAL;
  }
  return CUTMEM_ERR_INTERNAL;
}

template <typename Fn>
cutmem_status guarded(Fn&& fn) {
  try {
    fn();
    return CUTMEM_OK;
  } catch (const cutmem::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return CUTMEM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CUTMEM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CUTMEM_ERR_INTERNAL;
  }
}

cutmem_status invalid(const char* msg) {
  g_last_error = msg;
  return CUTMEM_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

} // namespace

struct cutmem_mesh {
  cutmem::BackgroundMesh mesh;
};

struct cutmem_levelset {
  cutmem::LevelSet ls;
};

// Owns a private copy of the background mesh so the handle stays valid after
// the inputs are destroyed. The classification and surface reference that
// copy, so the struct is heap-allocated and never moved.
struct cutmem_surface {
  cutmem::BackgroundMesh mesh;
  cutmem::DiscreteLevelSet phi;
  cutmem::ActiveMesh active;
  cutmem::CutSurface surface;
};

extern "C" {

const char* cutmem_version(void) { return "cutmem 1.0.0"; }

const char* cutmem_last_error(void) { return g_last_error.c_str(); }

void cutmem_string_free(char* s) { std::free(s); }

cutmem_status cutmem_mesh_create_structured(const double lo[3],
                                            const double hi[3], int nx, int ny,
                                            int nz, cutmem_cell_kind kind,
                                            cutmem_mesh** out) {
  if (lo == nullptr || hi == nullptr || out == nullptr)
    return invalid("null pointer argument");
  if (kind != CUTMEM_TET4 && kind != CUTMEM_HEX8)
    return invalid("unknown cell kind");
  *out = nullptr;
  return guarded([&] {
    cutmem::Box box;
    box.lo = cutmem::Vec3(lo[0], lo[1], lo[2]);
    box.hi = cutmem::Vec3(hi[0], hi[1], hi[2]);
    auto handle = std::make_unique<cutmem_mesh>();
    handle->mesh = cutmem::build_structured(
        box, nx, ny, nz,
        kind == CUTMEM_TET4 ? cutmem::CellKind::Tet4 : cutmem::CellKind::Hex8);
    *out = handle.release();
  });
}

cutmem_status cutmem_mesh_jitter(cutmem_mesh* mesh, double magnitude,
                                 uint64_t seed) {
  if (mesh == nullptr) return invalid("null mesh handle");
  return guarded([&] {
    mesh->mesh = cutmem::jitter_interior(mesh->mesh, magnitude, seed);
  });
}

cutmem_status cutmem_mesh_counts(const cutmem_mesh* mesh, long* vertices,
                                 long* cells) {
  if (mesh == nullptr) return invalid("null mesh handle");
  if (vertices != nullptr) *vertices = mesh->mesh.num_vertices();
  if (cells != nullptr) *cells = mesh->mesh.num_cells();
  return CUTMEM_OK;
}

cutmem_status cutmem_mesh_size(const cutmem_mesh* mesh, double* h) {
  if (mesh == nullptr || h == nullptr) return invalid("null pointer argument");
  return guarded([&] { *h = cutmem::mesh_size(mesh->mesh); });
}

cutmem_status cutmem_mesh_write_vtk(const cutmem_mesh* mesh, const char* path) {
  if (mesh == nullptr || path == nullptr) return invalid("null pointer argument");
  return guarded([&] { cutmem::write_mesh_vtk(path, mesh->mesh); });
}

void cutmem_mesh_destroy(cutmem_mesh* mesh) { delete mesh; }

cutmem_status cutmem_levelset_cylinder(int axis, double c1, double c2,
                                       double radius, cutmem_levelset** out) {
  if (out == nullptr) return invalid("null pointer argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<cutmem_levelset>();
    handle->ls = cutmem::LevelSet::cylinder(axis, c1, c2, radius);
    *out = handle.release();
  });
}

cutmem_status cutmem_levelset_oblate(cutmem_levelset** out) {
  if (out == nullptr) return invalid("null pointer argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<cutmem_levelset>();
    handle->ls = cutmem::LevelSet::oblate();
    *out = handle.release();
  });
}

cutmem_status cutmem_levelset_plane(const double normal[3], double offset,
                                    cutmem_levelset** out) {
  if (normal == nullptr || out == nullptr) return invalid("null pointer argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<cutmem_levelset>();
    handle->ls = cutmem::LevelSet::plane(
        cutmem::Vec3(normal[0], normal[1], normal[2]), offset);
    *out = handle.release();
  });
}

cutmem_status cutmem_levelset_eval(const cutmem_levelset* ls, const double x[3],
                                   double* value) {
  if (ls == nullptr || x == nullptr || value == nullptr)
    return invalid("null pointer argument");
  return guarded([&] { *value = ls->ls.eval(cutmem::Vec3(x[0], x[1], x[2])); });
}

void cutmem_levelset_destroy(cutmem_levelset* ls) { delete ls; }

cutmem_status cutmem_surface_extract(const cutmem_mesh* mesh,
                                     const cutmem_levelset* ls,
                                     cutmem_surface** out) {
  if (mesh == nullptr || ls == nullptr || out == nullptr)
    return invalid("null pointer argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<cutmem_surface>();
    handle->mesh = mesh->mesh;
    handle->mesh.build_faces();
    handle->phi = cutmem::discretize(ls->ls, handle->mesh);
    handle->active = cutmem::classify(handle->phi);
    handle->surface = cutmem::extract_surface(handle->active);
    *out = handle.release();
  });
}

cutmem_status cutmem_surface_counts(const cutmem_surface* surface,
                                    long* triangles, long* active_cells) {
  if (surface == nullptr) return invalid("null surface handle");
  if (triangles != nullptr)
    *triangles = static_cast<long>(surface->surface.tris.size());
  if (active_cells != nullptr)
    *active_cells = static_cast<long>(surface->active.cells.size());
  return CUTMEM_OK;
}

cutmem_status cutmem_surface_area(const cutmem_surface* surface, double* area) {
  if (surface == nullptr || area == nullptr)
    return invalid("null pointer argument");
  *area = surface->surface.total_area;
  return CUTMEM_OK;
}

cutmem_status cutmem_surface_write_vtk(const cutmem_surface* surface,
                                       const char* path) {
  if (surface == nullptr || path == nullptr)
    return invalid("null pointer argument");
  return guarded([&] { cutmem::write_surface_vtk(path, surface->surface); });
}

void cutmem_surface_destroy(cutmem_surface* surface) { delete surface; }

cutmem_status cutmem_run_benchmark(const char* name, const char* config_json,
                                   const char* out_dir, int deterministic,
                                   char** report_json) {
  if (name == nullptr) return invalid("null benchmark name");
  if (report_json != nullptr) *report_json = nullptr;
  return guarded([&] {
    nlohmann::json overrides = nlohmann::json::object();
    if (config_json != nullptr && config_json[0] != '\0') {
      overrides = nlohmann::json::parse(config_json, nullptr, false);
      cutmem::require(!overrides.is_discarded(),
                      cutmem::Status::InvalidArgument,
                      "benchmark config is not valid JSON");
      cutmem::require(overrides.is_object(), cutmem::Status::InvalidArgument,
                      "benchmark config must be a JSON object");
    }
    const std::string dir = (out_dir != nullptr) ? out_dir : "";
    const cutmem::BenchmarkResult result =
        cutmem::run_benchmark(name, overrides, dir, deterministic != 0);
    if (report_json != nullptr) *report_json = copy_string(result.log.dump(2));
  });
}

} // extern "C"
