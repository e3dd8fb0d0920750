#ifndef CUTMEM_H
#define CUTMEM_H

/*
 * C interface to the cut-membrane solver library.
 *
 * Every function that can fail returns a status code; CUTMEM_OK is zero. On
 * failure a thread-local message is available through cutmem_last_error().
 * Objects are opaque handles created and destroyed through this interface;
 * a surface keeps its own copy of the inputs, so handles may be destroyed
 * in any order.
 */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cutmem_status {
  CUTMEM_OK = 0,
  CUTMEM_ERR_INVALID_ARGUMENT = 1,
  CUTMEM_ERR_GEOMETRY = 2,
  CUTMEM_ERR_SURFACE_MISS = 3,
  CUTMEM_ERR_SOLVER = 4,
  CUTMEM_ERR_IO = 5,
  CUTMEM_ERR_INTERNAL = 6
} cutmem_status;

typedef enum cutmem_cell_kind {
  CUTMEM_TET4 = 0,
  CUTMEM_HEX8 = 1
} cutmem_cell_kind;

typedef struct cutmem_mesh cutmem_mesh;
typedef struct cutmem_levelset cutmem_levelset;
typedef struct cutmem_surface cutmem_surface;

/* Library version string; storage is static. */
const char* cutmem_version(void);

/* Message for the most recent failure on this thread; storage is owned by
 * the library and valid until the next failing call. */
const char* cutmem_last_error(void);

/* Releases strings returned through output parameters. */
void cutmem_string_free(char* s);

/* --- background meshes ------------------------------------------------- */

cutmem_status cutmem_mesh_create_structured(const double lo[3],
                                            const double hi[3], int nx, int ny,
                                            int nz, cutmem_cell_kind kind,
                                            cutmem_mesh** out);

/* Random interior-vertex perturbation of at most `magnitude` times the grid
 * spacing per axis; magnitude must stay below 0.5. */
cutmem_status cutmem_mesh_jitter(cutmem_mesh* mesh, double magnitude,
                                 uint64_t seed);

cutmem_status cutmem_mesh_counts(const cutmem_mesh* mesh, long* vertices,
                                 long* cells);

/* Resolution measure h = vertices^(-1/3). */
cutmem_status cutmem_mesh_size(const cutmem_mesh* mesh, double* h);

cutmem_status cutmem_mesh_write_vtk(const cutmem_mesh* mesh, const char* path);

void cutmem_mesh_destroy(cutmem_mesh* mesh);

/* --- level sets -------------------------------------------------------- */

/* Distance to an axis-aligned cylinder surface; axis is 0, 1, or 2 and
 * (c1, c2) is the center in the transverse plane. */
cutmem_status cutmem_levelset_cylinder(int axis, double c1, double c2,
                                       double radius, cutmem_levelset** out);

/* The oblate spheroid x^2 + y^2 + (2 z)^2 = 1. */
cutmem_status cutmem_levelset_oblate(cutmem_levelset** out);

/* Signed distance to a plane: dot(normal, x) - offset. */
cutmem_status cutmem_levelset_plane(const double normal[3], double offset,
                                    cutmem_levelset** out);

cutmem_status cutmem_levelset_eval(const cutmem_levelset* ls, const double x[3],
                                   double* value);

void cutmem_levelset_destroy(cutmem_levelset* ls);

/* --- cut surfaces ------------------------------------------------------ */

/* Extracts the zero set of the nodal level-set interpolant as triangles.
 * Fails with CUTMEM_ERR_SURFACE_MISS when the surface misses the mesh. */
cutmem_status cutmem_surface_extract(const cutmem_mesh* mesh,
                                     const cutmem_levelset* ls,
                                     cutmem_surface** out);

cutmem_status cutmem_surface_counts(const cutmem_surface* surface,
                                    long* triangles, long* active_cells);

cutmem_status cutmem_surface_area(const cutmem_surface* surface, double* area);

cutmem_status cutmem_surface_write_vtk(const cutmem_surface* surface,
                                       const char* path);

void cutmem_surface_destroy(cutmem_surface* surface);

/* --- benchmarks -------------------------------------------------------- */

/* Runs a named benchmark (cylinder, oblate, stiffened-beam, bending-beam,
 * conditioning). config_json may be NULL or a JSON object that is merged
 * over the built-in defaults; out_dir may be NULL to skip file artifacts.
 * On success *report_json receives the machine-readable run record; release
 * it with cutmem_string_free. */
cutmem_status cutmem_run_benchmark(const char* name, const char* config_json,
                                   const char* out_dir, int deterministic,
                                   char** report_json);

#ifdef __cplusplus
}
#endif

#endif /* CUTMEM_H */
