/**
 * @file test_capi.cpp
 * @brief Behavior of the shared-library C interface: handle lifecycles,
 *        status codes, error messages, and the benchmark entry point.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include <cutmem.h>
#include <json.hpp>

namespace {

const double kLo[3] = {-1.2, -1.2, 0.0};
const double kHi[3] = {1.2, 1.2, 1.0};

} // namespace

TEST_CASE("the library reports a version string") {
  const char* version = cutmem_version();
  REQUIRE(version != nullptr);
  CHECK(std::strlen(version) > 0);
}

TEST_CASE("meshes expose counts and resolution through the handle") {
  cutmem_mesh* mesh = nullptr;
  REQUIRE(cutmem_mesh_create_structured(kLo, kHi, 4, 4, 2, CUTMEM_TET4, &mesh) ==
          CUTMEM_OK);
  REQUIRE(mesh != nullptr);

  long vertices = 0, cells = 0;
  CHECK(cutmem_mesh_counts(mesh, &vertices, &cells) == CUTMEM_OK);
  CHECK(vertices == 5 * 5 * 3);
  CHECK(cells == 4 * 4 * 2 * 6);

  double h = 0.0;
  CHECK(cutmem_mesh_size(mesh, &h) == CUTMEM_OK);
  CHECK(h == doctest::Approx(std::pow(75.0, -1.0 / 3.0)).epsilon(1e-12));

  CHECK(cutmem_mesh_jitter(mesh, 0.1, 7) == CUTMEM_OK);
  CHECK(cutmem_mesh_jitter(mesh, 0.7, 7) == CUTMEM_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(cutmem_last_error()) > 0);

  cutmem_mesh_destroy(mesh);
}

TEST_CASE("invalid mesh arguments produce status codes and messages") {
  cutmem_mesh* mesh = nullptr;
  CHECK(cutmem_mesh_create_structured(kLo, kHi, 0, 1, 1, CUTMEM_TET4, &mesh) ==
        CUTMEM_ERR_INVALID_ARGUMENT);
  CHECK(mesh == nullptr);
  CHECK(std::strlen(cutmem_last_error()) > 0);

  CHECK(cutmem_mesh_create_structured(nullptr, kHi, 2, 2, 2, CUTMEM_TET4, &mesh) ==
        CUTMEM_ERR_INVALID_ARGUMENT);
  CHECK(cutmem_mesh_counts(nullptr, nullptr, nullptr) ==
        CUTMEM_ERR_INVALID_ARGUMENT);
}

TEST_CASE("level sets evaluate through the handle") {
  cutmem_levelset* cylinder = nullptr;
  REQUIRE(cutmem_levelset_cylinder(2, 0.0, 0.0, 1.0, &cylinder) == CUTMEM_OK);
  double value = -1.0;
  const double on_surface[3] = {1.0, 0.0, 5.0};
  CHECK(cutmem_levelset_eval(cylinder, on_surface, &value) == CUTMEM_OK);
  CHECK(value == doctest::Approx(0.0).epsilon(1e-14));

  cutmem_levelset* oblate = nullptr;
  REQUIRE(cutmem_levelset_oblate(&oblate) == CUTMEM_OK);
  const double pole[3] = {0.0, 0.0, 0.5};
  CHECK(cutmem_levelset_eval(oblate, pole, &value) == CUTMEM_OK);
  CHECK(value == doctest::Approx(0.0).epsilon(1e-14));

  cutmem_levelset* plane = nullptr;
  const double normal[3] = {0.0, 0.0, 1.0};
  REQUIRE(cutmem_levelset_plane(normal, 0.25, &plane) == CUTMEM_OK);
  const double above[3] = {0.4, 0.4, 1.0};
  CHECK(cutmem_levelset_eval(plane, above, &value) == CUTMEM_OK);
  CHECK(value == doctest::Approx(0.75).epsilon(1e-14));

  CHECK(cutmem_levelset_cylinder(5, 0, 0, 1, &cylinder) ==
        CUTMEM_ERR_INVALID_ARGUMENT);
  const double zero[3] = {0.0, 0.0, 0.0};
  CHECK(cutmem_levelset_plane(zero, 0.0, &plane) == CUTMEM_ERR_INVALID_ARGUMENT);

  cutmem_levelset_destroy(cylinder);
  cutmem_levelset_destroy(oblate);
  cutmem_levelset_destroy(plane);
}

TEST_CASE("surfaces outlive the mesh and level set they came from") {
  cutmem_mesh* mesh = nullptr;
  REQUIRE(cutmem_mesh_create_structured(kLo, kHi, 12, 12, 6, CUTMEM_TET4, &mesh) ==
          CUTMEM_OK);
  cutmem_levelset* cylinder = nullptr;
  REQUIRE(cutmem_levelset_cylinder(2, 0.0, 0.0, 1.0, &cylinder) == CUTMEM_OK);

  cutmem_surface* surface = nullptr;
  REQUIRE(cutmem_surface_extract(mesh, cylinder, &surface) == CUTMEM_OK);

  // The surface holds its own copies, so the inputs can go first.
  cutmem_mesh_destroy(mesh);
  cutmem_levelset_destroy(cylinder);

  long triangles = 0, active_cells = 0;
  CHECK(cutmem_surface_counts(surface, &triangles, &active_cells) == CUTMEM_OK);
  CHECK(triangles > 0);
  CHECK(active_cells > 0);

  double area = 0.0;
  CHECK(cutmem_surface_area(surface, &area) == CUTMEM_OK);
  CHECK(area == doctest::Approx(2.0 * M_PI).epsilon(2e-2));

  const std::filesystem::path dir = std::filesystem::path("test_scratch") / "capi";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "surface.vtk").string();
  CHECK(cutmem_surface_write_vtk(surface, path.c_str()) == CUTMEM_OK);
  CHECK(std::filesystem::exists(path));

  cutmem_surface_destroy(surface);
}

TEST_CASE("a level set missing the mesh is a distinct status") {
  cutmem_mesh* mesh = nullptr;
  REQUIRE(cutmem_mesh_create_structured(kLo, kHi, 4, 4, 2, CUTMEM_TET4, &mesh) ==
          CUTMEM_OK);
  cutmem_levelset* far = nullptr;
  const double normal[3] = {0.0, 0.0, 1.0};
  REQUIRE(cutmem_levelset_plane(normal, 25.0, &far) == CUTMEM_OK);

  cutmem_surface* surface = nullptr;
  CHECK(cutmem_surface_extract(mesh, far, &surface) == CUTMEM_ERR_SURFACE_MISS);
  CHECK(surface == nullptr);

  cutmem_mesh_destroy(mesh);
  cutmem_levelset_destroy(far);
}

TEST_CASE("benchmarks run through the C entry point and return a report") {
  char* report = nullptr;
  const char* config = R"({"deltas": [1e-2]})";
  REQUIRE(cutmem_run_benchmark("conditioning", config, nullptr, 1, &report) ==
          CUTMEM_OK);
  REQUIRE(report != nullptr);

  const nlohmann::json log = nlohmann::json::parse(report);
  CHECK(log.at("benchmark") == "conditioning");
  CHECK(log.at("sweep").size() == 2);
  cutmem_string_free(report);
}

TEST_CASE("benchmark argument validation is strict") {
  char* report = nullptr;
  CHECK(cutmem_run_benchmark("warp-drive", nullptr, nullptr, 0, &report) ==
        CUTMEM_ERR_INVALID_ARGUMENT);
  CHECK(cutmem_run_benchmark("cylinder", "{not json", nullptr, 0, &report) ==
        CUTMEM_ERR_INVALID_ARGUMENT);
  CHECK(cutmem_run_benchmark(nullptr, nullptr, nullptr, 0, &report) ==
        CUTMEM_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(cutmem_last_error()) > 0);
}
