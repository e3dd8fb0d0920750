/**
 * @file test_solver.cpp
 * @brief Preconditioned conjugate gradients, condition-number estimation, and
 *        rigid-body mode deflation.
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <random>

#include "core/assemble.hpp"
#include "core/mesh.hpp"
#include "core/solve.hpp"

using namespace cutmem;

namespace {

SparseSystem diagonal_system(const std::vector<double>& d,
                             const std::vector<double>& rhs) {
  SparseSystem system(static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    system.add(static_cast<int>(i), static_cast<int>(i), d[i]);
    system.add_rhs(static_cast<int>(i), rhs[i]);
  }
  return system;
}

} // namespace

TEST_CASE("identity and diagonal systems converge in one iteration") {
  SparseSystem identity = diagonal_system({1, 1, 1, 1}, {1, -2, 3, 0.5});
  const SolveReport unit = solve_cg(identity);
  CHECK(unit.converged);
  CHECK(unit.iterations == 1);
  CHECK((unit.x - identity.rhs()).norm() < 1e-14);

  SparseSystem diag = diagonal_system({2, 5, 10}, {2, 10, 5});
  const SolveReport scaled = solve_cg(diag);
  CHECK(scaled.converged);
  CHECK(scaled.iterations == 1); // Jacobi preconditioning solves it outright
  Eigen::Vector3d expected(1.0, 2.0, 0.5);
  CHECK((scaled.x - expected).norm() < 1e-13);
}

TEST_CASE("a small coupled system reproduces the hand-computed solution") {
  SparseSystem system(3);
  system.add(0, 0, 4.0);
  system.add(0, 1, 1.0);
  system.add(1, 0, 1.0);
  system.add(1, 1, 3.0);
  system.add(2, 2, 2.0);
  system.add_rhs(0, 1.0);
  system.add_rhs(1, 2.0);
  system.add_rhs(2, 2.0);

  const SolveReport report = solve_cg(system);
  CHECK(report.converged);
  CHECK(report.x[0] == doctest::Approx(1.0 / 11.0).epsilon(1e-10));
  CHECK(report.x[1] == doctest::Approx(7.0 / 11.0).epsilon(1e-10));
  CHECK(report.x[2] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(report.relative_residual <= 1e-10);

  REQUIRE(!report.residual_history.empty());
  for (std::size_t i = 1; i < report.residual_history.size(); ++i)
    CHECK(report.residual_history[i] <=
          report.residual_history[i - 1] * (1.0 + 1e-10));
}

TEST_CASE("solves are deterministic down to the bit pattern") {
  const BackgroundMesh mesh =
      build_structured(Box{Vec3(0, 0, 0), Vec3(1, 1, 1)}, 3, 3, 3, CellKind::Tet4);
  DofMap dofs = DofMap::for_mesh(mesh);

  DirichletSet clamp;
  clamp.components = kCompAll;
  for (int v = 0; v < mesh.num_vertices(); ++v)
    if (mesh.vertices[v][0] == 0.0) clamp.nodes.push_back(v);
  dofs.constrain(clamp);

  auto build = [&] {
    SparseSystem system(dofs.n_dofs());
    const VectorField pull = [](const Vec3&) { return Vec3(0, 0, -1); };
    assemble_bulk(mesh, BulkMaterial(10.0, 0.3), &pull, dofs, system);
    system.apply_dirichlet(dofs);
    return solve_cg(system);
  };

  const SolveReport first = build();
  const SolveReport second = build();
  REQUIRE(first.converged);
  CHECK(first.iterations == second.iterations);
  REQUIRE(first.x.size() == second.x.size());
  CHECK(std::memcmp(first.x.data(), second.x.data(),
                    sizeof(double) * first.x.size()) == 0);
}

TEST_CASE("iteration caps are honored and reported") {
  SparseSystem system(3);
  system.add(0, 0, 4.0);
  system.add(0, 1, 1.0);
  system.add(1, 0, 1.0);
  system.add(1, 1, 3.0);
  system.add(2, 2, 2.0);
  system.add(1, 2, 0.5);
  system.add(2, 1, 0.5);
  system.add_rhs(0, 1.0);
  system.add_rhs(1, 2.0);
  system.add_rhs(2, 2.0);

  CgOptions options;
  options.max_iter = 1;
  const SolveReport report = solve_cg(system, options);
  CHECK(!report.converged);
  CHECK(report.iterations == 1);
}

TEST_CASE("condition estimates recover known spectra") {
  SparseSystem identity = diagonal_system({1, 1, 1}, {0, 0, 0});
  const ConditionEstimate unit = estimate_condition(identity);
  CHECK(unit.kappa == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(!unit.lower_bound_only);

  SparseSystem spread = diagonal_system({1, 10}, {0, 0});
  const ConditionEstimate ten = estimate_condition(spread);
  CHECK(ten.kappa == doctest::Approx(10.0).epsilon(1e-6));

  std::vector<double> ladder(100);
  for (int i = 0; i < 100; ++i) ladder[i] = i + 1.0;
  SparseSystem graded = diagonal_system(ladder, std::vector<double>(100, 0.0));
  const ConditionEstimate hundred = estimate_condition(graded);
  CHECK(hundred.kappa > 100.0 / 1.1);
  CHECK(hundred.kappa < 110.0);
  CHECK(hundred.lambda_max == doctest::Approx(100.0).epsilon(1e-3));
  CHECK(hundred.lambda_min == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("a singular operator yields a lower-bound-only estimate") {
  SparseSystem singular = diagonal_system({1, 0}, {0, 0});
  const ConditionEstimate estimate = estimate_condition(singular);
  CHECK(estimate.lower_bound_only);
  CHECK(std::isinf(estimate.kappa));
}

TEST_CASE("rigid body modes form an orthonormal zero-energy basis") {
  const BackgroundMesh mesh =
      build_structured(Box{Vec3(0, 0, 0), Vec3(2, 1, 1)}, 2, 2, 2, CellKind::Hex8);
  const DofMap dofs = DofMap::for_mesh(mesh);
  const std::vector<Eigen::VectorXd> modes = rigid_body_modes(mesh, dofs);
  REQUIRE(modes.size() == 6);

  for (std::size_t a = 0; a < modes.size(); ++a)
    for (std::size_t b = 0; b < modes.size(); ++b) {
      const double dot = modes[a].dot(modes[b]);
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
    }

  SparseSystem system(dofs.n_dofs());
  assemble_bulk(mesh, BulkMaterial(5.0, 0.3), nullptr, dofs, system);
  for (const Eigen::VectorXd& mode : modes)
    CHECK(std::abs(system.energy(mode)) < 1e-12 * system.max_abs());
}

TEST_CASE("deflation solves consistent singular systems") {
  const BackgroundMesh mesh =
      build_structured(Box{Vec3(0, 0, 0), Vec3(1, 1, 1)}, 2, 2, 2, CellKind::Tet4);
  const DofMap dofs = DofMap::for_mesh(mesh);

  SparseSystem system(dofs.n_dofs());
  assemble_bulk(mesh, BulkMaterial(5.0, 0.3), nullptr, dofs, system);

  // Consistent right-hand side from a smooth target displacement.
  std::mt19937 gen(4);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd target(dofs.n_dofs());
  for (int i = 0; i < target.size(); ++i) target[i] = unif(gen);
  const Eigen::VectorXd b = system.multiply(target);

  const std::vector<Eigen::VectorXd> modes = rigid_body_modes(mesh, dofs);
  CgOptions options;
  options.tol = 1e-10;
  options.deflation = &modes;
  const SolveReport report = solve_cg(system, b, options);
  REQUIRE(report.converged);

  // The residual is small even though the operator has a six-dimensional
  // kernel; the solution may differ from the target by a rigid motion.
  Eigen::VectorXd residual = b - system.multiply(report.x);
  for (const Eigen::VectorXd& mode : modes)
    residual -= mode.dot(residual) * mode;
  CHECK(residual.norm() < 1e-8 * b.norm());
}
