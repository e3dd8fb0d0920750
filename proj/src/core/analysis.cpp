#include "core/analysis.hpp"

#include "core/config.hpp"
#include "core/tangent.hpp"
#include "core/vtk.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace cutmem {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int axis_index(const std::string& s) {
  if (s == "x" || s == "0") return 0;
  if (s == "y" || s == "1") return 1;
  if (s == "z" || s == "2") return 2;
  fail(Status::InvalidArgument, "axis must be one of x, y, z");
}

Vec3 vec3_of(const json& j) {
  require(j.is_array() && j.size() == 3, Status::InvalidArgument,
          "expected a 3-vector");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

Box box_of(const json& j) {
  Box box;
  box.lo = vec3_of(j.at("lo"));
  box.hi = vec3_of(j.at("hi"));
  for (int d = 0; d < 3; ++d)
    require(box.hi[d] > box.lo[d], Status::InvalidArgument,
            "domain box must have positive extent");
  return box;
}

CellKind cell_kind_of(const std::string& s) {
  if (s == "tet4") return CellKind::Tet4;
  if (s == "hex8") return CellKind::Hex8;
  fail(Status::InvalidArgument, "mesh kind must be tet4 or hex8");
}

LevelSet level_set_of(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "cylinder") {
    const auto& c = j.at("center");
    require(c.is_array() && c.size() == 2, Status::InvalidArgument,
            "cylinder center must be a 2-vector in the transverse plane");
    return LevelSet::cylinder(axis_index(j.at("axis").get<std::string>()),
                              c[0].get<double>(), c[1].get<double>(),
                              j.at("radius").get<double>());
  }
  if (kind == "oblate") return LevelSet::oblate();
  if (kind == "plane")
    return LevelSet::plane(vec3_of(j.at("normal")), j.at("offset").get<double>());
  fail(Status::InvalidArgument, "level set kind must be cylinder, oblate, or plane");
}

MembraneMaterial membrane_of(const json& j) {
  return MembraneMaterial(j.at("E").get<double>(), j.at("nu").get<double>(),
                          j.at("t").get<double>());
}

CgOptions solver_of(const json& j) {
  CgOptions opt;
  opt.tol = j.at("tol").get<double>();
  opt.max_iter = j.at("max_iter").get<int>();
  return opt;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  require(out.good(), Status::Io, "cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
}

json finite_or_string(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

double finish_rate(std::vector<ConvergenceRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0) {
      rows[i].rate = std::numeric_limits<double>::quiet_NaN();
    } else {
      rows[i].rate = convergence_rate(rows[i - 1].error, rows[i].error,
                                      rows[i - 1].h, rows[i].h);
    }
  }
  return rows.empty() ? 0.0 : rows.back().error;
}

json rows_to_json(const std::vector<ConvergenceRow>& rows) {
  json out = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    json r{{"h", rows[i].h},
           {"nno", rows[i].nno},
           {"ndof", rows[i].ndof},
           {"error", rows[i].error}};
    if (i > 0 && std::isfinite(rows[i].rate)) r["rate"] = rows[i].rate;
    out.push_back(std::move(r));
  }
  return out;
}

json solver_log(const SolveReport& report) {
  return json{{"iterations", report.iterations},
              {"converged", report.converged},
              {"relative_residual", report.relative_residual}};
}

json surface_log(const CutSurface& surface, const ActiveMesh& active) {
  return json{{"active_cells", static_cast<long>(active.cells.size())},
              {"band_nodes", static_cast<long>(active.band_nodes.size())},
              {"interior_faces", static_cast<long>(active.interior_faces.size())},
              {"triangles", static_cast<long>(surface.tris.size())},
              {"area", surface.total_area},
              {"skipped_degenerate", surface.skipped_degenerate},
              {"skipped_disconnected", surface.skipped_disconnected}};
}

// Displacement spread over all mesh vertices (zeros off the dof map), for
// volume output.
std::vector<double> nodal_displacement(const BackgroundMesh& mesh,
                                       const DofMap& dofs,
                                       const Eigen::VectorXd& u) {
  std::vector<double> out(static_cast<std::size_t>(3) * mesh.num_vertices(), 0.0);
  for (int node : dofs.nodes())
    for (int c = 0; c < 3; ++c)
      out[static_cast<std::size_t>(3) * node + c] = u[dofs.dof(node, c)];
  return out;
}

} // namespace

double convergence_rate(double error_prev, double error, double h_prev, double h) {
  require(error_prev > 0.0 && error > 0.0 && h_prev > 0.0 && h > 0.0,
          Status::InvalidArgument, "rates need positive errors and mesh sizes");
  require(h != h_prev, Status::InvalidArgument,
          "rates need two distinct mesh sizes");
  return std::log(error_prev / error) / std::log(h_prev / h);
}

// ---------------------------------------------------------------------------
// Exact solutions
// ---------------------------------------------------------------------------

double exact_cylinder_stress(double x_axial, double F, double r, double L,
                             double thickness) {
  require(r > 0.0 && L > 0.0 && thickness > 0.0, Status::InvalidArgument,
          "cylinder geometry must be positive");
  const double s = x_axial / L;
  return F * (1.0 - s * s) / (4.0 * std::numbers::pi * r * thickness);
}

double cylinder_load_density(double x_axial, double F, double r, double L) {
  require(r > 0.0 && L > 0.0, Status::InvalidArgument,
          "cylinder geometry must be positive");
  return F / (2.0 * std::numbers::pi * r) * x_axial / (L * L);
}

Vec3 project_to_oblate(const Vec3& x) {
  Vec3 y = x;
  for (int it = 0; it < 50; ++it) {
    const double rho = y.x() * y.x() + y.y() * y.y() + 4.0 * y.z() * y.z() - 1.0;
    if (std::abs(rho) < 1e-13) return y;
    const Vec3 g = oblate_gradient(y);
    const double gg = g.squaredNorm();
    require(gg > 1e-20, Status::Geometry,
            "projection onto the spheroid hit a vanishing gradient");
    y -= (rho / gg) * g;
  }
  fail(Status::Geometry, "projection onto the spheroid did not converge");
}

OblateExact oblate_manufactured(const Vec3& x, const MembraneMaterial& material) {
  const double rho = x.x() * x.x() + x.y() * x.y() + 4.0 * x.z() * x.z() - 1.0;
  require(std::abs(rho) <= 1e-6, Status::InvalidArgument,
          "manufactured spheroid fields need a point on the surface");

  const double mu = material.mu();
  const double lambda = material.lambda();

  // Extension of the surface stress through the level-set normal; the
  // displacement field is u = (x, 0, 0), so its gradient is e1 (x) e1.
  auto stress_at = [&](const Vec3& y) {
    const Mat3 P = projector(oblate_gradient(y).normalized());
    Mat3 grad = Mat3::Zero();
    grad(0, 0) = 1.0;
    return membrane_stress(surface_strain(grad, P), P, mu, lambda);
  };

  OblateExact out;
  out.u = Vec3(x.x(), 0.0, 0.0);
  out.sigma = stress_at(x);

  // Surface divergence of the stress by central differences along an
  // orthonormal tangent frame.
  const Vec3 n = oblate_gradient(x).normalized();
  int drop = 0;
  for (int d = 1; d < 3; ++d)
    if (std::abs(n[d]) < std::abs(n[drop])) drop = d;
  const Vec3 t1 = (Vec3::Unit(drop) - n * n[drop]).normalized();
  const Vec3 t2 = n.cross(t1);

  const double step = 1e-5;
  Vec3 div = Vec3::Zero();
  for (const Vec3& t : {t1, t2}) {
    const Mat3 d = (stress_at(x + step * t) - stress_at(x - step * t)) / (2.0 * step);
    div += d * t;
  }
  out.f = -material.thickness * div;
  return out;
}

// ---------------------------------------------------------------------------
// Stress recovery and error norms
// ---------------------------------------------------------------------------

std::vector<Mat3> recover_stress(const CutSurface& surface, const DofMap& dofs,
                                 const Eigen::VectorXd& u,
                                 const MembraneMaterial& material) {
  require(surface.mesh != nullptr, Status::InvalidArgument, "surface has no mesh");
  require(u.size() == dofs.n_dofs(), Status::InvalidArgument,
          "displacement length does not match the dof map");
  const BackgroundMesh& mesh = *surface.mesh;
  const ReferenceBasis basis(mesh.kind);
  const int nn = basis.n_nodes();
  const double mu = material.mu();
  const double lambda = material.lambda();

  std::vector<Mat3> out;
  out.reserve(surface.tris.size() * 3);
  Vec3 xs[8];
  double N[8];
  Vec3 grad[8];
  for (const SurfaceTriangle& tri : surface.tris) {
    mesh.cell_coords(tri.cell, xs);
    const auto ids = mesh.cell(tri.cell);
    const Mat3 P = projector(tri.normal);
    for (int q = 0; q < tri.n_qp; ++q) {
      basis.eval({xs, static_cast<std::size_t>(nn)}, tri.qp[q].xi, N, grad);
      Mat3 du = Mat3::Zero();
      for (int i = 0; i < nn; ++i) {
        const Vec3 ui(u[dofs.dof(ids[i], 0)], u[dofs.dof(ids[i], 1)],
                      u[dofs.dof(ids[i], 2)]);
        du += ui * grad[i].transpose();
      }
      out.push_back(membrane_stress(surface_strain(du, P), P, mu, lambda));
    }
  }
  return out;
}

double stress_error_l2(const CutSurface& surface, const std::vector<Mat3>& sigma_h,
                       const StressField& exact) {
  std::size_t k = 0;
  double sum = 0.0;
  for (const SurfaceTriangle& tri : surface.tris)
    for (int q = 0; q < tri.n_qp; ++q, ++k) {
      require(k < sigma_h.size(), Status::InvalidArgument,
              "stress sample count does not match the surface");
      sum += tri.qp[q].weight * (sigma_h[k] - exact(tri.qp[q].x, tri)).squaredNorm();
    }
  require(k == sigma_h.size(), Status::InvalidArgument,
          "stress sample count does not match the surface");
  return std::sqrt(sum);
}

double stress_l2_norm(const CutSurface& surface, const StressField& field) {
  double sum = 0.0;
  for (const SurfaceTriangle& tri : surface.tris)
    for (int q = 0; q < tri.n_qp; ++q)
      sum += tri.qp[q].weight * field(tri.qp[q].x, tri).squaredNorm();
  return std::sqrt(sum);
}

std::vector<Vec3> surface_displacement(const CutSurface& surface, const DofMap& dofs,
                                       const Eigen::VectorXd& u) {
  require(surface.mesh != nullptr, Status::InvalidArgument, "surface has no mesh");
  const BackgroundMesh& mesh = *surface.mesh;
  const ReferenceBasis basis(mesh.kind);
  const int nn = basis.n_nodes();

  std::vector<Vec3> out;
  out.reserve(surface.tris.size() * 3);
  Vec3 xs[8];
  double N[8];
  for (const SurfaceTriangle& tri : surface.tris) {
    mesh.cell_coords(tri.cell, xs);
    const auto ids = mesh.cell(tri.cell);
    for (int j = 0; j < 3; ++j) {
      const Vec3 xi =
          basis.map_to_reference({xs, static_cast<std::size_t>(nn)}, tri.v[j]);
      basis.shape(xi, N);
      Vec3 uj = Vec3::Zero();
      for (int i = 0; i < nn; ++i)
        uj += N[i] * Vec3(u[dofs.dof(ids[i], 0)], u[dofs.dof(ids[i], 1)],
                          u[dofs.dof(ids[i], 2)]);
      out.push_back(uj);
    }
  }
  return out;
}

std::vector<Mat3> triangle_stress(const CutSurface& surface,
                                  const std::vector<Mat3>& sigma_qp) {
  std::vector<Mat3> out;
  out.reserve(surface.tris.size());
  std::size_t k = 0;
  for (const SurfaceTriangle& tri : surface.tris) {
    Mat3 avg = Mat3::Zero();
    for (int q = 0; q < tri.n_qp; ++q, ++k) {
      require(k < sigma_qp.size(), Status::InvalidArgument,
              "stress sample count does not match the surface");
      avg += sigma_qp[k];
    }
    out.push_back(avg / std::max(tri.n_qp, 1));
  }
  return out;
}

Eigen::VectorXd interpolate_field(const BackgroundMesh& mesh, const DofMap& dofs,
                                  const VectorField& field) {
  Eigen::VectorXd out(dofs.n_dofs());
  for (int node : dofs.nodes()) {
    const Vec3 v = field(mesh.vertices[node]);
    for (int c = 0; c < 3; ++c) out[dofs.dof(node, c)] = v[c];
  }
  return out;
}

SolveReport solve_with_lifting(SparseSystem& system, const DofMap& dofs,
                               const Eigen::VectorXd& lift,
                               const CgOptions& options) {
  require(lift.size() == system.dim(), Status::InvalidArgument,
          "lifting vector length does not match the system");
  system.rhs() -= system.multiply(lift);
  system.apply_dirichlet(dofs);
  SolveReport report = solve_cg(system, options);
  report.x += lift;
  return report;
}

// ---------------------------------------------------------------------------
// Benchmark drivers
// ---------------------------------------------------------------------------

namespace {

BenchmarkResult run_cylinder(const json& cfg, const std::string& out_dir) {
  const Box box = box_of(cfg.at("domain"));
  const CellKind kind = cell_kind_of(cfg.at("mesh").at("kind").get<std::string>());
  const auto levels = cfg.at("mesh").at("levels").get<std::vector<int>>();
  const double jitter = cfg.at("mesh").at("jitter").get<double>();
  const auto seed = cfg.at("mesh").at("seed").get<std::uint64_t>();
  const LevelSet ls = level_set_of(cfg.at("levelset"));
  require(ls.kind == LevelSet::Kind::Cylinder, Status::InvalidArgument,
          "the cylinder benchmark needs a cylinder level set");
  const MembraneMaterial material = membrane_of(cfg.at("material"));
  const double tau0 = cfg.at("stabilization").at("tau0").get<double>();
  const double F = cfg.at("load").at("F").get<double>();
  const CgOptions cg = solver_of(cfg.at("solver"));
  const bool write_vtk = cfg.at("output").at("write_vtk").get<bool>();

  const int a = ls.axis;
  const double L = box.hi[a] - box.lo[a];
  const double r = ls.radius;
  const unsigned axial_mask = 1u << a;

  BenchmarkResult result;
  result.name = "cylinder";
  json level_logs = json::array();

  for (std::size_t li = 0; li < levels.size(); ++li) {
    const int k = levels[li];
    require(k > 0, Status::InvalidArgument, "mesh levels must be positive");
    const auto t0 = Clock::now();

    int subs[3];
    for (int d = 0; d < 3; ++d) subs[d] = (d == a) ? 5 * k : 3 * k;
    BackgroundMesh mesh = build_structured(box, subs[0], subs[1], subs[2], kind);
    if (jitter > 0.0) mesh = jitter_interior(mesh, jitter, seed);
    mesh.build_faces();

    const DiscreteLevelSet phi = discretize(ls, mesh);
    const ActiveMesh active = classify(phi);
    const CutSurface surface = extract_surface(active);

    DofMap dofs = DofMap::for_band(active);
    const DirichletSet held = dirichlet_nodes(
        active, NodePool::Band, NodePredicate::plane(a, box.lo[a]), axial_mask,
        "held end");
    const DirichletSet guided = dirichlet_nodes(
        active, NodePool::Band, NodePredicate::plane(a, box.hi[a]),
        kCompAll & ~axial_mask, "guided end");
    dofs.constrain(held);
    dofs.constrain(guided);

    SparseSystem system(dofs.n_dofs());
    assemble_membrane(surface, material, dofs, system);
    if (tau0 > 0.0) assemble_stabilization(active, tau0, dofs, system);
    const VectorField load = [&](const Vec3& x) {
      Vec3 f = Vec3::Zero();
      f[a] = cylinder_load_density(x[a] - box.lo[a], F, r, L);
      return f;
    };
    assemble_membrane_load(surface, load, dofs, system);
    system.apply_dirichlet(dofs);

    const SolveReport report = solve_cg(system, cg);
    const std::vector<Mat3> sigma_qp = recover_stress(surface, dofs, report.x, material);

    const StressField exact = [&](const Vec3& x, const SurfaceTriangle& tri) {
      Vec3 dir = projector(tri.normal) * Vec3::Unit(a);
      const double len = dir.norm();
      Mat3 out = Mat3::Zero();
      if (len < 1e-12) return out;
      dir /= len;
      const double s =
          exact_cylinder_stress(x[a] - box.lo[a], F, r, L, material.thickness);
      out = s * dir * dir.transpose();
      return out;
    };
    const double error = stress_error_l2(surface, sigma_qp, exact);

    ConvergenceRow row;
    row.h = mesh_size(mesh);
    row.nno = mesh.num_vertices();
    row.ndof = dofs.n_dofs() - dofs.n_constrained();
    row.error = error;
    result.rows.push_back(row);

    json entry{{"level", k},
               {"subdivisions", {subs[0], subs[1], subs[2]}},
               {"h", row.h},
               {"nno", row.nno},
               {"ndof", row.ndof},
               {"error", error},
               {"surface", surface_log(surface, active)},
               {"solver", solver_log(report)},
               {"seconds", seconds_since(t0)}};
    if (held.empty || guided.empty)
      entry["warnings"] = json::array({"a boundary condition matched no nodes"});

    if (write_vtk && !out_dir.empty()) {
      const auto tri_sigma = triangle_stress(surface, sigma_qp);
      const auto tri_disp = surface_displacement(surface, dofs, report.x);
      write_surface_vtk(join_path(out_dir, "surface_k" + std::to_string(k) + ".vtk"),
                        surface, &tri_sigma, &tri_disp);
      if (li == 0) {
        const auto disp = nodal_displacement(mesh, dofs, report.x);
        write_mesh_vtk(join_path(out_dir, "mesh_k" + std::to_string(k) + ".vtk"),
                       mesh, &disp, &phi.phi, "phi");
      }
    }
    level_logs.push_back(std::move(entry));
  }

  finish_rate(result.rows);
  result.log["levels"] = std::move(level_logs);
  result.log["rows"] = rows_to_json(result.rows);
  if (!out_dir.empty())
    write_convergence_csv(join_path(out_dir, "convergence.csv"), result.rows);
  return result;
}

BenchmarkResult run_oblate(const json& cfg, const std::string& out_dir) {
  const Box box = box_of(cfg.at("domain"));
  const CellKind kind = cell_kind_of(cfg.at("mesh").at("kind").get<std::string>());
  const auto levels = cfg.at("mesh").at("levels").get<std::vector<int>>();
  const double jitter = cfg.at("mesh").at("jitter").get<double>();
  const auto seed = cfg.at("mesh").at("seed").get<std::uint64_t>();
  const LevelSet ls = level_set_of(cfg.at("levelset"));
  require(ls.kind == LevelSet::Kind::Oblate, Status::InvalidArgument,
          "the spheroid benchmark needs the oblate level set");
  const MembraneMaterial material = membrane_of(cfg.at("material"));
  const double tau0 = cfg.at("stabilization").at("tau0").get<double>();
  const CgOptions base_cg = solver_of(cfg.at("solver"));
  const bool write_vtk = cfg.at("output").at("write_vtk").get<bool>();

  BenchmarkResult result;
  result.name = "oblate";
  json level_logs = json::array();

  for (std::size_t li = 0; li < levels.size(); ++li) {
    const int n = levels[li];
    require(n > 0 && n % 3 == 0, Status::InvalidArgument,
            "spheroid mesh levels must be positive multiples of 3");
    const auto t0 = Clock::now();

    BackgroundMesh mesh = build_structured(box, n, n, 2 * n / 3, kind);
    if (jitter > 0.0) mesh = jitter_interior(mesh, jitter, seed);
    mesh.build_faces();

    const DiscreteLevelSet phi = discretize(ls, mesh);
    const ActiveMesh active = classify(phi);
    const CutSurface surface = extract_surface(active);
    const DofMap dofs = DofMap::for_band(active);

    SparseSystem system(dofs.n_dofs());
    assemble_membrane(surface, material, dofs, system);
    if (tau0 > 0.0) assemble_stabilization(active, tau0, dofs, system);
    const VectorField load = [&](const Vec3& x) {
      return oblate_manufactured(project_to_oblate(x), material).f;
    };
    assemble_membrane_load(surface, load, dofs, system);

    // The closed surface carries no boundary conditions; the exact
    // rigid-body fields span the kernel and are deflated out.
    const std::vector<Eigen::VectorXd> rigid = rigid_body_modes(mesh, dofs);
    CgOptions cg = base_cg;
    cg.deflation = &rigid;
    const SolveReport report = solve_cg(system, cg);

    const std::vector<Mat3> sigma_qp = recover_stress(surface, dofs, report.x, material);
    const StressField exact = [&](const Vec3& x, const SurfaceTriangle&) {
      return oblate_manufactured(project_to_oblate(x), material).sigma;
    };
    const double error = stress_error_l2(surface, sigma_qp, exact);

    ConvergenceRow row;
    row.h = mesh_size(mesh);
    row.nno = mesh.num_vertices();
    row.ndof = dofs.n_dofs();
    row.error = error;
    result.rows.push_back(row);

    json entry{{"level", n},
               {"subdivisions", {n, n, 2 * n / 3}},
               {"h", row.h},
               {"nno", row.nno},
               {"ndof", row.ndof},
               {"error", error},
               {"rigid_modes", static_cast<int>(rigid.size())},
               {"surface", surface_log(surface, active)},
               {"solver", solver_log(report)},
               {"seconds", seconds_since(t0)}};

    if (write_vtk && !out_dir.empty()) {
      const auto tri_sigma = triangle_stress(surface, sigma_qp);
      const auto tri_disp = surface_displacement(surface, dofs, report.x);
      write_surface_vtk(join_path(out_dir, "surface_n" + std::to_string(n) + ".vtk"),
                        surface, &tri_sigma, &tri_disp);
      if (li == 0) {
        const auto disp = nodal_displacement(mesh, dofs, report.x);
        write_mesh_vtk(join_path(out_dir, "mesh_n" + std::to_string(n) + ".vtk"),
                       mesh, &disp, &phi.phi, "phi");
      }
    }
    level_logs.push_back(std::move(entry));
  }

  finish_rate(result.rows);
  result.log["levels"] = std::move(level_logs);
  result.log["rows"] = rows_to_json(result.rows);
  if (!out_dir.empty())
    write_convergence_csv(join_path(out_dir, "convergence.csv"), result.rows);
  return result;
}

// Mean displacement component over the mesh vertices of a boundary plane.
double plane_mean_displacement(const BackgroundMesh& mesh, const DofMap& dofs,
                               const Eigen::VectorXd& u, int axis, double value,
                               int comp) {
  double sum = 0.0;
  long count = 0;
  for (int node = 0; node < mesh.num_vertices(); ++node) {
    if (std::abs(mesh.vertices[node][axis] - value) > 1e-9) continue;
    sum += u[dofs.dof(node, comp)];
    ++count;
  }
  require(count > 0, Status::InvalidArgument, "probe plane matched no nodes");
  return sum / static_cast<double>(count);
}

BenchmarkResult run_beam(const json& cfg, const std::string& out_dir,
                         const std::string& name) {
  const Box box = box_of(cfg.at("domain"));
  const CellKind kind = cell_kind_of(cfg.at("mesh").at("kind").get<std::string>());
  const auto subs = cfg.at("mesh").at("subdivisions").get<std::vector<int>>();
  require(subs.size() == 3, Status::InvalidArgument,
          "mesh subdivisions must list three counts");
  const BulkMaterial bulk(cfg.at("bulk").at("E").get<double>(),
                          cfg.at("bulk").at("nu").get<double>());
  const MembraneMaterial material = membrane_of(cfg.at("material"));
  const double tau0 = cfg.at("stabilization").at("tau0").get<double>();
  const Vec3 traction = vec3_of(cfg.at("load").at("traction"));
  const CgOptions cg = solver_of(cfg.at("solver"));
  const bool write_vtk = cfg.at("output").at("write_vtk").get<bool>();
  const bool stiffened = (name == "stiffened-beam");

  BackgroundMesh mesh = build_structured(box, subs[0], subs[1], subs[2], kind);
  mesh.build_faces();

  // Membrane level sets: a stack of parallel planes for the stiffened beam,
  // a single configured surface otherwise.
  std::vector<LevelSet> shapes;
  if (stiffened) {
    const int count = cfg.at("membranes").at("count").get<int>();
    require(count > 0, Status::InvalidArgument, "membrane count must be positive");
    const int ax =
        axis_index(cfg.at("membranes").at("normal_axis").get<std::string>());
    const double extent = box.hi[ax] - box.lo[ax];
    for (int j = 1; j <= count; ++j)
      shapes.push_back(LevelSet::plane(
          Vec3::Unit(ax), box.lo[ax] + (j - 0.5) / count * extent));
  } else {
    shapes.push_back(level_set_of(cfg.at("levelset")));
  }

  const std::size_t nm = shapes.size();
  std::vector<DiscreteLevelSet> phis;
  std::vector<ActiveMesh> actives;
  std::vector<CutSurface> surfaces;
  phis.reserve(nm);
  actives.reserve(nm);
  surfaces.reserve(nm);
  std::vector<EmbeddedMembrane> membranes;
  for (const LevelSet& shape : shapes) {
    phis.push_back(discretize(shape, mesh));
    actives.push_back(classify(phis.back()));
    surfaces.push_back(extract_surface(actives.back()));
  }
  for (std::size_t m = 0; m < nm; ++m)
    membranes.push_back({&actives[m], &surfaces[m], material});

  DofMap dofs = DofMap::for_mesh(mesh);
  const DirichletSet clamp =
      dirichlet_nodes(actives[0], NodePool::DomainBoundary,
                      NodePredicate::plane(0, box.lo[0]), kCompAll, "clamped end");
  dofs.constrain(clamp);

  // Load face and probe: the stiffened beam is pulled axially at x = hi and
  // probed there; the bending beam is pressed on top and probed at the tip.
  const NodePredicate load_face = stiffened
                                      ? NodePredicate::plane(0, box.hi[0])
                                      : NodePredicate::plane(2, box.hi[2]);
  const int probe_comp = stiffened ? 0 : 2;

  const auto solve_one = [&](bool with_membranes) {
    SparseSystem system(dofs.n_dofs());
    if (with_membranes) {
      assemble_coupled(mesh, bulk, membranes, tau0, dofs, system);
    } else {
      assemble_bulk(mesh, bulk, nullptr, dofs, system);
    }
    assemble_boundary_traction(mesh, load_face, traction, dofs, system);
    system.apply_dirichlet(dofs);
    return solve_cg(system, cg);
  };

  const auto t0 = Clock::now();
  const SolveReport bare = solve_one(false);
  const SolveReport coupled = solve_one(true);

  const double probe_bare =
      plane_mean_displacement(mesh, dofs, bare.x, 0, box.hi[0], probe_comp);
  const double probe_coupled =
      plane_mean_displacement(mesh, dofs, coupled.x, 0, box.hi[0], probe_comp);

  BenchmarkResult result;
  result.name = name;
  json membrane_logs = json::array();
  for (std::size_t m = 0; m < nm; ++m)
    membrane_logs.push_back(surface_log(surfaces[m], actives[m]));
  result.log["membranes"] = std::move(membrane_logs);
  result.log["solver_without_membranes"] = solver_log(bare);
  result.log["solver_with_membranes"] = solver_log(coupled);
  result.log["probe"] = {
      {"component", probe_comp},
      {"mean_without_membranes", probe_bare},
      {"mean_with_membranes", probe_coupled},
      {"ratio", probe_coupled / probe_bare}};
  result.log["seconds"] = seconds_since(t0);

  if (write_vtk && !out_dir.empty()) {
    const auto disp = nodal_displacement(mesh, dofs, coupled.x);
    write_mesh_vtk(join_path(out_dir, "mesh.vtk"), mesh, &disp, &phis[0].phi, "phi");
    for (std::size_t m = 0; m < nm; ++m) {
      const auto sigma_qp = recover_stress(surfaces[m], dofs, coupled.x, material);
      const auto tri_sigma = triangle_stress(surfaces[m], sigma_qp);
      const auto tri_disp = surface_displacement(surfaces[m], dofs, coupled.x);
      write_surface_vtk(
          join_path(out_dir, "membrane_" + std::to_string(m) + ".vtk"),
          surfaces[m], &tri_sigma, &tri_disp);
    }
  }
  return result;
}

BenchmarkResult run_conditioning(const json& cfg, const std::string& out_dir) {
  const Box box = box_of(cfg.at("domain"));
  const CellKind kind = cell_kind_of(cfg.at("mesh").at("kind").get<std::string>());
  const auto subs = cfg.at("mesh").at("subdivisions").get<std::vector<int>>();
  require(subs.size() == 3, Status::InvalidArgument,
          "mesh subdivisions must list three counts");
  const LevelSet base = level_set_of(cfg.at("levelset"));
  require(base.kind == LevelSet::Kind::Plane, Status::InvalidArgument,
          "the conditioning sweep needs a plane level set");
  const MembraneMaterial material = membrane_of(cfg.at("material"));
  const auto taus = cfg.at("taus").get<std::vector<double>>();
  const double benign = cfg.at("benign_delta").get<double>();
  const auto deltas = cfg.at("deltas").get<std::vector<double>>();
  require(!taus.empty() && !deltas.empty(), Status::InvalidArgument,
          "the conditioning sweep needs penalties and offsets");

  BackgroundMesh mesh = build_structured(box, subs[0], subs[1], subs[2], kind);
  mesh.build_faces();
  const double h = mesh_size(mesh);

  // Plane normal picks the out-of-plane displacement component; the membrane
  // is clamped along one in-plane edge of the band.
  int normal_axis = 0;
  for (int d = 1; d < 3; ++d)
    if (std::abs(base.normal[d]) > std::abs(base.normal[normal_axis]))
      normal_axis = d;
  const int clamp_axis = (normal_axis == 0) ? 1 : 0;
  const unsigned flat_mask = 1u << normal_axis;

  std::vector<double> all_deltas;
  all_deltas.push_back(benign);
  all_deltas.insert(all_deltas.end(), deltas.begin(), deltas.end());

  BenchmarkResult result;
  result.name = "conditioning";
  json sweep = json::array();

  for (const double delta : all_deltas) {
    const LevelSet ls = LevelSet::plane(base.normal, base.offset + delta * h);
    const DiscreteLevelSet phi = discretize(ls, mesh);
    const ActiveMesh active = classify(phi);
    const CutSurface surface = extract_surface(active);

    DofMap dofs = DofMap::for_band(active);
    dofs.constrain(dirichlet_nodes(active, NodePool::Band,
                                   NodePredicate::plane(clamp_axis, box.lo[clamp_axis]),
                                   kCompAll, "clamped edge"));
    dofs.constrain(dirichlet_nodes(active, NodePool::Band, NodePredicate::all(),
                                   flat_mask, "out of plane"));

    json entry{{"delta", delta},
               {"offset", ls.offset},
               {"h", h},
               {"ndof", dofs.n_dofs() - dofs.n_constrained()},
               {"taus", json::array()}};

    for (const double tau : taus) {
      SparseSystem system(dofs.n_dofs());
      assemble_membrane(surface, material, dofs, system);
      if (tau > 0.0) assemble_stabilization(active, tau, dofs, system);
      system.apply_dirichlet(dofs);
      const ConditionEstimate est = estimate_condition(system);
      entry["taus"].push_back(json{{"tau0", tau},
                                   {"kappa", finite_or_string(est.kappa)},
                                   {"lambda_max", est.lambda_max},
                                   {"lambda_min", est.lambda_min},
                                   {"lower_bound_only", est.lower_bound_only}});
    }
    sweep.push_back(std::move(entry));
  }

  result.log["sweep"] = std::move(sweep);
  result.log["benign_delta"] = benign;

  if (!out_dir.empty()) {
    std::ofstream csv(join_path(out_dir, "conditioning.csv"));
    require(csv.good(), Status::Io, "cannot write the conditioning table");
    csv << "delta";
    for (const double tau : taus) {
      std::ostringstream t;
      t << "kappa_tau_" << tau;
      csv << "," << t.str();
    }
    csv << "\n" << std::setprecision(12);
    for (const auto& entry : result.log["sweep"]) {
      csv << entry["delta"].get<double>();
      for (const auto& tl : entry["taus"]) {
        csv << ",";
        if (tl["kappa"].is_number())
          csv << tl["kappa"].get<double>();
        else
          csv << tl["kappa"].get<std::string>();
      }
      csv << "\n";
    }
  }
  return result;
}

} // namespace

BenchmarkResult run_benchmark(const std::string& name, const json& overrides,
                              const std::string& out_dir, bool deterministic) {
  const json cfg = merge_config(default_config(name), overrides);
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  const auto t0 = Clock::now();
  BenchmarkResult result;
  if (name == "cylinder") {
    result = run_cylinder(cfg, out_dir);
  } else if (name == "oblate") {
    result = run_oblate(cfg, out_dir);
  } else if (name == "stiffened-beam" || name == "bending-beam") {
    result = run_beam(cfg, out_dir, name);
  } else if (name == "conditioning") {
    result = run_conditioning(cfg, out_dir);
  } else {
    fail(Status::InvalidArgument, "unknown benchmark '" + name + "'");
  }

  result.log["benchmark"] = name;
  result.log["config"] = cfg;
  result.log["deterministic"] = deterministic;
  result.log["elapsed_seconds"] = seconds_since(t0);
  if (!out_dir.empty())
    write_json_file(join_path(out_dir, "run_log.json"), result.log);
  return result;
}

void write_convergence_csv(const std::string& path,
                           const std::vector<ConvergenceRow>& rows) {
  std::ofstream out(path);
  require(out.good(), Status::Io, "cannot open '" + path + "' for writing");
  out << "h,nno,ndof,error,rate\n" << std::setprecision(12);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << rows[i].h << "," << rows[i].nno << "," << rows[i].ndof << ","
        << rows[i].error << ",";
    if (i > 0 && std::isfinite(rows[i].rate)) out << rows[i].rate;
    out << "\n";
  }
}

} // namespace cutmem
