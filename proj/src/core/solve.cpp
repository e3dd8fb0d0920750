#include "core/solve.hpp"

#include <cmath>

namespace cutmem {

namespace {

void project_out(const std::vector<Eigen::VectorXd>* basis,
                 Eigen::VectorXd& v) {
  if (!basis) return;
  for (const auto& q : *basis) v -= q.dot(v) * q;
}

} // namespace

SolveReport solve_cg(const SparseSystem& system, const CgOptions& opt) {
  return solve_cg(system, system.rhs(), opt);
}

SolveReport solve_cg(const SparseSystem& system, const Eigen::VectorXd& rhs,
                     const CgOptions& opt) {
  require(opt.tol > 0.0, Status::InvalidArgument, "tolerance must be positive");
  const auto& A = system.matrix();
  const int n = system.dim();
  require(rhs.size() == n, Status::InvalidArgument,
          "rhs length does not match system size");
  const int max_iter = opt.max_iter > 0 ? opt.max_iter : 20 * n;

  Eigen::VectorXd diag_inv(n);
  for (int i = 0; i < n; ++i) {
    const double d = A.coeff(i, i);
    diag_inv[i] = d > 0.0 ? 1.0 / d : 1.0;
  }

  Eigen::VectorXd b = rhs;
  project_out(opt.deflation, b);
  const double bnorm = b.norm();

  SolveReport report;
  report.x = Eigen::VectorXd::Zero(n);
  if (bnorm == 0.0) {
    report.converged = true;
    return report;
  }

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = diag_inv.asDiagonal() * r;
  project_out(opt.deflation, z);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  report.residual_history.push_back(std::sqrt(std::max(rz, 0.0)));

  for (int it = 0; it < max_iter; ++it) {
    Eigen::VectorXd Ap = A * p;
    project_out(opt.deflation, Ap);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) break; // lost positive definiteness
    const double alpha = rz / pAp;
    report.x += alpha * p;
    r -= alpha * Ap;
    z = diag_inv.asDiagonal() * r;
    project_out(opt.deflation, z);
    const double rz_next = r.dot(z);
    report.residual_history.push_back(std::sqrt(std::max(rz_next, 0.0)));
    report.iterations = it + 1;
    if (r.norm() <= opt.tol * bnorm) break;
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }

  Eigen::VectorXd true_res = b - A * report.x;
  project_out(opt.deflation, true_res);
  report.relative_residual = true_res.norm() / bnorm;
  report.converged = report.relative_residual <= opt.tol;
  return report;
}

ConditionEstimate estimate_condition(const SparseSystem& system) {
  const auto& A = system.matrix();
  const int n = system.dim();
  ConditionEstimate est;

  // largest eigenvalue by power iteration on a deterministic start vector
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.01 * std::sin(1.0 + i);
  v.normalize();
  double lmax = 0.0;
  for (int it = 0; it < 500; ++it) {
    Eigen::VectorXd w = A * v;
    const double lam = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) break;
    w /= nw;
    if (it > 3 && std::abs(lam - lmax) <= 1e-10 * std::abs(lam)) {
      lmax = lam;
      break;
    }
    lmax = lam;
    v = w;
  }
  est.lambda_max = lmax;

  // smallest eigenvalue by inverse iteration; each step solves with CG
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w[i] = std::cos(2.0 + 3.0 * i);
  w.normalize();
  double lmin = 0.0;
  bool failed = false;
  for (int it = 0; it < 30; ++it) {
    CgOptions opt;
    opt.tol = 1e-8;
    opt.max_iter = 10 * n;
    SolveReport sol = solve_cg(system, w, opt);
    if (!sol.converged) {
      failed = true;
      break;
    }
    const double ny = sol.x.norm();
    if (ny == 0.0) {
      failed = true;
      break;
    }
    Eigen::VectorXd next = sol.x / ny;
    const double lam = next.dot(A * next);
    const bool settled = it > 2 && std::abs(lam - lmin) <= 1e-8 * std::abs(lam);
    lmin = lam;
    w = next;
    if (settled) break;
  }

  if (failed || !(lmin > 0.0)) {
    est.lower_bound_only = true;
    est.lambda_min = 0.0;
    est.kappa = std::numeric_limits<double>::infinity();
  } else {
    est.lambda_min = lmin;
    est.kappa = lmax / lmin;
  }
  return est;
}

std::vector<Eigen::VectorXd> rigid_body_modes(const BackgroundMesh& mesh,
                                              const DofMap& dofs) {
  const int n = dofs.n_dofs();
  Vec3 centroid = Vec3::Zero();
  for (int node : dofs.nodes()) centroid += mesh.vertices[node];
  centroid /= static_cast<double>(dofs.n_nodes());

  std::vector<Eigen::VectorXd> modes;
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < dofs.n_nodes(); ++i) m[3 * i + k] = 1.0;
    modes.push_back(m);
  }
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd m = Eigen::VectorXd::Zero(n);
    const Vec3 axis = Vec3::Unit(k);
    for (int i = 0; i < dofs.n_nodes(); ++i) {
      const Vec3 r = mesh.vertices[dofs.nodes()[i]] - centroid;
      const Vec3 v = axis.cross(r);
      for (int c = 0; c < 3; ++c) m[3 * i + c] = v[c];
    }
    modes.push_back(m);
  }

  // Gram-Schmidt; drop modes that collapse (flat node sets)
  std::vector<Eigen::VectorXd> basis;
  for (auto& m : modes) {
    for (const auto& q : basis) m -= q.dot(m) * q;
    const double nm = m.norm();
    if (nm > 1e-12 * std::sqrt(static_cast<double>(n))) basis.push_back(m / nm);
  }
  return basis;
}

} // namespace cutmem
