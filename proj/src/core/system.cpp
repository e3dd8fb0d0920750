#include "core/system.hpp"

#include <algorithm>
#include <cmath>

namespace cutmem {

DofMap DofMap::for_band(const ActiveMesh& active) {
  DofMap map;
  map.nodes_ = active.band_nodes;
  map.node_to_local_.assign(active.mesh->num_vertices(), -1);
  for (std::size_t i = 0; i < map.nodes_.size(); ++i)
    map.node_to_local_[map.nodes_[i]] = static_cast<int>(i);
  map.constrained_.assign(map.n_dofs(), 0);
  return map;
}

DofMap DofMap::for_mesh(const BackgroundMesh& mesh) {
  DofMap map;
  map.nodes_.resize(mesh.num_vertices());
  for (int i = 0; i < mesh.num_vertices(); ++i) map.nodes_[i] = i;
  map.node_to_local_ = map.nodes_;
  map.constrained_.assign(map.n_dofs(), 0);
  return map;
}

void DofMap::constrain(const DirichletSet& set) {
  for (int node : set.nodes) {
    const int l = local(node);
    require(l >= 0, Status::InvalidArgument,
            "constrained node carries no dofs");
    for (int c = 0; c < 3; ++c)
      if (set.components & (1u << c)) constrained_[3 * l + c] = 1;
  }
}

int DofMap::n_constrained() const {
  return static_cast<int>(
      std::count(constrained_.begin(), constrained_.end(), char(1)));
}

SparseSystem::SparseSystem(int n) : n_(n), rhs_(Eigen::VectorXd::Zero(n)) {
  require(n > 0, Status::InvalidArgument, "system dimension must be positive");
}

const Eigen::SparseMatrix<double>& SparseSystem::matrix() const {
  if (!fresh_) {
    mat_.resize(n_, n_);
    mat_.setFromTriplets(trip_.begin(), trip_.end());
    mat_.makeCompressed();
    fresh_ = true;
  }
  return mat_;
}

void SparseSystem::apply_dirichlet(const DofMap& dofs) {
  require(dofs.n_dofs() == n_, Status::InvalidArgument,
          "dof map does not match system size");
  const auto& fixed = dofs.constrained();
  std::vector<Eigen::Triplet<double>> kept;
  kept.reserve(trip_.size());
  for (const auto& t : trip_)
    if (!fixed[t.row()] && !fixed[t.col()]) kept.push_back(t);
  for (int i = 0; i < n_; ++i)
    if (fixed[i]) {
      kept.emplace_back(i, i, 1.0);
      rhs_[i] = 0.0;
    }
  trip_ = std::move(kept);
  fresh_ = false;
}

Eigen::VectorXd SparseSystem::multiply(const Eigen::VectorXd& x) const {
  return matrix() * x;
}

double SparseSystem::energy(const Eigen::VectorXd& v) const {
  return v.dot(matrix() * v);
}

double SparseSystem::symmetry_error() const {
  const auto& A = matrix();
  Eigen::SparseMatrix<double> D = A - Eigen::SparseMatrix<double>(A.transpose());
  double m = 0.0;
  for (int k = 0; k < D.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(D, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

double SparseSystem::max_abs() const {
  const auto& A = matrix();
  double m = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

} // namespace cutmem
