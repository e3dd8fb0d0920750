#pragma once

/**
 * @file system.hpp
 * @brief Vector-valued dof numbering and the assembled sparse system.
 */

#include <Eigen/Sparse>
#include <vector>

#include "core/level_set.hpp"
#include "core/types.hpp"

namespace cutmem {

// Three displacement dofs per participating node. Nodes keep their mesh ids;
// dofs are dense: dof = 3 * local(node) + component.
class DofMap {
public:
  static DofMap for_band(const ActiveMesh& active);
  static DofMap for_mesh(const BackgroundMesh& mesh);

  int n_nodes() const { return static_cast<int>(nodes_.size()); }
  int n_dofs() const { return 3 * n_nodes(); }
  const std::vector<int>& nodes() const { return nodes_; }

  int local(int node) const { return node_to_local_[node]; }
  int dof(int node, int comp) const {
    const int l = local(node);
    require(l >= 0, Status::InvalidArgument, "node carries no dofs");
    return 3 * l + comp;
  }

  // Marks homogeneous constraints for the selected components.
  void constrain(const DirichletSet& set);

  bool is_constrained(int dof) const { return constrained_[dof] != 0; }
  const std::vector<char>& constrained() const { return constrained_; }
  int n_constrained() const;

private:
  std::vector<int> nodes_;
  std::vector<int> node_to_local_;
  std::vector<char> constrained_;
};

class SparseSystem {
public:
  explicit SparseSystem(int n);

  int dim() const { return n_; }

  void add(int i, int j, double v) { trip_.emplace_back(i, j, v); }
  void add_rhs(int i, double v) { rhs_[i] += v; }

  Eigen::VectorXd& rhs() { return rhs_; }
  const Eigen::VectorXd& rhs() const { return rhs_; }

  // Duplicate triplets are summed on compression; the compressed matrix is
  // cached until more entries arrive.
  const Eigen::SparseMatrix<double>& matrix() const;

  // Symmetric elimination of constrained dofs: their rows and columns are
  // dropped, the diagonal gets a unit entry, and the rhs entry is zeroed.
  void apply_dirichlet(const DofMap& dofs);

  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  double energy(const Eigen::VectorXd& v) const; // v^T A v
  double symmetry_error() const;                 // max |A - A^T|
  double max_abs() const;

private:
  int n_ = 0;
  std::vector<Eigen::Triplet<double>> trip_;
  Eigen::VectorXd rhs_;
  mutable Eigen::SparseMatrix<double> mat_;
  mutable bool fresh_ = false;
};

} // namespace cutmem
