#pragma once

#include <string_view>
#include <vector>

#include "mstree/innovations_tree.hpp"
#include "mstree/topology.hpp"

namespace mstree {

enum class Progression { positive, negative, mixed };

std::string_view to_string(Progression p);

/// Symmetric tree whose leaf-pair covariance depends only on proximity:
/// cov(leaf_a, leaf_b) = c[proximity(a, b)], with c[depth] the leaf variance.
/// Every leaf has covariance rho with the root.
class CovarianceTree {
 public:
  /// Validates that the full leaf covariance matrix is positive definite and
  /// that (root_variance, rho) are consistent with it.
  CovarianceTree(std::vector<int> branching, std::vector<double> c, double rho,
                 double root_variance);

  const Topology& topology() const { return topo_; }
  int depth() const { return topo_.depth(); }
  std::size_t leaf_count() const { return topo_.leaf_count(); }
  const std::vector<int>& branching() const { return branching_; }
  const std::vector<double>& c() const { return c_; }
  double rho() const { return rho_; }
  double root_variance() const { return root_variance_; }

  /// Scale of the lowest common ancestor of two leaves (by leaf index).
  int proximity(std::size_t leaf_a, std::size_t leaf_b) const;
  /// Throws DomainError if either address is not a leaf.
  int proximity(const NodeAddress& a, const NodeAddress& b) const;

  double leaf_covariance(std::size_t leaf_a, std::size_t leaf_b) const {
    return c_[static_cast<std::size_t>(proximity(leaf_a, leaf_b))];
  }

  Progression progression() const;

  /// Eigenvalues of the full leaf covariance matrix, one per level k = 0..D:
  /// sum_{m >= k} (c_m - c_{m-1}) * (leaves under a scale-m node). Level 0
  /// belongs to the all-ones vector; level k > 0 is present only when scale
  /// k-1 has branching above one.
  std::vector<double> spectrum() const;

 private:
  Topology topo_;
  std::vector<int> branching_;
  std::vector<double> c_;
  double rho_;
  double root_variance_;
};

/// Wavelet-domain independent Gaussian tree: binary, node variance
/// amplitude * 2^(-2 j H) at scale j, children parent/2 +- W.
CovarianceTree build_wig_covariance_tree(int depth, int sigma, double hurst, double amplitude);

/// The covariance tree view of a scale-invariant innovations tree.
CovarianceTree covariance_tree_of(const InnovationsTree& scale_invariant);

/// rho = 1 everywhere, root variance c_0, scale-j innovation variance
/// c_j - c_{j-1}. Requires c_0 > 0 and c strictly increasing through c_D.
InnovationsTree matched_innovations_tree(const CovarianceTree& cov);

}  // namespace mstree
