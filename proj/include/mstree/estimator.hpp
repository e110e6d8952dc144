#pragma once

#include <vector>

#include <Eigen/Dense>

#include "mstree/covariance_tree.hpp"
#include "mstree/innovations_tree.hpp"
#include "mstree/leaf_set.hpp"

namespace mstree {

/// Second-order inputs of a linear estimate: Q_L and cov(L, target).
struct LeafCovariance {
  Eigen::MatrixXd q;
  Eigen::VectorXd target_cov;
};

struct EstimateReport {
  double lmmse = 0.0;
  std::vector<double> coefficients;
  double normalized_lmmse = 0.0;
  NodeAddress target;
  LeafSet leaf_set;
};

LeafCovariance leaf_covariance(const InnovationsTree& tree, NodeId target, const LeafSet& leaves);
/// Covariance trees only estimate the root.
LeafCovariance leaf_covariance(const CovarianceTree& tree, const LeafSet& leaves);

/// Linear minimum mean-squared error of the target given the leaves,
/// var(target) - t' Q^{-1} t, solved through a Cholesky factorization.
/// Throws DomainError when Q is not positive definite or the result is
/// negative beyond rounding.
EstimateReport lmmse(const InnovationsTree& tree, NodeId target, const LeafSet& leaves);
EstimateReport lmmse(const InnovationsTree& tree, const NodeAddress& target, const LeafSet& leaves);
EstimateReport lmmse(const CovarianceTree& tree, const LeafSet& leaves);

/// |1/E(V|L) + (P-1)/var(V) - sum_k 1/E(V|L_k)| at node `node`, where L_k is
/// the part of L under child k. L must lie in the subtree of `node`.
double check_parallel_resistor_identity(const InnovationsTree& tree, NodeId node,
                                        const LeafSet& leaves);

}  // namespace mstree
