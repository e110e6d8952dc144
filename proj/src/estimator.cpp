#include "mstree/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mstree/errors.hpp"

namespace mstree {

namespace {

EstimateReport solve(const LeafCovariance& lc, double target_variance) {
  EstimateReport report;
  report.lmmse = target_variance;
  if (lc.q.rows() > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(lc.q);
    if (llt.info() != Eigen::Success) {
      throw DomainError("leaf covariance is not positive definite; the leaf set is linearly dependent "
                        "or the model is invalid");
    }
    const Eigen::VectorXd alpha = llt.solve(lc.target_cov);
    report.coefficients.assign(alpha.data(), alpha.data() + alpha.size());
    double e = target_variance - lc.target_cov.dot(alpha);
    const double tol = 1e-12 * std::max(1.0, target_variance);
    if (e < -tol) {
      throw DomainError("negative LMMSE " + std::to_string(e) + "; the model is inconsistent");
    }
    report.lmmse = std::clamp(e, 0.0, target_variance);
  }
  report.normalized_lmmse = report.lmmse / target_variance;
  return report;
}

}  // namespace

LeafCovariance leaf_covariance(const InnovationsTree& tree, NodeId target, const LeafSet& leaves) {
  const Topology& topo = tree.topology();
  leaves.validate(topo);
  const auto n = static_cast<Eigen::Index>(leaves.size());
  LeafCovariance lc{Eigen::MatrixXd(n, n), Eigen::VectorXd(n)};
  std::vector<NodeId> nodes;
  nodes.reserve(leaves.size());
  for (std::size_t i : leaves) nodes.push_back(topo.leaf_node(i));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    lc.target_cov(i) = tree.covariance(nodes[ui], target);
    lc.q(i, i) = tree.variance(nodes[ui]);
    for (Eigen::Index j = 0; j < i; ++j) {
      lc.q(i, j) = lc.q(j, i) = tree.covariance(nodes[ui], nodes[static_cast<std::size_t>(j)]);
    }
  }
  return lc;
}

LeafCovariance leaf_covariance(const CovarianceTree& tree, const LeafSet& leaves) {
  leaves.validate(tree.topology());
  const auto n = static_cast<Eigen::Index>(leaves.size());
  LeafCovariance lc{Eigen::MatrixXd(n, n), Eigen::VectorXd::Constant(n, tree.rho())};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      lc.q(i, j) = lc.q(j, i) =
          tree.leaf_covariance(leaves[static_cast<std::size_t>(i)], leaves[static_cast<std::size_t>(j)]);
    }
  }
  return lc;
}

EstimateReport lmmse(const InnovationsTree& tree, NodeId target, const LeafSet& leaves) {
  EstimateReport report = solve(leaf_covariance(tree, target, leaves), tree.variance(target));
  report.target = tree.topology().address(target);
  report.leaf_set = leaves;
  return report;
}

EstimateReport lmmse(const InnovationsTree& tree, const NodeAddress& target, const LeafSet& leaves) {
  return lmmse(tree, tree.topology().at(target), leaves);
}

EstimateReport lmmse(const CovarianceTree& tree, const LeafSet& leaves) {
  EstimateReport report = solve(leaf_covariance(tree, leaves), tree.root_variance());
  report.leaf_set = leaves;
  return report;
}

double check_parallel_resistor_identity(const InnovationsTree& tree, NodeId node,
                                        const LeafSet& leaves) {
  const Topology& topo = tree.topology();
  const auto kids = topo.children(node);
  if (kids.empty()) throw DomainError("node has no children");
  const auto& range = topo.node(node);
  for (std::size_t i : leaves) {
    if (i < range.leaf_begin || i >= range.leaf_end) {
      throw DomainError("leaf set is not inside the subtree of " + topo.address(node).to_string());
    }
  }
  const double var = tree.variance(node);
  const double lhs = 1.0 / lmmse(tree, node, leaves).lmmse + (static_cast<double>(kids.size()) - 1.0) / var;
  double rhs = 0.0;
  for (NodeId child : kids) {
    rhs += 1.0 / lmmse(tree, node, leaves.restricted_to(topo, child)).lmmse;
  }
  return std::abs(lhs - rhs);
}

}  // namespace mstree
