#pragma once

#include <cstddef>
#include <vector>

#include "mstree/covariance_tree.hpp"
#include "mstree/estimator.hpp"
#include "mstree/innovations_tree.hpp"
#include "mstree/leaf_set.hpp"
#include "mstree/waterfill.hpp"

namespace mstree {

/// Reciprocal-LMMSE tables for every node of an innovations tree.
///
/// For a node g with N leaves below it, own[n] is the largest 1/E(V_g | L)
/// over n-leaf subsets L of its subtree (own[0] = 1/var(V_g); a leaf has
/// own = {1/var, +inf}). For each child c, child[k][n] is the largest
/// 1/E(V_g | L) over n-leaf subsets of the subtree of c. choices[n-1] is the
/// child position that receives the n-th leaf when g's budget grows to n.
struct MuTable {
  struct Node {
    std::vector<double> own;
    std::vector<ConcaveTable> child;
    std::vector<std::size_t> choices;
    /// cov(V_c, l) / cov(V_g, l) for any leaf l under child c.
    std::vector<double> xi;
  };
  std::vector<Node> nodes;

  double root(std::size_t n) const { return nodes.front().own.at(n); }
};

/// Bottom-up pass: each child's table is lifted to its parent, the parent's
/// children are merged by water-filling, and (P-1)/var(V_g) is subtracted.
/// Throws DomainError if a produced table is not positive, non-decreasing
/// and discrete-concave within ConcaveTable::kTolerance.
MuTable build_mu_tables(const InnovationsTree& tree);

struct OptimalSet {
  std::size_t n = 0;
  LeafSet leaves;  // ascending leaf index
  double lmmse = 0.0;
};

/// Optimal leaf sets for n = 1..n_max. Each new leaf percolates from the
/// root along the recorded water-filling choices, so the sets are nested.
std::vector<OptimalSet> optimal_leaf_sets(const InnovationsTree& tree, std::size_t n_max);
std::vector<OptimalSet> optimal_leaf_sets(const InnovationsTree& tree, const MuTable& tables,
                                          std::size_t n_max);

/// Leaves with a uniform split at every node: child counts differ by at most
/// one, with the extra leaves going to the lowest-labelled children.
/// Throws DomainError if the topology is not symmetric.
LeafSet uniform_leaf_sample(const Topology& topo, std::size_t n);

/// All leaves of the subtree of `node`.
LeafSet clustered_leaf_set(const Topology& topo, NodeId node);

struct CovarianceSelection {
  LeafSet leaves;
  EstimateReport report;
};

/// Best n-leaf set of a covariance tree with positive correlation
/// progression, found on its matched innovations tree and evaluated on the
/// covariance tree itself.
CovarianceSelection covariance_tree_optimal(const CovarianceTree& cov, std::size_t n);

/// p such that n = sigma^p; throws DomainError otherwise.
int size_exponent(int sigma, std::size_t n);

/// Worst sigma^p-leaf set: the clusters of the first scale-(D-p) node under
/// positive progression, the uniform sample under negative progression.
/// Needs constant branching; refuses mixed progressions.
LeafSet covariance_tree_worst(const CovarianceTree& cov, int p);

}  // namespace mstree
