#include "mstree/selection.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mstree/errors.hpp"

namespace mstree {

namespace {

void check_reciprocal_table(const std::vector<double>& values, const Topology& topo, NodeId id) {
  const std::string where = " at node '" + topo.address(id).to_string() + "'";
  for (double v : values) {
    if (!(v > 0.0)) throw DomainError("reciprocal LMMSE table is not positive" + where);
  }
  if (!ConcaveTable::is_non_decreasing(values)) {
    throw DomainError("reciprocal LMMSE table is decreasing" + where);
  }
  if (!ConcaveTable::is_concave(values)) {
    throw DomainError("reciprocal LMMSE table is not discrete-concave" + where);
  }
}

}  // namespace

MuTable build_mu_tables(const InnovationsTree& tree) {
  const Topology& topo = tree.topology();
  MuTable tables;
  tables.nodes.resize(topo.node_count());

  // Preorder numbering: every child has a larger id than its parent.
  for (NodeId id = topo.node_count(); id-- > 0;) {
    MuTable::Node& entry = tables.nodes[id];
    const double var = tree.variance(id);
    if (topo.is_leaf(id)) {
      entry.own = {1.0 / var, std::numeric_limits<double>::infinity()};
      continue;
    }
    for (NodeId child : topo.children(id)) {
      const NodeId probe = topo.leaf_node(topo.node(child).leaf_begin);
      const double xi = tree.covariance(child, probe) / tree.covariance(id, probe);
      const double var_child = tree.variance(child);
      const auto& own = tables.nodes[child].own;
      std::vector<double> lifted(own.size());
      lifted[0] = 1.0 / var;
      for (std::size_t n = 1; n < own.size(); ++n) {
        // Explained variance of the child, carried up by 1/xi^2.
        const double explained = topo.is_leaf(child) ? var_child : var_child - 1.0 / own[n];
        lifted[n] = 1.0 / (var - explained / (xi * xi));
      }
      check_reciprocal_table(lifted, topo, child);
      entry.child.emplace_back(std::move(lifted));
      entry.xi.push_back(xi);
    }
    const WaterfillResult merged = waterfill(entry.child, topo.subtree_leaf_count(id));
    const double correction = (static_cast<double>(entry.child.size()) - 1.0) / var;
    entry.own.reserve(merged.h.size());
    for (double h : merged.h) entry.own.push_back(h - correction);
    entry.own[0] = 1.0 / var;
    entry.choices = merged.choices;
    check_reciprocal_table(entry.own, topo, id);
  }
  return tables;
}

std::vector<OptimalSet> optimal_leaf_sets(const InnovationsTree& tree, std::size_t n_max) {
  return optimal_leaf_sets(tree, build_mu_tables(tree), n_max);
}

std::vector<OptimalSet> optimal_leaf_sets(const InnovationsTree& tree, const MuTable& tables,
                                          std::size_t n_max) {
  const Topology& topo = tree.topology();
  if (n_max > topo.leaf_count()) {
    throw DomainError("requested " + std::to_string(n_max) + " leaves from a tree with " +
                      std::to_string(topo.leaf_count()));
  }
  std::vector<std::size_t> used(topo.node_count(), 0);
  std::vector<std::size_t> chosen;
  std::vector<OptimalSet> out;
  out.reserve(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    NodeId cur = topo.root();
    while (!topo.is_leaf(cur)) {
      const std::size_t pos = tables.nodes[cur].choices.at(used[cur]++);
      cur = topo.children(cur)[pos];
    }
    ++used[cur];
    chosen.push_back(topo.leaf_index(cur));
    out.push_back({n, LeafSet(chosen).sorted(), 1.0 / tables.root(n)});
  }
  return out;
}

LeafSet uniform_leaf_sample(const Topology& topo, std::size_t n) {
  if (!topo.is_symmetric()) throw DomainError("uniform leaf samples need a symmetric tree");
  if (n > topo.leaf_count()) throw DomainError("sample larger than the leaf count");
  std::vector<std::size_t> leaves;
  std::vector<std::pair<NodeId, std::size_t>> stack{{topo.root(), n}};
  while (!stack.empty()) {
    auto [id, count] = stack.back();
    stack.pop_back();
    if (count == 0) continue;
    if (topo.is_leaf(id)) {
      leaves.push_back(topo.leaf_index(id));
      continue;
    }
    const auto kids = topo.children(id);
    const std::size_t base = count / kids.size();
    const std::size_t extra = count - base * kids.size();
    for (std::size_t k = kids.size(); k-- > 0;) stack.emplace_back(kids[k], base + (k < extra ? 1 : 0));
  }
  return LeafSet(std::move(leaves));
}

LeafSet clustered_leaf_set(const Topology& topo, NodeId node) {
  const auto& n = topo.node(node);
  std::vector<std::size_t> leaves(n.leaf_end - n.leaf_begin);
  for (std::size_t i = 0; i < leaves.size(); ++i) leaves[i] = n.leaf_begin + i;
  return LeafSet(std::move(leaves));
}

CovarianceSelection covariance_tree_optimal(const CovarianceTree& cov, std::size_t n) {
  const InnovationsTree matched = matched_innovations_tree(cov);
  if (n > cov.leaf_count()) throw DomainError("sample larger than the leaf count");
  LeafSet leaves;
  if (n > 0) leaves = optimal_leaf_sets(matched, n).back().leaves;
  EstimateReport report = lmmse(cov, leaves);
  return {std::move(leaves), std::move(report)};
}

int size_exponent(int sigma, std::size_t n) {
  if (sigma < 2) throw DomainError("branching must be at least 2");
  int p = 0;
  std::size_t power = 1;
  while (power < n) {
    power *= static_cast<std::size_t>(sigma);
    ++p;
  }
  if (power != n) {
    throw DomainError(std::to_string(n) + " is not a power of " + std::to_string(sigma));
  }
  return p;
}

LeafSet covariance_tree_worst(const CovarianceTree& cov, int p) {
  const auto& branching = cov.branching();
  for (int b : branching) {
    if (b != branching.front()) throw DomainError("worst-case sets need constant branching");
  }
  if (p < 0 || p > cov.depth()) throw DomainError("p must lie in 0..depth");
  const Topology& topo = cov.topology();
  switch (cov.progression()) {
    case Progression::positive:
      return clustered_leaf_set(topo, topo.at(NodeAddress(std::vector<int>(
                                          static_cast<std::size_t>(cov.depth() - p), 1))));
    case Progression::negative: {
      std::size_t n = 1;
      for (int i = 0; i < p; ++i) n *= static_cast<std::size_t>(branching.front());
      return uniform_leaf_sample(topo, n);
    }
    case Progression::mixed:
      break;
  }
  throw DomainError("worst-case sets are only known for strictly positive or negative progressions");
}

}  // namespace mstree
