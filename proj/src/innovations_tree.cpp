#include "mstree/innovations_tree.hpp"

#include <cmath>
#include <string>

#include "mstree/errors.hpp"

namespace mstree {

namespace {

void check_node_parameters(double rho, double innovation_variance, const std::string& where) {
  if (!std::isfinite(rho) || rho == 0.0) throw DomainError("rho must be finite and nonzero at " + where);
  if (!std::isfinite(innovation_variance) || innovation_variance <= 0.0) {
    throw DomainError("innovation variance must be positive at " + where);
  }
}

}  // namespace

InnovationsTree::InnovationsTree(Topology topo, std::vector<double> rho,
                                 std::vector<double> innovation, double root_variance)
    : topo_(std::move(topo)), rho_(std::move(rho)), innovation_(std::move(innovation)) {
  if (!std::isfinite(root_variance) || root_variance <= 0.0) {
    throw DomainError("root variance must be positive");
  }
  if (topo_.node_count() < 2) throw DomainError("an innovations tree needs at least one leaf below the root");
  rho_[0] = 0.0;
  innovation_[0] = 0.0;
  variance_.assign(topo_.node_count(), 0.0);
  variance_[0] = root_variance;
  // Preorder guarantees the parent is done first.
  for (NodeId id = 1; id < topo_.node_count(); ++id) {
    check_node_parameters(rho_[id], innovation_[id], "node " + topo_.address(id).to_string());
    const double up = variance_[topo_.parent(id)];
    variance_[id] = rho_[id] * rho_[id] * up + innovation_[id];
  }
}

InnovationsTree InnovationsTree::from_nodes(double root_variance, const std::vector<NodeSpec>& nodes) {
  std::vector<std::pair<std::size_t, int>> entries;
  entries.reserve(nodes.size());
  for (const auto& n : nodes) entries.emplace_back(n.parent, n.label);
  std::vector<NodeId> order;
  Topology topo = Topology::from_parents(entries, &order);
  std::vector<double> rho(nodes.size()), innovation(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    rho[order[i]] = nodes[i].rho;
    innovation[order[i]] = nodes[i].innovation_variance;
  }
  return InnovationsTree(std::move(topo), std::move(rho), std::move(innovation), root_variance);
}

InnovationsTree InnovationsTree::build(const InnovationsConfig& config) {
  if (config.scales.empty()) throw DomainError("an innovations tree needs at least one scale");
  std::vector<int> branching;
  for (const auto& s : config.scales) {
    if (s.branching < 1) throw DomainError("branching must be positive");
    branching.push_back(s.branching);
  }
  const Topology full = Topology::full(branching);
  const std::size_t count = full.node_count();

  std::vector<NodeSpec> specs(count);
  for (NodeId id = 1; id < count; ++id) {
    const auto& scale = config.scales[static_cast<std::size_t>(full.scale(id) - 1)];
    specs[id] = NodeSpec{full.parent(id), full.node(id).label, scale.rho, scale.innovation_variance};
  }
  for (const auto& o : config.overrides) {
    if (o.node.is_root()) throw DomainError("the root has no rho or innovation to override");
    auto id = full.find(o.node);
    if (!id) throw DomainError("override refers to missing node '" + o.node.to_string() + "'");
    if (o.rho) specs[*id].rho = *o.rho;
    if (o.innovation_variance) specs[*id].innovation_variance = *o.innovation_variance;
  }

  std::vector<bool> removed(count, false);
  for (const auto& p : config.prune) {
    if (p.is_root()) throw DomainError("cannot prune the root");
    auto id = full.find(p);
    if (!id) throw DomainError("prune refers to missing node '" + p.to_string() + "'");
    const auto& node = full.node(*id);
    // In preorder a subtree runs until the next node at the same or a coarser scale.
    NodeId end = *id + 1;
    while (end < count && full.scale(end) > node.scale) ++end;
    for (NodeId k = *id; k < end; ++k) removed[k] = true;
  }
  // Interior nodes that lost every child go too, bottom-up.
  for (NodeId id = count; id-- > 1;) {
    if (removed[id] || full.is_leaf(id)) continue;
    bool any = false;
    for (NodeId c : full.children(id)) any = any || !removed[c];
    if (!any) removed[id] = true;
  }
  bool any_left = false;
  for (NodeId c : full.children(0)) any_left = any_left || !removed[c];
  if (!any_left) throw DomainError("pruning removed every leaf");

  std::vector<std::size_t> remap(count, 0);
  std::vector<NodeSpec> kept;
  for (NodeId id = 0; id < count; ++id) {
    if (removed[id]) continue;
    remap[id] = kept.size();
    NodeSpec s = specs[id];
    s.parent = id == 0 ? 0 : remap[full.parent(id)];
    kept.push_back(s);
  }
  return from_nodes(config.root_variance, kept);
}

double InnovationsTree::covariance(NodeId a, NodeId b) const {
  const NodeId g = topo_.lowest_common_ancestor(a, b);
  double gain = 1.0;
  for (NodeId cur = a; cur != g; cur = topo_.parent(cur)) gain *= rho_[cur];
  for (NodeId cur = b; cur != g; cur = topo_.parent(cur)) gain *= rho_[cur];
  return gain * variance_[g];
}

double InnovationsTree::covariance(const NodeAddress& a, const NodeAddress& b) const {
  return covariance(topo_.at(a), topo_.at(b));
}

bool InnovationsTree::is_scale_invariant() const {
  if (!topo_.is_symmetric()) return false;
  const auto depth = static_cast<std::size_t>(topo_.depth());
  std::vector<NodeId> first(depth + 1, 0);
  for (NodeId id = 1; id < topo_.node_count(); ++id) {
    auto& f = first[static_cast<std::size_t>(topo_.scale(id))];
    if (f == 0) {
      f = id;
    } else if (rho_[id] != rho_[f] || innovation_[id] != innovation_[f]) {
      return false;
    }
  }
  return true;
}

}  // namespace mstree
