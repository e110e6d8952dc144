#include "mstree/topology.hpp"

#include <algorithm>

#include "mstree/errors.hpp"

namespace mstree {

Topology Topology::from_parents(const std::vector<std::pair<std::size_t, int>>& entries,
                                std::vector<NodeId>* order) {
  if (entries.empty()) throw DomainError("a tree needs a root");
  const std::size_t count = entries.size();
  std::vector<std::vector<std::size_t>> kids(count);
  for (std::size_t i = 1; i < count; ++i) {
    const auto [parent, label] = entries[i];
    if (parent >= i) throw DomainError("parents must precede their children");
    if (label < 1) throw DomainError("child labels are 1-based");
    kids[parent].push_back(i);
  }
  for (auto& k : kids) {
    std::sort(k.begin(), k.end(),
              [&](std::size_t a, std::size_t b) { return entries[a].second < entries[b].second; });
    for (std::size_t j = 1; j < k.size(); ++j) {
      if (entries[k[j]].second == entries[k[j - 1]].second) {
        throw DomainError("duplicate child label " + std::to_string(entries[k[j]].second));
      }
    }
  }

  Topology topo;
  topo.nodes_.resize(count);
  std::vector<NodeId> ids(count);
  // Iterative preorder; the stack holds entries still to be numbered.
  std::vector<std::pair<std::size_t, NodeId>> stack{{0, 0}};
  NodeId next = 0;
  while (!stack.empty()) {
    auto [entry, parent_id] = stack.back();
    stack.pop_back();
    const NodeId id = next++;
    ids[entry] = id;
    Node& node = topo.nodes_[id];
    node.parent = parent_id;
    node.label = entry == 0 ? 0 : entries[entry].second;
    node.scale = entry == 0 ? 0 : topo.nodes_[parent_id].scale + 1;
    if (entry != 0) topo.nodes_[parent_id].children.push_back(id);
    for (auto it = kids[entry].rbegin(); it != kids[entry].rend(); ++it) stack.emplace_back(*it, id);
  }

  for (NodeId id = 0; id < count; ++id) {
    Node& node = topo.nodes_[id];
    topo.depth_ = std::max(topo.depth_, node.scale);
    if (node.children.empty()) {
      node.leaf_begin = topo.leaves_.size();
      topo.leaves_.push_back(id);
    }
  }
  // Preorder places every subtree after its root, so a reverse sweep closes
  // the leaf ranges bottom-up.
  for (NodeId id = count; id-- > 0;) {
    Node& node = topo.nodes_[id];
    if (node.children.empty()) {
      node.leaf_end = node.leaf_begin + 1;
    } else {
      node.leaf_begin = topo.nodes_[node.children.front()].leaf_begin;
      node.leaf_end = topo.nodes_[node.children.back()].leaf_end;
    }
  }
  if (order) *order = std::move(ids);
  return topo;
}

Topology Topology::full(const std::vector<int>& branching) {
  std::vector<std::pair<std::size_t, int>> entries{{0, 0}};
  std::vector<std::size_t> level{0};
  for (int p : branching) {
    if (p < 1) throw DomainError("branching must be positive");
    std::vector<std::size_t> next;
    for (std::size_t parent : level) {
      for (int k = 1; k <= p; ++k) {
        next.push_back(entries.size());
        entries.emplace_back(parent, k);
      }
    }
    level = std::move(next);
  }
  return from_parents(entries);
}

std::size_t Topology::leaf_index(NodeId id) const {
  if (!is_leaf(id)) throw DomainError("node " + address(id).to_string() + " is not a leaf");
  return nodes_[id].leaf_begin;
}

NodeAddress Topology::address(NodeId id) const {
  std::vector<int> digits(static_cast<std::size_t>(nodes_.at(id).scale));
  for (NodeId cur = id; cur != 0; cur = nodes_[cur].parent) {
    digits[static_cast<std::size_t>(nodes_[cur].scale - 1)] = nodes_[cur].label;
  }
  return NodeAddress(std::move(digits));
}

std::optional<NodeId> Topology::find(const NodeAddress& address) const {
  NodeId cur = 0;
  for (int label : address.digits()) {
    const auto& kids = nodes_[cur].children;
    auto it = std::find_if(kids.begin(), kids.end(),
                           [&](NodeId c) { return nodes_[c].label == label; });
    if (it == kids.end()) return std::nullopt;
    cur = *it;
  }
  return cur;
}

NodeId Topology::at(const NodeAddress& address) const {
  auto id = find(address);
  if (!id) throw DomainError("no node at address '" + address.to_string() + "'");
  return *id;
}

NodeId Topology::lowest_common_ancestor(NodeId a, NodeId b) const {
  while (nodes_.at(a).scale > nodes_.at(b).scale) a = nodes_[a].parent;
  while (nodes_[b].scale > nodes_[a].scale) b = nodes_[b].parent;
  while (a != b) {
    a = nodes_[a].parent;
    b = nodes_[b].parent;
  }
  return a;
}

bool Topology::is_symmetric() const {
  std::vector<int> per_scale(static_cast<std::size_t>(depth_) + 1, -1);
  for (const Node& node : nodes_) {
    const int p = static_cast<int>(node.children.size());
    int& slot = per_scale[static_cast<std::size_t>(node.scale)];
    if (slot == -1) slot = p;
    if (slot != p) return false;
  }
  return per_scale.back() == 0;
}

std::vector<int> Topology::branching_by_scale() const {
  std::vector<int> out(static_cast<std::size_t>(depth_), 0);
  for (const Node& node : nodes_) {
    if (node.scale < depth_) {
      auto& slot = out[static_cast<std::size_t>(node.scale)];
      slot = std::max(slot, static_cast<int>(node.children.size()));
    }
  }
  return out;
}

}  // namespace mstree
