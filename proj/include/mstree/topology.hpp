#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "mstree/address.hpp"

namespace mstree {

using NodeId = std::size_t;

/// Shape of a rooted tree. Nodes are stored in depth-first preorder with
/// children sorted by label, so the leaves of any subtree occupy a contiguous
/// range of the left-to-right leaf index. Node 0 is the root.
class Topology {
 public:
  struct Node {
    NodeId parent = 0;  // root points to itself
    int label = 0;      // 1-based child label, 0 for the root
    int scale = 0;
    std::vector<NodeId> children;
    std::size_t leaf_begin = 0;
    std::size_t leaf_end = 0;
  };

  /// One entry per node: (index of parent entry, label). Entry 0 is the root
  /// and its parent field is ignored; parents must precede their children.
  /// On return `order` (if given) maps each entry to its NodeId.
  static Topology from_parents(const std::vector<std::pair<std::size_t, int>>& entries,
                               std::vector<NodeId>* order = nullptr);

  /// Complete tree where every node at scale s has branching[s] children.
  static Topology full(const std::vector<int>& branching);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t leaf_count() const { return leaves_.size(); }
  int depth() const { return depth_; }
  NodeId root() const { return 0; }

  const Node& node(NodeId id) const { return nodes_.at(id); }
  std::span<const NodeId> children(NodeId id) const { return nodes_.at(id).children; }
  NodeId parent(NodeId id) const { return nodes_.at(id).parent; }
  int scale(NodeId id) const { return nodes_.at(id).scale; }
  bool is_leaf(NodeId id) const { return nodes_.at(id).children.empty(); }

  /// Number of leaves in the subtree of `id`.
  std::size_t subtree_leaf_count(NodeId id) const {
    return nodes_.at(id).leaf_end - nodes_.at(id).leaf_begin;
  }

  NodeId leaf_node(std::size_t leaf_index) const { return leaves_.at(leaf_index); }
  std::size_t leaf_index(NodeId id) const;

  NodeAddress address(NodeId id) const;
  std::optional<NodeId> find(const NodeAddress& address) const;
  /// Like find() but throws DomainError for an address not in the tree.
  NodeId at(const NodeAddress& address) const;

  NodeId lowest_common_ancestor(NodeId a, NodeId b) const;

  /// Child count is a function of scale alone and every leaf sits at depth().
  bool is_symmetric() const;
  /// Child count per scale 0..depth()-1; only meaningful when symmetric.
  std::vector<int> branching_by_scale() const;

 private:
  std::vector<Node> nodes_;
  std::vector<NodeId> leaves_;
  int depth_ = 0;
};

}  // namespace mstree
