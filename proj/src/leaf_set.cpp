#include "mstree/leaf_set.hpp"

#include <algorithm>

#include "mstree/errors.hpp"

namespace mstree {

LeafSet::LeafSet(std::vector<std::size_t> leaves) : leaves_(std::move(leaves)) {
  auto copy = leaves_;
  std::sort(copy.begin(), copy.end());
  if (std::adjacent_find(copy.begin(), copy.end()) != copy.end()) {
    throw DomainError("leaf set contains a duplicate leaf");
  }
}

LeafSet LeafSet::from_addresses(const Topology& topo, const std::vector<NodeAddress>& addresses) {
  std::vector<std::size_t> leaves;
  leaves.reserve(addresses.size());
  for (const auto& a : addresses) leaves.push_back(topo.leaf_index(topo.at(a)));
  return LeafSet(std::move(leaves));
}

void LeafSet::validate(const Topology& topo) const {
  for (std::size_t i : leaves_) {
    if (i >= topo.leaf_count()) {
      throw DomainError("leaf index " + std::to_string(i) + " out of range (tree has " +
                        std::to_string(topo.leaf_count()) + " leaves)");
    }
  }
}

LeafSet LeafSet::sorted() const {
  auto copy = leaves_;
  std::sort(copy.begin(), copy.end());
  LeafSet out;
  out.leaves_ = std::move(copy);
  return out;
}

LeafSet LeafSet::restricted_to(const Topology& topo, NodeId node) const {
  const auto& n = topo.node(node);
  LeafSet out;
  for (std::size_t i : leaves_) {
    if (i >= n.leaf_begin && i < n.leaf_end) out.leaves_.push_back(i);
  }
  return out;
}

std::vector<NodeAddress> LeafSet::addresses(const Topology& topo) const {
  std::vector<NodeAddress> out;
  out.reserve(leaves_.size());
  for (std::size_t i : leaves_) out.push_back(topo.address(topo.leaf_node(i)));
  return out;
}

std::string LeafSet::to_string(const Topology& topo) const {
  std::string out;
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    if (i) out += ';';
    out += topo.address(topo.leaf_node(leaves_[i])).to_string();
  }
  return out;
}

}  // namespace mstree
