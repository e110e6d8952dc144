#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mstree/address.hpp"
#include "mstree/topology.hpp"

namespace mstree {

/// Ordered set of distinct leaves, held as 0-based left-to-right leaf indices.
class LeafSet {
 public:
  LeafSet() = default;
  /// Throws DomainError on duplicates.
  explicit LeafSet(std::vector<std::size_t> leaves);

  static LeafSet from_addresses(const Topology& topo, const std::vector<NodeAddress>& addresses);

  const std::vector<std::size_t>& indices() const { return leaves_; }
  std::size_t size() const { return leaves_.size(); }
  bool empty() const { return leaves_.empty(); }
  std::size_t operator[](std::size_t i) const { return leaves_[i]; }
  auto begin() const { return leaves_.begin(); }
  auto end() const { return leaves_.end(); }

  /// Throws DomainError if an index is not a leaf of `topo`.
  void validate(const Topology& topo) const;

  /// Same leaves in ascending index order.
  LeafSet sorted() const;
  /// Leaves that fall in the subtree of `node`.
  LeafSet restricted_to(const Topology& topo, NodeId node) const;

  std::vector<NodeAddress> addresses(const Topology& topo) const;
  /// Addresses joined with ';'.
  std::string to_string(const Topology& topo) const;

  friend bool operator==(const LeafSet&, const LeafSet&) = default;

 private:
  std::vector<std::size_t> leaves_;
};

}  // namespace mstree
