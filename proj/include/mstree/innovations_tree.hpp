#pragma once

#include <optional>
#include <vector>

#include "mstree/address.hpp"
#include "mstree/topology.hpp"

namespace mstree {

/// Shape and parameters shared by every node at one scale. scales[j] in an
/// InnovationsConfig describes the nodes at scale j+1: how many children each
/// scale-j node has, and the scalar and innovation variance of those children.
struct ScaleSpec {
  int branching = 2;
  double rho = 1.0;
  double innovation_variance = 1.0;

  friend bool operator==(const ScaleSpec&, const ScaleSpec&) = default;
};

struct NodeOverride {
  NodeAddress node;
  std::optional<double> rho;
  std::optional<double> innovation_variance;

  friend bool operator==(const NodeOverride&, const NodeOverride&) = default;
};

struct InnovationsConfig {
  double root_variance = 1.0;
  std::vector<ScaleSpec> scales;
  std::vector<NodeOverride> overrides;
  /// Subtrees to remove. Interior nodes left without leaves are removed too.
  std::vector<NodeAddress> prune;

  friend bool operator==(const InnovationsConfig&, const InnovationsConfig&) = default;
};

/// Per-node parameters for the generic builder. Entry 0 is the root, whose
/// parent, label, rho and innovation_variance are ignored.
struct NodeSpec {
  std::size_t parent = 0;
  int label = 1;
  double rho = 1.0;
  double innovation_variance = 1.0;
};

/// Independent innovations tree: every non-root node is
/// V = rho * V_parent + W with W independent of everything else.
/// Immutable after construction.
class InnovationsTree {
 public:
  static InnovationsTree build(const InnovationsConfig& config);
  static InnovationsTree from_nodes(double root_variance, const std::vector<NodeSpec>& nodes);

  const Topology& topology() const { return topo_; }
  std::size_t leaf_count() const { return topo_.leaf_count(); }

  double rho(NodeId id) const { return rho_.at(id); }
  double innovation_variance(NodeId id) const { return innovation_.at(id); }
  /// var(V) at the node, cached at construction.
  double variance(NodeId id) const { return variance_.at(id); }
  double root_variance() const { return variance_.front(); }

  /// cov(V_a, V_b): the variance at the lowest common ancestor scaled by the
  /// products of rho along both downward paths.
  double covariance(NodeId a, NodeId b) const;
  double covariance(const NodeAddress& a, const NodeAddress& b) const;

  /// Symmetric, with rho and innovation variance depending only on scale.
  bool is_scale_invariant() const;

 private:
  InnovationsTree(Topology topo, std::vector<double> rho, std::vector<double> innovation,
                  double root_variance);

  Topology topo_;
  std::vector<double> rho_;
  std::vector<double> innovation_;
  std::vector<double> variance_;
};

}  // namespace mstree
