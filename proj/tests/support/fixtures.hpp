#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mstree/covariance_tree.hpp"
#include "mstree/innovations_tree.hpp"
#include "mstree/rng.hpp"

namespace mstree::testing {

inline InnovationsConfig scale_invariant_config(int depth, int branching = 2, double root_variance = 1.0,
                                                double rho = 1.0, double innovation = 1.0) {
  InnovationsConfig cfg;
  cfg.root_variance = root_variance;
  cfg.scales.assign(static_cast<std::size_t>(depth), ScaleSpec{branching, rho, innovation});
  return cfg;
}

// Depth-1 binary tree with unit root, rho and innovation variance.
inline InnovationsTree t2() { return InnovationsTree::build(scale_invariant_config(1)); }

// Depth-2 binary counterpart; leaf variance 3.
inline InnovationsTree t4() { return InnovationsTree::build(scale_invariant_config(2)); }

struct RandomTreeOptions {
  int max_depth = 3;
  int min_branching = 2;
  int max_branching = 3;
  double rho_low = 0.3;
  double rho_high = 2.0;
  bool signed_rho = true;
  double innovation_low = 0.1;
  double innovation_high = 5.0;
  // Chance that a node above the deepest scale ends up a leaf.
  double early_leaf = 0.0;
  std::size_t max_leaves = 0;  // 0: no limit
};

// Random tree with per-node branching and parameters. Trees with more than
// max_leaves leaves are redrawn from the same engine.
inline InnovationsTree random_tree(std::mt19937_64& rng, const RandomTreeOptions& opt = {}) {
  std::uniform_int_distribution<int> depth_dist(1, opt.max_depth);
  std::uniform_int_distribution<int> branch_dist(opt.min_branching, opt.max_branching);
  std::uniform_real_distribution<double> rho_dist(opt.rho_low, opt.rho_high);
  std::uniform_real_distribution<double> w_dist(opt.innovation_low, opt.innovation_high);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const int depth = depth_dist(rng);
    std::vector<NodeSpec> nodes{NodeSpec{}};
    std::vector<int> scale{0};
    std::size_t leaves = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const bool stop = scale[i] == depth || (scale[i] > 0 && unit(rng) < opt.early_leaf);
      if (stop) {
        ++leaves;
        continue;
      }
      const int kids = branch_dist(rng);
      for (int k = 1; k <= kids; ++k) {
        double rho = rho_dist(rng);
        if (opt.signed_rho && unit(rng) < 0.5) rho = -rho;
        nodes.push_back(NodeSpec{i, k, rho, w_dist(rng)});
        scale.push_back(scale[i] + 1);
      }
    }
    if (opt.max_leaves != 0 && leaves > opt.max_leaves) continue;
    return InnovationsTree::from_nodes(0.5 + 1.5 * unit(rng), nodes);
  }
}

// Random scale-invariant tree: one branching, rho and innovation per scale.
inline InnovationsTree random_scale_invariant_tree(std::mt19937_64& rng, int depth, int max_branching = 3) {
  std::uniform_int_distribution<int> branch_dist(2, max_branching);
  std::uniform_real_distribution<double> rho_dist(0.3, 2.0);
  std::uniform_real_distribution<double> w_dist(0.1, 5.0);
  InnovationsConfig cfg;
  cfg.root_variance = 0.5 + std::uniform_real_distribution<double>(0.0, 1.5)(rng);
  for (int j = 0; j < depth; ++j) cfg.scales.push_back({branch_dist(rng), rho_dist(rng), w_dist(rng)});
  return InnovationsTree::build(cfg);
}

inline bool close_rel(double a, double b, double tol) {
  return a == b || std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace mstree::testing
