#include "mstree/covariance_tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mstree/errors.hpp"
#include "mstree/midpoint.hpp"

namespace mstree {

std::string_view to_string(Progression p) {
  switch (p) {
    case Progression::positive: return "positive";
    case Progression::negative: return "negative";
    case Progression::mixed: return "mixed";
  }
  return "mixed";
}

CovarianceTree::CovarianceTree(std::vector<int> branching, std::vector<double> c, double rho,
                               double root_variance)
    : branching_(std::move(branching)), c_(std::move(c)), rho_(rho), root_variance_(root_variance) {
  if (branching_.empty()) throw DomainError("a covariance tree needs depth at least 1");
  if (c_.size() != branching_.size() + 1) {
    throw DomainError("c must hold depth+1 values, got " + std::to_string(c_.size()));
  }
  for (double v : c_) {
    if (!std::isfinite(v)) throw DomainError("c values must be finite");
  }
  if (!std::isfinite(rho_)) throw DomainError("rho must be finite");
  if (!(root_variance_ > 0.0) || !std::isfinite(root_variance_)) {
    throw DomainError("root variance must be positive");
  }
  topo_ = Topology::full(branching_);

  const auto lambda = spectrum();
  double scale = 0.0;
  for (double v : c_) scale = std::max(scale, std::abs(v));
  scale *= static_cast<double>(leaf_count());
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    const bool present = k == 0 || branching_[k - 1] > 1;
    if (present && !(lambda[k] > 1e-12 * scale)) {
      throw DomainError("leaf covariance matrix is not positive definite (eigenvalue " +
                        std::to_string(lambda[k]) + " at level " + std::to_string(k) + ")");
    }
  }
  // The root together with all leaves must form a valid covariance:
  // var(root) >= rho^2 1' Q^{-1} 1 = rho^2 N / lambda_0.
  const double explained = rho_ * rho_ * static_cast<double>(leaf_count()) / lambda[0];
  if (root_variance_ - explained < -1e-9 * root_variance_) {
    throw DomainError("root variance " + std::to_string(root_variance_) +
                      " is smaller than the variance explained by all leaves (" +
                      std::to_string(explained) + "); rho is inconsistent");
  }
}

int CovarianceTree::proximity(std::size_t leaf_a, std::size_t leaf_b) const {
  return topo_.scale(topo_.lowest_common_ancestor(topo_.leaf_node(leaf_a), topo_.leaf_node(leaf_b)));
}

int CovarianceTree::proximity(const NodeAddress& a, const NodeAddress& b) const {
  return proximity(topo_.leaf_index(topo_.at(a)), topo_.leaf_index(topo_.at(b)));
}

Progression CovarianceTree::progression() const {
  const int d = depth();
  bool positive = c_[0] > 0.0;
  bool negative = d >= 2;
  for (int m = 1; m <= d - 1; ++m) {
    const auto i = static_cast<std::size_t>(m);
    positive = positive && c_[i] > c_[i - 1];
    negative = negative && c_[i] < c_[i - 1];
  }
  if (positive) return Progression::positive;
  if (negative) return Progression::negative;
  return Progression::mixed;
}

std::vector<double> CovarianceTree::spectrum() const {
  const auto d = static_cast<std::size_t>(depth());
  // Leaves under one node at scale m.
  std::vector<double> block(d + 1, 1.0);
  for (std::size_t m = d; m-- > 0;) block[m] = block[m + 1] * branching_[m];
  std::vector<double> lambda(d + 1, 0.0);
  double acc = 0.0;
  for (std::size_t k = d + 1; k-- > 0;) {
    const double step = c_[k] - (k == 0 ? 0.0 : c_[k - 1]);
    acc += step * block[k];
    lambda[k] = acc;
  }
  return lambda;
}

CovarianceTree build_wig_covariance_tree(int depth, int sigma, double hurst, double amplitude) {
  if (depth < 1) throw DomainError("WIG depth must be at least 1");
  if (sigma != 2) throw DomainError("the WIG tree is binary; sigma must be 2");
  const MidpointSchedule schedule = fbm_schedule(depth, hurst, amplitude);

  std::vector<double> v(static_cast<std::size_t>(depth) + 1);
  for (int j = 0; j <= depth; ++j) v[static_cast<std::size_t>(j)] = schedule.node_variance(j);

  // Two leaves meeting at a scale-m node descend from its children
  // V/2 + W and V/2 - W, each halved D-m-1 more times.
  std::vector<double> c(v.size());
  for (int m = 0; m < depth; ++m) {
    const auto i = static_cast<std::size_t>(m);
    const double sibling_cov = v[i] / 4.0 - schedule.innovation_variance[i];
    c[i] = sibling_cov * std::pow(4.0, -(depth - m - 1));
  }
  c.back() = v.back();
  const double rho = v.front() * std::pow(2.0, -depth);
  return CovarianceTree(std::vector<int>(static_cast<std::size_t>(depth), 2), std::move(c), rho,
                        v.front());
}

CovarianceTree covariance_tree_of(const InnovationsTree& tree) {
  if (!tree.is_scale_invariant()) throw DomainError("tree is not scale-invariant");
  const Topology& topo = tree.topology();
  const NodeId first = topo.leaf_node(0);
  // Two leaves meeting at g have covariance gain^2 var(V_g), where gain is
  // the product of rho from g down to either leaf (equal by scale invariance).
  std::vector<double> c(static_cast<std::size_t>(topo.depth()) + 1);
  double gain = 1.0;
  for (NodeId cur = first;; cur = topo.parent(cur)) {
    c[static_cast<std::size_t>(topo.scale(cur))] = gain * gain * tree.variance(cur);
    if (cur == topo.root()) break;
    gain *= tree.rho(cur);
  }
  return CovarianceTree(topo.branching_by_scale(), std::move(c), tree.covariance(topo.root(), first),
                        tree.root_variance());
}

InnovationsTree matched_innovations_tree(const CovarianceTree& cov) {
  const auto& c = cov.c();
  if (!(c[0] > 0.0)) throw DomainError("matched innovations tree needs c_0 > 0");
  InnovationsConfig config;
  config.root_variance = c[0];
  for (std::size_t j = 1; j < c.size(); ++j) {
    const double w = c[j] - c[j - 1];
    if (!(w > 0.0)) {
      throw DomainError("matched innovations tree needs positive correlation progression (c_" +
                        std::to_string(j) + " <= c_" + std::to_string(j - 1) + ")");
    }
    config.scales.push_back({cov.branching()[j - 1], 1.0, w});
  }
  return InnovationsTree::build(config);
}

}  // namespace mstree
