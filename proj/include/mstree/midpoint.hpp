#pragma once

#include <cstdint>
#include <vector>

namespace mstree {

/// Variances driving midpoint-displacement synthesis on a binary tree. A
/// node at scale j with value V spawns children V/2 + W and V/2 - W where
/// var(W) = innovation_variance[j].
struct MidpointSchedule {
  double root_variance = 1.0;
  std::vector<double> innovation_variance;

  int depth() const { return static_cast<int>(innovation_variance.size()); }
  /// Variance of a node at scale j: v_{j+1} = v_j / 4 + var(W_j).
  double node_variance(int scale) const;
};

/// Exact Brownian motion on [0, 1]: unit root variance, var(W) = 1/4 at the
/// root and halving per scale.
MidpointSchedule brownian_schedule(int depth);

/// Innovation variances chosen so a scale-j node has variance
/// amplitude * 2^(-2 j H), the variance of an fBm increment over 2^-j.
/// Throws DomainError when some innovation variance would be nonpositive.
MidpointSchedule fbm_schedule(int depth, double hurst, double amplitude = 1.0);

struct MidpointPath {
  double root = 0.0;
  /// The 2^depth nodes at the finest scale, left to right.
  std::vector<double> increments;
  /// Running sums of increments: B(k 2^-depth) for k = 1..2^depth.
  std::vector<double> cumulative;
};

/// Deterministic in (seed, stream). Independent streams give independent paths.
MidpointPath synthesize_midpoint_path(const MidpointSchedule& schedule, std::uint64_t seed,
                                      std::uint64_t stream = 0);

}  // namespace mstree
