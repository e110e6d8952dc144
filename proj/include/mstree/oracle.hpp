#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mstree/covariance_tree.hpp"
#include "mstree/innovations_tree.hpp"
#include "mstree/leaf_set.hpp"

namespace mstree {

inline constexpr std::uint64_t kDefaultSubsetCap = 1'000'000;

/// Exact minimum and maximum LMMSE of the root over leaf subsets of one size.
/// Ties go to the lexicographically smallest leaf-index sequence.
struct Extremes {
  std::size_t n = 0;
  LeafSet best;
  double best_lmmse = 0.0;
  LeafSet worst;
  double worst_lmmse = 0.0;
  std::uint64_t evaluated = 0;
};

/// Enumerates every n-subset in lexicographic order, extending a Cholesky
/// factor one leaf at a time. Throws ResourceError when C(N, n) > cap.
Extremes brute_force_extremes(const InnovationsTree& tree, std::size_t n,
                              std::uint64_t cap = kDefaultSubsetCap);
Extremes brute_force_extremes(const CovarianceTree& tree, std::size_t n,
                              std::uint64_t cap = kDefaultSubsetCap);

/// Extremes for every size 0..N in one pass; throws ResourceError when 2^N > cap.
std::vector<Extremes> brute_force_all_sizes(const InnovationsTree& tree,
                                            std::uint64_t cap = kDefaultSubsetCap);
std::vector<Extremes> brute_force_all_sizes(const CovarianceTree& tree,
                                            std::uint64_t cap = kDefaultSubsetCap);

/// Number of n-subsets of N items, saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n_items, std::size_t k);

struct PatternResult {
  LeafSet leaves;
  double normalized_lmmse = 0.0;
};

/// Normalized LMMSE of random n-leaf patterns against the uniform and
/// clustered reference patterns. The random fields are empty when trials == 0.
struct SurveyResult {
  std::size_t n = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  PatternResult uniform;
  PatternResult clustered;
  std::optional<double> random_min;
  std::optional<double> random_max;
  std::optional<double> random_mean;
  /// Per-trial values in trial order; filled only on request.
  std::vector<double> random_values;
};

/// Trial t draws its subset with a generator keyed on (seed, t) through a
/// partial Fisher-Yates shuffle of the leaf indices.
SurveyResult random_pattern_survey(const CovarianceTree& tree, std::size_t n, std::size_t trials,
                                   std::uint64_t seed, bool keep_values = false);

/// The subset drawn by trial `trial` of a survey.
LeafSet random_pattern(std::size_t leaf_count, std::size_t n, std::uint64_t seed, std::uint64_t trial);

/// Clustered reference pattern: the leaves of the first node at scale D-p
/// when n = sigma^p for constant branching sigma, else the n leftmost leaves.
LeafSet reference_clustered_set(const CovarianceTree& tree, std::size_t n);

/// Sum of all entries of Q_L.
double q_sum(const CovarianceTree& tree, const LeafSet& leaves);

struct RowSumCheck {
  bool constant_row_sums = false;
  /// Common row sum, an eigenvalue of Q_L for the all-ones vector when constant.
  double lambda = 0.0;
};

/// Row sums of Q_L agree within 1e-9 relative.
RowSumCheck row_sum_eigen_check(const CovarianceTree& tree, const LeafSet& leaves);

}  // namespace mstree
