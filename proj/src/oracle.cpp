#include "mstree/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "mstree/errors.hpp"
#include "mstree/rng.hpp"
#include "mstree/selection.hpp"

namespace mstree {

namespace {

constexpr std::size_t kMaxDenseLeaves = 4096;
constexpr double kTieTolerance = 1e-12;

/// Second-order description of (root, leaves) shared by both tree kinds.
struct DenseModel {
  std::size_t count = 0;
  std::vector<double> q;  // count x count, row-major
  std::vector<double> t;  // cov(leaf, root)
  double target_variance = 0.0;

  double cov(std::size_t i, std::size_t j) const { return q[i * count + j]; }
};

DenseModel dense(const InnovationsTree& tree) {
  const Topology& topo = tree.topology();
  const std::size_t n = topo.leaf_count();
  if (n > kMaxDenseLeaves) throw ResourceError("tree too large for exhaustive search");
  DenseModel m{n, std::vector<double>(n * n), std::vector<double>(n), tree.root_variance()};
  for (std::size_t i = 0; i < n; ++i) {
    const NodeId a = topo.leaf_node(i);
    m.t[i] = tree.covariance(a, topo.root());
    for (std::size_t j = 0; j <= i; ++j) {
      m.q[i * n + j] = m.q[j * n + i] = tree.covariance(a, topo.leaf_node(j));
    }
  }
  return m;
}

DenseModel dense(const CovarianceTree& tree) {
  const std::size_t n = tree.leaf_count();
  if (n > kMaxDenseLeaves) throw ResourceError("tree too large for exhaustive search");
  DenseModel m{n, std::vector<double>(n * n), std::vector<double>(n, tree.rho()), tree.root_variance()};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) m.q[i * n + j] = m.q[j * n + i] = tree.leaf_covariance(i, j);
  }
  return m;
}

/// Depth-first subset enumeration in lexicographic order. Level d of the
/// recursion holds a Cholesky factor of the first d chosen leaves and the
/// whitened target covariance z, so E = var - |z|^2 updates in O(d^2).
class SubsetSearch {
 public:
  SubsetSearch(const DenseModel& model, std::size_t max_size)
      : m_(model), max_size_(max_size), chol_(max_size * max_size), z_(max_size), chosen_(max_size) {
    extremes_.resize(max_size + 1);
    for (std::size_t k = 0; k <= max_size; ++k) extremes_[k].n = k;
    record(0, m_.target_variance);
  }

  /// exact_size: only record subsets of size max_size.
  std::vector<Extremes> run(bool exact_size) {
    exact_ = exact_size;
    descend(0, 0, m_.target_variance);
    return std::move(extremes_);
  }

 private:
  void descend(std::size_t start, std::size_t depth, double error) {
    if (depth == max_size_) return;
    const std::size_t last = exact_ ? m_.count - (max_size_ - depth) : m_.count - 1;
    if (m_.count == 0 || start > last) return;
    for (std::size_t i = start; i <= last; ++i) {
      double* row = &chol_[depth * max_size_];
      double diag = m_.cov(i, i);
      double zi = m_.t[i];
      for (std::size_t k = 0; k < depth; ++k) {
        double s = m_.cov(chosen_[k], i);
        const double* rk = &chol_[k * max_size_];
        for (std::size_t j = 0; j < k; ++j) s -= rk[j] * row[j];
        row[k] = s / rk[k];
        diag -= row[k] * row[k];
        zi -= row[k] * z_[k];
      }
      if (!(diag > 0.0)) throw DomainError("leaf covariance is not positive definite");
      row[depth] = std::sqrt(diag);
      z_[depth] = zi / row[depth];
      chosen_[depth] = i;
      const double e = error - z_[depth] * z_[depth];
      if (!exact_ || depth + 1 == max_size_) record(depth + 1, e);
      descend(i + 1, depth + 1, e);
    }
  }

  void record(std::size_t size, double e) {
    const double tol = 1e-12 * std::max(1.0, m_.target_variance);
    if (e < -tol) throw DomainError("negative LMMSE; the model is inconsistent");
    e = std::clamp(e, 0.0, m_.target_variance);
    Extremes& x = extremes_[size];
    const bool first = x.evaluated == 0;
    ++x.evaluated;
    auto slack = [&](double ref) { return kTieTolerance * std::max(std::abs(ref), std::abs(e)); };
    if (first || e < x.best_lmmse - slack(x.best_lmmse)) {
      x.best_lmmse = e;
      x.best = current(size);
    }
    if (first || e > x.worst_lmmse + slack(x.worst_lmmse)) {
      x.worst_lmmse = e;
      x.worst = current(size);
    }
  }

  LeafSet current(std::size_t size) const {
    return LeafSet(std::vector<std::size_t>(chosen_.begin(), chosen_.begin() + static_cast<long>(size)));
  }

  const DenseModel& m_;
  std::size_t max_size_;
  bool exact_ = true;
  std::vector<double> chol_;
  std::vector<double> z_;
  std::vector<std::size_t> chosen_;
  std::vector<Extremes> extremes_;
};

Extremes extremes_of_size(const DenseModel& m, std::size_t n, std::uint64_t cap) {
  if (n > m.count) throw DomainError("subset size exceeds the leaf count");
  const std::uint64_t total = binomial(m.count, n);
  if (total > cap) {
    throw ResourceError("exhaustive search over " + std::to_string(total) +
                        " subsets exceeds the cap of " + std::to_string(cap));
  }
  if (n == 0) {
    Extremes x;
    x.best_lmmse = x.worst_lmmse = m.target_variance;
    x.evaluated = 1;
    return x;
  }
  return SubsetSearch(m, n).run(true).back();
}

std::vector<Extremes> extremes_all(const DenseModel& m, std::uint64_t cap) {
  if (m.count >= 63 || (std::uint64_t{1} << m.count) > cap) {
    throw ResourceError("exhaustive search over all 2^" + std::to_string(m.count) +
                        " subsets exceeds the cap of " + std::to_string(cap));
  }
  return SubsetSearch(m, m.count).run(false);
}

}  // namespace

std::uint64_t binomial(std::size_t n_items, std::size_t k) {
  if (k > n_items) return 0;
  k = std::min(k, n_items - k);
  std::uint64_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t factor = n_items - k + i;
    // result * factor / i stays integral at every step.
    const std::uint64_t g = std::gcd(result, static_cast<std::uint64_t>(i));
    const std::uint64_t r = result / g;
    const std::uint64_t f = factor / (i / g);
    if (r != 0 && f > std::numeric_limits<std::uint64_t>::max() / r) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result = r * f;
  }
  return result;
}

Extremes brute_force_extremes(const InnovationsTree& tree, std::size_t n, std::uint64_t cap) {
  return extremes_of_size(dense(tree), n, cap);
}

Extremes brute_force_extremes(const CovarianceTree& tree, std::size_t n, std::uint64_t cap) {
  return extremes_of_size(dense(tree), n, cap);
}

std::vector<Extremes> brute_force_all_sizes(const InnovationsTree& tree, std::uint64_t cap) {
  return extremes_all(dense(tree), cap);
}

std::vector<Extremes> brute_force_all_sizes(const CovarianceTree& tree, std::uint64_t cap) {
  return extremes_all(dense(tree), cap);
}

LeafSet random_pattern(std::size_t leaf_count, std::size_t n, std::uint64_t seed, std::uint64_t trial) {
  if (n > leaf_count) throw DomainError("pattern larger than the leaf count");
  auto engine = keyed_engine(seed, trial);
  std::vector<std::size_t> pool(leaf_count);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, leaf_count - 1);
    std::swap(pool[i], pool[pick(engine)]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  return LeafSet(std::move(pool));
}

LeafSet reference_clustered_set(const CovarianceTree& tree, std::size_t n) {
  if (n > tree.leaf_count()) throw DomainError("pattern larger than the leaf count");
  const auto& b = tree.branching();
  const bool constant = std::all_of(b.begin(), b.end(), [&](int x) { return x == b.front(); });
  if (constant && b.front() >= 2 && n > 0) {
    try {
      const int p = size_exponent(b.front(), n);
      const Topology& topo = tree.topology();
      return clustered_leaf_set(
          topo, topo.at(NodeAddress(std::vector<int>(static_cast<std::size_t>(tree.depth() - p), 1))));
    } catch (const DomainError&) {
      // not a power of sigma: fall through to the leftmost block
    }
  }
  std::vector<std::size_t> leaves(n);
  std::iota(leaves.begin(), leaves.end(), std::size_t{0});
  return LeafSet(std::move(leaves));
}

SurveyResult random_pattern_survey(const CovarianceTree& tree, std::size_t n, std::size_t trials,
                                   std::uint64_t seed, bool keep_values) {
  if (n > tree.leaf_count()) throw DomainError("pattern larger than the leaf count");
  SurveyResult out;
  out.n = n;
  out.trials = trials;
  out.seed = seed;
  const Topology& topo = tree.topology();
  out.uniform.leaves = uniform_leaf_sample(topo, n);
  out.uniform.normalized_lmmse = lmmse(tree, out.uniform.leaves).normalized_lmmse;
  out.clustered.leaves = reference_clustered_set(tree, n);
  out.clustered.normalized_lmmse = lmmse(tree, out.clustered.leaves).normalized_lmmse;
  if (trials == 0) return out;

  std::vector<double> values(trials);
  for (std::size_t t = 0; t < trials; ++t) {
    values[t] = lmmse(tree, random_pattern(tree.leaf_count(), n, seed, t)).normalized_lmmse;
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  out.random_min = *lo;
  out.random_max = *hi;
  out.random_mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(trials);
  if (keep_values) out.random_values = std::move(values);
  return out;
}

double q_sum(const CovarianceTree& tree, const LeafSet& leaves) {
  leaves.validate(tree.topology());
  double total = 0.0;
  for (std::size_t i : leaves) {
    for (std::size_t j : leaves) total += tree.leaf_covariance(i, j);
  }
  return total;
}

RowSumCheck row_sum_eigen_check(const CovarianceTree& tree, const LeafSet& leaves) {
  leaves.validate(tree.topology());
  if (leaves.empty()) return {true, 0.0};
  std::vector<double> sums;
  sums.reserve(leaves.size());
  for (std::size_t i : leaves) {
    double s = 0.0;
    for (std::size_t j : leaves) s += tree.leaf_covariance(i, j);
    sums.push_back(s);
  }
  const auto [lo, hi] = std::minmax_element(sums.begin(), sums.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  return {*hi - *lo <= 1e-9 * scale, sums.front()};
}

}  // namespace mstree
