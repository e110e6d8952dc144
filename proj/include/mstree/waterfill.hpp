#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mstree {

/// Values psi(0..M) of a non-decreasing, discrete-concave function.
class ConcaveTable {
 public:
  /// Relative tolerance applied to the monotonicity and concavity checks.
  static constexpr double kTolerance = 1e-9;

  /// Throws DomainError when the values are empty, non-finite, decreasing or
  /// not concave beyond kTolerance.
  explicit ConcaveTable(std::vector<double> values);

  static bool is_concave(std::span<const double> values, double tolerance = kTolerance);
  static bool is_non_decreasing(std::span<const double> values, double tolerance = kTolerance);

  double operator()(std::size_t x) const { return values_.at(x); }
  std::size_t max_count() const { return values_.size() - 1; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

/// Counts per table, summing to the allocated total.
struct Allocation {
  std::vector<std::size_t> counts;
  std::size_t total() const;
  friend bool operator==(const Allocation&, const Allocation&) = default;
};

struct WaterfillResult {
  /// allocations[n] is G^(n), n = 0..n_max; consecutive entries differ in one count.
  std::vector<Allocation> allocations;
  /// Table that received unit n+1, n = 0..n_max-1.
  std::vector<std::size_t> choices;
  /// h[n] = sum_k psi_k(G^(n)_k), the maximum over all allocations of n units.
  std::vector<double> h;
};

/// Greedy unit-at-a-time allocation: each unit goes to the non-full table
/// with the largest forward difference. Differences within 1e-12 (relative)
/// of each other count as ties and go to the smallest table index.
WaterfillResult waterfill(std::span<const ConcaveTable> tables, std::size_t n_max);

/// Closed form of h(n) when all P tables equal psi:
/// (P - n + P*floor(n/P)) psi(floor(n/P)) + (n - P*floor(n/P)) psi(floor(n/P)+1).
double uniform_split_value(const ConcaveTable& psi, std::size_t copies, std::size_t n);

}  // namespace mstree
