#include "mstree/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mstree/errors.hpp"

namespace mstree {

namespace {

constexpr double kTieTolerance = 1e-12;

double slack(double a, double b, double tolerance) {
  return tolerance * std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace

bool ConcaveTable::is_non_decreasing(std::span<const double> v, double tolerance) {
  for (std::size_t x = 0; x + 1 < v.size(); ++x) {
    if (v[x + 1] < v[x] - tolerance * std::abs(v[x])) return false;
  }
  return true;
}

bool ConcaveTable::is_concave(std::span<const double> v, double tolerance) {
  for (std::size_t x = 0; x + 2 < v.size(); ++x) {
    const double d0 = v[x + 1] - v[x];
    const double d1 = v[x + 2] - v[x + 1];
    if (d1 > d0 + slack(v[x + 1], v[x + 2], tolerance)) return false;
  }
  return true;
}

ConcaveTable::ConcaveTable(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DomainError("a concave table needs at least psi(0)");
  for (double v : values_) {
    if (std::isnan(v)) throw DomainError("concave table holds NaN");
  }
  if (!is_non_decreasing(values_)) throw DomainError("table is not non-decreasing");
  if (!is_concave(values_)) throw DomainError("table is not discrete-concave");
}

std::size_t Allocation::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

WaterfillResult waterfill(std::span<const ConcaveTable> tables, std::size_t n_max) {
  std::size_t capacity = 0;
  for (const auto& t : tables) capacity += t.max_count();
  if (n_max > capacity) {
    throw DomainError("cannot allocate " + std::to_string(n_max) + " units into tables holding " +
                      std::to_string(capacity));
  }
  auto value = [&](const Allocation& g) {
    double h = 0.0;
    for (std::size_t k = 0; k < tables.size(); ++k) h += tables[k](g.counts[k]);
    return h;
  };

  WaterfillResult out;
  out.allocations.reserve(n_max + 1);
  out.choices.reserve(n_max);
  out.h.reserve(n_max + 1);
  Allocation g{std::vector<std::size_t>(tables.size(), 0)};
  out.allocations.push_back(g);
  out.h.push_back(value(g));
  for (std::size_t n = 0; n < n_max; ++n) {
    std::size_t best = tables.size();
    double best_gain = 0.0;
    for (std::size_t k = 0; k < tables.size(); ++k) {
      if (g.counts[k] >= tables[k].max_count()) continue;
      const double gain = tables[k](g.counts[k] + 1) - tables[k](g.counts[k]);
      if (best == tables.size() || gain > best_gain + slack(gain, best_gain, kTieTolerance)) {
        best = k;
        best_gain = gain;
      }
    }
    ++g.counts[best];
    out.choices.push_back(best);
    out.allocations.push_back(g);
    out.h.push_back(value(g));
  }
  return out;
}

double uniform_split_value(const ConcaveTable& psi, std::size_t copies, std::size_t n) {
  if (copies == 0) throw DomainError("need at least one copy of the table");
  if (n > copies * psi.max_count()) throw DomainError("n exceeds the combined capacity");
  const std::size_t base = n / copies;
  const std::size_t extra = n - copies * base;
  const double low = static_cast<double>(copies - extra) * psi(base);
  return extra == 0 ? low : low + static_cast<double>(extra) * psi(base + 1);
}

}  // namespace mstree
