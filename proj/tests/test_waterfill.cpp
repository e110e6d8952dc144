#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "mstree/errors.hpp"
#include "mstree/waterfill.hpp"

using namespace mstree;

namespace {

// Largest sum over all allocations of n units, summed in table order.
double exhaustive_max(const std::vector<ConcaveTable>& tables, std::size_t n) {
  double best = -1e300;
  std::vector<std::size_t> x(tables.size(), 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t k, std::size_t left) {
    if (k == tables.size()) {
      if (left != 0) return;
      double h = 0.0;
      for (std::size_t i = 0; i < tables.size(); ++i) h += tables[i](x[i]);
      best = std::max(best, h);
      return;
    }
    for (std::size_t v = 0; v <= std::min(left, tables[k].max_count()); ++v) {
      x[k] = v;
      rec(k + 1, left - v);
    }
  };
  rec(0, n);
  return best;
}

ConcaveTable random_table(std::mt19937_64& rng, bool integral) {
  const std::size_t m = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
  std::vector<double> steps(m);
  for (auto& s : steps) {
    s = integral ? static_cast<double>(std::uniform_int_distribution<int>(0, 6)(rng))
                 : std::uniform_real_distribution<double>(0.0, 3.0)(rng);
  }
  std::sort(steps.rbegin(), steps.rend());
  std::vector<double> values{integral ? static_cast<double>(std::uniform_int_distribution<int>(-3, 3)(rng))
                                      : std::uniform_real_distribution<double>(-1.0, 1.0)(rng)};
  for (double s : steps) values.push_back(values.back() + s);
  return ConcaveTable(values);
}

}  // namespace

TEST_CASE("water-filling examples") {
  const std::vector<ConcaveTable> tables{ConcaveTable({0, 1, 1.5}), ConcaveTable({0, 0.6, 1.1})};
  const auto r = waterfill(tables, 3);
  CHECK(r.allocations[0].counts == std::vector<std::size_t>{0, 0});
  CHECK(r.h[0] == 0.0);
  CHECK(r.allocations[2].counts == std::vector<std::size_t>{1, 1});
  CHECK(r.h[2] == doctest::Approx(1.6).epsilon(1e-15));
  // 1.5 - 1 and 1.1 - 0.6 tie; the first table wins.
  CHECK(r.allocations[3].counts == std::vector<std::size_t>{2, 1});
  CHECK(r.h[3] == doctest::Approx(2.1).epsilon(1e-15));
  CHECK(r.choices == std::vector<std::size_t>{0, 1, 0});
  CHECK_THROWS_AS(waterfill(tables, 5), DomainError);
}

TEST_CASE("concave table validation") {
  CHECK_THROWS_AS(ConcaveTable({}), DomainError);
  CHECK_THROWS_AS(ConcaveTable({0, 1, 0.5}), DomainError);
  CHECK_THROWS_AS(ConcaveTable({0, 1, 3}), DomainError);
  CHECK_NOTHROW(ConcaveTable({2}));
  CHECK(ConcaveTable::is_concave(std::vector<double>{0, 1, 2, 3}));
}

TEST_CASE("uniform split closed form") {
  const ConcaveTable psi({0, 1, 1.5, 1.75});
  CHECK(uniform_split_value(psi, 3, 4) == 3.5);
  CHECK(uniform_split_value(psi, 3, 3) == 3.0);
  CHECK(uniform_split_value(psi, 3, 0) == 0.0);
  CHECK_THROWS_AS(uniform_split_value(psi, 3, 10), DomainError);

  const std::vector<ConcaveTable> copies(3, psi);
  const auto r = waterfill(copies, 9);
  for (std::size_t n = 0; n <= 9; ++n) CHECK(r.h[n] == uniform_split_value(psi, 3, n));
}

TEST_CASE("water-filling matches exhaustive search") {
  for (bool integral : {true, false}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      std::mt19937_64 rng(seed);
      const std::size_t p = std::uniform_int_distribution<std::size_t>(1, 4)(rng);
      std::vector<ConcaveTable> tables;
      std::size_t capacity = 0;
      for (std::size_t k = 0; k < p; ++k) {
        tables.push_back(random_table(rng, integral));
        capacity += tables.back().max_count();
      }
      const auto r = waterfill(tables, capacity);
      for (std::size_t n = 0; n <= capacity; ++n) {
        const double target = exhaustive_max(tables, n);
        if (integral) {
          CHECK(r.h[n] == target);
        } else {
          CHECK(std::abs(r.h[n] - target) <= 1e-12 * std::max(1.0, std::abs(target)));
        }
        CHECK(r.allocations[n].total() == n);
        if (n > 0) {
          for (std::size_t k = 0; k < p; ++k) CHECK(r.allocations[n - 1].counts[k] <= r.allocations[n].counts[k]);
        }
      }
      CHECK(ConcaveTable::is_non_decreasing(r.h));
      CHECK(ConcaveTable::is_concave(r.h));
    }
  }
}
