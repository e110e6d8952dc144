#include "mstree/midpoint.hpp"

#include <cmath>
#include <random>
#include <string>

#include "mstree/errors.hpp"
#include "mstree/rng.hpp"

namespace mstree {

double MidpointSchedule::node_variance(int scale) const {
  if (scale < 0 || scale > depth()) throw DomainError("scale out of range");
  double v = root_variance;
  for (int j = 0; j < scale; ++j) v = v / 4.0 + innovation_variance[static_cast<std::size_t>(j)];
  return v;
}

MidpointSchedule brownian_schedule(int depth) {
  if (depth < 1) throw DomainError("synthesis depth must be at least 1");
  MidpointSchedule s;
  s.root_variance = 1.0;
  double w = 0.25;
  for (int j = 0; j < depth; ++j, w /= 2.0) s.innovation_variance.push_back(w);
  return s;
}

MidpointSchedule fbm_schedule(int depth, double hurst, double amplitude) {
  if (depth < 1) throw DomainError("synthesis depth must be at least 1");
  if (!(hurst > 0.0 && hurst < 1.0)) throw DomainError("Hurst parameter must lie in (0, 1)");
  if (!(amplitude > 0.0) || !std::isfinite(amplitude)) throw DomainError("amplitude must be positive");
  auto target = [&](int j) { return amplitude * std::pow(2.0, -2.0 * j * hurst); };
  MidpointSchedule s;
  s.root_variance = target(0);
  for (int j = 0; j < depth; ++j) {
    const double w = target(j + 1) - target(j) / 4.0;
    if (!(w > 0.0)) {
      throw DomainError("innovation variance at scale " + std::to_string(j) + " is not positive");
    }
    s.innovation_variance.push_back(w);
  }
  return s;
}

MidpointPath synthesize_midpoint_path(const MidpointSchedule& schedule, std::uint64_t seed,
                                      std::uint64_t stream) {
  if (schedule.depth() < 1) throw DomainError("synthesis depth must be at least 1");
  auto engine = keyed_engine(seed, stream);
  std::normal_distribution<double> normal(0.0, 1.0);

  MidpointPath path;
  path.root = std::sqrt(schedule.root_variance) * normal(engine);
  std::vector<double> level{path.root};
  for (int j = 0; j < schedule.depth(); ++j) {
    const double sd = std::sqrt(schedule.innovation_variance[static_cast<std::size_t>(j)]);
    std::vector<double> next;
    next.reserve(level.size() * 2);
    for (double v : level) {
      const double w = sd * normal(engine);
      next.push_back(v / 2.0 + w);
      next.push_back(v / 2.0 - w);
    }
    level = std::move(next);
  }
  path.increments = std::move(level);
  path.cumulative.reserve(path.increments.size());
  double running = 0.0;
  for (double x : path.increments) {
    running += x;
    path.cumulative.push_back(running);
  }
  return path;
}

}  // namespace mstree
