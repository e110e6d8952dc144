#pragma once

#include <filesystem>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mstree/covariance_tree.hpp"
#include "mstree/innovations_tree.hpp"

namespace mstree {

struct CovarianceConfig {
  std::vector<int> branching;
  std::vector<double> c;
  double rho = 0.0;
  double root_variance = 1.0;

  friend bool operator==(const CovarianceConfig&, const CovarianceConfig&) = default;
};

struct WigConfig {
  int depth = 1;
  double hurst = 0.5;
  double amplitude = 1.0;

  friend bool operator==(const WigConfig&, const WigConfig&) = default;
};

using TreeConfig = std::variant<InnovationsConfig, CovarianceConfig, WigConfig>;
using TreeModel = std::variant<InnovationsTree, CovarianceTree>;

/// Tree configuration documents:
///
///   {"type": "innovations", "root_variance": 1,
///    "scales": [{"branching": 2, "rho": 1, "innovation_variance": 1}, ...],
///    "overrides": [{"node": "2", "innovation_variance": 5}], "prune": ["212"]}
///   {"type": "covariance", "depth": 2, "c": [1, 2, 3], "rho": 0.5,
///    "root_variance": 1, "scales": [{"branching": 2}, {"branching": 2}]}
///   {"type": "wig", "depth": 6, "H": 0.8, "amplitude": 1}
///
/// "rho" in a scale defaults to 1, covariance "scales" default to binary and
/// "amplitude" defaults to 1. Unknown fields are rejected with ConfigError.
TreeConfig parse_tree_config(const nlohmann::json& doc);
TreeConfig load_tree_config(const std::filesystem::path& path);
nlohmann::json to_json(const TreeConfig& config);

/// Throws DomainError when the parameters do not define a valid tree.
TreeModel build_model(const TreeConfig& config);

}  // namespace mstree
