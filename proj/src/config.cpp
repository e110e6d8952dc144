#include "mstree/config.hpp"

#include <fstream>
#include <set>
#include <string>

#include "mstree/errors.hpp"

namespace mstree {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown field '" + key + "' in " + where);
  }
}

const json& required(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError("missing field '" + key + "' in " + where);
  return *it;
}

double number(const json& value, const std::string& what) {
  if (!value.is_number()) throw ConfigError("'" + what + "' must be a number");
  return value.get<double>();
}

int integer(const json& value, const std::string& what) {
  if (!value.is_number_integer()) throw ConfigError("'" + what + "' must be an integer");
  return value.get<int>();
}

NodeAddress address(const json& value, const std::string& what) {
  if (!value.is_string()) throw ConfigError("'" + what + "' must be an address string");
  return NodeAddress::parse(value.get<std::string>());
}

InnovationsConfig parse_innovations(const json& doc) {
  reject_unknown(doc, {"type", "root_variance", "scales", "overrides", "prune"}, "innovations config");
  InnovationsConfig cfg;
  cfg.root_variance = number(required(doc, "root_variance", "innovations config"), "root_variance");
  const json& scales = required(doc, "scales", "innovations config");
  if (!scales.is_array() || scales.empty()) throw ConfigError("'scales' must be a non-empty array");
  for (const json& s : scales) {
    reject_unknown(s, {"branching", "rho", "innovation_variance"}, "scale entry");
    ScaleSpec spec;
    spec.branching = integer(required(s, "branching", "scale entry"), "branching");
    if (s.contains("rho")) spec.rho = number(s["rho"], "rho");
    spec.innovation_variance =
        number(required(s, "innovation_variance", "scale entry"), "innovation_variance");
    cfg.scales.push_back(spec);
  }
  if (doc.contains("overrides")) {
    if (!doc["overrides"].is_array()) throw ConfigError("'overrides' must be an array");
    for (const json& o : doc["overrides"]) {
      reject_unknown(o, {"node", "rho", "innovation_variance"}, "override entry");
      NodeOverride ov;
      ov.node = address(required(o, "node", "override entry"), "node");
      if (o.contains("rho")) ov.rho = number(o["rho"], "rho");
      if (o.contains("innovation_variance")) {
        ov.innovation_variance = number(o["innovation_variance"], "innovation_variance");
      }
      cfg.overrides.push_back(ov);
    }
  }
  if (doc.contains("prune")) {
    if (!doc["prune"].is_array()) throw ConfigError("'prune' must be an array");
    for (const json& p : doc["prune"]) cfg.prune.push_back(address(p, "prune"));
  }
  return cfg;
}

CovarianceConfig parse_covariance(const json& doc) {
  reject_unknown(doc, {"type", "depth", "c", "rho", "root_variance", "scales"}, "covariance config");
  CovarianceConfig cfg;
  const int depth = integer(required(doc, "depth", "covariance config"), "depth");
  if (depth < 1) throw ConfigError("'depth' must be at least 1");
  const json& c = required(doc, "c", "covariance config");
  if (!c.is_array()) throw ConfigError("'c' must be an array");
  for (const json& v : c) cfg.c.push_back(number(v, "c"));
  if (cfg.c.size() != static_cast<std::size_t>(depth) + 1) {
    throw ConfigError("'c' must hold depth+1 values");
  }
  cfg.rho = number(required(doc, "rho", "covariance config"), "rho");
  cfg.root_variance = number(required(doc, "root_variance", "covariance config"), "root_variance");
  if (doc.contains("scales")) {
    const json& scales = doc["scales"];
    if (!scales.is_array() || scales.size() != static_cast<std::size_t>(depth)) {
      throw ConfigError("'scales' must hold one entry per scale");
    }
    for (const json& s : scales) {
      reject_unknown(s, {"branching"}, "covariance scale entry");
      cfg.branching.push_back(integer(required(s, "branching", "scale entry"), "branching"));
    }
  } else {
    cfg.branching.assign(static_cast<std::size_t>(depth), 2);
  }
  return cfg;
}

WigConfig parse_wig(const json& doc) {
  reject_unknown(doc, {"type", "depth", "H", "amplitude"}, "wig config");
  WigConfig cfg;
  cfg.depth = integer(required(doc, "depth", "wig config"), "depth");
  cfg.hurst = number(required(doc, "H", "wig config"), "H");
  if (doc.contains("amplitude")) cfg.amplitude = number(doc["amplitude"], "amplitude");
  return cfg;
}

}  // namespace

TreeConfig parse_tree_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("tree config must be a JSON object");
  const json& type = required(doc, "type", "tree config");
  if (!type.is_string()) throw ConfigError("'type' must be a string");
  const auto kind = type.get<std::string>();
  if (kind == "innovations") return parse_innovations(doc);
  if (kind == "covariance") return parse_covariance(doc);
  if (kind == "wig") return parse_wig(doc);
  throw ConfigError("unknown tree type '" + kind + "'");
}

TreeConfig load_tree_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open tree config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("tree config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_tree_config(doc);
}

json to_json(const TreeConfig& config) {
  struct Visitor {
    json operator()(const InnovationsConfig& cfg) const {
      json doc{{"type", "innovations"}, {"root_variance", cfg.root_variance}};
      json scales = json::array();
      for (const auto& s : cfg.scales) {
        scales.push_back({{"branching", s.branching}, {"rho", s.rho},
                          {"innovation_variance", s.innovation_variance}});
      }
      doc["scales"] = scales;
      json overrides = json::array();
      for (const auto& o : cfg.overrides) {
        json entry{{"node", o.node.to_string()}};
        if (o.rho) entry["rho"] = *o.rho;
        if (o.innovation_variance) entry["innovation_variance"] = *o.innovation_variance;
        overrides.push_back(entry);
      }
      doc["overrides"] = overrides;
      json prune = json::array();
      for (const auto& p : cfg.prune) prune.push_back(p.to_string());
      doc["prune"] = prune;
      return doc;
    }
    json operator()(const CovarianceConfig& cfg) const {
      json scales = json::array();
      for (int b : cfg.branching) scales.push_back({{"branching", b}});
      return {{"type", "covariance"}, {"depth", cfg.branching.size()}, {"c", cfg.c},
              {"rho", cfg.rho},       {"root_variance", cfg.root_variance}, {"scales", scales}};
    }
    json operator()(const WigConfig& cfg) const {
      return {{"type", "wig"}, {"depth", cfg.depth}, {"H", cfg.hurst}, {"amplitude", cfg.amplitude}};
    }
  };
  return std::visit(Visitor{}, config);
}

TreeModel build_model(const TreeConfig& config) {
  struct Visitor {
    TreeModel operator()(const InnovationsConfig& cfg) const { return InnovationsTree::build(cfg); }
    TreeModel operator()(const CovarianceConfig& cfg) const {
      return CovarianceTree(cfg.branching, cfg.c, cfg.rho, cfg.root_variance);
    }
    TreeModel operator()(const WigConfig& cfg) const {
      return build_wig_covariance_tree(cfg.depth, 2, cfg.hurst, cfg.amplitude);
    }
  };
  return std::visit(Visitor{}, config);
}

}  // namespace mstree
