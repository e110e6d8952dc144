#include "commands.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mstree/errors.hpp"
#include "mstree/estimator.hpp"
#include "mstree/oracle.hpp"
#include "mstree/selection.hpp"

namespace mstree::cli {

using nlohmann::json;

namespace {

json leaves_json(const Topology& topo, const LeafSet& leaves) {
  json out = json::array();
  for (const auto& a : leaves.addresses(topo)) out.push_back(a.to_string());
  return out;
}

const Topology& topology_of(const TreeModel& model) {
  return std::visit([](const auto& tree) -> const Topology& { return tree.topology(); }, model);
}

}  // namespace

json RunManifest::to_json() const {
  json doc{{"command", command},
           {"config_path", config_path},
           {"flags", flags},
           {"tool_version", tool_version},
           {"duration_seconds", duration_seconds}};
  doc["seed"] = seed ? json(*seed) : json(nullptr);
  return doc;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& text) {
  auto to_size = [&](const std::string& part) -> std::size_t {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos) {
      throw ConfigError("malformed n-range '" + text + "'");
    }
    return std::stoul(part);
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const std::size_t n = to_size(text);
    return {n, n};
  }
  const std::size_t first = to_size(text.substr(0, dots));
  const std::size_t last = to_size(text.substr(dots + 2));
  if (first > last) throw ConfigError("empty n-range '" + text + "'");
  return {first, last};
}

std::string optimal_csv(const TreeModel& model, std::size_t first, std::size_t last) {
  const Topology& topo = topology_of(model);
  if (last > topo.leaf_count()) {
    throw DomainError("n = " + std::to_string(last) + " exceeds the leaf count " +
                      std::to_string(topo.leaf_count()));
  }
  struct Row {
    std::size_t n;
    double lmmse;
    double variance;
    LeafSet leaves;
  };
  std::vector<Row> rows;
  if (const auto* tree = std::get_if<InnovationsTree>(&model)) {
    const double var = tree->root_variance();
    if (first == 0) rows.push_back({0, var, var, {}});
    if (last > 0) {
      for (auto& s : optimal_leaf_sets(*tree, last)) {
        if (s.n >= first) rows.push_back({s.n, s.lmmse, var, std::move(s.leaves)});
      }
    }
  } else {
    const auto& cov = std::get<CovarianceTree>(model);
    InnovationsTree matched = [&] {
      try {
        return matched_innovations_tree(cov);
      } catch (const DomainError& e) {
        throw DomainError(std::string(e.what()) +
                          "; optimal sets are only known for positive correlation progression, "
                          "use `survey` to compare patterns instead");
      }
    }();
    const double var = cov.root_variance();
    if (first == 0) rows.push_back({0, var, var, {}});
    if (last > 0) {
      for (auto& s : optimal_leaf_sets(matched, last)) {
        if (s.n >= first) rows.push_back({s.n, lmmse(cov, s.leaves).lmmse, var, std::move(s.leaves)});
      }
    }
  }
  std::ostringstream out;
  out << "n,lmmse,normalized_lmmse,leaves\n";
  for (const auto& r : rows) {
    out << r.n << ',' << format_double(r.lmmse) << ',' << format_double(r.lmmse / r.variance) << ','
        << r.leaves.to_string(topo) << '\n';
  }
  return out.str();
}

json survey_json(const CovarianceTree& tree, std::size_t n, std::size_t trials, std::uint64_t seed,
                 bool histogram) {
  const SurveyResult r = random_pattern_survey(tree, n, trials, seed, histogram);
  const Topology& topo = tree.topology();
  auto optional = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json doc{{"n", r.n},
           {"trials", r.trials},
           {"seed", r.seed},
           {"progression", std::string(to_string(tree.progression()))},
           {"uniform",
            {{"normalized_lmmse", r.uniform.normalized_lmmse}, {"leaves", leaves_json(topo, r.uniform.leaves)}}},
           {"clustered",
            {{"normalized_lmmse", r.clustered.normalized_lmmse},
             {"leaves", leaves_json(topo, r.clustered.leaves)}}},
           {"random_min", optional(r.random_min)},
           {"random_max", optional(r.random_max)},
           {"random_mean", optional(r.random_mean)}};
  if (histogram) doc["random_values"] = r.random_values;
  return doc;
}

json bruteforce_json(const TreeModel& model, std::size_t n, std::uint64_t cap) {
  const Topology& topo = topology_of(model);
  const Extremes x = std::visit([&](const auto& tree) { return brute_force_extremes(tree, n, cap); }, model);
  const double var =
      std::visit([](const auto& tree) { return tree.topology().node_count() ? tree.root_variance() : 0.0; }, model);
  auto side = [&](const LeafSet& leaves, double e) {
    json doc{{"leaves", leaves_json(topo, leaves)}, {"lmmse", e}, {"normalized_lmmse", e / var}};
    if (const auto* cov = std::get_if<CovarianceTree>(&model)) {
      const RowSumCheck rows = row_sum_eigen_check(*cov, leaves);
      doc["q_sum"] = q_sum(*cov, leaves);
      doc["row_sums"] = {{"constant", rows.constant_row_sums}, {"lambda", rows.lambda}};
    }
    return doc;
  };
  json doc{{"n", n}, {"evaluated", x.evaluated}, {"best", side(x.best, x.best_lmmse)},
           {"worst", side(x.worst, x.worst_lmmse)}};
  if (const auto* cov = std::get_if<CovarianceTree>(&model)) {
    doc["progression"] = std::string(to_string(cov->progression()));
  }
  return doc;
}

std::string synthesize_csv(const MidpointSchedule& schedule, std::size_t paths, std::uint64_t seed) {
  std::ostringstream out;
  out << "path_id,step,increment,cumulative\n";
  for (std::size_t p = 0; p < paths; ++p) {
    const MidpointPath path = synthesize_midpoint_path(schedule, seed, p);
    for (std::size_t k = 0; k < path.increments.size(); ++k) {
      out << p << ',' << k + 1 << ',' << format_double(path.increments[k]) << ','
          << format_double(path.cumulative[k]) << '\n';
    }
  }
  return out.str();
}

json benchmark_json(int depth, std::size_t n) {
  if (depth < 1) throw DomainError("benchmark depth must be at least 1");
  if (depth > kMaxBenchmarkDepth) {
    throw ResourceError("benchmark depth " + std::to_string(depth) + " exceeds the guardrail of " +
                        std::to_string(kMaxBenchmarkDepth));
  }
  InnovationsConfig cfg;
  cfg.root_variance = 1.0;
  cfg.scales.assign(static_cast<std::size_t>(depth), ScaleSpec{2, 1.0, 1.0});
  const InnovationsTree tree = InnovationsTree::build(cfg);
  if (n < 1 || n > tree.leaf_count()) throw DomainError("n must lie in 1..leaf count");

  const auto start = std::chrono::steady_clock::now();
  const MuTable tables = build_mu_tables(tree);
  const auto sets = optimal_leaf_sets(tree, tables, n);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const OptimalSet& last = sets.back();
  const double direct = lmmse(tree, tree.topology().root(), last.leaves).lmmse;
  const double from_tables = 1.0 / tables.root(n);
  const double rel = std::abs(direct - from_tables) / std::abs(from_tables);
  return {{"depth", depth},
          {"leaf_count", tree.leaf_count()},
          {"n", n},
          {"seconds", seconds},
          {"lmmse_tables", from_tables},
          {"lmmse_direct", direct},
          {"relative_difference", rel},
          {"verified", rel <= 1e-9},
          {"leaves", leaves_json(tree.topology(), last.leaves)}};
}

void write_csv(const std::optional<std::filesystem::path>& out, const RunManifest& manifest,
               const std::string& payload) {
  auto emit = [&](std::ostream& os) { os << "# manifest: " << manifest.to_json().dump() << '\n' << payload; };
  if (!out) {
    emit(std::cout);
    return;
  }
  std::ofstream file(*out);
  if (!file) throw ConfigError("cannot write '" + out->string() + "'");
  emit(file);
}

void write_json(const std::optional<std::filesystem::path>& out, const RunManifest& manifest,
                json payload) {
  payload["manifest"] = manifest.to_json();
  if (!out) {
    std::cout << payload.dump(2) << '\n';
    return;
  }
  std::ofstream file(*out);
  if (!file) throw ConfigError("cannot write '" + out->string() + "'");
  file << payload.dump(2) << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"Optimal leaf sampling for multiscale tree models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::string tree_path;
  std::optional<std::size_t> n_single;
  std::string n_range;
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::string out_path;
  std::uint64_t cap = kDefaultSubsetCap;
  bool histogram = false;
  int depth = 0;
  std::optional<double> hurst;
  bool brownian = false;
  std::size_t paths = 1;

  auto* optimal = app.add_subcommand("optimal", "Optimal leaf sets for a range of sample sizes");
  optimal->add_option("--tree", tree_path, "Tree configuration (JSON)")->required();
  auto* opt_n = optimal->add_option("--n", n_single, "Sample size");
  auto* opt_range = optimal->add_option("--n-range", n_range, "Sample sizes A..B");
  opt_n->excludes(opt_range);
  optimal->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* survey = app.add_subcommand("survey", "Random-pattern survey against uniform and clustered sets");
  survey->add_option("--tree", tree_path, "Covariance or WIG tree configuration")->required();
  survey->add_option("--n", n_single, "Sample size")->required();
  survey->add_option("--trials", trials, "Random patterns to evaluate");
  survey->add_option("--seed", seed, "Random seed");
  survey->add_option("--out", out_path, "Output JSON (default stdout)");
  survey->add_flag("--histogram", histogram, "Include every trial's value");

  auto* brute = app.add_subcommand("bruteforce", "Exhaustive best and worst leaf sets");
  brute->add_option("--tree", tree_path, "Tree configuration")->required();
  brute->add_option("--n", n_single, "Sample size")->required();
  brute->add_option("--cap", cap, "Maximum number of subsets to enumerate");
  brute->add_option("--out", out_path, "Output JSON (default stdout)");

  auto* synth = app.add_subcommand("synthesize", "Midpoint-displacement path synthesis");
  synth->add_option("--depth", depth, "Finest scale")->required();
  auto* synth_h = synth->add_option("--hurst", hurst, "Hurst parameter for the fBm-style schedule");
  auto* synth_b = synth->add_flag("--brownian", brownian, "Exact Brownian motion");
  synth_h->excludes(synth_b);
  synth->add_option("--paths", paths, "Number of paths");
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--out", out_path, "Output CSV (default stdout)");

  auto* bench = app.add_subcommand("benchmark", "Time the water-filling search on a binary tree");
  bench->add_option("--depth", depth, "Tree depth")->required();
  bench->add_option("--n", n_single, "Sample size")->required();
  bench->add_option("--out", out_path, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  const auto start = std::chrono::steady_clock::now();
  RunManifest manifest;
  std::optional<std::filesystem::path> out;
  if (!out_path.empty()) out = out_path;
  auto finish = [&] {
    manifest.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  try {
    CLI::App* sub = app.get_subcommands().front();
    manifest.command = sub->get_name();
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_name() == "--help" || opt->count() == 0) continue;
      const auto results = opt->results();
      manifest.flags[opt->get_name()] = results.size() == 1 ? json(results.front()) : json(results);
    }

    if (sub == optimal) {
      manifest.config_path = tree_path;
      std::pair<std::size_t, std::size_t> range;
      if (n_single) {
        range = {*n_single, *n_single};
      } else if (!n_range.empty()) {
        range = parse_range(n_range);
      } else {
        throw ConfigError("optimal needs --n or --n-range");
      }
      const TreeModel model = build_model(load_tree_config(tree_path));
      const std::string payload = optimal_csv(model, range.first, range.second);
      finish();
      write_csv(out, manifest, payload);
    } else if (sub == survey) {
      manifest.config_path = tree_path;
      manifest.seed = seed;
      const TreeModel model = build_model(load_tree_config(tree_path));
      const auto* cov = std::get_if<CovarianceTree>(&model);
      if (!cov) throw ConfigError("survey needs a covariance or wig tree configuration");
      json payload = survey_json(*cov, *n_single, trials, seed, histogram);
      finish();
      write_json(out, manifest, std::move(payload));
    } else if (sub == brute) {
      manifest.config_path = tree_path;
      const TreeModel model = build_model(load_tree_config(tree_path));
      json payload = bruteforce_json(model, *n_single, cap);
      finish();
      write_json(out, manifest, std::move(payload));
    } else if (sub == synth) {
      manifest.seed = seed;
      if (!hurst && !brownian) throw ConfigError("synthesize needs --hurst or --brownian");
      const MidpointSchedule schedule = brownian ? brownian_schedule(depth) : fbm_schedule(depth, *hurst);
      const std::string payload = synthesize_csv(schedule, paths, seed);
      finish();
      write_csv(out, manifest, payload);
    } else if (sub == bench) {
      json payload = benchmark_json(depth, *n_single);
      finish();
      write_json(out, manifest, std::move(payload));
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResourceError;
  }
  return kOk;
}

}  // namespace mstree::cli
