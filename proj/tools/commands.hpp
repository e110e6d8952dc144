#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mstree/config.hpp"
#include "mstree/midpoint.hpp"

namespace mstree::cli {

inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kConfigError = 2, kDomainError = 3, kResourceError = 4 };

/// Provenance embedded in every output file. Everything except
/// duration_seconds is a function of the invocation.
struct RunManifest {
  std::string command;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  nlohmann::json flags = nlohmann::json::object();
  std::string tool_version = kToolVersion;
  double duration_seconds = 0.0;

  nlohmann::json to_json() const;
};

/// 17 significant digits.
std::string format_double(double value);

/// "A..B" or a single integer.
std::pair<std::size_t, std::size_t> parse_range(const std::string& text);

// Payload builders. Each is a pure function of its arguments except the
// timing fields of the benchmark.

/// CSV "n,lmmse,normalized_lmmse,leaves" for n = first..last.
std::string optimal_csv(const TreeModel& model, std::size_t first, std::size_t last);

/// Survey keys n, trials, seed, uniform, clustered, random_min, random_max,
/// random_mean (null when trials == 0), and random_values with histogram.
nlohmann::json survey_json(const CovarianceTree& tree, std::size_t n, std::size_t trials,
                           std::uint64_t seed, bool histogram);

nlohmann::json bruteforce_json(const TreeModel& model, std::size_t n, std::uint64_t cap);

/// CSV "path_id,step,increment,cumulative".
std::string synthesize_csv(const MidpointSchedule& schedule, std::size_t paths, std::uint64_t seed);

inline constexpr int kMaxBenchmarkDepth = 20;
nlohmann::json benchmark_json(int depth, std::size_t n);

/// Manifest as a leading "# manifest: {...}" comment line, then the payload.
void write_csv(const std::optional<std::filesystem::path>& out, const RunManifest& manifest,
               const std::string& payload);
/// Payload object with an added "manifest" key.
void write_json(const std::optional<std::filesystem::path>& out, const RunManifest& manifest,
                nlohmann::json payload);

/// Entry point: parses argv, dispatches, maps errors to exit codes.
int run(int argc, char** argv);

}  // namespace mstree::cli
