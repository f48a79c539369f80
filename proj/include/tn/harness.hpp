#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "tn/errors.hpp"

namespace tn {

/// Result of one experiment. `report` is the deterministic body: identical
/// config and seed reproduce it bit for bit. Wall-clock time stays outside
/// so reports stay comparable; full_report() merges it back for writing.
struct RunOutput {
  nlohmann::json report;
  double duration_ms = 0.0;
  bool pass = false;
  /// (filename, content) side outputs, e.g. the curves CSV.
  std::vector<std::pair<std::string, std::string>> artifacts;

  nlohmann::json full_report() const;
};

/// Seed priority: command line, then the config's rng_seed, then the
/// environment fallback, then 0.
std::uint64_t resolve_seed(const nlohmann::json& config, std::optional<std::uint64_t> cli_seed,
                           std::optional<std::uint64_t> env_seed);

/// Runs the experiment named by config["kind"]:
///   fixed_point        group averaging is a fixed point of every element
///   node_invariance    node output unchanged under a probe group
///   pointwise_covariance  activation commutes with permutation elements
///   activation_unitarity  inner products survive group + activation
///   activation_stability  idempotence and the d -> 1 trend
///   feature_covariance natural feature permutation under block transforms
///   layered_invariance top output unchanged under the layered transform class
///   cost               flat versus hierarchical integration counts
///   curves             activation curve CSV
/// Config field errors throw ConfigError naming the path.
RunOutput run_experiment(const nlohmann::json& config,
                         std::optional<std::uint64_t> seed_override = {});

struct SweepResult {
  std::vector<std::pair<std::string, RunOutput>> runs;
  std::string summary_csv;  // columns: experiment, max_deficit, pass
  bool all_pass = false;
};

/// Runs every config; per-config errors are recorded as failing rows rather
/// than aborting the sweep.
SweepResult run_sweep(const std::vector<std::pair<std::string, nlohmann::json>>& configs,
                      std::optional<std::uint64_t> seed_override = {});

/// One column per activation name; rows are uniformly spaced over [lo, hi].
std::string curves_csv(const std::vector<std::string>& activations, double lo, double hi,
                       std::size_t points);

/// Shortest round-trip decimal form, the same on every platform.
std::string format_double(double v);

/// FNV-1a 64-bit digest as fixed-width hex.
std::string fnv1a_hex(const std::string& data);

}  // namespace tn
