#include "tn/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>

#include "tn/network.hpp"
#include "tn/rng.hpp"
#include "tn/serialization.hpp"

namespace tn {

using nlohmann::json;
using namespace cfg;

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[h & 0xf];
    h >>= 4;
  }
  return std::string(buf, 16);
}

std::uint64_t resolve_seed(const json& config, std::optional<std::uint64_t> cli_seed,
                           std::optional<std::uint64_t> env_seed) {
  if (cli_seed) return *cli_seed;
  if (auto it = config.find("rng_seed"); it != config.end())
    return as_count(*it, "config/rng_seed");
  if (env_seed) return *env_seed;
  return 0;
}

json RunOutput::full_report() const {
  json j = report;
  j["duration_ms"] = duration_ms;
  return j;
}

namespace {

std::size_t count_or(const json& config, const char* key, std::size_t fallback) {
  auto it = config.find(key);
  return it == config.end() ? fallback : as_count(*it, std::string("config/") + key);
}

double number_or(const json& config, const char* key, double fallback) {
  auto it = config.find(key);
  return it == config.end() ? fallback : as_number(*it, std::string("config/") + key);
}

std::vector<Activation> activations_from(const json& config) {
  const json& list = require_field(config, "activations", "config");
  if (!list.is_array() || list.empty())
    throw ConfigError("config/activations", "expected a non-empty array of activation names");
  std::vector<Activation> acts;
  for (std::size_t i = 0; i < list.size(); ++i)
    acts.push_back(
        Activation::parse(as_string(list[i], "config/activations/" + std::to_string(i))));
  return acts;
}

FiniteUnitaryGroup group_from(const json& config, std::size_t dim) {
  return parse_group_spec(require_field(config, "group", "config"), "config/group").build(dim);
}

struct Summary {
  double max = 0.0, mean = 0.0, median = 0.0;
};

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  s.max = sorted.back();
  double acc = 0.0;
  for (double v : sorted) acc += v;
  s.mean = acc / static_cast<double>(sorted.size());
  const std::size_t n = sorted.size();
  s.median = (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  return s;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

struct SuiteResult {
  std::vector<double> per_trial;
  double tolerance = 0.0;
  bool pass = false;
  json details = json::object();
};

SuiteResult run_fixed_point(const json& config, std::uint64_t seed) {
  SuiteResult r;
  const std::size_t dim = as_count(require_field(config, "dim", "config"), "config/dim");
  const std::size_t trials = count_or(config, "trials", 100);
  r.tolerance = number_or(config, "tolerance", 1e-12);
  const FiniteUnitaryGroup group = group_from(config, dim);
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = rng.vector(dim, -1.0, 1.0);
    const auto avg = group_average(group, x);
    double worst = 0.0;
    for (const auto& g : group.elements()) worst = std::max(worst, max_abs_diff(act(g, avg), avg));
    r.per_trial.push_back(worst);
  }
  r.pass = summarize(r.per_trial).max <= r.tolerance;
  r.details["group_size"] = group.size();
  return r;
}

SuiteResult run_node_invariance(const json& config, std::uint64_t seed) {
  SuiteResult r;
  const std::size_t dim = as_count(require_field(config, "dim", "config"), "config/dim");
  const std::size_t trials = count_or(config, "trials", 100);
  r.tolerance = number_or(config, "tolerance", 1e-12);
  const TNNode node =
      parse_node_spec(require_field(config, "node", "config"), "config/node").build(dim);
  const FiniteUnitaryGroup probe =
      config.contains("probe")
          ? parse_group_spec(config["probe"], "config/probe").build(dim)
          : node.channels().front().group();
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t)
    r.per_trial.push_back(invariance_deficit(node, rng.vector(dim, -1.0, 1.0), probe));
  const Summary s = summarize(r.per_trial);
  if (config.contains("median_above")) {
    // Negative-control mode: pass when the probe visibly breaks invariance.
    const double floor = as_number(config["median_above"], "config/median_above");
    r.pass = s.median > floor;
    r.details["median_above"] = floor;
  } else {
    r.pass = s.max <= r.tolerance;
  }
  r.details["probe_size"] = probe.size();
  r.details["channels"] = node.channel_count();
  r.details["pooling"] = pooling_name(node.pooling());
  return r;
}

SuiteResult run_pointwise_covariance(const json& config, std::uint64_t seed) {
  SuiteResult r;
  const std::size_t dim = as_count(require_field(config, "dim", "config"), "config/dim");
  const std::size_t trials = count_or(config, "trials", 100);
  r.tolerance = number_or(config, "tolerance", 0.0);
  const FiniteUnitaryGroup group = group_from(config, dim);
  const auto acts = activations_from(config);
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = rng.vector(dim, -1.0, 1.0);
    double worst = 0.0;
    for (const auto& eta : acts)
      for (const auto& g : group.elements())
        worst = std::max(worst, covariance_deficit(eta, g, x));
    r.per_trial.push_back(worst);
  }
  r.pass = summarize(r.per_trial).max <= r.tolerance;
  r.details["group_size"] = group.size();
  return r;
}

SuiteResult run_activation_unitarity(const json& config, std::uint64_t seed) {
  SuiteResult r;
  const std::size_t dim = as_count(require_field(config, "dim", "config"), "config/dim");
  const std::size_t pairs = count_or(config, "trials", 25);
  r.tolerance = number_or(config, "tolerance", 0.0);
  const FiniteUnitaryGroup group = group_from(config, dim);
  const auto acts = activations_from(config);
  json names = json::array();
  for (const auto& eta : acts) {
    r.per_trial.push_back(unitarity_deficit(eta, group, pairs, seed));
    names.push_back(eta.name());
  }
  r.pass = summarize(r.per_trial).max <= r.tolerance;
  r.details["activations"] = names;
  r.details["pairs_per_activation"] = pairs;
  r.details["group_size"] = group.size();
  return r;
}

SuiteResult run_activation_stability(const json& config, std::uint64_t) {
  SuiteResult r;
  r.tolerance = number_or(config, "tolerance", 0.0);
  const double lo = number_or(config, "grid_lo", 0.0);
  const double hi = number_or(config, "grid_hi", 2.0);
  const std::size_t points = count_or(config, "grid_points", 1001);
  if (!(lo < hi)) throw ConfigError("config/grid_lo", "grid must satisfy lo < hi");
  if (points < 2) throw ConfigError("config/grid_points", "grid needs at least two points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);

  const auto acts = activations_from(config);
  json names = json::array();
  bool pass = true;
  std::vector<double> frac_sequence;
  for (const auto& eta : acts) {
    const double d = stability_deficit(eta, grid);
    r.per_trial.push_back(d);
    names.push_back(eta.name());
    if (eta.kind() == Activation::Kind::frac_power)
      frac_sequence.push_back(d);
    else
      pass = pass && d <= r.tolerance;
  }
  // Fractional powers are not idempotent; the certified property is the
  // strict decrease toward d = 1 in the listed order.
  bool decreasing = true;
  for (std::size_t i = 1; i < frac_sequence.size(); ++i)
    decreasing = decreasing && frac_sequence[i] < frac_sequence[i - 1];
  pass = pass && decreasing;
  r.pass = pass;
  r.details["activations"] = names;
  r.details["strictly_decreasing"] = decreasing;
  return r;
}

SuiteResult run_feature_covariance(const json& config, std::uint64_t seed) {
  SuiteResult r;
  const std::size_t trials = count_or(config, "trials", 100);
  const std::size_t compositions = count_or(config, "compositions", 50);
  r.tolerance = number_or(config, "tolerance", 1e-12);
  const TNNetwork net =
      parse_network_spec(require_field(config, "network", "config"), "config/network").build();
  const FiniteUnitaryGroup lifted = layer_stage_group(net, 1);
  const FiniteUnitaryGroup in_block = layer_stage_group(net, 0);
  Rng rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = rng.vector(net.input_dim(), -1.0, 1.0);
    double worst = 0.0;
    for (const auto& g : lifted.elements())
      worst = std::max(worst, feature_covariance_deficit(net, x, g));
    for (std::size_t c = 0; c < compositions; ++c) {
      const auto& outer = lifted.element(rng.index(lifted.size()));
      const auto& inner = in_block.element(rng.index(in_block.size()));
      const GroupElement composed{outer.id + "*" + inner.id, outer.action.compose(inner.action),
                                  outer.support};
      worst = std::max(worst, feature_covariance_deficit(net, x, composed));
    }
    r.per_trial.push_back(worst);
  }
  r.pass = summarize(r.per_trial).max <= r.tolerance;
  r.details["block_transforms"] = lifted.size();
  r.details["compositions_per_trial"] = compositions;
  return r;
}

SuiteResult run_layered_invariance(const json& config, std::uint64_t seed) {
  SuiteResult r;
  const std::size_t trials = count_or(config, "trials", 20);
  const std::size_t samples = count_or(config, "spec_samples", 500);
  const std::uint64_t limit = count_or(config, "exhaustive_limit", 10'000);
  r.tolerance = number_or(config, "tolerance", 1e-10);
  // Inputs are drawn from the activation's range; invariance of the layered
  // class holds on that cone, not on arbitrary sign patterns.
  const double lo = number_or(config, "input_lo", 0.0);
  const double hi = number_or(config, "input_hi", 1.0);
  const TNNetwork net =
      parse_network_spec(require_field(config, "network", "config"), "config/network").build();

  std::vector<FiniteUnitaryGroup> stage_groups;
  json sizes = json::array();
  std::uint64_t flat = 1;
  bool overflow = false;
  for (std::size_t l = 0; l < net.depth(); ++l) {
    stage_groups.push_back(layer_stage_group(net, l));
    sizes.push_back(stage_groups.back().size());
    overflow = overflow || __builtin_mul_overflow(flat, stage_groups.back().size(), &flat);
  }

  Rng rng(seed);
  std::vector<TransformSpec> specs;
  const bool exhaustive = !overflow && flat <= limit;
  if (exhaustive) {
    std::vector<std::size_t> pick(stage_groups.size(), 0);
    for (std::uint64_t n = 0; n < flat; ++n) {
      TransformSpec spec;
      for (std::size_t l = 0; l < stage_groups.size(); ++l)
        spec.stages.push_back(stage_groups[l].element(pick[l]));
      specs.push_back(std::move(spec));
      for (std::size_t l = stage_groups.size(); l-- > 0;) {
        if (++pick[l] < stage_groups[l].size()) break;
        pick[l] = 0;
      }
    }
  } else {
    for (std::size_t s = 0; s < samples; ++s) {
      TransformSpec spec;
      for (const auto& g : stage_groups) spec.stages.push_back(g.element(rng.index(g.size())));
      specs.push_back(std::move(spec));
    }
  }

  for (std::size_t t = 0; t < trials; ++t) {
    const auto x = rng.vector(net.input_dim(), lo, hi);
    double worst = 0.0;
    for (const auto& spec : specs)
      worst = std::max(worst, nonlinear_invariance_deficit(net, x, spec));
    r.per_trial.push_back(worst);
  }
  r.pass = summarize(r.per_trial).max <= r.tolerance;
  r.details["stage_sizes"] = sizes;
  r.details["spec_count"] = specs.size();
  r.details["exhaustive"] = exhaustive;
  std::uint64_t hier = 0;
  for (const auto& g : stage_groups) hier += g.size();
  r.details["cost_hierarchical"] = hier;
  if (!overflow)
    r.details["cost_flat"] = flat;
  else
    r.details["cost_flat"] = nullptr;
  return r;
}

SuiteResult run_cost(const json& config, std::uint64_t) {
  SuiteResult r;
  const auto sizes = as_index_list(require_field(config, "sizes", "config"), "config/sizes");
  const HierarchyCost cost(
      hierarchy_cost(std::vector<std::uint64_t>(sizes.begin(), sizes.end())));
  r.pass = cost.hierarchical <= cost.flat;
  r.details["sizes"] = sizes;
  r.details["flat"] = cost.flat;
  r.details["hierarchical"] = cost.hierarchical;
  return r;
}

SuiteResult run_curves(const json& config, std::uint64_t, RunOutput& out) {
  SuiteResult r;
  const json& list = require_field(config, "activations", "config");
  if (!list.is_array() || list.empty())
    throw ConfigError("config/activations", "expected a non-empty array of activation names");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i)
    names.push_back(as_string(list[i], "config/activations/" + std::to_string(i)));
  const double lo = number_or(config, "lo", -1.5);
  const double hi = number_or(config, "hi", 1.5);
  const std::size_t points = count_or(config, "points", 301);
  out.artifacts.emplace_back("curves.csv", curves_csv(names, lo, hi, points));
  r.pass = true;
  r.details["activations"] = names;
  r.details["lo"] = lo;
  r.details["hi"] = hi;
  r.details["points"] = points;
  return r;
}

}  // namespace

std::string curves_csv(const std::vector<std::string>& activations, double lo, double hi,
                       std::size_t points) {
  if (activations.empty()) throw ConfigError("activations", "need at least one activation");
  if (!(lo < hi)) throw ConfigError("range", "lo must be smaller than hi");
  if (points < 2) throw ConfigError("points", "need at least two points");
  std::vector<Activation> acts;
  std::string header = "x";
  for (const auto& name : activations) {
    acts.push_back(Activation::parse(name));
    header += "," + name;
  }
  std::vector<std::vector<CurveSample>> columns;
  for (const auto& eta : acts) columns.push_back(activation_curve(eta, lo, hi, points));

  std::string csv = header + "\n";
  for (std::size_t i = 0; i < points; ++i) {
    csv += format_double(columns.front()[i].x);
    for (const auto& col : columns) csv += "," + format_double(col[i].value);
    csv += "\n";
  }
  return csv;
}

RunOutput run_experiment(const json& config, std::optional<std::uint64_t> seed_override) {
  const auto start = std::chrono::steady_clock::now();
  if (!config.is_object()) throw ConfigError("config", "expected a JSON object");
  const std::string kind = as_string(require_field(config, "kind", "config"), "config/kind");
  const std::uint64_t seed = resolve_seed(config, seed_override, {});

  RunOutput out;
  SuiteResult suite;
  if (kind == "fixed_point")
    suite = run_fixed_point(config, seed);
  else if (kind == "node_invariance")
    suite = run_node_invariance(config, seed);
  else if (kind == "pointwise_covariance")
    suite = run_pointwise_covariance(config, seed);
  else if (kind == "activation_unitarity")
    suite = run_activation_unitarity(config, seed);
  else if (kind == "activation_stability")
    suite = run_activation_stability(config, seed);
  else if (kind == "feature_covariance")
    suite = run_feature_covariance(config, seed);
  else if (kind == "layered_invariance")
    suite = run_layered_invariance(config, seed);
  else if (kind == "cost")
    suite = run_cost(config, seed);
  else if (kind == "curves")
    suite = run_curves(config, seed, out);
  else
    throw ConfigError("config/kind", "unknown experiment kind '" + kind + "'");

  const Summary s = summarize(suite.per_trial);
  out.report["kind"] = kind;
  out.report["seed"] = seed;
  out.report["config_digest"] = fnv1a_hex(config.dump());
  out.report["tolerance"] = suite.tolerance;
  out.report["trials"] = suite.per_trial.size();
  out.report["deficits"] = {{"per_trial", suite.per_trial},
                            {"max", s.max},
                            {"mean", s.mean},
                            {"median", s.median}};
  out.report["pass"] = suite.pass;
  out.report["details"] = suite.details;
  out.pass = suite.pass;
  out.duration_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

SweepResult run_sweep(const std::vector<std::pair<std::string, json>>& configs,
                      std::optional<std::uint64_t> seed_override) {
  if (configs.empty()) throw ConfigError("configs", "a sweep needs at least one config");
  SweepResult result;
  result.all_pass = true;
  result.summary_csv = "experiment,max_deficit,pass\n";
  for (const auto& [name, config] : configs) {
    RunOutput out;
    std::string kind = "?";
    if (config.is_object() && config.contains("kind") && config["kind"].is_string())
      kind = config["kind"].get<std::string>();
    try {
      out = run_experiment(config, seed_override);
    } catch (const Error& e) {
      out.report = {{"kind", kind}, {"error", e.what()}, {"pass", false}};
      out.pass = false;
    }
    const double max_deficit =
        out.report.contains("deficits") ? out.report["deficits"]["max"].get<double>() : 0.0;
    result.summary_csv += name + "," + format_double(max_deficit) + "," +
                          (out.pass ? "true" : "false") + "\n";
    result.all_pass = result.all_pass && out.pass;
    result.runs.emplace_back(name, std::move(out));
  }
  return result;
}

}  // namespace tn
