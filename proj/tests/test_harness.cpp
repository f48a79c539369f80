#include <doctest.h>

#include <cmath>
#include <sstream>

#include "tn/harness.hpp"

using nlohmann::json;
using namespace tn;

namespace {

json index_range(std::size_t offset, std::size_t size) {
  json idx = json::array();
  for (std::size_t i = 0; i < size; ++i) idx.push_back(offset + i);
  return idx;
}

json cyclic_group(std::size_t n) {
  return {{"kind", "cyclic"}, {"support", index_range(0, n)}};
}

json one_hot_node(std::size_t n) {
  json t = json::array();
  for (std::size_t i = 0; i < n; ++i) t.push_back(i == 0 ? 1.0 : 0.0);
  return {{"support", index_range(0, n)},
          {"group", cyclic_group(n)},
          {"pooling", "mean"},
          {"activation", "relu"},
          {"templates", json::array({t})}};
}

json two_layer_network() {
  // Four C_4 blocks feeding one 4-node mixer; layer-0 one-hot templates.
  json layer0 = json::array();
  for (int b = 0; b < 4; ++b) {
    const json support = index_range(4 * b, 4);
    layer0.push_back({{"support", support},
                      {"group", {{"kind", "cyclic"}, {"support", support}}},
                      {"pooling", "mean"},
                      {"activation", "relu"},
                      {"templates", json::array({json::array({1.0, 0.0, 0.0, 0.0})})}});
  }
  json top = {{"support", index_range(0, 4)},
              {"group",
               {{"kind", "block_perm"},
                {"blocks", json::array({json::array({0}), json::array({1}), json::array({2}),
                                        json::array({3})})}}},
              {"pooling", "mean"},
              {"activation", "relu"},
              {"templates", json::array({json::array({0.5, 1.0, 0.25, 0.75})})}};
  return {{"input_dim", 16},
          {"layers", json::array({layer0, json::array({top})})},
          {"hierarchy", json::array({json::array({4})})}};
}

}  // namespace

TEST_CASE("seed priority: cli beats config beats environment") {
  const json with_seed = {{"rng_seed", 7}};
  const json without = json::object();
  CHECK(resolve_seed(with_seed, 99, 5) == 99);
  CHECK(resolve_seed(with_seed, {}, 5) == 7);
  CHECK(resolve_seed(without, {}, 5) == 5);
  CHECK(resolve_seed(without, {}, {}) == 0);
}

TEST_CASE("fixed point experiment passes and reports group size") {
  const json config = {{"kind", "fixed_point"}, {"group", cyclic_group(8)},
                       {"dim", 8},            {"trials", 20},
                       {"rng_seed", 3}};
  const RunOutput out = run_experiment(config);
  CHECK(out.pass);
  CHECK(out.report["pass"].get<bool>());
  CHECK(out.report["trials"].get<std::size_t>() == 20);
  CHECK(out.report["deficits"]["per_trial"].size() == 20);
  CHECK(out.report["deficits"]["max"].get<double>() <= 1e-12);
  CHECK(out.report["details"]["group_size"].get<std::size_t>() == 8);
  CHECK(out.report["seed"].get<std::uint64_t>() == 3);
}

TEST_CASE("identical config and seed reproduce the report body bit for bit") {
  const json config = {{"kind", "node_invariance"}, {"node", one_hot_node(8)},
                       {"dim", 8},                {"trials", 15}};
  const RunOutput a = run_experiment(config, 42);
  const RunOutput b = run_experiment(config, 42);
  CHECK(a.report.dump() == b.report.dump());
  const RunOutput c = run_experiment(config, 43);
  CHECK(a.report.dump() != c.report.dump());
}

TEST_CASE("node invariance negative control: median_above flips the criterion") {
  // A reflection is outside the cyclic group; the node should visibly move.
  json probe = {{"kind", "explicit"},
                {"support", index_range(0, 8)},
                {"perms", json::array({json::array({0, 1, 2, 3, 4, 5, 6, 7}),
                                       json::array({0, 7, 6, 5, 4, 3, 2, 1})})}};
  // One-hot templates won't do here: with either pooling they reduce to a
  // symmetric statistic of x (mean or max), invariant under every
  // permutation. A generic template makes the orbit correlations distinct.
  json node = one_hot_node(8);
  node["pooling"] = "max";
  node["activation"] = "identity";
  node["templates"] = json::array(
      {json::array({0.9, -0.3, 0.7, 0.1, -0.8, 0.45, -0.15, 0.6})});
  const json config = {{"kind", "node_invariance"},
                       {"node", node},
                       {"dim", 8},
                       {"trials", 31},
                       {"probe", probe},
                       {"median_above", 1e-3}};
  const RunOutput out = run_experiment(config);
  CHECK(out.pass);
  CHECK(out.report["deficits"]["median"].get<double>() > 1e-3);

  json strict = config;
  strict.erase("median_above");
  CHECK_FALSE(run_experiment(strict).pass);
}

TEST_CASE("pointwise covariance and unitarity certify exact zero on permutations") {
  const json cov = {{"kind", "pointwise_covariance"},
                    {"group", cyclic_group(8)},
                    {"dim", 8},
                    {"activations", json::array({"relu", "fracpow:0.7", "identity"})},
                    {"trials", 10}};
  const RunOutput c = run_experiment(cov);
  CHECK(c.pass);
  CHECK(c.report["deficits"]["max"].get<double>() == 0.0);

  const json uni = {{"kind", "activation_unitarity"},
                    {"group", cyclic_group(8)},
                    {"dim", 8},
                    {"activations", json::array({"relu", "fracpow:0.5"})},
                    {"trials", 5}};
  const RunOutput u = run_experiment(uni);
  CHECK(u.pass);
  CHECK(u.report["deficits"]["max"].get<double>() == 0.0);
  CHECK(u.report["trials"].get<std::size_t>() == 2);  // one entry per activation
}

TEST_CASE("stability suite checks idempotence and the strict decrease") {
  const json config = {
      {"kind", "activation_stability"},
      {"activations", json::array({"relu", "fracpow:0.5", "fracpow:0.7", "fracpow:0.9", "fracpow:0.99"})}};
  const RunOutput out = run_experiment(config);
  CHECK(out.pass);
  CHECK(out.report["details"]["strictly_decreasing"].get<bool>());
  const auto deficits = out.report["deficits"]["per_trial"].get<std::vector<double>>();
  CHECK(deficits[0] == 0.0);        // hard_relu is idempotent
  CHECK(deficits[1] > deficits[2]);  // d = 0.5 worse than 0.7
  CHECK(deficits[4] < 0.05);

  json reordered = config;
  reordered["activations"] = json::array({"fracpow:0.9", "fracpow:0.5"});
  CHECK_FALSE(run_experiment(reordered).pass);  // increase breaks the trend
}

TEST_CASE("feature covariance suite passes on the block network") {
  const json config = {{"kind", "feature_covariance"},
                       {"network", two_layer_network()},
                       {"trials", 10},
                       {"compositions", 8}};
  const RunOutput out = run_experiment(config);
  CHECK(out.pass);
  CHECK(out.report["details"]["block_transforms"].get<std::size_t>() == 24);
  CHECK(out.report["deficits"]["max"].get<double>() <= 1e-12);
}

TEST_CASE("layered invariance suite enumerates the full transform class") {
  const json config = {{"kind", "layered_invariance"},
                       {"network", two_layer_network()},
                       {"trials", 4},
                       {"rng_seed", 11}};
  const RunOutput out = run_experiment(config);
  CHECK(out.pass);
  CHECK(out.report["details"]["exhaustive"].get<bool>());
  CHECK(out.report["details"]["spec_count"].get<std::size_t>() == 256 * 24);
  CHECK(out.report["details"]["stage_sizes"] == json::array({256, 24}));
  CHECK(out.report["details"]["cost_flat"].get<std::uint64_t>() == 256 * 24);
  CHECK(out.report["details"]["cost_hierarchical"].get<std::uint64_t>() == 256 + 24);
  CHECK(out.report["deficits"]["max"].get<double>() <= 1e-10);
}

TEST_CASE("layered invariance falls back to sampling past the limit") {
  json config = {{"kind", "layered_invariance"}, {"network", two_layer_network()},
                 {"trials", 2},                {"exhaustive_limit", 100},
                 {"spec_samples", 25},         {"rng_seed", 1}};
  const RunOutput out = run_experiment(config);
  CHECK(out.pass);
  CHECK_FALSE(out.report["details"]["exhaustive"].get<bool>());
  CHECK(out.report["details"]["spec_count"].get<std::size_t>() == 25);
}

TEST_CASE("cost experiment reports the worked example") {
  const json config = {{"kind", "cost"}, {"sizes", json::array({4, 4, 4})}};
  const RunOutput out = run_experiment(config);
  CHECK(out.pass);
  CHECK(out.report["details"]["flat"].get<std::uint64_t>() == 64);
  CHECK(out.report["details"]["hierarchical"].get<std::uint64_t>() == 12);
}

TEST_CASE("curves experiment emits a parseable CSV artifact") {
  const json config = {{"kind", "curves"},
                       {"activations", json::array({"fracpow:0.5", "relu"})},
                       {"lo", -1.0},
                       {"hi", 1.0},
                       {"points", 5}};
  const RunOutput out = run_experiment(config);
  CHECK(out.pass);
  REQUIRE(out.artifacts.size() == 1);
  CHECK(out.artifacts[0].first == "curves.csv");

  std::istringstream lines(out.artifacts[0].second);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "x,fracpow:0.5,relu");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == 5);

  // Middle row is x = 0; last row is exactly hi with relu(1) = 1.
  const std::string csv = out.artifacts[0].second;
  CHECK(csv.find("\n0,0,0\n") != std::string::npos);
  CHECK(csv.find("\n1,1,1\n") != std::string::npos);
}

TEST_CASE("curves csv grid hits both endpoints exactly") {
  const std::string csv = curves_csv({"identity"}, -1.5, 1.5, 3);
  CHECK(csv == "x,identity\n-1.5,-1.5\n0,0\n1.5,1.5\n");
  CHECK_THROWS_AS(curves_csv({"identity"}, 2.0, 1.0, 3), ConfigError);
  CHECK_THROWS_AS(curves_csv({"fracpow:1.5"}, 0.0, 1.0, 3), ConfigError);
}

TEST_CASE("config errors name the offending path") {
  CHECK_THROWS_WITH_AS(run_experiment(json{{"kind", "fixed_point"}}),
                       doctest::Contains("config/dim"), ConfigError);
  CHECK_THROWS_WITH_AS(run_experiment(json{{"kind", "warp"}}),
                       doctest::Contains("config/kind"), ConfigError);
  CHECK_THROWS_AS(run_experiment(json::array()), ConfigError);
  const json bad_grid = {{"kind", "activation_stability"},
                         {"activations", json::array({"relu"})},
                         {"grid_lo", 3.0},
                         {"grid_hi", 1.0}};
  CHECK_THROWS_AS(run_experiment(bad_grid), ConfigError);
}

TEST_CASE("sweep aggregates runs and records config errors as failures") {
  const json good = {{"kind", "cost"}, {"sizes", json::array({2, 3})}};
  const json bad = {{"kind", "fixed_point"}};  // missing dim
  const SweepResult result = run_sweep({{"costs", good}, {"broken", bad}});
  CHECK_FALSE(result.all_pass);
  REQUIRE(result.runs.size() == 2);
  CHECK(result.runs[0].second.pass);
  CHECK_FALSE(result.runs[1].second.pass);
  CHECK(result.runs[1].second.report.contains("error"));

  std::istringstream lines(result.summary_csv);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "experiment,max_deficit,pass");
  std::getline(lines, line);
  CHECK(line == "costs,0,true");
  std::getline(lines, line);
  CHECK(line == "broken,0,false");

  const SweepResult all_good = run_sweep({{"a", good}, {"b", good}});
  CHECK(all_good.all_pass);
  CHECK_THROWS_AS(run_sweep({}), ConfigError);
}

TEST_CASE("format_double round-trips and digest is stable") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(-1.5) == "-1.5");
  CHECK(format_double(0.0) == "0");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == fnv1a_hex("a"));
  CHECK(fnv1a_hex("a") != fnv1a_hex("b"));
  CHECK(fnv1a_hex("x").size() == 16);
}
