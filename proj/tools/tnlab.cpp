// tnlab: experiment runner for transformation-network certification suites.
//
//   tnlab run <config.json> [--out DIR] [--seed N]
//   tnlab sweep <configs...> [--out DIR] [--seed N]
//   tnlab curves --activations a,b,c [--range lo:hi] [--points N] [--out f.csv]
//
// Exit codes: 0 all suites pass, 1 certification failure, 2 config or usage
// error. TNLAB_SEED is the seed fallback when neither --seed nor the config
// provides one.

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tn/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCertificationFailure = 1;
constexpr int kExitConfigError = 2;

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("TNLAB_SEED");
  if (raw == nullptr) return {};
  std::uint64_t value = 0;
  const std::string text(raw);
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw tn::ConfigError("TNLAB_SEED", "expected an unsigned integer, got '" + text + "'");
  return value;
}

json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw tn::ConfigError(path.string(), "cannot open file");
  json config;
  try {
    in >> config;
  } catch (const json::parse_error& e) {
    throw tn::ConfigError(path.string(), e.what());
  }
  return config;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tn::ConfigError(path.string(), "cannot open for writing");
  out << content;
}

std::string stem_of(const fs::path& path) {
  std::string stem = path.stem().string();
  return stem.empty() ? "experiment" : stem;
}

void write_outputs(const fs::path& out_dir, const std::string& name, const tn::RunOutput& out) {
  write_file(out_dir / (name + ".report.json"), out.full_report().dump(2) + "\n");
  for (const auto& [filename, content] : out.artifacts)
    write_file(out_dir / (name + "." + filename), content);
}

void print_summary(const std::string& name, const tn::RunOutput& out) {
  const double max_deficit =
      out.report.contains("deficits") ? out.report["deficits"]["max"].get<double>() : 0.0;
  std::cout << name << ": " << (out.pass ? "pass" : "FAIL")
            << " (max deficit " << tn::format_double(max_deficit) << ", "
            << tn::format_double(out.duration_ms) << " ms)\n";
}

int run_command(const std::string& config_path, const std::string& out_dir,
                std::optional<std::uint64_t> cli_seed) {
  const json config = load_config(config_path);
  const std::uint64_t seed = tn::resolve_seed(config, cli_seed, env_seed());
  const tn::RunOutput out = tn::run_experiment(config, seed);
  const std::string name = stem_of(config_path);
  write_outputs(out_dir, name, out);
  print_summary(name, out);
  return out.pass ? kExitPass : kExitCertificationFailure;
}

int sweep_command(const std::vector<std::string>& config_paths, const std::string& out_dir,
                  std::optional<std::uint64_t> cli_seed) {
  std::vector<std::pair<std::string, json>> configs;
  for (const auto& path : config_paths) {
    std::string name = stem_of(path);
    for (std::size_t n = 2; ; ++n) {
      const auto taken = [&](const auto& entry) { return entry.first == name; };
      if (std::none_of(configs.begin(), configs.end(), taken)) break;
      name = stem_of(path) + "_" + std::to_string(n);
    }
    configs.emplace_back(name, load_config(path));
  }
  // The CLI seed overrides per-config seeds for the whole sweep; otherwise
  // each config resolves its own (config value, then TNLAB_SEED, then 0).
  const auto fallback = env_seed();
  tn::SweepResult result;
  if (cli_seed) {
    result = tn::run_sweep(configs, cli_seed);
  } else if (fallback) {
    for (auto& [name, config] : configs)
      if (!config.is_object() || !config.contains("rng_seed")) config["rng_seed"] = *fallback;
    result = tn::run_sweep(configs, {});
  } else {
    result = tn::run_sweep(configs, {});
  }
  for (const auto& [name, out] : result.runs) write_outputs(out_dir, name, out);
  write_file(fs::path(out_dir) / "summary.csv", result.summary_csv);
  std::cout << result.summary_csv;
  return result.all_pass ? kExitPass : kExitCertificationFailure;
}

int curves_command(const std::vector<std::string>& activations, const std::string& range,
                   std::size_t points, const std::string& out_file) {
  const auto colon = range.find(':');
  if (colon == std::string::npos)
    throw tn::ConfigError("range", "expected lo:hi, got '" + range + "'");
  double lo = 0.0, hi = 0.0;
  const char* text = range.c_str();
  const auto lo_res = std::from_chars(text, text + colon, lo);
  const auto hi_res = std::from_chars(text + colon + 1, text + range.size(), hi);
  if (lo_res.ec != std::errc{} || lo_res.ptr != text + colon || hi_res.ec != std::errc{} ||
      hi_res.ptr != text + range.size())
    throw tn::ConfigError("range", "expected lo:hi, got '" + range + "'");
  write_file(out_file, tn::curves_csv(activations, lo, hi, points));
  std::cout << out_file << ": " << activations.size() << " curve(s), "
            << points << " points over [" << tn::format_double(lo) << ", "
            << tn::format_double(hi) << "]\n";
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transformation network certification lab"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  std::vector<std::string> config_paths;
  std::optional<std::uint64_t> cli_seed;

  auto* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "output directory for reports");
  run->add_option("--seed", cli_seed, "RNG seed override");

  auto* sweep = app.add_subcommand("sweep", "run several configs and summarize");
  sweep->add_option("configs", config_paths, "experiment configs (JSON)")->required();
  sweep->add_option("--out", out_dir, "output directory for reports");
  sweep->add_option("--seed", cli_seed, "RNG seed override");

  std::vector<std::string> activations;
  std::string range = "-1.5:1.5", out_file = "curves.csv";
  std::size_t points = 301;
  auto* curves = app.add_subcommand("curves", "tabulate activation curves as CSV");
  curves->add_option("--activations", activations, "comma-separated activation names")
      ->required()
      ->delimiter(',');
  curves->add_option("--range", range, "evaluation range lo:hi");
  curves->add_option("--points", points, "number of grid points");
  curves->add_option("--out", out_file, "output CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitConfigError;
  }

  try {
    if (run->parsed()) return run_command(config_path, out_dir, cli_seed);
    if (sweep->parsed()) return sweep_command(config_paths, out_dir, cli_seed);
    return curves_command(activations, range, points, out_file);
  } catch (const tn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const tn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
}
