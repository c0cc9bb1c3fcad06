#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kbias/exploration.hpp"
#include "kbias/generators.hpp"
#include "kbias/graph.hpp"
#include "kbias/offspring_law.hpp"
#include "kbias/stationary.hpp"

namespace kbias {

/// Walk length per graph size. Written in configs as an integer, a list of
/// integers, "log_n(c)" for ceil(c · ln n), or "mixing(c, eps)" for
/// ceil(c · first k with D_n(k) ≤ eps) measured on the first replica.
struct KSchedule {
  enum class Type { Fixed, List, LogN, Mixing };
  Type type = Type::Fixed;
  std::vector<std::size_t> values{1};
  double c = 1.0;
  double eps = 1e-4;

  static KSchedule fixed(std::size_t k) { return {Type::Fixed, {k}, 1.0, 1e-4}; }
  static KSchedule log_n(double c);
  static KSchedule mixing(double c, double eps);

  /// Levels for a graph of (model) size n; Mixing needs the crossing.
  std::vector<std::size_t> resolve(std::size_t n, std::optional<std::size_t> crossing = std::nullopt) const;

  nlohmann::json to_json() const;
  /// Throws ConfigError.
  static KSchedule from_json(const nlohmann::json& j);
  /// "3", "1,2,4", "log_n(1.5)", "mixing(10,1e-4)".
  static KSchedule parse(const std::string& text);
};

enum class ExperimentKind {
  Generate,
  Bias,
  Stationary,
  Mixing,
  LimitMu,
  LimitMuStar,
  Sweep,
  Joint,
  Noncommute,
  OracleCheck,
};

std::string_view experiment_name(ExperimentKind kind);
/// Throws ConfigError.
ExperimentKind parse_experiment(std::string_view name);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Bias;
  std::optional<GenSpec> graph;
  std::optional<std::string> graph_file;
  Exploration exploration;
  /// Extra kinds for sweep (defaults to `exploration` alone).
  std::vector<Exploration> kinds;
  KSchedule k;
  std::size_t replicas = 1;
  std::uint64_t seed = 0;
  std::string out = "out";
  /// Reported distance in sweep tables: levy, ks or w1.
  std::string distance = "levy";
  /// Limit reference for levy_to_limit: auto, mu, stationary or none. auto
  /// means mu when a degree law is known (offspring, the CM pmf, or
  /// Poisson(λ) for ER) and stationary otherwise.
  std::string limit = "auto";
  std::optional<OffspringLaw> offspring;
  std::size_t samples = 100'000;
  std::vector<std::size_t> n_grid;
  bool restrict_giant = false;
  BiasScope scope = BiasScope::Global;
  std::size_t k_max = 200;
  std::vector<double> eps{0.25, 1e-2, 1e-4};
  std::size_t sample_starts = 0;
  /// Smallest n and k of the sweep window.
  std::size_t window_start = 1;
  std::size_t bins = 50;
  std::size_t tree_cap = 1'000'000;

  /// Every field, defaults included.
  nlohmann::json to_json() const;
  /// Throws ConfigError on unknown keys, wrong types or inconsistent
  /// combinations (ParameterError from nested parameter checks).
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ExperimentResult {
  std::vector<std::string> files;
  /// Machine-readable copy of the main table or report.
  nlohmann::json report;
};

/// Dispatches on config.experiment. Outputs go to config.out; every CSV
/// opens with "# config: <json>" and every JSON output carries the config.
ExperimentResult run_experiment(const ExperimentConfig& config);

ExperimentResult run_generate(const ExperimentConfig& config);
ExperimentResult run_bias(const ExperimentConfig& config);
ExperimentResult run_stationary(const ExperimentConfig& config);
ExperimentResult run_mixing(const ExperimentConfig& config);
ExperimentResult run_limit_mu(const ExperimentConfig& config);
ExperimentResult run_limit_mu_star(const ExperimentConfig& config);
ExperimentResult run_sweep(const ExperimentConfig& config);
ExperimentResult run_joint_regime(const ExperimentConfig& config);
ExperimentResult run_noncommute(const ExperimentConfig& config);
ExperimentResult run_oracle_check(const ExperimentConfig& config);

}  // namespace kbias
