#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "kbias/errors.hpp"
#include "kbias/experiments.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kPrecondition = 3, kNumericGuard = 4 };

struct Overrides {
  std::string config_path;
  std::optional<std::size_t> n;
  std::optional<std::string> k;
  std::optional<std::string> kind;
  std::optional<double> delta;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> replicas;
  std::optional<std::string> out;
  std::optional<std::string> graph_file;
  bool restrict_giant = false;
};

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw kbias::ConfigError("cannot open config " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw kbias::ConfigError("config " + path + ": " + e.what());
  }
}

nlohmann::json k_json(const std::string& text) {
  if (!text.empty() && text.find_first_not_of("0123456789") == std::string::npos) return std::stoull(text);
  return text;
}

kbias::ExperimentConfig resolve(const std::string& experiment, const Overrides& o) {
  nlohmann::json j = load_config(o.config_path);
  j["experiment"] = experiment;
  if (o.n) {
    if (!j.contains("graph") || !j["graph"].is_object()) throw kbias::ConfigError("--n needs a graph spec in the config");
    if (j["graph"].contains("degree_seq")) throw kbias::ConfigError("--n conflicts with an explicit degree_seq");
    j["graph"]["n"] = *o.n;
  }
  if (o.k) j["k"] = k_json(*o.k);
  if (o.kind) j["kind"] = *o.kind;
  if (o.delta) j["delta"] = *o.delta;
  if (o.seed) j["seed"] = *o.seed;
  if (o.replicas) j["replicas"] = *o.replicas;
  if (o.out) j["out"] = *o.out;
  if (o.graph_file) {
    j.erase("graph");
    j["graph_file"] = *o.graph_file;
  }
  if (o.restrict_giant) j["restrict_giant"] = true;
  return kbias::ExperimentConfig::from_json(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-level friendship bias on sparse random graphs"};
  app.require_subcommand(1);
  Overrides o;

  const std::pair<const char*, const char*> commands[] = {
      {"generate", "Generate graphs and write edge lists"},
      {"bias", "Quenched or annealed k-level bias measures"},
      {"stationary", "Stationary bias measure"},
      {"mixing", "Worst-case total variation profile D_n(k)"},
      {"limit-mu", "Monte Carlo sample of the limit law mu"},
      {"limit-mu-star", "Monte Carlo sample of mu* over finite trees"},
      {"sweep", "Levy distance to the stationary bias over an (n, k) window"},
      {"joint", "Joint-regime convergence table"},
      {"noncommute", "mu versus mu* side by side"},
      {"oracle-check", "Compare kernels with brute-force enumeration"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    sub->add_option("--n", o.n, "Graph size");
    sub->add_option("--k", o.k, "Level: integer, list a,b,c, log_n(c) or mixing(c,eps)");
    sub->add_option("--kind", o.kind, "Exploration: bt, nb or lazy");
    sub->add_option("--delta", o.delta, "Laziness for --kind lazy");
    sub->add_option("--seed", o.seed, "Master seed");
    sub->add_option("--replicas", o.replicas, "Graph replicas");
    sub->add_option("--out", o.out, "Output directory");
    sub->add_option("--graph-file", o.graph_file, "Edge-list file instead of a generated graph");
    sub->add_flag("--restrict-giant", o.restrict_giant, "Keep only the largest component");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    const auto config = resolve(experiment, o);
    const auto result = kbias::run_experiment(config);
    for (const auto& f : result.files) std::cout << f << '\n';
    return kOk;
  } catch (const kbias::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const kbias::ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const kbias::GraphError& e) {
    std::cerr << "graph error: " << e.what() << '\n';
    return kConfig;
  } catch (const kbias::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return kPrecondition;
  } catch (const kbias::KernelError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return kPrecondition;
  } catch (const kbias::NumericGuardError& e) {
    std::cerr << "numeric guard: " << e.what() << '\n';
    return kNumericGuard;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
}
