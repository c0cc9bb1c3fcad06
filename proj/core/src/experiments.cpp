#include "kbias/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include "kbias/errors.hpp"
#include "kbias/format.hpp"
#include "kbias/graph_io.hpp"
#include "kbias/kernels.hpp"
#include "kbias/measures.hpp"
#include "kbias/oracle.hpp"
#include "kbias/parallel.hpp"
#include "kbias/psi_window.hpp"
#include "kbias/rng.hpp"
#include "kbias/tree_limits.hpp"

namespace kbias {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------- schedules

namespace {

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad number '" + text + "' in " + what);
  }
}

std::size_t parse_level(const std::string& text) {
  const double v = parse_number(text, "k");
  if (v < 0 || v != std::floor(v)) throw ConfigError("k must be a non-negative integer, got '" + text + "'");
  return static_cast<std::size_t>(v);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

KSchedule KSchedule::log_n(double c) {
  if (!(c > 0.0)) throw ConfigError("log_n(c) schedule needs c > 0");
  KSchedule s;
  s.type = Type::LogN;
  s.c = c;
  s.values.clear();
  return s;
}

KSchedule KSchedule::mixing(double c, double eps) {
  if (!(c > 0.0)) throw ConfigError("mixing(c, eps) schedule needs c > 0");
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("mixing(c, eps) schedule needs 0 < eps < 1");
  KSchedule s;
  s.type = Type::Mixing;
  s.c = c;
  s.eps = eps;
  s.values.clear();
  return s;
}

std::vector<std::size_t> KSchedule::resolve(std::size_t n, std::optional<std::size_t> crossing) const {
  switch (type) {
    case Type::Fixed:
    case Type::List:
      return values;
    case Type::LogN:
      return {std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c * std::log(static_cast<double>(n)))))};
    case Type::Mixing:
      if (!crossing) throw PreconditionError("mixing schedule: no crossing of eps = " + format_double(eps));
      return {std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(c * static_cast<double>(*crossing))))};
  }
  return values;
}

json KSchedule::to_json() const {
  switch (type) {
    case Type::Fixed: return values.front();
    case Type::List: return values;
    case Type::LogN: return "log_n(" + format_double(c) + ")";
    case Type::Mixing: return "mixing(" + format_double(c) + "," + format_double(eps) + ")";
  }
  return nullptr;
}

KSchedule KSchedule::from_json(const json& j) {
  if (j.is_number_unsigned() || j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) throw ConfigError("k must be non-negative");
    return fixed(j.get<std::size_t>());
  }
  if (j.is_array()) {
    if (j.empty()) throw ConfigError("k list is empty");
    KSchedule s;
    s.type = Type::List;
    s.values.clear();
    for (const auto& v : j) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError("k list entries must be integers ≥ 0");
      s.values.push_back(v.get<std::size_t>());
    }
    return s;
  }
  if (j.is_string()) return parse(j.get<std::string>());
  throw ConfigError("k must be an integer, a list, \"log_n(c)\" or \"mixing(c, eps)\"");
}

KSchedule KSchedule::parse(const std::string& raw) {
  const std::string text = trim(raw);
  static const std::regex log_re(R"(log_n\(\s*([^)\s]+)\s*\))");
  static const std::regex mix_re(R"(mixing\(\s*([^,\s]+)\s*,\s*([^)\s]+)\s*\))");
  std::smatch m;
  if (std::regex_match(text, m, log_re)) return log_n(parse_number(m[1], "log_n(c)"));
  if (std::regex_match(text, m, mix_re)) {
    return mixing(parse_number(m[1], "mixing(c, eps)"), parse_number(m[2], "mixing(c, eps)"));
  }
  if (text.find(',') != std::string::npos) {
    KSchedule s;
    s.type = Type::List;
    s.values.clear();
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) s.values.push_back(parse_level(trim(part)));
    return s;
  }
  if (text.empty()) throw ConfigError("empty k schedule");
  return fixed(parse_level(text));
}

// ---------------------------------------------------------------- config

std::string_view experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Generate: return "generate";
    case ExperimentKind::Bias: return "bias";
    case ExperimentKind::Stationary: return "stationary";
    case ExperimentKind::Mixing: return "mixing";
    case ExperimentKind::LimitMu: return "limit-mu";
    case ExperimentKind::LimitMuStar: return "limit-mu-star";
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::Joint: return "joint";
    case ExperimentKind::Noncommute: return "noncommute";
    case ExperimentKind::OracleCheck: return "oracle-check";
  }
  return "?";
}

ExperimentKind parse_experiment(std::string_view name) {
  for (auto k : {ExperimentKind::Generate, ExperimentKind::Bias, ExperimentKind::Stationary, ExperimentKind::Mixing,
                 ExperimentKind::LimitMu, ExperimentKind::LimitMuStar, ExperimentKind::Sweep, ExperimentKind::Joint,
                 ExperimentKind::Noncommute, ExperimentKind::OracleCheck}) {
    if (name == experiment_name(k)) return k;
  }
  if (name == "joint-regime") return ExperimentKind::Joint;
  throw ConfigError("unknown experiment '" + std::string(name) + "'");
}

namespace {

// "bt", "nb", "lazy" (laziness from `delta`) or "lazy(0.25)".
Exploration parse_exploration(const std::string& text, double delta) {
  static const std::regex lazy_re(R"(lazy\(\s*([^)\s]+)\s*\))");
  std::smatch m;
  if (std::regex_match(text, m, lazy_re)) return Exploration::lazy(parse_number(m[1], "lazy(delta)"));
  switch (parse_kind(text)) {
    case ExplorationKind::Backtracking: return Exploration::backtracking();
    case ExplorationKind::NonBacktracking: return Exploration::non_backtracking();
    case ExplorationKind::Lazy: return Exploration::lazy(delta);
  }
  return Exploration::backtracking();
}

const std::set<std::string> kConfigKeys = {
    "experiment", "graph",   "graph_file", "kind",           "delta",  "kinds",         "k",
    "replicas",   "seed",    "out",        "distance",       "limit",  "offspring",     "samples",
    "n_grid",     "restrict_giant", "scope", "k_max",        "eps",    "sample_starts", "window_start",
    "bins",       "tree_cap"};

}  // namespace

json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = std::string(experiment_name(experiment));
  if (graph) {
    json g = graph->to_json();
    g["seed"] = seed;
    j["graph"] = g;
  }
  if (graph_file) j["graph_file"] = *graph_file;
  j["kind"] = std::string(kind_name(exploration.kind));
  j["delta"] = exploration.kind == ExplorationKind::Lazy ? exploration.delta : 0.5;
  json ks = json::array();
  for (const auto& e : kinds) ks.push_back(describe(e));
  j["kinds"] = ks;
  j["k"] = k.to_json();
  j["replicas"] = replicas;
  j["seed"] = seed;
  j["out"] = out;
  j["distance"] = distance;
  j["limit"] = limit;
  if (offspring) j["offspring"] = offspring->to_json();
  j["samples"] = samples;
  j["n_grid"] = n_grid;
  j["restrict_giant"] = restrict_giant;
  j["scope"] = std::string(scope_name(scope));
  j["k_max"] = k_max;
  j["eps"] = eps;
  j["sample_starts"] = sample_starts;
  j["window_start"] = window_start;
  j["bins"] = bins;
  j["tree_cap"] = tree_cap;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kConfigKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    c.experiment = parse_experiment(j.at("experiment").get<std::string>());
    if (j.contains("graph") && !j["graph"].is_null()) c.graph = GenSpec::from_json(j["graph"]);
    if (j.contains("graph_file") && !j["graph_file"].is_null()) c.graph_file = j["graph_file"].get<std::string>();
    if (c.graph && c.graph_file) throw ConfigError("give either graph or graph_file, not both");

    const double delta = j.value("delta", 0.5);
    c.exploration = parse_exploration(j.value("kind", std::string("bt")), delta);
    if (j.contains("kinds")) {
      for (const auto& k : j["kinds"]) c.kinds.push_back(parse_exploration(k.get<std::string>(), delta));
    }
    if (j.contains("k")) c.k = KSchedule::from_json(j["k"]);
    c.replicas = j.value("replicas", std::size_t{1});
    if (c.replicas == 0) throw ConfigError("replicas must be ≥ 1");
    if (j.contains("seed")) {
      c.seed = j["seed"].get<std::uint64_t>();
    } else if (c.graph) {
      c.seed = c.graph->seed;
    }
    if (c.graph) c.graph->seed = c.seed;
    c.out = j.value("out", std::string("out"));
    c.distance = j.value("distance", std::string("levy"));
    if (c.distance != "levy" && c.distance != "ks" && c.distance != "w1") {
      throw ConfigError("distance must be levy, ks or w1");
    }
    c.limit = j.value("limit", std::string("auto"));
    if (c.limit != "auto" && c.limit != "mu" && c.limit != "stationary" && c.limit != "none") {
      throw ConfigError("limit must be auto, mu, stationary or none");
    }
    if (j.contains("offspring") && !j["offspring"].is_null()) c.offspring = OffspringLaw::from_json(j["offspring"]);
    c.samples = j.value("samples", c.samples);
    if (c.samples == 0) throw ConfigError("samples must be ≥ 1");
    c.n_grid = j.value("n_grid", std::vector<std::size_t>{});
    c.restrict_giant = j.value("restrict_giant", false);
    c.scope = parse_scope(j.value("scope", std::string("global")));
    c.k_max = j.value("k_max", c.k_max);
    if (c.k_max == 0) throw ConfigError("k_max must be ≥ 1");
    c.eps = j.value("eps", c.eps);
    c.sample_starts = j.value("sample_starts", c.sample_starts);
    c.window_start = j.value("window_start", c.window_start);
    c.bins = j.value("bins", c.bins);
    if (c.bins == 0) throw ConfigError("bins must be ≥ 1");
    c.tree_cap = j.value("tree_cap", c.tree_cap);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

// ---------------------------------------------------------------- helpers

namespace {

struct Output {
  fs::path dir;
  std::string config_line;
  json config;
  ExperimentResult result;

  // The output directory itself is not recorded.
  explicit Output(const ExperimentConfig& c) : dir(c.out), config(c.to_json()) {
    config.erase("out");
    config_line = "config: " + config.dump();
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  }

  std::ofstream open(const std::string& name) {
    const fs::path path = dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path.string());
    result.files.push_back(path.string());
    return f;
  }

  std::ofstream csv(const std::string& name) {
    auto f = open(name);
    f << "# " << config_line << '\n';
    return f;
  }

  void write_json(const std::string& name, json body) {
    if (body.contains("atoms")) {
      body["meta"]["config"] = config;
    } else {
      body["config"] = config;
    }
    auto f = open(name);
    f << body.dump(2) << '\n';
  }

  void histogram(const std::string& name, const EmpiricalMeasure& m, std::size_t bins) {
    auto f = open(name);
    const auto edges = auto_bin_edges(m, bins);
    write_histogram_csv(f, m, edges, {config_line});
  }
};

struct SummaryRow {
  std::string experiment;
  std::size_t n = 0;
  std::string k;
  std::string kind;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double nonneg_fraction = 0.0;
  std::optional<double> levy_to_limit;
};

void write_summary(Output& out, const std::vector<SummaryRow>& rows) {
  auto f = out.csv("summary.csv");
  f << "experiment,n,k,kind,seed,mean,nonneg_fraction,levy_to_limit\n";
  for (const auto& r : rows) {
    f << r.experiment << ',' << r.n << ',' << r.k << ',' << r.kind << ',' << r.seed << ',' << format_double(r.mean)
      << ',' << format_double(r.nonneg_fraction) << ',' << (r.levy_to_limit ? format_double(*r.levy_to_limit) : "")
      << '\n';
  }
}

std::string kind_label(const Exploration& e) { return describe(e); }

GenSpec base_spec(const ExperimentConfig& c) {
  if (!c.graph) throw ConfigError("experiment needs a graph spec or graph_file");
  GenSpec spec = *c.graph;
  spec.seed = c.seed;
  if (c.restrict_giant && spec.restrict == Restriction::None) spec.restrict = Restriction::Giant;
  spec.validate();
  return spec;
}

GeneratedGraph load_file_graph(const ExperimentConfig& c) {
  GeneratedGraph out;
  Graph g = read_edge_list_file(*c.graph_file);
  out.meta.model = "file";
  out.meta.model_n = g.num_vertices();
  if (c.restrict_giant) {
    auto giant = largest_component(g);
    out.graph = std::move(giant.graph);
    out.original = std::move(giant.original);
    out.meta.restriction = "giant";
  } else {
    out.graph = std::move(g);
    out.original.resize(out.graph.num_vertices());
    for (Vertex v = 0; v < out.original.size(); ++v) out.original[v] = v;
  }
  out.meta.n = out.graph.num_vertices();
  out.meta.edges = out.graph.num_edges();
  return out;
}

// Replica r of spec uses seed mix(spec.seed, r).
std::vector<GeneratedGraph> make_replicas(const GenSpec& spec, std::size_t replicas) {
  std::vector<GeneratedGraph> graphs(replicas);
  parallel_for(replicas, [&](std::size_t r) {
    GenSpec at = spec;
    at.seed = mix_seed(spec.seed, r);
    graphs[r] = generate(at);
  });
  return graphs;
}

std::vector<GeneratedGraph> config_graphs(const ExperimentConfig& c, std::size_t replicas) {
  if (c.graph_file) return {load_file_graph(c)};
  return make_replicas(base_spec(c), replicas);
}

std::size_t model_n(const ExperimentConfig& c, const std::vector<GeneratedGraph>& graphs) {
  return c.graph_file ? graphs.front().meta.model_n : base_spec(c).n;
}

void require_valid_graphs(const std::vector<GeneratedGraph>& graphs, const Exploration& e) {
  for (std::size_t r = 0; r < graphs.size(); ++r) {
    const auto report = validate_for_exploration(graphs[r].graph, e.kind);
    if (!report.valid) {
      throw PreconditionError("replica " + std::to_string(r) + " is not valid for " + describe(e) + ": " +
                              report.reason);
    }
  }
}

std::optional<OffspringLaw> degree_law(const ExperimentConfig& c) {
  if (c.offspring) return c.offspring;
  if (!c.graph) return std::nullopt;
  if (c.graph->model == GraphModel::Configuration && c.graph->degree_pmf) return c.graph->degree_pmf;
  if (c.graph->model == GraphModel::ErdosRenyi) return OffspringLaw::poisson(c.graph->lambda);
  return std::nullopt;
}

std::string resolved_limit(const ExperimentConfig& c) {
  if (c.limit != "auto") return c.limit;
  return degree_law(c) ? "mu" : "stationary";
}

OffspringLaw require_law(const ExperimentConfig& c) {
  auto law = degree_law(c);
  if (!law) throw ConfigError("experiment needs an offspring law (offspring, or a graph with a degree law)");
  return *law;
}

std::vector<std::size_t> resolve_levels(const ExperimentConfig& c, std::size_t n, const Graph& first,
                                        const Exploration& e, std::optional<std::size_t>* crossing_out = nullptr) {
  std::optional<std::size_t> crossing;
  if (c.k.type == KSchedule::Type::Mixing) {
    MixingOptions opt;
    opt.k_max = c.k_max;
    opt.eps = {c.k.eps};
    opt.sample_starts = c.sample_starts;
    opt.seed = c.seed;
    crossing = mixing_profile(first, e, opt).crossing(c.k.eps);
    if (crossing_out) *crossing_out = crossing;
  }
  return c.k.resolve(n, crossing);
}

struct Level {
  std::size_t k = 0;
  EmpiricalMeasure measure;
  std::vector<double> replica_means;
  double mean = 0.0;
  double std_error = 0.0;
  double nonneg_fraction = 0.0;
};

// μ_n^(k) per requested level, pooled over replicas with equal weight.
std::vector<Level> bias_levels(const std::vector<GeneratedGraph>& graphs, const std::vector<std::size_t>& ks,
                               const Exploration& e) {
  const std::size_t R = graphs.size();
  const std::size_t k_top = *std::max_element(ks.begin(), ks.end());
  std::vector<std::vector<BiasProfile>> per(R, std::vector<BiasProfile>(ks.size()));
  parallel_for(R, [&](std::size_t r) {
    const Graph& g = graphs[r].graph;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (ks[i] == 0) per[r][i] = bias_all(g, 0, e);
    }
    if (k_top == 0) return;
    for_each_bias_level(g, k_top, e, [&](std::size_t k, std::span<const double> bias) {
      for (std::size_t i = 0; i < ks.size(); ++i) {
        if (ks[i] == k) per[r][i] = make_bias_profile(k, e, std::vector<double>(bias.begin(), bias.end()));
      }
    });
  });

  std::vector<Level> levels(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    Level& L = levels[i];
    L.k = ks[i];
    std::vector<EmpiricalMeasure> parts;
    double nonneg = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
      parts.push_back(per[r][i].measure);
      L.replica_means.push_back(per[r][i].mean);
      nonneg += per[r][i].nonneg_fraction;
    }
    L.measure = R == 1 ? parts.front() : EmpiricalMeasure::mixture(parts);
    double sum = 0.0;
    for (double m : L.replica_means) sum += m;
    L.mean = sum / static_cast<double>(R);
    if (R > 1) {
      double ss = 0.0;
      for (double m : L.replica_means) ss += (m - L.mean) * (m - L.mean);
      L.std_error = std::sqrt(ss / static_cast<double>(R - 1) / static_cast<double>(R));
    }
    L.nonneg_fraction = nonneg / static_cast<double>(R);
  }
  return levels;
}

EmpiricalMeasure pooled_stationary(const std::vector<GeneratedGraph>& graphs, BiasScope scope) {
  std::vector<EmpiricalMeasure> parts;
  for (const auto& g : graphs) parts.push_back(stationary_bias(g.graph, scope));
  return parts.size() == 1 ? parts.front() : EmpiricalMeasure::mixture(parts);
}

std::optional<EmpiricalMeasure> limit_reference(const ExperimentConfig& c, const std::vector<GeneratedGraph>& graphs) {
  const std::string limit = resolved_limit(c);
  if (limit == "mu") return exact_mu(require_law(c));
  if (limit == "stationary") return pooled_stationary(graphs, c.scope);
  return std::nullopt;
}

json graph_metas(const std::vector<GeneratedGraph>& graphs) {
  json arr = json::array();
  for (const auto& g : graphs) arr.push_back(g.meta.to_json());
  return arr;
}

bool all_min_degree_3(const std::vector<GeneratedGraph>& graphs) {
  return std::all_of(graphs.begin(), graphs.end(), [](const auto& g) { return g.graph.min_degree() >= 3; });
}

std::string level_file(std::size_t k) { return "bias_k" + std::to_string(k); }

}  // namespace

// ---------------------------------------------------------------- runners

ExperimentResult run_generate(const ExperimentConfig& c) {
  Output out(c);
  const auto graphs = config_graphs(c, c.graph_file ? 1 : c.replicas);
  for (std::size_t r = 0; r < graphs.size(); ++r) {
    const std::string name = graphs.size() == 1 ? "graph.edges" : "graph_" + std::to_string(r) + ".edges";
    auto f = out.open(name);
    write_edge_list(f, graphs[r].graph, {out.config_line, "meta: " + graphs[r].meta.to_json().dump()});
  }
  out.result.report = {{"graphs", graph_metas(graphs)}};
  out.write_json("graph_meta.json", out.result.report);
  return out.result;
}

ExperimentResult run_bias(const ExperimentConfig& c) {
  Output out(c);
  const Exploration e = c.exploration;
  const auto graphs = config_graphs(c, c.graph_file ? 1 : c.replicas);
  require_valid_graphs(graphs, e);
  const std::size_t n = model_n(c, graphs);
  std::optional<std::size_t> crossing;
  const auto ks = resolve_levels(c, n, graphs.front().graph, e, &crossing);
  const auto levels = bias_levels(graphs, ks, e);
  const auto limit = limit_reference(c, graphs);

  std::vector<SummaryRow> rows;
  json report = json::array();
  for (const auto& L : levels) {
    EmpiricalMeasure m = L.measure;
    m.meta = {{"experiment", "bias"},
              {"n", n},
              {"k", L.k},
              {"kind", kind_label(e)},
              {"seed", c.seed},
              {"replicas", graphs.size()},
              {"rng", std::string(kRngAlgorithm)},
              {"mean", L.mean},
              {"std_error", L.std_error},
              {"nonneg_fraction", L.nonneg_fraction},
              {"replica_means", L.replica_means},
              {"graphs", graph_metas(graphs)}};
    if (e.kind == ExplorationKind::NonBacktracking) m.meta["min_degree_at_least_3"] = all_min_degree_3(graphs);
    if (crossing) m.meta["mixing_crossing"] = *crossing;
    std::optional<double> levy;
    if (limit) {
      levy = levy_distance(L.measure, *limit);
      m.meta["limit"] = resolved_limit(c);
      m.meta["levy_to_limit"] = *levy;
    }
    out.write_json(level_file(L.k) + ".json", m.to_json());
    out.histogram(level_file(L.k) + "_hist.csv", L.measure, c.bins);
    rows.push_back({"bias", n, std::to_string(L.k), kind_label(e), c.seed, L.mean, L.nonneg_fraction, levy});
    report.push_back(m.meta);
  }
  write_summary(out, rows);
  out.result.report = report;
  return out.result;
}

ExperimentResult run_stationary(const ExperimentConfig& c) {
  Output out(c);
  const auto graphs = config_graphs(c, c.graph_file ? 1 : c.replicas);
  const std::size_t n = model_n(c, graphs);
  EmpiricalMeasure m = pooled_stationary(graphs, c.scope);
  std::optional<double> levy;
  if (resolved_limit(c) == "mu") levy = levy_distance(m, exact_mu(require_law(c)));
  const double nonneg = m.mass_at_least(-1e-12);
  m.meta = {{"experiment", "stationary"}, {"n", n},          {"scope", std::string(scope_name(c.scope))},
            {"seed", c.seed},             {"mean", m.mean()}, {"nonneg_fraction", nonneg},
            {"graphs", graph_metas(graphs)}};
  if (levy) m.meta["levy_to_limit"] = *levy;
  out.write_json("stationary.json", m.to_json());
  out.histogram("stationary_hist.csv", m, c.bins);
  write_summary(out, {{"stationary", n, "inf", std::string(scope_name(c.scope)), c.seed, m.mean(), nonneg, levy}});
  out.result.report = m.meta;
  return out.result;
}

ExperimentResult run_mixing(const ExperimentConfig& c) {
  Output out(c);
  const auto graphs = config_graphs(c, 1);
  const Graph& g = graphs.front().graph;
  const auto report = validate_for_exploration(g, c.exploration.kind);
  if (!report.valid) throw PreconditionError("graph is not valid for " + describe(c.exploration) + ": " + report.reason);
  MixingOptions opt;
  opt.k_max = c.k_max;
  opt.eps = c.eps;
  opt.sample_starts = c.sample_starts;
  opt.seed = c.seed;
  const auto profile = mixing_profile(g, c.exploration, opt);
  {
    auto f = out.open("mixing.csv");
    profile.write_csv(f, {out.config_line});
  }
  auto crossings = [&](const std::vector<std::optional<std::size_t>>& xs) {
    json arr = json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      arr.push_back({{"eps", profile.eps[i]}, {"k", xs[i] ? json(*xs[i]) : json(nullptr)}});
    }
    return arr;
  };
  json body = {{"kind", kind_label(c.exploration)},
               {"n", profile.n},
               {"seed", c.seed},
               {"k_max", c.k_max},
               {"crossings", crossings(profile.crossings)},
               {"plateau", profile.plateau},
               {"starts_used", profile.starts_used},
               {"sampled", profile.sampled},
               {"graph", graphs.front().meta.to_json()}};
  if (!profile.vertex_crossings.empty()) body["vertex_crossings"] = crossings(profile.vertex_crossings);
  out.write_json("mixing.json", body);
  out.result.report = body;
  return out.result;
}

namespace {

json monte_carlo_json(const char* name, const MonteCarloMeasure& mc, const ExperimentConfig& c) {
  EmpiricalMeasure m = mc.measure;
  m.meta = {{"law", name},           {"samples", mc.samples},       {"seed", c.seed},
            {"mean", mc.mean},        {"std_error", mc.std_error},   {"rejected", mc.rejected},
            {"rng", std::string(kRngAlgorithm)}};
  return m.to_json();
}

}  // namespace

ExperimentResult run_limit_mu(const ExperimentConfig& c) {
  Output out(c);
  const OffspringLaw p = require_law(c);
  const auto mc = sample_mu(p, c.samples, c.seed);
  const double levy = levy_distance(mc.measure, exact_mu(p));
  json body = monte_carlo_json("mu", mc, c);
  body["meta"]["offspring"] = p.to_json();
  body["meta"]["exact_mean"] = p.variance() / p.mean();
  body["meta"]["levy_to_exact"] = levy;
  out.write_json("mu.json", body);
  out.histogram("mu_hist.csv", mc.measure, c.bins);
  write_summary(out, {{"limit-mu", mc.samples, "inf", "nb", c.seed, mc.mean, mc.measure.mass_at_least(0.0), levy}});
  out.result.report = body["meta"];
  return out.result;
}

ExperimentResult run_limit_mu_star(const ExperimentConfig& c) {
  Output out(c);
  const OffspringLaw p = require_law(c);
  const auto mc = sample_mu_star(p, c.samples, c.seed, c.tree_cap);
  json body = monte_carlo_json("mu_star", mc, c);
  body["meta"]["offspring"] = p.to_json();
  out.write_json("mu_star.json", body);
  out.histogram("mu_star_hist.csv", mc.measure, c.bins);
  write_summary(out,
                {{"limit-mu-star", mc.samples, "inf", "bt", c.seed, mc.mean, mc.measure.mass_at_least(0.0), {}}});
  out.result.report = body["meta"];
  return out.result;
}

ExperimentResult run_sweep(const ExperimentConfig& c) {
  Output out(c);
  if (c.graph_file) throw ConfigError("sweep needs a graph spec");
  const GenSpec spec = base_spec(c);
  std::vector<std::size_t> grid = c.n_grid.empty() ? std::vector<std::size_t>{spec.n} : c.n_grid;
  std::vector<Exploration> kinds = c.kinds.empty() ? std::vector<Exploration>{c.exploration} : c.kinds;
  GenSpec first = spec;
  first.seed = mix_seed(spec.seed, 0);
  const auto window = psi_window(first, kinds, c.window_start, c.k_max, grid);

  auto f = out.csv("sweep.csv");
  f << "n,kind,k," << c.distance << '\n';
  json table = json::array();
  for (const auto& cell : window.table) {
    const double d = c.distance == "ks" ? cell.ks : c.distance == "w1" ? cell.w1 : cell.levy;
    f << cell.n << ',' << kind_label(cell.exploration) << ',' << cell.k << ',' << format_double(d) << '\n';
    table.push_back({{"n", cell.n}, {"kind", kind_label(cell.exploration)}, {"k", cell.k}, {c.distance, d}});
  }
  json body = {{"psi_window", window.value},
               {"window_start", c.window_start},
               {"k_max", c.k_max},
               {"n_grid", grid},
               {"note", "finite-window proxy: max Lévy distance over the grid, not the supremum"}};
  out.write_json("psi.json", body);
  body["table"] = table;
  out.result.report = body;
  return out.result;
}

ExperimentResult run_joint_regime(const ExperimentConfig& c) {
  Output out(c);
  if (c.graph_file) throw ConfigError("joint needs a graph spec");
  if (c.k.type == KSchedule::Type::List) throw ConfigError("joint needs a single k per n (integer, log_n or mixing)");
  const OffspringLaw law = require_law(c);
  const EmpiricalMeasure mu = exact_mu(law);
  const double mu_mean = mu.mean();
  const GenSpec spec = base_spec(c);
  std::vector<std::size_t> grid = c.n_grid.empty() ? std::vector<std::size_t>{spec.n} : c.n_grid;
  if (!std::is_sorted(grid.begin(), grid.end())) throw ConfigError("n_grid must be increasing");

  std::vector<SummaryRow> rows;
  json table = json::array();
  auto f = out.csv("joint.csv");
  f << "n,k_n,levy,w1,mean_gap\n";
  for (std::size_t n : grid) {
    GenSpec at = spec;
    at.n = n;
    const auto graphs = make_replicas(at, c.replicas);
    require_valid_graphs(graphs, c.exploration);
    const auto ks = resolve_levels(c, n, graphs.front().graph, c.exploration);
    const auto levels = bias_levels(graphs, ks, c.exploration);
    const Level& L = levels.front();
    const double levy = levy_distance(L.measure, mu);
    const double w1 = w1_distance(L.measure, mu);
    const double gap = L.mean - mu_mean;
    f << n << ',' << L.k << ',' << format_double(levy) << ',' << format_double(w1) << ',' << format_double(gap)
      << '\n';
    table.push_back({{"n", n}, {"k_n", L.k}, {"levy", levy}, {"w1", w1}, {"mean_gap", gap},
                     {"std_error", L.std_error}, {"min_degree_at_least_3", all_min_degree_3(graphs)}});
    rows.push_back({"joint", n, std::to_string(L.k), kind_label(c.exploration), c.seed, L.mean, L.nonneg_fraction,
                    levy});
  }
  f.close();
  write_summary(out, rows);
  out.result.report = table;
  return out.result;
}

ExperimentResult run_noncommute(const ExperimentConfig& c) {
  Output out(c);
  const OffspringLaw p = require_law(c);
  const auto mu = sample_mu(p, c.samples, c.seed);
  const auto star = sample_mu_star(p, c.samples, mix_seed(c.seed, 1), c.tree_cap);
  const double combined = std::sqrt(mu.std_error * mu.std_error + star.std_error * star.std_error);
  const double diff = mu.mean - star.mean;
  json body = {{"offspring", p.to_json()},
               {"mu", {{"mean", mu.mean}, {"std_error", mu.std_error}, {"samples", mu.samples}}},
               {"mu_star",
                {{"mean", star.mean}, {"std_error", star.std_error}, {"samples", star.samples},
                 {"rejected", star.rejected}}},
               {"mean_difference", diff},
               {"combined_std_error", combined},
               {"z", combined > 0.0 ? diff / combined : 0.0},
               {"levy", levy_distance(mu.measure, star.measure)}};
  out.write_json("noncommute.json", body);
  out.write_json("mu.json", monte_carlo_json("mu", mu, c));
  out.write_json("mu_star.json", monte_carlo_json("mu_star", star, c));
  out.result.report = body;
  return out.result;
}

ExperimentResult run_oracle_check(const ExperimentConfig& c) {
  Output out(c);
  const auto graphs = config_graphs(c, 1);
  const Graph& g = graphs.front().graph;
  std::vector<Exploration> kinds = c.kinds.empty() ? std::vector<Exploration>{c.exploration} : c.kinds;
  const auto ks = c.k.resolve(g.num_vertices());

  auto f = out.csv("oracle_check.csv");
  f << "kind,k,max_abs_error,kernel_mean,oracle_mean,symmetrized_mean\n";
  json table = json::array();
  double worst = 0.0;
  bool forms_agree = true;
  for (const auto& e : kinds) {
    const auto report = validate_for_exploration(g, e.kind);
    if (!report.valid) throw PreconditionError("graph is not valid for " + describe(e) + ": " + report.reason);
    for (std::size_t k : ks) {
      double err = 0.0;
      for (Vertex s = 0; s < g.num_vertices(); ++s) {
        const auto kernel = k_step(g, s, k, e);
        const auto oracle = oracle_k_step(g, s, k, e);
        for (Vertex j = 0; j < g.num_vertices(); ++j) err = std::max(err, std::abs(kernel[j] - oracle[j]));
      }
      const double kernel_mean = bias_all(g, k, e).mean;
      double oracle_mean = 0.0;
      std::optional<double> symmetrized;
      if (e.kind == ExplorationKind::Lazy) {
        oracle_mean = exact_avg_bias(g, k, e).convert_to<double>();
      } else {
        const auto avg = oracle_avg_bias(g, k, e.kind);
        oracle_mean = avg.definitional.convert_to<double>();
        symmetrized = avg.symmetrized.convert_to<double>();
        if (avg.definitional != avg.symmetrized) forms_agree = false;
      }
      err = std::max(err, std::abs(kernel_mean - oracle_mean));
      worst = std::max(worst, err);
      f << kind_label(e) << ',' << k << ',' << format_double(err) << ',' << format_double(kernel_mean) << ','
        << format_double(oracle_mean) << ',' << (symmetrized ? format_double(*symmetrized) : "") << '\n';
      table.push_back({{"kind", kind_label(e)}, {"k", k}, {"max_abs_error", err}});
    }
  }
  f.close();
  out.result.report = {{"max_abs_error", worst}, {"forms_agree", forms_agree}, {"table", table}};
  if (worst > 1e-12) throw NumericGuardError("kernel and oracle disagree by " + format_double(worst));
  if (!forms_agree) throw NumericGuardError("definitional and symmetrized average bias differ");
  return out.result;
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  switch (c.experiment) {
    case ExperimentKind::Generate: return run_generate(c);
    case ExperimentKind::Bias: return run_bias(c);
    case ExperimentKind::Stationary: return run_stationary(c);
    case ExperimentKind::Mixing: return run_mixing(c);
    case ExperimentKind::LimitMu: return run_limit_mu(c);
    case ExperimentKind::LimitMuStar: return run_limit_mu_star(c);
    case ExperimentKind::Sweep: return run_sweep(c);
    case ExperimentKind::Joint: return run_joint_regime(c);
    case ExperimentKind::Noncommute: return run_noncommute(c);
    case ExperimentKind::OracleCheck: return run_oracle_check(c);
  }
  throw ConfigError("unknown experiment");
}

}  // namespace kbias
