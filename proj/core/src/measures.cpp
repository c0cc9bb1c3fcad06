#include "kbias/measures.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "kbias/errors.hpp"
#include "kbias/format.hpp"

namespace kbias {

namespace {

constexpr double kNormalizationTolerance = 1e-12;
constexpr double kLevyResolution = 1e-12;

void require_usable(const EmpiricalMeasure& m, const char* what) {
  if (m.empty()) throw ParameterError(std::string(what) + ": empty measure");
}

// Merges runs of sorted atoms whose values lie within the tolerance of the
// run's first value.
std::vector<Atom> merge_sorted(std::vector<Atom> atoms) {
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!merged.empty() && a.value - merged.back().value <= kAtomMergeTolerance) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  return merged;
}

// Number of atoms with value ≤ x.
std::size_t count_le(std::span<const Atom> atoms, double x) {
  return static_cast<std::size_t>(
      std::upper_bound(atoms.begin(), atoms.end(), x, [](double v, const Atom& a) { return v < a.value; }) -
      atoms.begin());
}

double cdf_at(const EmpiricalMeasure& m, double x) {
  const std::size_t c = count_le(m.atoms(), x);
  return c == 0 ? 0.0 : m.cumulative(c - 1);
}

// Lévy feasibility. F_a(x - ε) - F_b(x) only increases where F_a(x - ε)
// jumps (x = a_i + ε), and F_b(x) - F_a(x + ε) only where F_b jumps
// (x = b_j), so checking those points covers every x.
bool levy_feasible(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double eps) {
  const auto aa = a.atoms();
  const auto bb = b.atoms();
  for (std::size_t i = 0; i < aa.size(); ++i) {
    if (a.cumulative(i) - eps > cdf_at(b, aa[i].value + eps)) return false;
  }
  for (std::size_t j = 0; j < bb.size(); ++j) {
    if (b.cumulative(j) > cdf_at(a, bb[j].value + eps) + eps) return false;
  }
  return true;
}

// Critical values of ε inside [lo, hi]: position gaps b_j - a_i, a_i - b_j
// and mass gaps between cumulative weights.
void collect_candidates(const EmpiricalMeasure& a, const EmpiricalMeasure& b, double lo, double hi,
                        std::vector<double>& out) {
  const auto aa = a.atoms();
  const auto bb = b.atoms();
  std::vector<double> cum_b(bb.size());
  for (std::size_t j = 0; j < bb.size(); ++j) cum_b[j] = b.cumulative(j);
  for (int pass = 0; pass < 2; ++pass) {
    const auto& xs = pass == 0 ? aa : bb;
    const auto& ys = pass == 0 ? bb : aa;
    for (const auto& x : xs) {
      auto first = std::lower_bound(ys.begin(), ys.end(), x.value + lo,
                                    [](const Atom& y, double v) { return y.value < v; });
      for (auto it = first; it != ys.end() && it->value - x.value <= hi; ++it) {
        out.push_back(it->value - x.value);
      }
    }
  }
  // Gaps against an empty left tail (F = 0).
  for (std::size_t i = 0; i < aa.size(); ++i) {
    if (a.cumulative(i) >= lo && a.cumulative(i) <= hi) out.push_back(a.cumulative(i));
  }
  for (double cb : cum_b) {
    if (cb >= lo && cb <= hi) out.push_back(cb);
  }
  for (std::size_t i = 0; i < aa.size(); ++i) {
    const double ca = a.cumulative(i);
    for (double sign : {1.0, -1.0}) {
      // ca - cb in [lo, hi]  (sign +1)  or  cb - ca in [lo, hi]  (sign -1)
      const double target_lo = sign > 0 ? ca - hi : ca + lo;
      auto first = std::lower_bound(cum_b.begin(), cum_b.end(), target_lo);
      for (auto it = first; it != cum_b.end(); ++it) {
        const double gap = sign * (ca - *it);
        if (sign > 0 && gap < lo) break;
        if (sign < 0 && gap > hi) break;
        if (gap >= lo && gap <= hi) out.push_back(gap);
      }
    }
  }
}

}  // namespace

EmpiricalMeasure EmpiricalMeasure::finish(std::vector<Atom> sorted_atoms, long double total) {
  EmpiricalMeasure m;
  for (auto& a : sorted_atoms) a.weight = static_cast<double>(a.weight / total);
  m.atoms_ = merge_sorted(std::move(sorted_atoms));
  m.cumulative_.resize(m.atoms_.size());
  long double acc = 0.0L;
  for (std::size_t i = 0; i < m.atoms_.size(); ++i) {
    acc += m.atoms_[i].weight;
    m.cumulative_[i] = static_cast<double>(acc);
  }
  if (!m.cumulative_.empty()) m.cumulative_.back() = 1.0;
  return m;
}

EmpiricalMeasure EmpiricalMeasure::from_values(std::span<const double> values) {
  if (values.empty()) throw ParameterError("empirical measure needs at least one value");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted) {
    if (!std::isfinite(v)) throw ParameterError("empirical measure values must be finite");
  }
  std::sort(sorted.begin(), sorted.end());
  // Count equal values first so each atom's weight is count / N exactly.
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    atoms.push_back({sorted[i], static_cast<double>(j - i)});
    i = j;
  }
  return finish(std::move(atoms), static_cast<long double>(sorted.size()));
}

EmpiricalMeasure EmpiricalMeasure::from_atoms(std::vector<Atom> atoms) {
  long double total = 0.0L;
  std::vector<Atom> kept;
  kept.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!std::isfinite(a.value) || !std::isfinite(a.weight) || a.weight < 0.0) {
      throw ParameterError("measure atoms need finite values and non-negative weights");
    }
    if (a.weight == 0.0) continue;
    total += a.weight;
    kept.push_back(a);
  }
  if (kept.empty() || std::abs(static_cast<double>(total - 1.0L)) > kNormalizationTolerance) {
    throw ParameterError("unnormalized measure: total weight " + format_double(static_cast<double>(total)));
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
  return finish(std::move(kept), total);
}

EmpiricalMeasure EmpiricalMeasure::dirac(double value) { return from_atoms({{value, 1.0}}); }

EmpiricalMeasure EmpiricalMeasure::mixture(std::span<const EmpiricalMeasure> parts) {
  if (parts.empty()) throw ParameterError("mixture of zero measures");
  std::vector<Atom> atoms;
  const long double share = 1.0L / static_cast<long double>(parts.size());
  for (const auto& p : parts) {
    require_usable(p, "mixture");
    for (const auto& a : p.atoms()) atoms.push_back({a.value, static_cast<double>(a.weight * share)});
  }
  std::stable_sort(atoms.begin(), atoms.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
  long double total = 0.0L;
  for (const auto& a : atoms) total += a.weight;
  return finish(std::move(atoms), total);
}

double EmpiricalMeasure::mean() const { return moment(1); }

double EmpiricalMeasure::moment(unsigned r) const {
  if (r == 0) throw ParameterError("moment order must be ≥ 1");
  double sum = 0.0;
  for (const auto& a : atoms_) sum += a.weight * std::pow(a.value, static_cast<double>(r));
  return sum;
}

double EmpiricalMeasure::cdf(double x) const { return cdf_at(*this, x); }

double EmpiricalMeasure::mass_at_least(double x) const {
  const auto first = std::lower_bound(atoms_.begin(), atoms_.end(), x,
                                      [](const Atom& a, double v) { return a.value < v; });
  double mass = 0.0;
  for (auto it = first; it != atoms_.end(); ++it) mass += it->weight;
  return mass;
}

nlohmann::json EmpiricalMeasure::to_json() const {
  nlohmann::json atoms = nlohmann::json::array();
  for (const auto& a : atoms_) atoms.push_back({a.value, a.weight});
  return {{"atoms", std::move(atoms)}, {"meta", meta}};
}

EmpiricalMeasure EmpiricalMeasure::from_json(const nlohmann::json& j) {
  std::vector<Atom> atoms;
  try {
    for (const auto& pair : j.at("atoms")) {
      if (!pair.is_array() || pair.size() != 2) throw ParameterError("measure atom must be [value, weight]");
      atoms.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("measure JSON: ") + e.what());
  }
  auto m = from_atoms(std::move(atoms));
  if (j.contains("meta")) m.meta = j.at("meta");
  return m;
}

double levy_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  require_usable(a, "levy_distance");
  require_usable(b, "levy_distance");
  if (levy_feasible(a, b, 0.0)) return 0.0;
  double lo = 0.0;
  double hi = 1.0;  // always feasible
  while (hi - lo > kLevyResolution) {
    const double mid = 0.5 * (lo + hi);
    if (levy_feasible(a, b, mid)) hi = mid;
    else lo = mid;
  }
  std::vector<double> candidates;
  collect_candidates(a, b, lo, hi, candidates);
  std::sort(candidates.begin(), candidates.end());
  for (double c : candidates) {
    if (c >= hi) break;
    if (levy_feasible(a, b, c)) return c;
  }
  return hi;
}

double ks_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  require_usable(a, "ks_distance");
  require_usable(b, "ks_distance");
  double best = 0.0;
  for (const auto& x : a.atoms()) best = std::max(best, std::abs(a.cdf(x.value) - b.cdf(x.value)));
  for (const auto& x : b.atoms()) best = std::max(best, std::abs(a.cdf(x.value) - b.cdf(x.value)));
  return best;
}

double w1_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
  require_usable(a, "w1_distance");
  require_usable(b, "w1_distance");
  std::vector<double> grid;
  grid.reserve(a.size() + b.size());
  for (const auto& x : a.atoms()) grid.push_back(x.value);
  for (const auto& x : b.atoms()) grid.push_back(x.value);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  double total = 0.0;
  for (std::size_t t = 0; t + 1 < grid.size(); ++t) {
    total += std::abs(a.cdf(grid[t]) - b.cdf(grid[t])) * (grid[t + 1] - grid[t]);
  }
  return total;
}

std::vector<double> uniform_bin_edges(double lo, double hi, std::size_t count) {
  if (count == 0 || !(hi > lo)) throw ParameterError("histogram needs count ≥ 1 and hi > lo");
  std::vector<double> edges(count + 1);
  for (std::size_t i = 0; i <= count; ++i) {
    edges[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count);
  }
  edges.back() = hi;
  return edges;
}

std::vector<double> auto_bin_edges(const EmpiricalMeasure& m, std::size_t count) {
  require_usable(m, "auto_bin_edges");
  double lo = m.atoms().front().value;
  double hi = m.atoms().back().value;
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  return uniform_bin_edges(lo, hi, count);
}

void write_histogram_csv(std::ostream& out, const EmpiricalMeasure& m, std::span<const double> edges,
                         const std::vector<std::string>& comments) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
    throw ParameterError("histogram needs at least two increasing bin edges");
  }
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "bin_left,bin_right,mass\n";
  const std::size_t bins = edges.size() - 1;
  std::vector<double> mass(bins, 0.0);
  for (const auto& a : m.atoms()) {
    if (a.value < edges.front() || a.value > edges.back()) continue;
    auto it = std::upper_bound(edges.begin(), edges.end(), a.value);
    std::size_t bin = static_cast<std::size_t>(it - edges.begin());
    bin = bin == 0 ? 0 : bin - 1;
    if (bin >= bins) bin = bins - 1;
    mass[bin] += a.weight;
  }
  for (std::size_t i = 0; i < bins; ++i) {
    out << format_double(edges[i]) << ',' << format_double(edges[i + 1]) << ',' << format_double(mass[i]) << '\n';
  }
}

}  // namespace kbias
