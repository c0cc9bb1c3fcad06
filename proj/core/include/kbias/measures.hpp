#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace kbias {

struct Atom {
  double value = 0.0;
  double weight = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Values closer than this are merged into one atom.
inline constexpr double kAtomMergeTolerance = 1e-12;

/// Finitely supported probability measure on the real line: the container
/// for quenched/annealed bias distributions and Monte Carlo limit laws.
///
/// Atoms are sorted by value, carry positive weights summing to 1, and
/// values within kAtomMergeTolerance of the first value of a run are merged
/// into that first value.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure() = default;

  /// (1/N) Σ δ_{values[i]}. Throws ParameterError if values is empty or
  /// contains non-finite entries.
  static EmpiricalMeasure from_values(std::span<const double> values);
  /// Weights must be non-negative and sum to 1 within 1e-12 (ParameterError
  /// "unnormalized" otherwise); zero-weight atoms are dropped.
  static EmpiricalMeasure from_atoms(std::vector<Atom> atoms);
  static EmpiricalMeasure dirac(double value);
  /// Equal-weight average of the parts, e.g. the annealed measure over
  /// graph replicas.
  static EmpiricalMeasure mixture(std::span<const EmpiricalMeasure> parts);

  std::span<const Atom> atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

  double mean() const;
  /// Σ w v^r, r ≥ 1.
  double moment(unsigned r) const;
  /// F(x) = μ((-∞, x]).
  double cdf(double x) const;
  /// μ([x, ∞)).
  double mass_at_least(double x) const;
  /// Cumulative weight up to and including atom i.
  double cumulative(std::size_t i) const { return cumulative_[i]; }

  /// Free-form metadata carried into the JSON export.
  nlohmann::json meta = nlohmann::json::object();

  /// {"atoms": [[value, weight], ...], "meta": {...}}
  nlohmann::json to_json() const;
  static EmpiricalMeasure from_json(const nlohmann::json& j);

  friend bool operator==(const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  static EmpiricalMeasure finish(std::vector<Atom> sorted_atoms, long double total);

  std::vector<Atom> atoms_;
  std::vector<double> cumulative_;
};

/// Lévy distance inf{ε : F_a(x-ε) - ε ≤ F_b(x) ≤ F_a(x+ε) + ε ∀x}. Bisection
/// on ε to 1e-12 followed by a snap to the exact critical value inside the
/// final bracket. Used as the computable stand-in for the Prohorov metric
/// (both metrize weak convergence on ℝ).
double levy_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);
/// sup_x |F_a(x) - F_b(x)|.
double ks_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);
/// ∫ |F_a - F_b| dx.
double w1_distance(const EmpiricalMeasure& a, const EmpiricalMeasure& b);

/// `count` equal-width bins covering the atoms (a degenerate range is
/// widened to ±0.5 around the single value).
std::vector<double> auto_bin_edges(const EmpiricalMeasure& m, std::size_t count);
std::vector<double> uniform_bin_edges(double lo, double hi, std::size_t count);

/// CSV "bin_left,bin_right,mass" over bins [e_i, e_{i+1}); the last bin is
/// closed. Atoms outside [e_0, e_last] are not counted. Each comment line
/// is written as "# <comment>" before the header.
void write_histogram_csv(std::ostream& out, const EmpiricalMeasure& m, std::span<const double> edges,
                         const std::vector<std::string>& comments = {});

}  // namespace kbias
