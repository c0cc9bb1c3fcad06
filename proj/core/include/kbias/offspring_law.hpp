#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kbias/rng.hpp"

namespace kbias {

/// Finite-support pmf on {0, 1, 2, ...}: a degree law for graph generation
/// or an offspring law for Galton-Watson trees.
class OffspringLaw {
 public:
  /// pmf[k] = P{D = k}. Entries must be finite and non-negative with total
  /// within 1e-9 of 1; the stored pmf is renormalized and trailing zeros are
  /// trimmed. Throws ParameterError otherwise.
  explicit OffspringLaw(std::vector<double> pmf);

  static OffspringLaw from_map(const std::map<std::uint32_t, double>& pmf);
  static OffspringLaw dirac(std::uint32_t k);
  /// Poisson(lambda) cut at the first K with P{D > K} < tail_mass, then
  /// renormalized. K is kept as truncation_point().
  static OffspringLaw poisson(double lambda, double tail_mass = 1e-12);

  std::span<const double> pmf() const noexcept { return pmf_; }
  double operator[](std::size_t k) const noexcept { return k < pmf_.size() ? pmf_[k] : 0.0; }
  std::uint32_t support_min() const noexcept { return support_min_; }
  std::uint32_t support_max() const noexcept { return static_cast<std::uint32_t>(pmf_.size() - 1); }

  /// m^(1) = E[D].
  double mean() const noexcept { return m1_; }
  /// m^(2) = E[D^2].
  double second_moment() const noexcept { return m2_; }
  double variance() const noexcept { return m2_ - m1_ * m1_; }
  std::optional<std::uint32_t> truncation_point() const noexcept { return truncation_; }

  std::uint32_t sample(Rng& rng) const;

  /// {"k": prob, ...}; a truncated Poisson additionally records
  /// "truncated_poisson": {"lambda": ..., "truncation_point": K}.
  nlohmann::json to_json() const;
  /// Accepts the pmf object above or {"poisson": lambda[, "tail_mass": t]}.
  static OffspringLaw from_json(const nlohmann::json& j);

 private:
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  double m1_ = 0.0;
  double m2_ = 0.0;
  std::uint32_t support_min_ = 0;
  std::optional<std::uint32_t> truncation_;
  std::optional<double> poisson_lambda_;
};

/// Size-biased offspring law p*_k = (k + 1) p_{k+1} / E[D]: the offspring law
/// of a non-root vertex of the unimodular tree. Throws ParameterError when
/// E[D] = 0.
OffspringLaw size_bias(const OffspringLaw& p);

}  // namespace kbias
