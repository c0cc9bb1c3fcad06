#include "kbias/offspring_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "kbias/errors.hpp"
#include "kbias/format.hpp"

namespace kbias {

OffspringLaw::OffspringLaw(std::vector<double> pmf) : pmf_(std::move(pmf)) {
  while (!pmf_.empty() && pmf_.back() == 0.0) pmf_.pop_back();
  if (pmf_.empty()) throw ParameterError("pmf has no positive mass");
  double total = 0.0;
  for (double p : pmf_) {
    if (!std::isfinite(p) || p < 0.0) throw ParameterError("pmf entries must be finite and non-negative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw ParameterError("pmf must sum to 1, sums to " + format_double(total));
  }
  for (double& p : pmf_) p /= total;

  cdf_.resize(pmf_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < pmf_.size(); ++k) {
    acc += pmf_[k];
    cdf_[k] = acc;
    m1_ += static_cast<double>(k) * pmf_[k];
    m2_ += static_cast<double>(k) * static_cast<double>(k) * pmf_[k];
  }
  support_min_ = static_cast<std::uint32_t>(
      std::find_if(pmf_.begin(), pmf_.end(), [](double p) { return p > 0.0; }) - pmf_.begin());
}

OffspringLaw OffspringLaw::from_map(const std::map<std::uint32_t, double>& pmf) {
  if (pmf.empty()) throw ParameterError("pmf is empty");
  std::vector<double> dense(pmf.rbegin()->first + 1, 0.0);
  for (const auto& [k, p] : pmf) dense[k] = p;
  return OffspringLaw(std::move(dense));
}

OffspringLaw OffspringLaw::dirac(std::uint32_t k) {
  std::vector<double> dense(k + 1, 0.0);
  dense[k] = 1.0;
  return OffspringLaw(std::move(dense));
}

OffspringLaw OffspringLaw::poisson(double lambda, double tail_mass) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ParameterError("Poisson mean must be positive");
  if (!(tail_mass > 0.0 && tail_mass < 1.0)) throw ParameterError("tail mass must lie in (0, 1)");
  std::vector<double> dense;
  double p = std::exp(-lambda);
  double cumulative = 0.0;
  for (std::uint32_t k = 0;; ++k) {
    if (k > 0) p *= lambda / k;
    dense.push_back(p);
    cumulative += p;
    if (1.0 - cumulative < tail_mass && static_cast<double>(k) >= lambda) break;
    if (k > 100000) throw ParameterError("Poisson truncation did not converge");
  }
  const double total = cumulative;
  for (double& q : dense) q /= total;
  OffspringLaw law(std::move(dense));
  law.truncation_ = law.support_max();
  law.poisson_lambda_ = lambda;
  return law;
}

std::uint32_t OffspringLaw::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) return support_max();
  return static_cast<std::uint32_t>(it - cdf_.begin());
}

nlohmann::json OffspringLaw::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t k = 0; k < pmf_.size(); ++k) {
    if (pmf_[k] > 0.0) j[std::to_string(k)] = pmf_[k];
  }
  if (poisson_lambda_) {
    j["truncated_poisson"] = {{"lambda", *poisson_lambda_}, {"truncation_point", *truncation_}};
  }
  return j;
}

OffspringLaw OffspringLaw::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("offspring law must be a JSON object");
  if (j.contains("poisson")) {
    const double tail = j.value("tail_mass", 1e-12);
    return poisson(j.at("poisson").get<double>(), tail);
  }
  if (j.contains("truncated_poisson")) {
    const auto& tp = j.at("truncated_poisson");
    return poisson(tp.at("lambda").get<double>(), j.value("tail_mass", 1e-12));
  }
  std::map<std::uint32_t, double> pmf;
  for (const auto& [key, value] : j.items()) {
    std::size_t used = 0;
    unsigned long k = 0;
    try {
      k = std::stoul(key, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != key.size() || k > std::numeric_limits<std::uint32_t>::max()) {
      throw ConfigError("offspring law key '" + key + "' is not a non-negative integer");
    }
    if (!value.is_number()) throw ConfigError("offspring law value for '" + key + "' is not a number");
    pmf[static_cast<std::uint32_t>(k)] = value.get<double>();
  }
  return from_map(pmf);
}

OffspringLaw size_bias(const OffspringLaw& p) {
  if (!(p.mean() > 0.0)) throw ParameterError("size-biasing needs E[D] > 0");
  const auto pmf = p.pmf();
  std::vector<double> biased(pmf.size() - 1, 0.0);
  for (std::size_t k = 0; k + 1 < pmf.size(); ++k) {
    biased[k] = static_cast<double>(k + 1) * pmf[k + 1] / p.mean();
  }
  return OffspringLaw(std::move(biased));
}

}  // namespace kbias
