#include "kbias/psi_window.hpp"

#include <algorithm>

#include "kbias/errors.hpp"
#include "kbias/kernels.hpp"
#include "kbias/measures.hpp"
#include "kbias/stationary.hpp"

namespace kbias {

PsiWindow psi_window(const GenSpec& spec, const std::vector<Exploration>& kinds, std::size_t N, std::size_t K_max,
                     const std::vector<std::size_t>& n_grid) {
  if (kinds.empty()) throw ParameterError("psi window needs at least one exploration kind");
  const bool any_n = std::any_of(n_grid.begin(), n_grid.end(), [&](std::size_t n) { return n >= N; });
  if (!any_n || K_max < std::max<std::size_t>(N, 1)) {
    throw ParameterError("psi window is empty: no grid point with n, k ≥ N");
  }

  PsiWindow out;
  for (std::size_t n : n_grid) {
    if (n < N) continue;
    GenSpec at = spec;
    at.n = n;
    const auto generated = generate(at);
    const auto limit = stationary_bias(generated.graph);
    for (const auto& e : kinds) {
      for_each_bias_level(generated.graph, K_max, e, [&](std::size_t k, std::span<const double> bias) {
        if (k < N) return;
        const auto measure = EmpiricalMeasure::from_values(bias);
        const double d = levy_distance(measure, limit);
        out.table.push_back({n, e, k, d, ks_distance(measure, limit), w1_distance(measure, limit)});
        out.value = std::max(out.value, d);
      });
    }
  }
  return out;
}

}  // namespace kbias
