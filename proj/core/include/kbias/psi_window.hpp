#pragma once

#include <cstddef>
#include <vector>

#include "kbias/exploration.hpp"
#include "kbias/generators.hpp"

namespace kbias {

struct PsiCell {
  std::size_t n = 0;
  Exploration exploration;
  std::size_t k = 0;
  double levy = 0.0;
  double ks = 0.0;
  double w1 = 0.0;
};

struct PsiWindow {
  /// max over the window of Lévy(μ_n^(k), μ_n^(∞)). A finite-window proxy for
  /// the uniform distance sup_{k,n ≥ N}; the Lévy metric stands in for the
  /// Prohorov metric (both metrize weak convergence on ℝ).
  double value = 0.0;
  std::vector<PsiCell> table;
};

/// Generates one graph per n in n_grid with n ≥ N (spec with n replaced) and
/// scans k = N..K_max for every exploration. Throws ParameterError when the
/// window is empty.
PsiWindow psi_window(const GenSpec& spec, const std::vector<Exploration>& kinds, std::size_t N, std::size_t K_max,
                     const std::vector<std::size_t>& n_grid);

}  // namespace kbias
