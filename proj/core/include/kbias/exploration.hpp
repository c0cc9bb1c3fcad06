#pragma once

#include <string>
#include <string_view>

namespace kbias {

enum class ExplorationKind { Backtracking, NonBacktracking, Lazy };

/// Exploration rule plus its laziness (only meaningful for Lazy).
struct Exploration {
  ExplorationKind kind = ExplorationKind::Backtracking;
  double delta = 0.0;

  static Exploration backtracking() { return {ExplorationKind::Backtracking, 0.0}; }
  static Exploration non_backtracking() { return {ExplorationKind::NonBacktracking, 0.0}; }
  /// Throws ParameterError unless 0 < delta < 1.
  static Exploration lazy(double delta);

  friend bool operator==(const Exploration&, const Exploration&) = default;
};

/// "bt", "nb" or "lazy".
std::string_view kind_name(ExplorationKind kind);
/// Inverse of kind_name; throws ParameterError on anything else.
ExplorationKind parse_kind(std::string_view name);
/// "bt", "nb", "lazy(0.5)".
std::string describe(const Exploration& e);

}  // namespace kbias
