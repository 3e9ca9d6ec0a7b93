#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include "socam/qoc.hpp"
#include "socam/term.hpp"

namespace socam {

// Declared in confidence order; the enumerator value is the rank.
enum class Classification { Deduced = 1, Aggregated = 2, Sensed = 3, Defined = 4 };

inline int confidenceRank(Classification c) { return static_cast<int>(c); }
inline bool isDirect(Classification c) {
  return c == Classification::Sensed || c == Classification::Defined;
}
std::string_view toString(Classification c);
std::optional<Classification> parseClassification(std::string_view text);

inline constexpr std::string_view kInterpreterId = "interpreter";

// Identity of a stored statement.
struct StatementKey {
  Triple triple;
  std::string provider;

  auto operator<=>(const StatementKey&) const = default;
  bool operator==(const StatementKey&) const = default;
};

struct ContextStatement {
  Triple triple;
  Classification classification = Classification::Sensed;
  std::optional<QualityConstraint> qoc;
  Millis producedAt = 0;
  std::string provider;

  StatementKey key() const { return {triple, provider}; }
  bool isFreshAt(Millis t) const;
  // Time from which the statement is stale, if it ever goes stale.
  std::optional<Millis> staleFrom() const;
  // Missing certainty/accuracy count as 100.
  double effectiveCertainty() const;
  double effectiveAccuracy() const;

  bool operator==(const ContextStatement&) const = default;
};

}  // namespace socam
