#pragma once

// Quality of context: a constraint maps each parameter kind (accuracy,
// resolution, certainty, freshness) to one metric {value, type, unit}.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "socam/term.hpp"

namespace socam {

using Millis = std::int64_t;

enum class ParameterKind { Accuracy, Resolution, Certainty, Freshness };

std::string_view toString(ParameterKind kind);

struct Metric {
  double value = 0;
  std::string type;  // "percentage", "distance", "duration", ...
  std::string unit;  // "percent", "meter", "millisecond", ...

  bool operator==(const Metric&) const = default;
};

class QualityConstraint {
 public:
  // Validates the metric for `kind`; throws MalformedMetric or OutOfRange.
  void set(ParameterKind kind, Metric metric);
  const Metric* get(ParameterKind kind) const;
  bool empty() const noexcept { return parameters_.empty(); }
  const std::map<ParameterKind, Metric>& parameters() const noexcept { return parameters_; }

  std::optional<double> certainty() const;
  std::optional<double> accuracy() const;
  // Mean lifetime in milliseconds, when a freshness parameter is present.
  std::optional<Millis> lifetime() const;

  bool operator==(const QualityConstraint&) const = default;

 private:
  std::map<ParameterKind, Metric> parameters_;
};

void validateMetric(ParameterKind kind, const Metric& metric);

struct QoCParseResult {
  QualityConstraint constraint;
  std::vector<std::string> warnings;
};

// Reads the annotation graph rooted at `constraintNode`:
//   node socam:hasParameter p .  p a socam:Accuracy ; socam:hasMetric m .
//   m socam:value 79 ; socam:metricType "percentage" ; socam:unit "percent" .
// Unknown parameter classes throw UnknownParameter in strict mode and are
// dropped with a warning otherwise.
QoCParseResult parseQoC(std::span<const Triple> triples, const Term& constraintNode,
                        bool strict = false);
// Same, for the single node typed socam:QualityConstraint (empty if none).
QoCParseResult parseQoC(std::span<const Triple> triples, bool strict = false);

// Flat trace fields: certainty=79 accuracy=80 resolution=50m lifetime=5000ms.
// Returns false if `key` is not a QoC field.
bool applyQoCField(QualityConstraint& qoc, std::string_view key, std::string_view value);

struct ContextStatement;

// Lexicographic ranking key. `fresh` comes first so a stale statement ranks
// below every fresh one regardless of the rest.
struct ConfidenceKey {
  int fresh = 1;
  int classRank = 0;
  double certainty = 100;
  double accuracy = 100;
  Millis recency = 0;  // -(now - producedAt)

  auto operator<=>(const ConfidenceKey&) const = default;
};

ConfidenceKey confidenceKey(const ContextStatement& stmt, Millis now);

}  // namespace socam
