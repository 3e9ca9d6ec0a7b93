#include "socam/statement.hpp"

namespace socam {

std::string_view toString(Classification c) {
  switch (c) {
    case Classification::Sensed: return "Sensed";
    case Classification::Defined: return "Defined";
    case Classification::Aggregated: return "Aggregated";
    case Classification::Deduced: return "Deduced";
  }
  return "?";
}

std::optional<Classification> parseClassification(std::string_view text) {
  if (text == "Sensed") return Classification::Sensed;
  if (text == "Defined") return Classification::Defined;
  if (text == "Aggregated") return Classification::Aggregated;
  if (text == "Deduced") return Classification::Deduced;
  return std::nullopt;
}

std::optional<Millis> ContextStatement::staleFrom() const {
  if (!qoc) return std::nullopt;
  auto life = qoc->lifetime();
  if (!life) return std::nullopt;
  return producedAt + *life + 1;
}

bool ContextStatement::isFreshAt(Millis t) const {
  auto stale = staleFrom();
  return !stale || t < *stale;
}

double ContextStatement::effectiveCertainty() const {
  if (qoc) {
    if (auto c = qoc->certainty()) return *c;
  }
  return 100;
}

double ContextStatement::effectiveAccuracy() const {
  if (qoc) {
    if (auto a = qoc->accuracy()) return *a;
  }
  return 100;
}

}  // namespace socam
