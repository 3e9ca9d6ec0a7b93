#include "socam/qoc.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "socam/error.hpp"
#include "socam/statement.hpp"

namespace socam {

std::string_view toString(ParameterKind kind) {
  switch (kind) {
    case ParameterKind::Accuracy: return "accuracy";
    case ParameterKind::Resolution: return "resolution";
    case ParameterKind::Certainty: return "certainty";
    case ParameterKind::Freshness: return "freshness";
  }
  return "?";
}

void validateMetric(ParameterKind kind, const Metric& metric) {
  if (!std::isfinite(metric.value)) {
    throw Error(Errc::MalformedMetric, std::string(toString(kind)) + " value is not finite");
  }
  auto where = std::string(toString(kind));
  switch (kind) {
    case ParameterKind::Accuracy:
    case ParameterKind::Certainty:
      if (metric.unit != "percent") {
        throw Error(Errc::MalformedMetric, where + " must be expressed in percent, got '" +
                                               metric.unit + "'");
      }
      if (metric.value < 0 || metric.value > 100) {
        throw Error(Errc::OutOfRange, where + " " + std::to_string(metric.value) +
                                          " outside [0, 100] percent");
      }
      break;
    case ParameterKind::Resolution:
      if (metric.value <= 0) throw Error(Errc::OutOfRange, "resolution must be > 0");
      break;
    case ParameterKind::Freshness:
      if (metric.unit != "millisecond") {
        throw Error(Errc::MalformedMetric, "freshness lifetime must be in millisecond, got '" +
                                               metric.unit + "'");
      }
      if (metric.value <= 0) throw Error(Errc::OutOfRange, "mean lifetime must be > 0");
      break;
  }
}

void QualityConstraint::set(ParameterKind kind, Metric metric) {
  validateMetric(kind, metric);
  parameters_[kind] = std::move(metric);
}

const Metric* QualityConstraint::get(ParameterKind kind) const {
  auto it = parameters_.find(kind);
  return it == parameters_.end() ? nullptr : &it->second;
}

std::optional<double> QualityConstraint::certainty() const {
  if (auto* m = get(ParameterKind::Certainty)) return m->value;
  return std::nullopt;
}

std::optional<double> QualityConstraint::accuracy() const {
  if (auto* m = get(ParameterKind::Accuracy)) return m->value;
  return std::nullopt;
}

std::optional<Millis> QualityConstraint::lifetime() const {
  if (auto* m = get(ParameterKind::Freshness)) return static_cast<Millis>(std::llround(m->value));
  return std::nullopt;
}

namespace {

Term socamTerm(std::string_view local) { return iriOf(ns::socam, local); }

std::optional<ParameterKind> kindFromClass(const Term& cls) {
  static const std::map<Term, ParameterKind> kinds = {
      {socamTerm("Accuracy"), ParameterKind::Accuracy},
      {socamTerm("Resolution"), ParameterKind::Resolution},
      {socamTerm("Certainty"), ParameterKind::Certainty},
      {socamTerm("Freshness"), ParameterKind::Freshness},
  };
  auto it = kinds.find(cls);
  if (it == kinds.end()) return std::nullopt;
  return it->second;
}

std::vector<Term> objectsOf(std::span<const Triple> triples, const Term& s, const Term& p) {
  std::vector<Term> out;
  for (const auto& t : triples) {
    if (t.subject == s && t.predicate == p) out.push_back(t.object);
  }
  return out;
}

std::string nodeName(const Term& t) { return render(t); }

Metric readMetric(std::span<const Triple> triples, const Term& node) {
  auto values = objectsOf(triples, node, socamTerm("value"));
  auto types = objectsOf(triples, node, socamTerm("metricType"));
  auto units = objectsOf(triples, node, socamTerm("unit"));
  if (values.size() != 1 || !values[0].numeric()) {
    throw Error(Errc::MalformedMetric, "metric " + nodeName(node) + " needs one numeric socam:value");
  }
  if (types.size() > 1 || units.size() != 1) {
    throw Error(Errc::MalformedMetric,
                "metric " + nodeName(node) + " needs one socam:unit and at most one socam:metricType");
  }
  Metric m;
  m.value = *values[0].numeric();
  m.unit = units[0].value();
  if (!types.empty()) m.type = types[0].value();
  return m;
}

}  // namespace

QoCParseResult parseQoC(std::span<const Triple> triples, const Term& constraintNode, bool strict) {
  QoCParseResult result;
  for (const auto& param : objectsOf(triples, constraintNode, socamTerm("hasParameter"))) {
    auto classes = objectsOf(triples, param, rdfType());
    std::optional<ParameterKind> kind;
    std::vector<Term> unknown;
    for (const auto& cls : classes) {
      if (auto k = kindFromClass(cls)) {
        kind = k;
      } else {
        unknown.push_back(cls);
      }
    }
    if (!kind) {
      std::string what = unknown.empty() ? "untyped parameter " + nodeName(param)
                                         : "unknown parameter kind " + nodeName(unknown.front());
      if (strict) throw Error(Errc::UnknownParameter, what);
      result.warnings.push_back(what + " dropped");
      continue;
    }
    auto metrics = objectsOf(triples, param, socamTerm("hasMetric"));
    if (metrics.size() != 1) {
      throw Error(Errc::MalformedMetric, std::string(toString(*kind)) +
                                             " parameter must have exactly one metric");
    }
    if (result.constraint.get(*kind)) {
      throw Error(Errc::MalformedMetric,
                  "more than one " + std::string(toString(*kind)) + " parameter");
    }
    result.constraint.set(*kind, readMetric(triples, metrics[0]));
  }
  return result;
}

QoCParseResult parseQoC(std::span<const Triple> triples, bool strict) {
  std::vector<Term> roots;
  for (const auto& t : triples) {
    if (t.predicate == rdfType() && t.object == socamTerm("QualityConstraint")) {
      roots.push_back(t.subject);
    }
  }
  if (roots.empty()) return {};
  if (roots.size() > 1) {
    throw Error(Errc::MalformedMetric, "expected a single socam:QualityConstraint node");
  }
  return parseQoC(triples, roots.front(), strict);
}

namespace {

double parseNumberPrefix(std::string_view key, std::string_view text, std::string_view& suffix) {
  std::string copy(text);
  char* end = nullptr;
  double v = std::strtod(copy.c_str(), &end);
  if (end == copy.c_str()) {
    throw Error(Errc::MalformedMetric,
                std::string(key) + " expects a number, got '" + std::string(text) + "'");
  }
  suffix = text.substr(static_cast<std::size_t>(end - copy.c_str()));
  return v;
}

}  // namespace

bool applyQoCField(QualityConstraint& qoc, std::string_view key, std::string_view value) {
  std::string_view suffix;
  if (key == "certainty" || key == "accuracy") {
    double v = parseNumberPrefix(key, value, suffix);
    if (!suffix.empty() && suffix != "%") {
      throw Error(Errc::MalformedMetric, std::string(key) + " must be a percentage");
    }
    qoc.set(key == "certainty" ? ParameterKind::Certainty : ParameterKind::Accuracy,
            {v, "percentage", "percent"});
    return true;
  }
  if (key == "resolution") {
    double v = parseNumberPrefix(key, value, suffix);
    static const std::map<std::string_view, std::string_view> lengths = {
        {"m", "meter"}, {"meter", "meter"}, {"cm", "centimeter"},
        {"mm", "millimeter"}, {"km", "kilometer"}};
    if (suffix.empty()) throw Error(Errc::MalformedMetric, "resolution needs a unit, e.g. 50m");
    auto it = lengths.find(suffix);
    if (it != lengths.end()) {
      qoc.set(ParameterKind::Resolution, {v, "distance", std::string(it->second)});
    } else {
      qoc.set(ParameterKind::Resolution, {v, "generic", std::string(suffix)});
    }
    return true;
  }
  if (key == "lifetime") {
    double v = parseNumberPrefix(key, value, suffix);
    if (suffix != "ms") throw Error(Errc::MalformedMetric, "lifetime must be given in ms");
    qoc.set(ParameterKind::Freshness, {v, "duration", "millisecond"});
    return true;
  }
  return false;
}

ConfidenceKey confidenceKey(const ContextStatement& stmt, Millis now) {
  ConfidenceKey key;
  key.fresh = stmt.isFreshAt(now) ? 1 : 0;
  key.classRank = confidenceRank(stmt.classification);
  key.certainty = stmt.effectiveCertainty();
  key.accuracy = stmt.effectiveAccuracy();
  key.recency = -(now - stmt.producedAt);
  return key;
}

}  // namespace socam
