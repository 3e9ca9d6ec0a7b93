#pragma once

// Shared fixtures for the test binaries.

#include <fstream>
#include <sstream>
#include <string>

#include "socam/kb.hpp"
#include "socam/ontology.hpp"
#include "socam/rules.hpp"
#include "socam/runtime.hpp"
#include "socam/trace.hpp"
#include "socam/turtle.hpp"

namespace socam::test {

inline Term h(std::string_view local) { return iriOf(ns::home, local); }
inline Term sc(std::string_view local) { return iriOf(ns::socam, local); }
inline Term v(std::string name) { return Term::variable(std::move(name)); }
inline Term str(std::string s) { return Term::string(std::move(s)); }

inline std::string assetPath(std::string_view name) {
  return std::string(SOCAM_ASSET_DIR) + "/" + std::string(name);
}

inline std::string readAsset(std::string_view name) {
  std::ifstream in(assetPath(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing asset " + std::string(name));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline Schema loadAssetSchema(std::string_view file, const Ontology* loaded = nullptr,
                              bool strict = false) {
  std::string id(file.substr(0, file.find('.')));
  return loadSchema(parseTurtle(readAsset(file)), id, {strict, loaded});
}

inline Ontology homeOntology() {
  Ontology onto;
  onto.plug(loadAssetSchema("upper.ttl", &onto));
  onto.plug(loadAssetSchema("home.ttl", &onto));
  return onto;
}

inline void plugHome(ContextKB& kb) {
  kb.plug(loadAssetSchema("upper.ttl", &kb.ontology()));
  kb.plug(loadAssetSchema("home.ttl", &kb.ontology()));
}

inline RuleSet homeRules(const Ontology* onto = nullptr) {
  return parseRules(readAsset("home.rules"), {PrefixMap::wellKnown(), onto});
}

inline ContextStatement stmt(Triple t, std::string provider, Millis at = 0,
                             Classification c = Classification::Sensed,
                             std::string_view qocFields = "") {
  ContextStatement s;
  s.triple = std::move(t);
  s.provider = std::move(provider);
  s.producedAt = at;
  s.classification = c;
  if (!qocFields.empty()) {
    QualityConstraint q;
    std::istringstream in{std::string(qocFields)};
    std::string field;
    while (in >> field) {
      auto eq = field.find('=');
      applyQoCField(q, field.substr(0, eq), field.substr(eq + 1));
    }
    s.qoc = q;
  }
  return s;
}

// Engine loaded with the shipped home assets.
inline Engine homeEngine(bool strict = false) {
  Engine engine({.strict = strict});
  engine.plug(loadAssetSchema("upper.ttl", &engine.kb().ontology()));
  engine.plug(loadAssetSchema("home.ttl", &engine.kb().ontology()));
  engine.setRules(homeRules(&engine.kb().ontology()));
  return engine;
}

inline std::set<Triple> visibleTriples(const ContextKB& kb, Millis now) {
  std::set<Triple> out;
  for (const auto* s : kb.all()) {
    if (kb.isVisible(*s, now)) out.insert(s->statement.triple);
  }
  return out;
}

}  // namespace socam::test
