#include "socam/ontology.hpp"

#include <algorithm>
#include <functional>

#include "socam/error.hpp"

namespace socam {

namespace {

Term owl(std::string_view local) { return iriOf(ns::owl, local); }
Term rdfs(std::string_view local) { return iriOf(ns::rdfs, local); }
Term socamNs(std::string_view local) { return iriOf(ns::socam, local); }

std::optional<Classification> classificationFromTerm(const Term& t) {
  if (!t.isIri()) return std::nullopt;
  std::string_view v = t.value();
  if (v.substr(0, ns::socam.size()) != ns::socam) return std::nullopt;
  return parseClassification(v.substr(ns::socam.size()));
}

std::string describeCycle(const std::vector<Term>& cycle) {
  std::string out;
  for (const auto& t : cycle) {
    if (!out.empty()) out += " -> ";
    out += render(t);
  }
  return out;
}

bool isDatatypeIri(const Term& t) {
  return t.isIri() && t.value().rfind(ns::xsd, 0) == 0;
}

}  // namespace

std::vector<Term> findCycle(const std::set<std::pair<Term, Term>>& edges) {
  std::map<Term, std::vector<Term>> adj;
  for (const auto& [sub, super] : edges) adj[sub].push_back(super);
  enum Color { White, Grey, Black };
  std::map<Term, Color> color;
  std::vector<Term> stack;
  std::vector<Term> cycle;
  std::function<bool(const Term&)> dfs = [&](const Term& node) {
    color[node] = Grey;
    stack.push_back(node);
    for (const auto& next : adj[node]) {
      if (color[next] == Grey) {
        auto it = std::find(stack.begin(), stack.end(), next);
        cycle.assign(it, stack.end());
        cycle.push_back(next);
        return true;
      }
      if (color[next] == White && dfs(next)) return true;
    }
    stack.pop_back();
    color[node] = Black;
    return false;
  };
  for (const auto& [node, _] : adj) {
    if (color[node] == White && dfs(node)) return cycle;
  }
  return {};
}

Schema loadSchema(const Document& doc, std::string moduleId, const SchemaOptions& options) {
  Schema schema;
  schema.moduleId = std::move(moduleId);
  const Term type = rdfType();
  const std::set<Term> classMarkers = {owl("Class"), rdfs("Class")};
  const Term objectProperty = owl("ObjectProperty");
  const Term datatypeProperty = owl("DatatypeProperty");
  const Term functionalProperty = owl("FunctionalProperty");
  const std::set<Term> annotationPredicates = {socamNs("classifiedAs"), socamNs("dependsOn"),
                                               socamNs("functional"), rdfs("domain"),
                                               rdfs("range")};

  struct Pending {
    std::optional<PropertyKind> kind;
    std::vector<Term> classifications;
    PropertyDecl decl;
  };
  std::map<Term, Pending> props;

  for (const auto& t : doc.triples) {
    if (t.predicate == type) {
      if (classMarkers.count(t.object)) {
        schema.classes.insert(t.subject);
      } else if (t.object == objectProperty) {
        props[t.subject].kind = PropertyKind::Object;
      } else if (t.object == datatypeProperty) {
        props[t.subject].kind = PropertyKind::Datatype;
      } else if (t.object == functionalProperty) {
        props[t.subject].decl.functional = true;
      }
      continue;
    }
    if (t.predicate == rdfs("subClassOf")) {
      schema.classes.insert(t.subject);
      schema.subClassOf.insert({t.subject, t.object});
      continue;
    }
    if (!annotationPredicates.count(t.predicate)) continue;
    auto& p = props[t.subject];
    if (t.predicate == socamNs("classifiedAs")) {
      p.classifications.push_back(t.object);
    } else if (t.predicate == socamNs("dependsOn")) {
      p.decl.dependsOn.insert(t.object);
    } else if (t.predicate == socamNs("functional")) {
      p.decl.functional = t.object == Term::boolean(true);
    } else if (t.predicate == rdfs("domain")) {
      p.decl.domain.push_back(t.object);
    } else if (t.predicate == rdfs("range")) {
      p.decl.range.push_back(t.object);
    }
  }

  for (auto& [iri, p] : props) {
    PropertyDecl decl = std::move(p.decl);
    decl.iri = iri;
    std::set<Term> distinct(p.classifications.begin(), p.classifications.end());
    if (distinct.size() > 1) {
      throw Error(Errc::DuplicateDeclaration,
                  "property " + render(iri) + " has more than one socam:classifiedAs value");
    }
    if (distinct.empty()) {
      if (options.strict) {
        throw Error(Errc::MissingClassification,
                    "property " + render(iri) + " lacks socam:classifiedAs");
      }
      schema.warnings.push_back("property " + render(iri) +
                                " lacks socam:classifiedAs; defaulting to Sensed");
      decl.classifiedAs = Classification::Sensed;
    } else {
      auto c = classificationFromTerm(*distinct.begin());
      if (!c) {
        throw Error(Errc::MissingClassification,
                    "property " + render(iri) + " has unknown classification " +
                        render(*distinct.begin()));
      }
      decl.classifiedAs = *c;
    }
    if (p.kind) {
      decl.kind = *p.kind;
    } else {
      bool datatypeRange = !decl.range.empty() &&
                           std::all_of(decl.range.begin(), decl.range.end(), isDatatypeIri);
      decl.kind = decl.range.empty() || datatypeRange ? PropertyKind::Datatype
                                                      : PropertyKind::Object;
    }
    schema.properties.emplace(iri, std::move(decl));
  }

  for (const auto& [iri, decl] : schema.properties) {
    for (const auto& dep : decl.dependsOn) {
      bool known = schema.properties.count(dep) ||
                   (options.loaded && options.loaded->property(dep) != nullptr);
      if (!known) {
        throw Error(Errc::DanglingDependsOn, "property " + render(iri) + " dependsOn " +
                                                 render(dep) + ", which is not declared");
      }
    }
    for (const auto& d : decl.domain) {
      bool known = schema.classes.count(d) || (options.loaded && options.loaded->hasClass(d));
      if (!known) schema.warnings.push_back("domain " + render(d) + " of " + render(iri) +
                                            " is not a declared class");
    }
  }

  auto cycle = findCycle(schema.subClassOf);
  if (!cycle.empty()) {
    throw Error(Errc::CyclicHierarchy, "subClassOf cycle: " + describeCycle(cycle));
  }
  return schema;
}

void Ontology::plug(Schema schema) {
  if (hasModule(schema.moduleId)) {
    throw Error(Errc::DuplicateModule, "module '" + schema.moduleId + "' is already plugged");
  }
  std::set<std::string> deps;
  auto noteOwner = [&](const Term& t) {
    auto owner = ownerOf(t);
    if (!owner.empty()) deps.insert(owner);
  };
  for (const auto& [sub, super] : schema.subClassOf) {
    if (!schema.classes.count(super) && !hasClass(super)) {
      throw Error(Errc::UnresolvedReference, "superclass " + render(super) + " of " +
                                                 render(sub) + " is not declared");
    }
    if (!schema.classes.count(super)) noteOwner(super);
  }
  for (const auto& [iri, decl] : schema.properties) {
    if (propertyOwner_.count(iri)) {
      throw Error(Errc::DuplicateDeclaration,
                  "property " + render(iri) + " is already declared by module '" +
                      propertyOwner_.at(iri) + "'");
    }
    for (const auto& dep : decl.dependsOn) {
      if (schema.properties.count(dep)) continue;
      if (!propertyOwner_.count(dep)) {
        throw Error(Errc::DanglingDependsOn, "property " + render(iri) + " dependsOn " +
                                                 render(dep) + ", which is not declared");
      }
      noteOwner(dep);
    }
    for (const auto& c : decl.domain) {
      if (!schema.classes.count(c)) noteOwner(c);
    }
    for (const auto& c : decl.range) {
      if (!schema.classes.count(c)) noteOwner(c);
    }
  }
  std::set<std::pair<Term, Term>> all = schema.subClassOf;
  for (const auto& m : modules_) all.insert(m.subClassOf.begin(), m.subClassOf.end());
  auto cycle = findCycle(all);
  if (!cycle.empty()) {
    throw Error(Errc::CyclicHierarchy, "subClassOf cycle: " + describeCycle(cycle));
  }
  dependencies_[schema.moduleId] = std::move(deps);
  modules_.push_back(std::move(schema));
  rebuild();
}

Schema Ontology::unplug(std::string_view moduleId) {
  auto it = std::find_if(modules_.begin(), modules_.end(),
                         [&](const Schema& s) { return s.moduleId == moduleId; });
  if (it == modules_.end()) {
    throw Error(Errc::UnknownModule, "module '" + std::string(moduleId) + "' is not plugged");
  }
  for (const auto& [other, deps] : dependencies_) {
    if (other != moduleId && deps.count(std::string(moduleId))) {
      throw Error(Errc::DependencyViolation, "module '" + other + "' depends on '" +
                                                 std::string(moduleId) + "'");
    }
  }
  Schema removed = std::move(*it);
  modules_.erase(it);
  dependencies_.erase(dependencies_.find(moduleId));
  rebuild();
  return removed;
}

void Ontology::rebuild() {
  classOwners_.clear();
  propertyOwner_.clear();
  supers_.clear();
  for (const auto& m : modules_) {
    for (const auto& c : m.classes) classOwners_[c].insert(m.moduleId);
    for (const auto& [iri, _] : m.properties) propertyOwner_[iri] = m.moduleId;
    for (const auto& [sub, super] : m.subClassOf) supers_[sub].insert(super);
  }
}

bool Ontology::hasModule(std::string_view moduleId) const { return module(moduleId) != nullptr; }

std::vector<std::string> Ontology::moduleIds() const {
  std::vector<std::string> ids;
  for (const auto& m : modules_) ids.push_back(m.moduleId);
  return ids;
}

const Schema* Ontology::module(std::string_view moduleId) const {
  for (const auto& m : modules_) {
    if (m.moduleId == moduleId) return &m;
  }
  return nullptr;
}

const std::set<std::string>& Ontology::dependenciesOf(std::string_view moduleId) const {
  static const std::set<std::string> none;
  auto it = dependencies_.find(moduleId);
  return it == dependencies_.end() ? none : it->second;
}

const PropertyDecl* Ontology::property(const Term& iri) const {
  auto owner = propertyOwner_.find(iri);
  if (owner == propertyOwner_.end()) return nullptr;
  return &module(owner->second)->properties.at(iri);
}

std::string Ontology::ownerOf(const Term& iri) const {
  if (auto it = propertyOwner_.find(iri); it != propertyOwner_.end()) return it->second;
  // First plugged module that declares the class.
  if (auto it = classOwners_.find(iri); it != classOwners_.end()) {
    for (const auto& m : modules_) {
      if (it->second.count(m.moduleId)) return m.moduleId;
    }
  }
  return {};
}

bool Ontology::isSubclassOf(const Term& sub, const Term& super) const {
  if (!hasClass(sub)) throw Error(Errc::UnknownClass, "unknown class " + render(sub));
  if (!hasClass(super)) throw Error(Errc::UnknownClass, "unknown class " + render(super));
  std::set<Term> seen;
  std::vector<Term> work{sub};
  while (!work.empty()) {
    Term cur = std::move(work.back());
    work.pop_back();
    if (cur == super) return true;
    if (!seen.insert(cur).second) continue;
    if (auto it = supers_.find(cur); it != supers_.end()) {
      work.insert(work.end(), it->second.begin(), it->second.end());
    }
  }
  return false;
}

Classification Ontology::classifyStatement(const Term& predicate) const {
  const auto* decl = property(predicate);
  if (!decl) throw Error(Errc::UnknownProperty, "unknown property " + render(predicate));
  return decl->classifiedAs;
}

bool Ontology::isFunctional(const Term& predicate) const {
  const auto* decl = property(predicate);
  return decl && decl->functional;
}

std::set<Term> Ontology::dependsOn(const Term& predicate) const {
  const auto* decl = property(predicate);
  return decl ? decl->dependsOn : std::set<Term>{};
}

}  // namespace socam
