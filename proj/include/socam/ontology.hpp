#pragma once

// Schema registry: the upper ontology plus pluggable domain ontologies.
// Properties carry a classification, dependsOn links and a functional flag,
// all declared at property level with the socam: vocabulary.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "socam/statement.hpp"
#include "socam/term.hpp"
#include "socam/turtle.hpp"

namespace socam {

enum class PropertyKind { Object, Datatype };

struct PropertyDecl {
  Term iri;
  PropertyKind kind = PropertyKind::Datatype;
  std::vector<Term> domain;  // union of rdfs:domain values
  std::vector<Term> range;
  Classification classifiedAs = Classification::Sensed;
  std::set<Term> dependsOn;
  bool functional = false;

  bool operator==(const PropertyDecl&) const = default;
};

struct Schema {
  std::string moduleId;
  std::set<Term> classes;
  std::set<std::pair<Term, Term>> subClassOf;  // (sub, super)
  std::map<Term, PropertyDecl> properties;
  std::vector<std::string> warnings;

  bool operator==(const Schema&) const = default;
};

class Ontology;

struct SchemaOptions {
  bool strict = false;
  // Already-plugged schemas that dependsOn targets may point into.
  const Ontology* loaded = nullptr;
};

Schema loadSchema(const Document& doc, std::string moduleId, const SchemaOptions& options = {});

class Ontology {
 public:
  // Errors: DuplicateModule, UnresolvedReference, DanglingDependsOn,
  // DuplicateDeclaration, CyclicHierarchy.
  void plug(Schema schema);
  // Errors: UnknownModule, DependencyViolation. Returns the removed schema.
  Schema unplug(std::string_view moduleId);

  bool hasModule(std::string_view moduleId) const;
  std::vector<std::string> moduleIds() const;
  const Schema* module(std::string_view moduleId) const;
  // Modules `moduleId` references (superclasses, dependsOn, domain, range).
  const std::set<std::string>& dependenciesOf(std::string_view moduleId) const;

  bool hasClass(const Term& cls) const { return classOwners_.count(cls) > 0; }
  const PropertyDecl* property(const Term& iri) const;
  // Declaring module of a class or property ("" if unknown).
  std::string ownerOf(const Term& iri) const;

  // Reflexive-transitive closure over every loaded subClassOf edge.
  // Throws UnknownClass.
  bool isSubclassOf(const Term& sub, const Term& super) const;
  // Throws UnknownProperty.
  Classification classifyStatement(const Term& predicate) const;
  bool isFunctional(const Term& predicate) const;
  std::set<Term> dependsOn(const Term& predicate) const;

  bool operator==(const Ontology& other) const { return modules_ == other.modules_; }

 private:
  void rebuild();

  std::vector<Schema> modules_;  // plug order
  std::map<std::string, std::set<std::string>, std::less<>> dependencies_;
  std::map<Term, std::set<std::string>> classOwners_;
  std::map<Term, std::string> propertyOwner_;
  std::map<Term, std::set<Term>> supers_;
};

// Finds a cycle in (sub, super) edges; empty if acyclic.
std::vector<Term> findCycle(const std::set<std::pair<Term, Term>>& edges);

}  // namespace socam
