#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "generators.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace socam;
using namespace socam::test;

namespace {

const char* kPrefixes =
    "@prefix rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> .\n"
    "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .\n"
    "@prefix owl: <http://www.w3.org/2002/07/owl#> .\n"
    "@prefix socam: <http://socam.example/ns#> .\n"
    "@prefix home: <http://socam.example/home#> .\n";

Schema schemaOf(const std::string& body, std::string id = "m", SchemaOptions opts = {}) {
  return loadSchema(parseTurtle(kPrefixes + body), std::move(id), opts);
}

Errc codeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error");
  return Errc::InvalidConfig;
}

}  // namespace

TEST_CASE("minimal schema") {
  auto s = schemaOf("socam:Person rdfs:subClassOf socam:ContextEntity .\n");
  CHECK(s.subClassOf.size() == 1);
  CHECK(s.classes.count(sc("Person")));
}

TEST_CASE("fig 4 transliteration") {
  Ontology onto;
  onto.plug(loadAssetSchema("upper.ttl", &onto));
  auto s = loadAssetSchema("feasible_conflict.ttl", &onto);
  const auto& feasible = s.properties.at(h("feasible"));
  CHECK((feasible.classifiedAs == Classification::Deduced));
  CHECK(feasible.dependsOn.count(h("locatedAt")));
  CHECK(feasible.dependsOn.count(h("weatherCond")));
}

TEST_CASE("schema errors") {
  CHECK(codeOf([] {
          schemaOf("home:feasible socam:classifiedAs socam:Deduced ; socam:dependsOn home:nope .\n");
        }) == Errc::DanglingDependsOn);
  CHECK(codeOf([] {
          schemaOf("home:A rdfs:subClassOf home:B .\nhome:B rdfs:subClassOf home:C .\n"
                   "home:C rdfs:subClassOf home:A .\n");
        }) == Errc::CyclicHierarchy);
  CHECK(codeOf([] { schemaOf("home:p a owl:DatatypeProperty .\n", "m", {.strict = true}); }) ==
        Errc::MissingClassification);
  CHECK(codeOf([] {
          schemaOf("home:p socam:classifiedAs socam:Sensed , socam:Defined .\n");
        }) == Errc::DuplicateDeclaration);
  // non-strict: defaults to Sensed with a warning
  auto s = schemaOf("home:p a owl:DatatypeProperty .\n");
  CHECK((s.properties.at(h("p")).classifiedAs == Classification::Sensed));
  CHECK_FALSE(s.warnings.empty());
}

TEST_CASE("cycle message names the classes") {
  try {
    schemaOf("home:A rdfs:subClassOf home:B .\nhome:B rdfs:subClassOf home:A .\n");
    FAIL("no error");
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("home#A") != std::string::npos);
    CHECK(msg.find("home#B") != std::string::npos);
  }
}

TEST_CASE("plug and unplug") {
  Ontology onto;
  onto.plug(loadAssetSchema("upper.ttl", &onto));
  Ontology before = onto;
  onto.plug(loadAssetSchema("home.ttl", &onto));
  CHECK(onto.hasModule("home"));
  CHECK(onto.dependenciesOf("home").count("upper"));
  CHECK(codeOf([&] { onto.plug(loadAssetSchema("home.ttl")); }) == Errc::DuplicateModule);
  CHECK(codeOf([&] { onto.unplug("upper"); }) == Errc::DependencyViolation);
  CHECK(codeOf([&] { onto.unplug("office"); }) == Errc::UnknownModule);
  onto.unplug("home");
  CHECK(onto == before);
  CHECK(onto.property(h("locatedAt")) == nullptr);
}

TEST_CASE("plug rejects unresolved superclasses") {
  Ontology onto;
  CHECK(codeOf([&] { onto.plug(loadAssetSchema("home.ttl", &onto)); }) ==
        Errc::UnresolvedReference);
}

TEST_CASE("hierarchy and classification queries") {
  auto onto = homeOntology();
  CHECK(onto.isSubclassOf(h("FamilyMember"), sc("ContextEntity")));
  CHECK(onto.isSubclassOf(sc("Person"), sc("Person")));
  CHECK_FALSE(onto.isSubclassOf(sc("Person"), sc("Location")));
  CHECK(onto.isSubclassOf(h("Television"), sc("Device")));
  CHECK(codeOf([&] { onto.isSubclassOf(h("Nope"), sc("Person")); }) == Errc::UnknownClass);
  CHECK((onto.classifyStatement(h("hasChildren")) == Classification::Defined));
  CHECK((onto.classifyStatement(h("personStatus")) == Classification::Deduced));
  CHECK(codeOf([&] { onto.classifyStatement(h("nope")); }) == Errc::UnknownProperty);
  CHECK(onto.isFunctional(h("locatedAt")));
  CHECK_FALSE(onto.isFunctional(h("foodPreference")));
}

TEST_CASE("shipped properties are classified; Deduced ones declare dependencies") {
  auto onto = homeOntology();
  const Schema* home = onto.module("home");
  REQUIRE(home);
  CHECK(home->warnings.empty());
  for (const auto& [iri, decl] : home->properties) {
    if (decl.classifiedAs == Classification::Deduced) {
      CHECK_MESSAGE(!decl.dependsOn.empty(), iri.value());
    }
  }
  auto strict = loadSchema(parseTurtle(readAsset("home.ttl")), "home", {true, &onto});
  CHECK(strict.properties.size() == home->properties.size());
}

TEST_CASE("property: isSubclassOf equals DFS closure on random DAGs") {
  gen::Rng rng(3);
  for (int round = 0; round < 100; ++round) {
    std::size_t n = 2 + gen::pick(rng, 10);
    auto edges = gen::randomDag(rng, n);
    Schema s;
    s.moduleId = "dag";
    for (std::size_t i = 0; i < n; ++i) s.classes.insert(gen::ex("C" + std::to_string(i)));
    s.subClassOf = edges;
    Ontology onto;
    onto.plug(s);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        Term ca = gen::ex("C" + std::to_string(a)), cb = gen::ex("C" + std::to_string(b));
        CHECK(onto.isSubclassOf(ca, cb) == oracle::subclassDfs(edges, ca, cb));
      }
    }
  }
}

TEST_CASE("findCycle agrees with DFS reachability") {
  gen::Rng rng(5);
  for (int round = 0; round < 50; ++round) {
    auto edges = gen::randomDag(rng, 6);
    CHECK(findCycle(edges).empty());
    if (edges.empty()) continue;
    auto [a, b] = *edges.begin();
    edges.insert({b, a});
    CHECK_FALSE(findCycle(edges).empty());
  }
}
