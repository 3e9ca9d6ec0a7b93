#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "generators.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace socam;
using namespace socam::test;

TEST_CASE("terms validate their lexical form") {
  CHECK(Term::iri("http://socam.example/home#John").isIri());
  CHECK_THROWS_AS(Term::iri("has space"), Error);
  CHECK(Term::literal("42", xsdIri("integer")).numeric() == 42.0);
  try {
    Term::literal("4x2", xsdIri("integer"));
    FAIL("expected InvalidLiteral");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidLiteral);
  }
  CHECK(Term::boolean(true).literalType() == LiteralType::Boolean);
  CHECK(Term::string("x") != Term::literal("x", "http://example.org/dt"));
}

TEST_CASE("unify binds variables consistently") {
  Bindings b;
  CHECK(unify({v("p"), h("locatedAt"), v("p")}, {h("a"), h("locatedAt"), h("a")}, b));
  CHECK(b.at("p") == h("a"));
  Bindings c;
  CHECK_FALSE(unify({v("p"), h("locatedAt"), v("p")}, {h("a"), h("locatedAt"), h("b")}, c));
}

TEST_CASE("prefix compaction picks the longest base and valid local names") {
  auto pm = PrefixMap::wellKnown();
  CHECK(render(h("John"), &pm) == "home:John");
  CHECK(render(Term::iri("http://socam.example/home#a/b"), &pm).front() == '<');
  CHECK(render(Term::string("a\"b"), &pm) == "\"a\\\"b\"");
  CHECK(render(Term::integer(-3), &pm) == "-3");
}

TEST_CASE("assert/query basics") {
  ContextKB kb;
  auto r = kb.assertStatement(stmt({h("John"), h("locatedAt"), h("Kitchen")}, "rfid", 10));
  CHECK((r.outcome == AssertOutcome::Added));
  r = kb.assertStatement(stmt({h("John"), h("locatedAt"), h("Kitchen")}, "rfid", 20));
  CHECK((r.outcome == AssertOutcome::Updated));
  CHECK(kb.size() == 1);
  auto m = kb.query({h("John"), h("locatedAt"), v("r")});
  REQUIRE(m.size() == 1);
  CHECK(m[0].bindings.at("r") == h("Kitchen"));
  CHECK(m[0].statement.producedAt == 20);
  CHECK(kb.clock() == 20);
}

TEST_CASE("assert errors") {
  ContextKB kb({.strict = true});
  plugHome(kb);
  auto expect = [&](ContextStatement s, Errc code) {
    try {
      kb.assertStatement(std::move(s));
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.code() == code);
    }
  };
  expect(stmt({v("x"), h("locatedAt"), h("Kitchen")}, "p"), Errc::GroundednessViolation);
  expect(stmt({h("x"), h("undeclared"), h("y")}, "p"), Errc::UndeclaredPredicate);
  // Sensed property cannot be claimed as Defined
  expect(stmt({h("John"), h("locatedAt"), h("Kitchen")}, "p", 0, Classification::Defined),
         Errc::ClassificationUpgrade);
  // downward override is fine
  CHECK_NOTHROW(kb.assertStatement(
      stmt({h("John"), h("homeAddress"), str("1 Main St")}, "gps", 0, Classification::Sensed)));
  // rdf:type is always accepted
  CHECK_NOTHROW(kb.assertStatement(
      stmt({h("John"), rdfType(), sc("Person")}, "profile", 0, Classification::Defined)));
}

TEST_CASE("domain mismatch is a warning") {
  ContextKB kb;
  plugHome(kb);
  kb.assertStatement(stmt({h("Kitchen"), rdfType(), sc("IndoorSpace")}, "profile", 0,
                          Classification::Defined));
  auto r = kb.assertStatement(stmt({h("Kitchen"), h("posture"), str("LiedDown")}, "cam"));
  CHECK((r.outcome == AssertOutcome::Added));
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("freshness window") {
  ContextKB kb;
  kb.assertStatement(stmt({h("John"), h("posture"), str("LiedDown")}, "cam", 0,
                          Classification::Sensed, "lifetime=5000ms"));
  TriplePattern p{h("John"), h("posture"), v("x")};
  CHECK(kb.query(p, {.asOf = 4999}).size() == 1);
  CHECK(kb.query(p, {.asOf = 5000}).size() == 1);
  CHECK(kb.query(p, {.asOf = 5001}).empty());
  CHECK(kb.query(p, {.asOf = 5001, .freshOnly = false}).size() == 1);
  CHECK_THROWS_AS(kb.query(p, {.asOf = -1}), Error);
}

TEST_CASE("retract by pattern and provider") {
  ContextKB kb;
  kb.assertStatement(stmt({h("Tom"), h("locatedAt"), h("Bedroom")}, "rfid"));
  kb.assertStatement(stmt({h("Tom"), h("locatedAt"), h("Kitchen")}, "bt"));
  kb.assertStatement(stmt({h("Julia"), h("locatedAt"), h("Kitchen")}, "bt"));
  CHECK(kb.retract({v("s"), h("locatedAt"), h("Kitchen")}, std::string_view("rfid")) == 0);
  CHECK(kb.retract({h("Tom"), v("p"), v("o")}, std::string_view("bt")) == 1);
  CHECK(kb.size() == 2);
  CHECK(kb.retract({v("s"), v("p"), v("o")}) == 2);
  CHECK(kb.size() == 0);
  CHECK(kb.indexesConsistent());
}

TEST_CASE("property: indexed query equals linear scan") {
  gen::Rng rng(7);
  for (int round = 0; round < 100; ++round) {
    ContextKB kb;
    std::size_t n = gen::pick(rng, 30);
    for (std::size_t i = 0; i < n; ++i) {
      Triple t{gen::constant(gen::pick(rng, 4)), gen::pred(gen::pick(rng, 3)),
               gen::constant(gen::pick(rng, 4))};
      std::string lifetime = "lifetime=" + std::to_string(1 + gen::pick(rng, 50)) + "ms";
      kb.assertStatement(stmt(t, "p" + std::to_string(gen::pick(rng, 2)),
                              static_cast<Millis>(gen::pick(rng, 50)), Classification::Sensed,
                              gen::chance(rng, 0.5) ? lifetime : ""));
      if (gen::chance(rng, 0.2)) {
        kb.retract({gen::constant(gen::pick(rng, 4)), v("p"), v("o")});
      }
    }
    REQUIRE(kb.indexesConsistent());
    Millis now = static_cast<Millis>(gen::pick(rng, 100));
    for (int q = 0; q < 5; ++q) {
      TriplePattern p{gen::chance(rng, 0.5) ? v("s") : gen::constant(gen::pick(rng, 4)),
                      gen::chance(rng, 0.5) ? v("p") : gen::pred(gen::pick(rng, 3)),
                      gen::chance(rng, 0.5) ? v("o") : gen::constant(gen::pick(rng, 4))};
      std::set<StatementKey> got;
      for (const auto& m : kb.query(p, {.asOf = now})) got.insert(m.statement.key());
      CHECK(got == oracle::scanQuery(kb, p, now));
      std::set<const StoredStatement*> a, b;
      for (auto* s : kb.match(p)) a.insert(s);
      for (auto* s : kb.scan(p)) b.insert(s);
      CHECK(a == b);
    }
  }
}
