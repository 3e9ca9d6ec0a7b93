#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>

#include "generators.hpp"
#include "socam/conflict.hpp"
#include "support.hpp"

using namespace socam;
using namespace socam::test;

namespace {

ContextKB homeKb() {
  ContextKB kb;
  plugHome(kb);
  return kb;
}

std::vector<Term> visibleObjects(const ContextKB& kb, const Term& s, const Term& p) {
  std::vector<Term> out;
  for (const auto& m : kb.query({s, p, v("o")})) out.push_back(m.statement.triple.object);
  return out;
}

}  // namespace

TEST_CASE("accuracy decides between two location sensors") {
  auto kb = homeKb();
  kb.assertStatement(stmt({h("Tom"), h("locatedAt"), h("Bedroom-Tom")}, "rfid", 10,
                          Classification::Sensed, "accuracy=80"));
  auto r = kb.assertStatement(stmt({h("Tom"), h("locatedAt"), h("Kitchen-Smith")}, "bluetooth", 10,
                                   Classification::Sensed, "accuracy=60"));
  CHECK((r.outcome == AssertOutcome::ConflictDeferred));
  auto conflicts = detect(kb, 10);
  REQUIRE(conflicts.size() == 1);
  resolve(conflicts, 10);
  CHECK(conflicts[0].winner->provider == "rfid");
  REQUIRE(conflicts[0].losers.size() == 1);
  CHECK(conflicts[0].losers[0].provider == "bluetooth");
  applyResolutions(kb, conflicts);
  CHECK(visibleObjects(kb, h("Tom"), h("locatedAt")) == std::vector<Term>{h("Bedroom-Tom")});
  // losers stay stored
  CHECK(kb.size() == 2);
}

TEST_CASE("defined beats sensed") {
  auto kb = homeKb();
  kb.assertStatement(stmt({h("John"), h("homeAddress"), str("1 Main St")}, "profile", 0,
                          Classification::Defined));
  kb.assertStatement(stmt({h("John"), h("homeAddress"), str("9 Elm Rd")}, "gps", 5,
                          Classification::Sensed, "certainty=99"));
  ConflictResolver resolver;
  auto report = resolver.run(kb, 5);
  REQUIRE(report.resolved.size() == 1);
  CHECK(report.resolved[0].winner->provider == "profile");
  CHECK(visibleObjects(kb, h("John"), h("homeAddress")) == std::vector<Term>{str("1 Main St")});
}

TEST_CASE("identical keys fall back to provider id") {
  auto kb = homeKb();
  kb.assertStatement(stmt({h("Tom"), h("locatedAt"), h("X")}, "b", 0));
  kb.assertStatement(stmt({h("Tom"), h("locatedAt"), h("Y")}, "a", 0));
  auto c = detect(kb, 0);
  resolve(c, 0);
  CHECK(c[0].winner->provider == "a");
}

TEST_CASE("non-functional predicates never conflict") {
  auto kb = homeKb();
  kb.assertStatement(stmt({h("John"), h("foodPreference"), str("Steak")}, "profile", 0,
                          Classification::Defined));
  kb.assertStatement(stmt({h("John"), h("foodPreference"), str("Fish")}, "profile", 0,
                          Classification::Defined));
  CHECK(detect(kb, 0).empty());
}

TEST_CASE("retracting the winner promotes the loser") {
  auto kb = homeKb();
  ConflictResolver resolver;
  kb.assertStatement(stmt({h("Tom"), h("locatedAt"), h("Bedroom-Tom")}, "rfid", 0,
                          Classification::Sensed, "accuracy=80"));
  kb.assertStatement(stmt({h("Tom"), h("locatedAt"), h("Kitchen-Smith")}, "bluetooth", 0,
                          Classification::Sensed, "accuracy=60"));
  resolver.run(kb, 0);
  kb.retract({h("Tom"), h("locatedAt"), v("o")}, std::string_view("rfid"));
  auto report = resolver.run(kb, 1);
  CHECK(report.changedPredicates.count(h("locatedAt")));
  CHECK(visibleObjects(kb, h("Tom"), h("locatedAt")) == std::vector<Term>{h("Kitchen-Smith")});
}

TEST_CASE("a stale winner yields to a fresh rival") {
  auto kb = homeKb();
  ConflictResolver resolver;
  kb.assertStatement(stmt({h("Tom"), h("locatedAt"), h("A")}, "cam", 0, Classification::Sensed,
                          "lifetime=10ms"));
  kb.assertStatement(stmt({h("Tom"), h("locatedAt"), h("B")}, "rfid", 5, Classification::Sensed,
                          "accuracy=10"));
  resolver.run(kb, 5);
  CHECK(visibleObjects(kb, h("Tom"), h("locatedAt")) == std::vector<Term>{h("A")});
  kb.advanceClock(11);
  resolver.run(kb, 11);
  CHECK(visibleObjects(kb, h("Tom"), h("locatedAt")) == std::vector<Term>{h("B")});
}

TEST_CASE("property: resolve is permutation invariant and leaves one visible object") {
  gen::Rng rng(41);
  const Classification classes[] = {Classification::Aggregated, Classification::Sensed,
                                    Classification::Defined};
  for (int round = 0; round < 100; ++round) {
    auto kb = homeKb();
    std::size_t n = 2 + gen::pick(rng, 6);
    for (std::size_t i = 0; i < n; ++i) {
      std::string q;
      if (gen::chance(rng, 0.5)) q += "certainty=" + std::to_string(gen::pick(rng, 3) * 40) + " ";
      if (gen::chance(rng, 0.5)) q += "accuracy=" + std::to_string(gen::pick(rng, 3) * 40);
      Classification c = classes[gen::pick(rng, 3)];
      // homeAddress is Defined, so every class here is a legal override
      kb.assertStatement(stmt({h("John"), h("homeAddress"), str("addr" + std::to_string(gen::pick(rng, 3)))},
                              "p" + std::to_string(gen::pick(rng, 4)),
                              static_cast<Millis>(gen::pick(rng, 3)), c, q));
    }
    auto conflicts = detect(kb, 3);
    if (conflicts.empty()) continue;
    REQUIRE(conflicts.size() == 1);
    auto base = conflicts;
    resolve(base, 3);
    for (int perm = 0; perm < 5; ++perm) {
      auto shuffled = conflicts;
      std::shuffle(shuffled[0].competing.begin(), shuffled[0].competing.end(), rng);
      resolve(shuffled, 3);
      CHECK(shuffled[0].winner->key() == base[0].winner->key());
    }
    ConflictResolver resolver;
    resolver.run(kb, 3);
    std::set<Term> objects;
    for (const auto& m : kb.query({h("John"), h("homeAddress"), v("o")}, {.asOf = 3})) {
      objects.insert(m.statement.triple.object);
    }
    CHECK(objects.size() == 1);
    CHECK(objects.count(base[0].winner->triple.object));
  }
}
