#pragma once

// Indexed in-memory context knowledge base.
//
// Concurrency: single writer, many readers. All mutations must be serialized
// by the owner (the interpreter); const member functions may run
// concurrently with each other between mutations.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "socam/ontology.hpp"
#include "socam/statement.hpp"

namespace socam {

enum class AssertOutcome { Added, Updated, ConflictDeferred };

std::string_view toString(AssertOutcome outcome);

struct AssertResult {
  AssertOutcome outcome = AssertOutcome::Added;
  std::vector<std::string> warnings;  // domain/range mismatches
};

// Why a Deduced statement holds: the rule and the statements it matched.
struct Derivation {
  std::string rule;
  std::vector<StatementKey> support;

  bool operator==(const Derivation&) const = default;
};

struct StoredStatement {
  ContextStatement statement;
  std::optional<Derivation> derivation;
  bool loser = false;  // hidden by the conflict resolver
};

struct QueryOptions {
  std::optional<Millis> asOf;  // defaults to the KB clock
  bool freshOnly = true;
  bool includeLosers = false;  // raw mode
};

struct QueryMatch {
  Bindings bindings;
  ContextStatement statement;
};

struct KbOptions {
  bool strict = false;  // reject predicates no loaded schema declares
};

class ContextKB {
 public:
  explicit ContextKB(KbOptions options = {}) : options_(options) {}

  // Errors: GroundednessViolation, InvalidTerm, UndeclaredPredicate (strict),
  // ClassificationUpgrade.
  AssertResult assertStatement(ContextStatement stmt);
  AssertResult assertDerived(ContextStatement stmt, Derivation derivation);

  // Wildcards are variables; returns the number of removed statements.
  std::size_t retract(const TriplePattern& pattern,
                      std::optional<std::string_view> provider = std::nullopt);
  std::vector<ContextStatement> removeMatching(const TriplePattern& pattern,
                                               std::optional<std::string_view> provider,
                                               bool includeDeduced = true);
  bool remove(const StatementKey& key);

  std::vector<QueryMatch> query(const TriplePattern& pattern, const QueryOptions& options = {}) const;

  // Index-backed raw match (no freshness or loser filtering), in insertion order.
  std::vector<const StoredStatement*> match(const TriplePattern& pattern) const;
  // Linear-scan equivalent of match(); used to audit the indexes.
  std::vector<const StoredStatement*> scan(const TriplePattern& pattern) const;
  std::vector<const StoredStatement*> all() const;
  const StoredStatement* find(const StatementKey& key) const;
  bool isVisible(const StoredStatement& stored, Millis now) const {
    return !stored.loser && stored.statement.isFreshAt(now);
  }
  std::size_t size() const noexcept { return byId_.size(); }

  Millis clock() const noexcept { return clock_; }
  void advanceClock(Millis t) { clock_ = std::max(clock_, t); }

  // Replaces every loser mark.
  void setLosers(const std::set<StatementKey>& losers);
  std::set<StatementKey> losers() const;
  // (subject, predicate) pairs flagged by ConflictDeferred asserts.
  const std::set<std::pair<Term, Term>>& pendingConflicts() const noexcept { return pending_; }
  void clearPendingConflicts() { pending_.clear(); }

  const Ontology& ontology() const noexcept { return ontology_; }
  void plug(Schema schema) { ontology_.plug(std::move(schema)); }
  // Removes the module and every statement whose predicate (or rdf:type
  // class) it declared. Returns the removed statements.
  std::vector<ContextStatement> unplug(std::string_view moduleId);

  bool strict() const noexcept { return options_.strict; }
  void setStrict(bool strict) { options_.strict = strict; }

  // True iff every index agrees with the flat statement set.
  bool indexesConsistent() const;

 private:
  using Id = std::uint64_t;

  AssertResult insert(ContextStatement stmt, std::optional<Derivation> derivation);
  void validate(const ContextStatement& stmt) const;
  std::vector<std::string> schemaWarnings(const Triple& triple) const;
  void erase(Id id);

  KbOptions options_;
  Ontology ontology_;
  Millis clock_ = 0;
  Id nextId_ = 1;
  std::map<Id, StoredStatement> byId_;
  std::map<StatementKey, Id> byKey_;
  std::map<Term, std::set<Id>> bySubject_;
  std::map<Term, std::set<Id>> byPredicate_;
  std::map<std::pair<Term, Term>, std::set<Id>> bySubjectPredicate_;
  std::set<std::pair<Term, Term>> pending_;
};

}  // namespace socam
