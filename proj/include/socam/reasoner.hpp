#pragma once

// Forward-chaining interpreter over the context KB: stratified
// semi-naive evaluation with negation as failure, aggregation of direct
// context, and dependency-driven truth maintenance.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "socam/kb.hpp"
#include "socam/rules.hpp"

namespace socam {

struct InferOptions {
  std::size_t iterationBudget = 10'000;
  std::string interpreterId = std::string(kInterpreterId);
};

struct DerivationResult {
  std::vector<ContextStatement> added;    // net new Deduced statements
  std::vector<ContextStatement> removed;  // net retracted Deduced statements
  std::map<StatementKey, Derivation> supports;  // for `added`
  std::size_t iterations = 0;
  std::size_t retractionCandidates = 0;  // maintain() only
};

// Runs every stratum to fixpoint at time `now`. Positive patterns match only
// statements that are fresh at `now` and not conflict losers. Rules whose
// head predicate is undeclared are skipped when the KB is strict.
// Errors: FixpointBudgetExceeded.
DerivationResult infer(ContextKB& kb, const RuleSet& rules, Millis now,
                       const InferOptions& options = {});

struct AggregationResult {
  std::vector<ContextStatement> added;
  std::vector<ContextStatement> removed;
};

// Recomputes the Aggregated statements of one spec; stale values are
// retracted, unchanged ones kept. Errors: UnknownPredicate (strict KB).
AggregationResult aggregate(ContextKB& kb, const AggregationSpec& spec, Millis now,
                            const InferOptions& options = {});

// Predicates whose Deduced values may change when `changed` change:
// transitive over declared dependsOn and rule bodies.
std::set<Term> affectedPredicates(const ContextKB& kb, const RuleSet& rules,
                                  const std::set<Term>& changed);

// Retracts Deduced statements that depend on `changed` or whose support is
// gone/hidden/stale, then re-runs infer(). Reports only net changes.
DerivationResult maintain(ContextKB& kb, const RuleSet& rules, const std::set<Term>& changed,
                          Millis now, const InferOptions& options = {});

}  // namespace socam
