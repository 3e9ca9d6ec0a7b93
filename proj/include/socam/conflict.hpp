#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "socam/kb.hpp"

namespace socam {

// Competing fresh values of one functional predicate for one subject.
struct ConflictSet {
  Term subject;
  Term predicate;
  std::vector<ContextStatement> competing;  // sorted by statement key
  std::optional<ContextStatement> winner;   // set by resolve()
  std::vector<ContextStatement> losers;     // values other than the winner's
};

// True if `a` beats `b`: higher confidence key, then later producedAt, then
// smaller provider id, then smaller object.
bool outranks(const ContextStatement& a, const ContextStatement& b, Millis now);

// One set per (subject, functional predicate) with >= 2 distinct fresh
// objects, ordered by subject then predicate.
std::vector<ConflictSet> detect(const ContextKB& kb, Millis now);

// Picks winners in place; never touches the KB.
void resolve(std::vector<ConflictSet>& conflicts, Millis now);

// Replaces the KB's loser marks with those implied by `conflicts`.
void applyResolutions(ContextKB& kb, const std::vector<ConflictSet>& conflicts);

// Stateful detect/resolve/apply cycle that reports only new outcomes.
class ConflictResolver {
 public:
  struct Report {
    std::vector<ConflictSet> resolved;  // new conflicts or changed winners
    std::set<Term> changedPredicates;   // predicates whose visible set moved
  };

  Report run(ContextKB& kb, Millis now);
  void reset() { lastWinner_.clear(); }

 private:
  std::map<std::pair<Term, Term>, StatementKey> lastWinner_;
};

}  // namespace socam
