#include "socam/conflict.hpp"

#include <algorithm>

namespace socam {

bool outranks(const ContextStatement& a, const ContextStatement& b, Millis now) {
  auto ka = confidenceKey(a, now);
  auto kb = confidenceKey(b, now);
  if (ka != kb) return ka > kb;
  if (a.producedAt != b.producedAt) return a.producedAt > b.producedAt;
  if (a.provider != b.provider) return a.provider < b.provider;
  return a.triple.object < b.triple.object;
}

std::vector<ConflictSet> detect(const ContextKB& kb, Millis now) {
  std::map<std::pair<Term, Term>, std::vector<ContextStatement>> groups;
  for (const auto* s : kb.all()) {
    const auto& st = s->statement;
    if (!kb.ontology().isFunctional(st.triple.predicate) || !st.isFreshAt(now)) continue;
    groups[{st.triple.subject, st.triple.predicate}].push_back(st);
  }
  std::vector<ConflictSet> out;
  for (auto& [sp, statements] : groups) {
    std::set<Term> objects;
    for (const auto& st : statements) objects.insert(st.triple.object);
    if (objects.size() < 2) continue;
    std::sort(statements.begin(), statements.end(),
              [](const ContextStatement& a, const ContextStatement& b) { return a.key() < b.key(); });
    out.push_back({sp.first, sp.second, std::move(statements), std::nullopt, {}});
  }
  return out;
}

void resolve(std::vector<ConflictSet>& conflicts, Millis now) {
  for (auto& set : conflicts) {
    const ContextStatement* best = nullptr;
    for (const auto& st : set.competing) {
      if (!best || outranks(st, *best, now)) best = &st;
    }
    set.winner = *best;
    set.losers.clear();
    for (const auto& st : set.competing) {
      if (st.triple.object != best->triple.object) set.losers.push_back(st);
    }
  }
}

void applyResolutions(ContextKB& kb, const std::vector<ConflictSet>& conflicts) {
  std::set<StatementKey> losers;
  for (const auto& set : conflicts) {
    for (const auto& st : set.losers) losers.insert(st.key());
  }
  kb.setLosers(losers);
}

ConflictResolver::Report ConflictResolver::run(ContextKB& kb, Millis now) {
  Report report;
  auto before = kb.losers();
  auto conflicts = detect(kb, now);
  resolve(conflicts, now);
  applyResolutions(kb, conflicts);
  auto after = kb.losers();

  std::vector<StatementKey> moved;
  std::set_symmetric_difference(before.begin(), before.end(), after.begin(), after.end(),
                                std::back_inserter(moved));
  for (const auto& key : moved) report.changedPredicates.insert(key.triple.predicate);

  std::map<std::pair<Term, Term>, StatementKey> winners;
  for (auto& set : conflicts) {
    std::pair<Term, Term> sp{set.subject, set.predicate};
    StatementKey key = set.winner->key();
    auto last = lastWinner_.find(sp);
    bool isNew = last == lastWinner_.end() || last->second != key;
    winners.emplace(sp, key);
    if (isNew) report.resolved.push_back(std::move(set));
  }
  lastWinner_ = std::move(winners);
  kb.clearPendingConflicts();
  return report;
}

}  // namespace socam
