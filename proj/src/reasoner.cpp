#include "socam/reasoner.hpp"

#include <algorithm>
#include <functional>

#include "socam/error.hpp"

namespace socam {

namespace {

bool isDerived(const StoredStatement& s) { return s.derivation.has_value(); }

// Visible statements matching `pattern`; rdf:type patterns with a known class
// also match instances of its subclasses.
std::vector<const StoredStatement*> candidates(const ContextKB& kb, const TriplePattern& pattern,
                                               Millis now) {
  std::vector<const StoredStatement*> out;
  const Ontology& onto = kb.ontology();
  bool typeClosure = pattern.predicate == rdfType() && !pattern.object.isVariable() &&
                     onto.hasClass(pattern.object);
  if (typeClosure) {
    TriplePattern widened = pattern;
    widened.object = Term::variable("__class");
    for (const auto* s : kb.match(widened)) {
      const Term& cls = s->statement.triple.object;
      if (!kb.isVisible(*s, now)) continue;
      if (cls == pattern.object || (onto.hasClass(cls) && onto.isSubclassOf(cls, pattern.object))) {
        out.push_back(s);
      }
    }
    return out;
  }
  for (const auto* s : kb.match(pattern)) {
    if (kb.isVisible(*s, now)) out.push_back(s);
  }
  return out;
}

class Evaluator {
 public:
  Evaluator(ContextKB& kb, Millis now, const InferOptions& options, DerivationResult& result)
      : kb_(kb), now_(now), options_(options), result_(result) {}

  // Evaluates `rule`; when `deltaClause` is set, that positive clause only
  // matches statements in `delta`.
  void evaluate(const Rule& rule, std::optional<std::size_t> deltaClause,
                const std::set<StatementKey>& delta, std::set<StatementKey>& fresh) {
    positives_.clear();
    checks_.clear();
    for (std::size_t i = 0; i < rule.body.size(); ++i) {
      if (rule.body[i].kind == BodyClause::Kind::Positive) {
        positives_.push_back(i);
      } else {
        checks_.push_back(i);
      }
    }
    Bindings bindings;
    std::vector<StatementKey> support;
    join(rule, 0, deltaClause, delta, bindings, support, fresh);
  }

 private:
  void join(const Rule& rule, std::size_t depth, std::optional<std::size_t> deltaClause,
            const std::set<StatementKey>& delta, Bindings& bindings,
            std::vector<StatementKey>& support, std::set<StatementKey>& fresh) {
    if (depth == positives_.size()) {
      fire(rule, bindings, support, fresh);
      return;
    }
    std::size_t clauseIndex = positives_[depth];
    TriplePattern pattern = substitute(rule.body[clauseIndex].pattern, bindings);
    for (const auto* s : candidates(kb_, pattern, now_)) {
      StatementKey key = s->statement.key();
      if (deltaClause == clauseIndex && !delta.count(key)) continue;
      Bindings extended = bindings;
      TriplePattern typed = pattern;
      if (typed.predicate == rdfType() && !typed.object.isVariable()) {
        typed.object = s->statement.triple.object;  // subclass match
      }
      if (!unify(typed, s->statement.triple, extended)) continue;
      support.push_back(std::move(key));
      join(rule, depth + 1, deltaClause, delta, extended, support, fresh);
      support.pop_back();
    }
  }

  void fire(const Rule& rule, const Bindings& bindings, const std::vector<StatementKey>& support,
            std::set<StatementKey>& fresh) {
    for (std::size_t i : checks_) {
      const BodyClause& c = rule.body[i];
      if (c.kind == BodyClause::Kind::Builtin) {
        if (!evalBuiltin(c.op, substitute(c.lhs, bindings), substitute(c.rhs, bindings))) return;
      } else if (!candidates(kb_, substitute(c.pattern, bindings), now_).empty()) {
        return;
      }
    }
    double certainty = 100;
    for (const auto& key : support) {
      if (const auto* s = kb_.find(key)) {
        certainty = std::min(certainty, s->statement.effectiveCertainty());
      }
    }
    for (const auto& head : rule.head) {
      Triple triple = substitute(head, bindings);
      if (!triple.subject.isResource()) continue;  // cannot be stored
      StatementKey key{triple, options_.interpreterId};
      if (kb_.find(key)) continue;
      ContextStatement stmt;
      stmt.triple = std::move(triple);
      stmt.classification = Classification::Deduced;
      stmt.producedAt = now_;
      stmt.provider = options_.interpreterId;
      QualityConstraint qoc;
      qoc.set(ParameterKind::Certainty, {certainty, "percentage", "percent"});
      stmt.qoc = std::move(qoc);
      Derivation derivation{rule.name, support};
      kb_.assertDerived(stmt, derivation);
      result_.added.push_back(stmt);
      result_.supports.emplace(key, std::move(derivation));
      fresh.insert(std::move(key));
    }
  }

  ContextKB& kb_;
  Millis now_;
  const InferOptions& options_;
  DerivationResult& result_;
  std::vector<std::size_t> positives_;
  std::vector<std::size_t> checks_;
};

bool ruleActive(const ContextKB& kb, const Rule& rule) {
  if (!kb.strict()) return true;
  return std::all_of(rule.head.begin(), rule.head.end(), [&](const TriplePattern& h) {
    return kb.ontology().property(h.predicate) != nullptr;
  });
}

}  // namespace

DerivationResult infer(ContextKB& kb, const RuleSet& rules, Millis now,
                       const InferOptions& options) {
  DerivationResult result;
  Evaluator evaluator(kb, now, options, result);
  const auto& all = rules.rules();
  for (std::size_t stratum = 0; stratum < rules.strataCount(); ++stratum) {
    std::vector<const Rule*> layer;
    for (std::size_t i = 0; i < all.size(); ++i) {
      if (rules.stratumOf(i) == stratum && ruleActive(kb, all[i])) layer.push_back(&all[i]);
    }
    if (layer.empty()) continue;
    std::set<StatementKey> delta;
    bool first = true;
    while (true) {
      if (++result.iterations > options.iterationBudget) {
        throw Error(Errc::FixpointBudgetExceeded,
                    "no fixpoint after " + std::to_string(options.iterationBudget) + " iterations");
      }
      std::set<StatementKey> fresh;
      for (const Rule* rule : layer) {
        if (first) {
          evaluator.evaluate(*rule, std::nullopt, delta, fresh);
          continue;
        }
        for (std::size_t i = 0; i < rule->body.size(); ++i) {
          const BodyClause& c = rule->body[i];
          if (c.kind != BodyClause::Kind::Positive) continue;
          bool couldMatch = std::any_of(delta.begin(), delta.end(), [&](const StatementKey& k) {
            return c.pattern.predicate.isVariable() || c.pattern.predicate == k.triple.predicate;
          });
          if (couldMatch) evaluator.evaluate(*rule, i, delta, fresh);
        }
      }
      first = false;
      if (fresh.empty()) break;
      delta = std::move(fresh);
    }
  }
  return result;
}

AggregationResult aggregate(ContextKB& kb, const AggregationSpec& spec, Millis now,
                            const InferOptions& options) {
  if (kb.strict()) {
    for (const Term* p : {&spec.memberPredicate, &spec.sourcePredicate, &spec.targetPredicate}) {
      if (!kb.ontology().property(*p)) {
        throw Error(Errc::UnknownPredicate, "aggregation uses undeclared predicate " + render(*p));
      }
    }
  }
  const Term v = Term::variable("v");
  std::vector<Term> members;
  for (const auto* s : candidates(kb, {spec.groupSubject, spec.memberPredicate, v}, now)) {
    members.push_back(s->statement.triple.object);
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());

  // value -> certainty over contributing statements, and contributor count
  std::map<Term, std::pair<double, std::size_t>> values;
  for (const auto& member : members) {
    std::map<Term, double> own;
    for (const auto* s : candidates(kb, {member, spec.sourcePredicate, v}, now)) {
      auto [it, inserted] = own.try_emplace(s->statement.triple.object, 100.0);
      it->second = std::min(it->second, s->statement.effectiveCertainty());
    }
    for (const auto& [value, certainty] : own) {
      auto [it, inserted] = values.try_emplace(value, certainty, 0);
      it->second.first = std::min(it->second.first, certainty);
      ++it->second.second;
    }
  }

  std::map<Term, double> target;
  for (const auto& [value, info] : values) {
    if (spec.combiner == Combiner::Union || info.second == members.size()) {
      target.emplace(value, info.first);
    }
  }

  AggregationResult result;
  for (const auto* s : kb.match({spec.groupSubject, spec.targetPredicate, v})) {
    const auto& st = s->statement;
    if (st.provider != options.interpreterId || st.classification != Classification::Aggregated) {
      continue;
    }
    if (!target.count(st.triple.object)) result.removed.push_back(st);
  }
  for (const auto& st : result.removed) kb.remove(st.key());

  for (const auto& [value, certainty] : target) {
    ContextStatement stmt;
    stmt.triple = {spec.groupSubject, spec.targetPredicate, value};
    stmt.classification = Classification::Aggregated;
    stmt.producedAt = now;
    stmt.provider = options.interpreterId;
    QualityConstraint qoc;
    qoc.set(ParameterKind::Certainty, {certainty, "percentage", "percent"});
    stmt.qoc = qoc;
    if (const auto* existing = kb.find(stmt.key())) {
      if (existing->statement.effectiveCertainty() != certainty) {
        ContextStatement updated = existing->statement;
        updated.qoc = qoc;
        kb.assertStatement(std::move(updated));
      }
      continue;
    }
    kb.assertStatement(stmt);
    result.added.push_back(std::move(stmt));
  }
  return result;
}

std::set<Term> affectedPredicates(const ContextKB& kb, const RuleSet& rules,
                                  const std::set<Term>& changed) {
  std::set<Term> derivedPredicates = rules.headPredicates();
  for (const auto* s : kb.all()) {
    if (isDerived(*s)) derivedPredicates.insert(s->statement.triple.predicate);
  }
  std::set<Term> affected = changed;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& p : derivedPredicates) {
      if (affected.count(p)) continue;
      auto deps = rules.bodyDependencies(p);
      auto declared = kb.ontology().dependsOn(p);
      deps.predicates.insert(declared.begin(), declared.end());
      bool hit = (deps.anyPredicate && !affected.empty()) ||
                 std::any_of(deps.predicates.begin(), deps.predicates.end(),
                             [&](const Term& d) { return affected.count(d) > 0; });
      if (hit) {
        affected.insert(p);
        grew = true;
      }
    }
  }
  return affected;
}

DerivationResult maintain(ContextKB& kb, const RuleSet& rules, const std::set<Term>& changed,
                          Millis now, const InferOptions& options) {
  std::set<Term> affected = affectedPredicates(kb, rules, changed);

  std::set<StatementKey> doomed;
  for (const auto* s : kb.all()) {
    if (!isDerived(*s)) continue;
    if (affected.count(s->statement.triple.predicate)) {
      doomed.insert(s->statement.key());
      continue;
    }
    for (const auto& key : s->derivation->support) {
      const auto* support = kb.find(key);
      if (!support || !kb.isVisible(*support, now)) {
        doomed.insert(s->statement.key());
        break;
      }
    }
  }
  // Cascade through support sets.
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto* s : kb.all()) {
      if (!isDerived(*s) || doomed.count(s->statement.key())) continue;
      for (const auto& key : s->derivation->support) {
        if (doomed.count(key)) {
          doomed.insert(s->statement.key());
          grew = true;
          break;
        }
      }
    }
  }

  std::map<StatementKey, ContextStatement> saved;
  for (const auto& key : doomed) {
    saved.emplace(key, kb.find(key)->statement);
    kb.remove(key);
  }

  DerivationResult derived = infer(kb, rules, now, options);

  DerivationResult result;
  result.iterations = derived.iterations;
  result.retractionCandidates = doomed.size();
  for (auto& stmt : derived.added) {
    auto key = stmt.key();
    auto old = saved.find(key);
    if (old == saved.end()) {
      result.supports.emplace(key, derived.supports.at(key));
      result.added.push_back(std::move(stmt));
      continue;
    }
    // Re-derived: keep the original production time.
    ContextStatement restored = kb.find(key)->statement;
    restored.producedAt = old->second.producedAt;
    kb.assertDerived(std::move(restored), derived.supports.at(key));
    saved.erase(old);
  }
  for (auto& [key, stmt] : saved) result.removed.push_back(std::move(stmt));
  return result;
}

}  // namespace socam
