#include "socam/kb.hpp"

#include <algorithm>

#include "socam/error.hpp"

namespace socam {

std::string_view toString(AssertOutcome outcome) {
  switch (outcome) {
    case AssertOutcome::Added: return "Added";
    case AssertOutcome::Updated: return "Updated";
    case AssertOutcome::ConflictDeferred: return "ConflictDeferred";
  }
  return "?";
}

void ContextKB::validate(const ContextStatement& stmt) const {
  const Triple& t = stmt.triple;
  if (!t.isGround()) {
    throw Error(Errc::GroundednessViolation, "statement contains a variable: " + render(t));
  }
  if (!t.subject.isResource()) {
    throw Error(Errc::InvalidTerm, "subject must be an IRI or blank node: " + render(t));
  }
  if (!t.predicate.isIri()) {
    throw Error(Errc::InvalidTerm, "predicate must be an IRI: " + render(t));
  }
  if (stmt.producedAt < 0) {
    throw Error(Errc::InvalidTerm, "producedAt must be >= 0");
  }
  if (t.predicate == rdfType()) return;
  const PropertyDecl* decl = ontology_.property(t.predicate);
  if (!decl) {
    if (options_.strict) {
      throw Error(Errc::UndeclaredPredicate,
                  "predicate " + render(t.predicate) + " is not declared by any loaded schema");
    }
    return;
  }
  if (confidenceRank(stmt.classification) > confidenceRank(decl->classifiedAs)) {
    throw Error(Errc::ClassificationUpgrade,
                std::string("cannot assert ") + std::string(toString(stmt.classification)) +
                    " context for " + render(t.predicate) + ", declared " +
                    std::string(toString(decl->classifiedAs)));
  }
}

std::vector<std::string> ContextKB::schemaWarnings(const Triple& t) const {
  std::vector<std::string> warnings;
  const PropertyDecl* decl = ontology_.property(t.predicate);
  if (!decl) return warnings;
  if (decl->kind == PropertyKind::Datatype && !t.object.isLiteral()) {
    warnings.push_back("datatype property " + render(t.predicate) + " used with a resource object");
  } else if (decl->kind == PropertyKind::Object && t.object.isLiteral()) {
    warnings.push_back("object property " + render(t.predicate) + " used with a literal object");
  }
  if (decl->domain.empty()) return warnings;
  std::vector<Term> types;
  for (const auto* s : match({t.subject, rdfType(), Term::variable("t")})) {
    types.push_back(s->statement.triple.object);
  }
  if (types.empty()) return warnings;
  bool inDomain = std::any_of(types.begin(), types.end(), [&](const Term& type) {
    return std::any_of(decl->domain.begin(), decl->domain.end(), [&](const Term& d) {
      return ontology_.hasClass(type) && ontology_.hasClass(d) && ontology_.isSubclassOf(type, d);
    });
  });
  if (!inDomain) {
    warnings.push_back(render(t.subject) + " is outside the domain of " + render(t.predicate));
  }
  return warnings;
}

AssertResult ContextKB::assertStatement(ContextStatement stmt) {
  return insert(std::move(stmt), std::nullopt);
}

AssertResult ContextKB::assertDerived(ContextStatement stmt, Derivation derivation) {
  return insert(std::move(stmt), std::move(derivation));
}

AssertResult ContextKB::insert(ContextStatement stmt, std::optional<Derivation> derivation) {
  validate(stmt);
  AssertResult result;
  result.warnings = schemaWarnings(stmt.triple);
  advanceClock(stmt.producedAt);

  StatementKey key = stmt.key();
  if (auto it = byKey_.find(key); it != byKey_.end()) {
    StoredStatement& stored = byId_.at(it->second);
    stored.statement = std::move(stmt);
    if (derivation) stored.derivation = std::move(derivation);
    result.outcome = AssertOutcome::Updated;
    return result;
  }

  const Triple& t = stmt.triple;
  result.outcome = AssertOutcome::Added;
  if (ontology_.isFunctional(t.predicate)) {
    auto sp = bySubjectPredicate_.find({t.subject, t.predicate});
    if (sp != bySubjectPredicate_.end()) {
      for (Id other : sp->second) {
        if (byId_.at(other).statement.triple.object != t.object) {
          result.outcome = AssertOutcome::ConflictDeferred;
          pending_.insert({t.subject, t.predicate});
          break;
        }
      }
    }
  }

  Id id = nextId_++;
  bySubject_[t.subject].insert(id);
  byPredicate_[t.predicate].insert(id);
  bySubjectPredicate_[{t.subject, t.predicate}].insert(id);
  byKey_.emplace(std::move(key), id);
  byId_.emplace(id, StoredStatement{std::move(stmt), std::move(derivation), false});
  return result;
}

void ContextKB::erase(Id id) {
  auto it = byId_.find(id);
  const Triple& t = it->second.statement.triple;
  auto drop = [id](auto& index, const auto& k) {
    auto pos = index.find(k);
    pos->second.erase(id);
    if (pos->second.empty()) index.erase(pos);
  };
  drop(bySubject_, t.subject);
  drop(byPredicate_, t.predicate);
  drop(bySubjectPredicate_, std::pair{t.subject, t.predicate});
  byKey_.erase(it->second.statement.key());
  byId_.erase(it);
}

std::vector<ContextStatement> ContextKB::removeMatching(const TriplePattern& pattern,
                                                        std::optional<std::string_view> provider,
                                                        bool includeDeduced) {
  std::vector<Id> ids;
  for (const auto* s : match(pattern)) {
    if (provider && s->statement.provider != *provider) continue;
    if (!includeDeduced && s->statement.classification == Classification::Deduced) continue;
    ids.push_back(byKey_.at(s->statement.key()));
  }
  std::vector<ContextStatement> removed;
  removed.reserve(ids.size());
  for (Id id : ids) {
    removed.push_back(byId_.at(id).statement);
    erase(id);
  }
  return removed;
}

std::size_t ContextKB::retract(const TriplePattern& pattern,
                               std::optional<std::string_view> provider) {
  return removeMatching(pattern, provider).size();
}

bool ContextKB::remove(const StatementKey& key) {
  auto it = byKey_.find(key);
  if (it == byKey_.end()) return false;
  erase(it->second);
  return true;
}

std::vector<const StoredStatement*> ContextKB::match(const TriplePattern& pattern) const {
  const std::set<Id>* candidates = nullptr;
  static const std::set<Id> empty;
  bool indexed = true;
  if (!pattern.subject.isVariable() && !pattern.predicate.isVariable()) {
    auto it = bySubjectPredicate_.find({pattern.subject, pattern.predicate});
    candidates = it == bySubjectPredicate_.end() ? &empty : &it->second;
  } else if (!pattern.subject.isVariable()) {
    auto it = bySubject_.find(pattern.subject);
    candidates = it == bySubject_.end() ? &empty : &it->second;
  } else if (!pattern.predicate.isVariable()) {
    auto it = byPredicate_.find(pattern.predicate);
    candidates = it == byPredicate_.end() ? &empty : &it->second;
  } else {
    indexed = false;
  }
  if (!indexed) return scan(pattern);

  std::vector<const StoredStatement*> out;
  Bindings scratch;
  for (Id id : *candidates) {
    const StoredStatement& s = byId_.at(id);
    scratch.clear();
    if (unify(pattern, s.statement.triple, scratch)) out.push_back(&s);
  }
  return out;
}

std::vector<const StoredStatement*> ContextKB::scan(const TriplePattern& pattern) const {
  std::vector<const StoredStatement*> out;
  Bindings scratch;
  for (const auto& [id, s] : byId_) {
    scratch.clear();
    if (unify(pattern, s.statement.triple, scratch)) out.push_back(&s);
  }
  return out;
}

std::vector<const StoredStatement*> ContextKB::all() const {
  std::vector<const StoredStatement*> out;
  out.reserve(byId_.size());
  for (const auto& [id, s] : byId_) out.push_back(&s);
  return out;
}

const StoredStatement* ContextKB::find(const StatementKey& key) const {
  auto it = byKey_.find(key);
  return it == byKey_.end() ? nullptr : &byId_.at(it->second);
}

std::vector<QueryMatch> ContextKB::query(const TriplePattern& pattern,
                                         const QueryOptions& options) const {
  Millis asOf = options.asOf.value_or(clock_);
  if (asOf < 0) throw Error(Errc::InvalidTerm, "query time must be >= 0");
  std::vector<QueryMatch> out;
  for (const auto* s : match(pattern)) {
    if (options.freshOnly && !s->statement.isFreshAt(asOf)) continue;
    if (s->loser && !options.includeLosers) continue;
    QueryMatch m;
    unify(pattern, s->statement.triple, m.bindings);
    m.statement = s->statement;
    out.push_back(std::move(m));
  }
  std::sort(out.begin(), out.end(), [](const QueryMatch& a, const QueryMatch& b) {
    return a.statement.key() < b.statement.key();
  });
  return out;
}

void ContextKB::setLosers(const std::set<StatementKey>& losers) {
  for (auto& [id, s] : byId_) s.loser = losers.count(s.statement.key()) > 0;
}

std::set<StatementKey> ContextKB::losers() const {
  std::set<StatementKey> out;
  for (const auto& [id, s] : byId_) {
    if (s.loser) out.insert(s.statement.key());
  }
  return out;
}

std::vector<ContextStatement> ContextKB::unplug(std::string_view moduleId) {
  Schema removed = ontology_.unplug(moduleId);
  std::vector<Id> doomed;
  for (const auto& [id, s] : byId_) {
    const Triple& t = s.statement.triple;
    if (removed.properties.count(t.predicate)) {
      doomed.push_back(id);
    } else if (t.predicate == rdfType() && removed.classes.count(t.object) &&
               !ontology_.hasClass(t.object)) {
      doomed.push_back(id);
    }
  }
  std::vector<ContextStatement> out;
  for (Id id : doomed) {
    out.push_back(byId_.at(id).statement);
    erase(id);
  }
  std::erase_if(pending_, [&](const auto& sp) { return removed.properties.count(sp.second) > 0; });
  return out;
}

bool ContextKB::indexesConsistent() const {
  std::map<Term, std::set<Id>> s, p;
  std::map<std::pair<Term, Term>, std::set<Id>> sp;
  for (const auto& [id, st] : byId_) {
    const Triple& t = st.statement.triple;
    s[t.subject].insert(id);
    p[t.predicate].insert(id);
    sp[{t.subject, t.predicate}].insert(id);
    auto k = byKey_.find(st.statement.key());
    if (k == byKey_.end() || k->second != id) return false;
  }
  return s == bySubject_ && p == byPredicate_ && sp == bySubjectPredicate_ &&
         byKey_.size() == byId_.size();
}

}  // namespace socam
