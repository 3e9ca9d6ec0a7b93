#include "socam/rules.hpp"

#include <algorithm>

#include "socam/lexer.hpp"
#include "socam/ontology.hpp"

namespace socam {

std::string_view toString(BuiltinOp op) {
  switch (op) {
    case BuiltinOp::Equal: return "equal";
    case BuiltinOp::NotEqual: return "notEqual";
    case BuiltinOp::LessThan: return "lessThan";
    case BuiltinOp::GreaterThan: return "greaterThan";
  }
  return "?";
}

std::optional<BuiltinOp> parseBuiltin(std::string_view name) {
  if (name == "equal") return BuiltinOp::Equal;
  if (name == "notEqual") return BuiltinOp::NotEqual;
  if (name == "lessThan") return BuiltinOp::LessThan;
  if (name == "greaterThan") return BuiltinOp::GreaterThan;
  return std::nullopt;
}

bool evalBuiltin(BuiltinOp op, const Term& lhs, const Term& rhs) {
  bool comparable = (lhs.isResource() && rhs.isResource()) ||
                    (lhs.isLiteral() && rhs.isLiteral() && lhs.datatype() == rhs.datatype());
  if (!comparable) return false;
  switch (op) {
    case BuiltinOp::Equal: return lhs == rhs;
    case BuiltinOp::NotEqual: return lhs != rhs;
    case BuiltinOp::LessThan:
    case BuiltinOp::GreaterThan: {
      if (!lhs.isLiteral()) return false;
      int cmp = 0;
      if (auto a = lhs.numeric(), b = rhs.numeric(); a && b) {
        cmp = *a < *b ? -1 : (*a > *b ? 1 : 0);
      } else if (lhs.literalType() == LiteralType::String) {
        cmp = lhs.value().compare(rhs.value());
      } else {
        return false;
      }
      return op == BuiltinOp::LessThan ? cmp < 0 : cmp > 0;
    }
  }
  return false;
}

namespace {

void collectVars(const Term& t, std::set<std::string>& out) {
  if (t.isVariable()) out.insert(t.value());
}

void collectVars(const TriplePattern& p, std::set<std::string>& out) {
  collectVars(p.subject, out);
  collectVars(p.predicate, out);
  collectVars(p.object, out);
}

void checkSafety(const Rule& rule) {
  std::set<std::string> bound;
  for (const auto& c : rule.body) {
    if (c.kind == BodyClause::Kind::Positive) collectVars(c.pattern, bound);
  }
  auto require = [&](const std::set<std::string>& used, std::string_view where) {
    for (const auto& v : used) {
      if (!bound.count(v)) {
        throw Error(Errc::UnsafeRule, "rule '" + rule.name + "': variable ?" + v + " in " +
                                          std::string(where) +
                                          " does not occur in a positive body pattern",
                    rule.where);
      }
    }
  };
  for (const auto& c : rule.body) {
    std::set<std::string> used;
    if (c.kind == BodyClause::Kind::Negated) {
      collectVars(c.pattern, used);
      require(used, "a negated pattern");
    } else if (c.kind == BodyClause::Kind::Builtin) {
      collectVars(c.lhs, used);
      collectVars(c.rhs, used);
      require(used, std::string(toString(c.op)) + "()");
    }
  }
  for (const auto& h : rule.head) {
    std::set<std::string> used;
    collectVars(h, used);
    require(used, "the head");
  }
}

}  // namespace

RuleSet RuleSet::build(std::vector<Rule> rules, std::vector<AggregationSpec> aggregations,
                       const Ontology* ontology) {
  RuleSet set;
  for (const auto& rule : rules) {
    if (rule.head.empty()) {
      throw Error(Errc::SyntaxError, "rule '" + rule.name + "' has no head", rule.where);
    }
    checkSafety(rule);
    for (const auto& h : rule.head) {
      if (!h.predicate.isIri()) {
        throw Error(Errc::NonDeducedHead,
                    "rule '" + rule.name + "': head predicate must be a constant IRI", rule.where);
      }
      if (!ontology) continue;
      const PropertyDecl* decl = ontology->property(h.predicate);
      if (!decl || (decl->classifiedAs != Classification::Deduced &&
                    decl->classifiedAs != Classification::Aggregated)) {
        throw Error(Errc::NonDeducedHead,
                    "rule '" + rule.name + "': head predicate " + render(h.predicate) +
                        (decl ? " is classified " + std::string(toString(decl->classifiedAs))
                              : std::string(" is not declared")) +
                        ", expected Deduced or Aggregated",
                    rule.where);
      }
    }
  }

  // Predicate strata: positive body >=, negated body >.
  std::set<Term> heads;
  for (const auto& r : rules) {
    for (const auto& h : r.head) heads.insert(h.predicate);
  }
  std::map<Term, std::size_t> stratum;
  for (const auto& h : heads) stratum[h] = 0;
  auto stratumOfBody = [&](const TriplePattern& p) -> std::size_t {
    if (p.predicate.isVariable()) {
      std::size_t m = 0;
      for (const auto& [_, s] : stratum) m = std::max(m, s);
      return m;
    }
    auto it = stratum.find(p.predicate);
    return it == stratum.end() ? 0 : it->second;
  };
  auto bodyIsDerived = [&](const TriplePattern& p) {
    return p.predicate.isVariable() ? !heads.empty() : heads.count(p.predicate) > 0;
  };
  const std::size_t limit = heads.size();
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& r : rules) {
      std::size_t need = 0;
      for (const auto& h : r.head) need = std::max(need, stratum[h.predicate]);
      for (const auto& c : r.body) {
        if (c.kind == BodyClause::Kind::Builtin) continue;
        if (!bodyIsDerived(c.pattern)) continue;
        std::size_t s = stratumOfBody(c.pattern);
        need = std::max(need, c.kind == BodyClause::Kind::Negated ? s + 1 : s);
      }
      for (const auto& h : r.head) {
        if (stratum[h.predicate] < need) {
          stratum[h.predicate] = need;
          changed = true;
        }
      }
      if (need > limit) {
        throw Error(Errc::UnstratifiableNegation,
                    "rule '" + r.name + "' takes part in a cycle through negation", r.where);
      }
    }
  }

  set.strataCount_ = 0;
  for (const auto& r : rules) {
    std::size_t s = stratum[r.head.front().predicate];
    set.ruleStratum_.push_back(s);
    set.strataCount_ = std::max(set.strataCount_, s + 1);
    for (const auto& h : r.head) {
      auto& deps = set.deps_[h.predicate];
      for (const auto& c : r.body) {
        if (c.kind == BodyClause::Kind::Builtin) continue;
        if (c.pattern.predicate.isVariable()) {
          deps.anyPredicate = true;
        } else {
          deps.predicates.insert(c.pattern.predicate);
        }
      }
    }
  }
  set.rules_ = std::move(rules);
  set.aggregations_ = std::move(aggregations);
  return set;
}

RuleSet::BodyDependencies RuleSet::bodyDependencies(const Term& headPredicate) const {
  auto it = deps_.find(headPredicate);
  return it == deps_.end() ? BodyDependencies{} : it->second;
}

std::set<Term> RuleSet::headPredicates() const {
  std::set<Term> out;
  for (const auto& [p, _] : deps_) out.insert(p);
  return out;
}

namespace {

class RuleReader {
 public:
  RuleReader(std::string_view text, const RuleParseOptions& options)
      : lexer_(text), prefixes_(options.initialPrefixes) {}

  void run(std::vector<Rule>& rules, std::vector<AggregationSpec>& aggregations) {
    while (lexer_.peek().kind != TokenKind::End) {
      Token tok = lexer_.next();
      if (tok.kind == TokenKind::Directive) {
        if (tok.text == "prefix") {
          readPrefixDirective(lexer_, prefixes_);
        } else if (tok.text == "aggregate") {
          aggregations.push_back(aggregate());
        } else {
          lexer_.fail(tok, "unsupported directive '@" + tok.text + "'");
        }
        continue;
      }
      if (!tok.isPunct("[")) lexer_.fail(tok, "expected '[' to start a rule");
      rules.push_back(rule(tok.where));
    }
  }

 private:
  Term term() { return readTerm(lexer_, prefixes_, {.allowVariables = true, .allowBlank = false}); }

  void expect(std::string_view punct, std::string_view what) {
    Token tok = lexer_.next();
    if (!tok.isPunct(punct)) {
      lexer_.fail(tok, "expected '" + std::string(punct) + "' " + std::string(what));
    }
  }

  TriplePattern pattern() {
    expect("(", "to open a triple pattern");
    TriplePattern p;
    p.subject = term();
    p.predicate = term();
    p.object = term();
    expect(")", "to close a triple pattern");
    return p;
  }

  Rule rule(SourceLocation where) {
    Rule r;
    r.where = where;
    Token name = lexer_.next();
    if (name.kind != TokenKind::PName || !name.local.empty() || name.text.empty()) {
      lexer_.fail(name, "expected 'name:' after '['");
    }
    r.name = name.text;
    if (!lexer_.peek().isPunct("->")) {
      while (true) {
        r.body.push_back(clause());
        if (!lexer_.peek().isPunct(",")) break;
        lexer_.next();
      }
    }
    expect("->", "between rule body and head");
    while (true) {
      r.head.push_back(pattern());
      if (!lexer_.peek().isPunct(",")) break;
      lexer_.next();
    }
    expect("]", "to close the rule");
    return r;
  }

  BodyClause clause() {
    const Token& tok = lexer_.peek();
    if (tok.isPunct("(")) return BodyClause::positive(pattern());
    if (tok.kind == TokenKind::Word) {
      Token word = lexer_.next();
      if (word.text == "not") return BodyClause::negated(pattern());
      auto op = parseBuiltin(word.text);
      if (!op) lexer_.fail(word, "unknown builtin '" + word.text + "'");
      expect("(", "after builtin name");
      Term lhs = term();
      expect(",", "between builtin arguments");
      Term rhs = term();
      expect(")", "to close builtin call");
      return BodyClause::builtin(*op, std::move(lhs), std::move(rhs));
    }
    lexer_.fail(tok, "expected a pattern, not(...) or a builtin");
  }

  AggregationSpec aggregate() {
    AggregationSpec spec;
    auto constant = [&] {
      const Token& at = lexer_.peek();
      SourceLocation where = at.where;
      Term t = readTerm(lexer_, prefixes_);
      if (!t.isIri()) throw Error(Errc::SyntaxError, "@aggregate expects IRIs", where);
      return t;
    };
    spec.groupSubject = constant();
    spec.memberPredicate = constant();
    spec.sourcePredicate = constant();
    expect("->", "in @aggregate");
    spec.targetPredicate = constant();
    Token comb = lexer_.next();
    if (comb.is(TokenKind::Word, "union")) {
      spec.combiner = Combiner::Union;
    } else if (comb.is(TokenKind::Word, "intersection")) {
      spec.combiner = Combiner::Intersection;
    } else {
      lexer_.fail(comb, "expected 'union' or 'intersection'");
    }
    expect(".", "to end @aggregate");
    return spec;
  }

  Lexer lexer_;
  PrefixMap prefixes_;
};

}  // namespace

RuleSet parseRules(std::string_view text, const RuleParseOptions& options) {
  std::vector<Rule> rules;
  std::vector<AggregationSpec> aggregations;
  RuleReader(text, options).run(rules, aggregations);
  return RuleSet::build(std::move(rules), std::move(aggregations), options.ontology);
}

}  // namespace socam
