#pragma once

// Rule language:
//   [name: (s p o), not(s p o), lessThan(?x, 5), ... -> (s p o), ...]
// plus `@prefix` lines and `@aggregate group member source -> target combiner .`

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "socam/error.hpp"
#include "socam/term.hpp"

namespace socam {

class Ontology;

enum class BuiltinOp { Equal, NotEqual, LessThan, GreaterThan };

std::string_view toString(BuiltinOp op);
std::optional<BuiltinOp> parseBuiltin(std::string_view name);
// Both operands must be bound. Mismatched datatypes compare false; ordering
// applies to numeric and string literals only.
bool evalBuiltin(BuiltinOp op, const Term& lhs, const Term& rhs);

struct BodyClause {
  enum class Kind { Positive, Negated, Builtin };

  Kind kind = Kind::Positive;
  TriplePattern pattern;  // Positive / Negated
  BuiltinOp op = BuiltinOp::Equal;
  Term lhs, rhs;  // Builtin

  static BodyClause positive(TriplePattern p) { return {Kind::Positive, std::move(p), {}, {}, {}}; }
  static BodyClause negated(TriplePattern p) { return {Kind::Negated, std::move(p), {}, {}, {}}; }
  static BodyClause builtin(BuiltinOp op, Term l, Term r) {
    return {Kind::Builtin, {}, op, std::move(l), std::move(r)};
  }
};

struct Rule {
  std::string name;
  std::vector<BodyClause> body;
  std::vector<TriplePattern> head;
  SourceLocation where;
};

enum class Combiner { Union, Intersection };

struct AggregationSpec {
  Term groupSubject;
  Term memberPredicate;
  Term sourcePredicate;
  Term targetPredicate;
  Combiner combiner = Combiner::Intersection;
};

class RuleSet {
 public:
  RuleSet() = default;
  // Checks safety, head classification (when `ontology` is given) and
  // stratification. Errors: UnsafeRule, NonDeducedHead, UnstratifiableNegation.
  static RuleSet build(std::vector<Rule> rules, std::vector<AggregationSpec> aggregations = {},
                       const Ontology* ontology = nullptr);

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  const std::vector<AggregationSpec>& aggregations() const noexcept { return aggregations_; }
  std::size_t stratumOf(std::size_t ruleIndex) const { return ruleStratum_.at(ruleIndex); }
  std::size_t strataCount() const noexcept { return strataCount_; }
  // Predicates a head predicate reads through rule bodies (positive or
  // negated). `anyPredicate` is set when some body pattern has a variable
  // predicate.
  struct BodyDependencies {
    std::set<Term> predicates;
    bool anyPredicate = false;
  };
  BodyDependencies bodyDependencies(const Term& headPredicate) const;
  std::set<Term> headPredicates() const;

 private:
  std::vector<Rule> rules_;
  std::vector<AggregationSpec> aggregations_;
  std::vector<std::size_t> ruleStratum_;
  std::size_t strataCount_ = 0;
  std::map<Term, BodyDependencies> deps_;
};

struct RuleParseOptions {
  PrefixMap initialPrefixes = PrefixMap::wellKnown();
  const Ontology* ontology = nullptr;
};

RuleSet parseRules(std::string_view text, const RuleParseOptions& options = {});

}  // namespace socam
