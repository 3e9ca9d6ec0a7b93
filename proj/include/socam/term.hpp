#pragma once

// RDF-style atoms shared by every module: IRIs, blank nodes, literals and
// rule variables, plus triples/patterns and prefix handling.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace socam {

namespace ns {
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view owl = "http://www.w3.org/2002/07/owl#";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view socam = "http://socam.example/ns#";
inline constexpr std::string_view home = "http://socam.example/home#";
}  // namespace ns

enum class TermKind : std::uint8_t { Iri, Blank, Literal, Variable };

enum class LiteralType : std::uint8_t { String, Integer, Double, Boolean, Other };

class Term {
 public:
  Term() = default;

  // Throws Errc::InvalidTerm for empty IRIs or IRIs containing whitespace.
  static Term iri(std::string value);
  static Term blank(std::string label);
  // Validates the lexical form against built-in datatypes (Errc::InvalidLiteral).
  // Unknown datatype IRIs are kept as opaque tags.
  static Term literal(std::string lexical, std::string datatype);
  static Term string(std::string value);
  static Term integer(long long value);
  static Term decimal(double value);
  static Term boolean(bool value);
  static Term variable(std::string name);

  TermKind kind() const noexcept { return kind_; }
  // IRI text, blank label, literal lexical form or variable name.
  const std::string& value() const noexcept { return value_; }
  // Datatype IRI; empty for non-literals.
  const std::string& datatype() const noexcept { return datatype_; }

  bool isIri() const noexcept { return kind_ == TermKind::Iri; }
  bool isBlank() const noexcept { return kind_ == TermKind::Blank; }
  bool isLiteral() const noexcept { return kind_ == TermKind::Literal; }
  bool isVariable() const noexcept { return kind_ == TermKind::Variable; }
  bool isResource() const noexcept { return isIri() || isBlank(); }

  LiteralType literalType() const noexcept;
  // Numeric value of integer/double literals.
  std::optional<double> numeric() const;

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;

 private:
  Term(TermKind kind, std::string value, std::string datatype)
      : kind_(kind), value_(std::move(value)), datatype_(std::move(datatype)) {}

  TermKind kind_ = TermKind::Iri;
  std::string value_;
  std::string datatype_;
};

std::string xsdIri(std::string_view local);
Term iriOf(std::string_view nsBase, std::string_view local);
Term rdfType();

// A triple; as a pattern any position may hold a variable.
struct Triple {
  Term subject;
  Term predicate;
  Term object;

  bool isGround() const noexcept;
  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

using TriplePattern = Triple;
using Bindings = std::map<std::string, Term>;

// Binds `pattern` against the ground `triple`, extending `bindings`.
// Returns false (leaving `bindings` in an unspecified state) on mismatch.
bool unify(const TriplePattern& pattern, const Triple& triple, Bindings& bindings);
Term substitute(const Term& term, const Bindings& bindings);
Triple substitute(const TriplePattern& pattern, const Bindings& bindings);

class PrefixMap {
 public:
  PrefixMap() = default;
  // rdf, rdfs, owl, xsd, socam, home
  static PrefixMap wellKnown();

  void bind(std::string prefix, std::string base);
  std::optional<std::string> expand(std::string_view prefix) const;
  const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

  // prefix:local if some binding yields a legal local name, else nullopt.
  std::optional<std::string> compact(std::string_view iri) const;

  bool operator==(const PrefixMap&) const = default;

 private:
  std::map<std::string, std::string> entries_;
};

bool isValidPrefixName(std::string_view prefix);
bool isValidLocalName(std::string_view local);

// Turtle-compatible rendering; IRIs are compacted when `prefixes` allows.
std::string render(const Term& term, const PrefixMap* prefixes = nullptr);
std::string render(const Triple& triple, const PrefixMap* prefixes = nullptr);
std::string escapeString(std::string_view raw);

}  // namespace socam
