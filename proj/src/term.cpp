#include "socam/term.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "socam/error.hpp"

namespace socam {

namespace {

bool isIntegerLexical(std::string_view s) {
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) s.remove_prefix(1);
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool isDoubleLexical(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c == 'x' || c == 'X' || std::isspace(static_cast<unsigned char>(c))) return false;
  }
  std::string copy(s);
  char* end = nullptr;
  double v = std::strtod(copy.c_str(), &end);
  return end == copy.c_str() + copy.size() && std::isfinite(v);
}

// Lexical forms the turtle/rule lexer reads back as a bare double.
bool isBareDoubleLexical(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (digits == 0) return false;
  bool fraction = false;
  if (i < s.size() && s[i] == '.') {
    ++i;
    std::size_t frac = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac;
    if (frac == 0) return false;
    fraction = true;
  }
  bool exponent = false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t exp = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++exp;
    if (exp == 0) return false;
    exponent = true;
  }
  return i == s.size() && (fraction || exponent);
}

bool isNameStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool isNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

}  // namespace

std::string xsdIri(std::string_view local) {
  return std::string(ns::xsd) + std::string(local);
}

Term iriOf(std::string_view nsBase, std::string_view local) {
  return Term::iri(std::string(nsBase) + std::string(local));
}

Term rdfType() {
  static const Term type = iriOf(ns::rdf, "type");
  return type;
}

Term Term::iri(std::string value) {
  if (value.empty()) throw Error(Errc::InvalidTerm, "empty IRI");
  for (char c : value) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      throw Error(Errc::InvalidTerm, "IRI contains whitespace: '" + value + "'");
    }
  }
  return Term(TermKind::Iri, std::move(value), {});
}

Term Term::blank(std::string label) {
  if (label.empty()) throw Error(Errc::InvalidTerm, "empty blank node label");
  return Term(TermKind::Blank, std::move(label), {});
}

Term Term::literal(std::string lexical, std::string datatype) {
  if (datatype.empty()) datatype = xsdIri("string");
  if (datatype == xsdIri("integer")) {
    if (!isIntegerLexical(lexical)) {
      throw Error(Errc::InvalidLiteral, "'" + lexical + "' is not a valid xsd:integer");
    }
  } else if (datatype == xsdIri("double") || datatype == xsdIri("decimal")) {
    datatype = xsdIri("double");
    if (!isDoubleLexical(lexical)) {
      throw Error(Errc::InvalidLiteral, "'" + lexical + "' is not a valid xsd:double");
    }
  } else if (datatype == xsdIri("boolean")) {
    if (lexical != "true" && lexical != "false") {
      throw Error(Errc::InvalidLiteral, "'" + lexical + "' is not a valid xsd:boolean");
    }
  }
  return Term(TermKind::Literal, std::move(lexical), std::move(datatype));
}

Term Term::string(std::string value) { return literal(std::move(value), xsdIri("string")); }

Term Term::integer(long long value) { return literal(std::to_string(value), xsdIri("integer")); }

Term Term::decimal(double value) {
  if (!std::isfinite(value)) throw Error(Errc::InvalidLiteral, "non-finite double");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  std::string lexical(buf, res.ptr);
  if (lexical.find_first_of(".eE") == std::string::npos) lexical += ".0";
  return literal(std::move(lexical), xsdIri("double"));
}

Term Term::boolean(bool value) { return literal(value ? "true" : "false", xsdIri("boolean")); }

Term Term::variable(std::string name) {
  if (name.empty()) throw Error(Errc::InvalidTerm, "empty variable name");
  return Term(TermKind::Variable, std::move(name), {});
}

LiteralType Term::literalType() const noexcept {
  if (!isLiteral()) return LiteralType::Other;
  std::string_view dt = datatype_;
  if (dt.substr(0, ns::xsd.size()) != ns::xsd) return LiteralType::Other;
  dt.remove_prefix(ns::xsd.size());
  if (dt == "string") return LiteralType::String;
  if (dt == "integer") return LiteralType::Integer;
  if (dt == "double") return LiteralType::Double;
  if (dt == "boolean") return LiteralType::Boolean;
  return LiteralType::Other;
}

std::optional<double> Term::numeric() const {
  auto type = literalType();
  if (type != LiteralType::Integer && type != LiteralType::Double) return std::nullopt;
  return std::strtod(value_.c_str(), nullptr);
}

bool Triple::isGround() const noexcept {
  return !subject.isVariable() && !predicate.isVariable() && !object.isVariable();
}

namespace {

bool unifyTerm(const Term& pattern, const Term& value, Bindings& bindings) {
  if (!pattern.isVariable()) return pattern == value;
  auto [it, inserted] = bindings.try_emplace(pattern.value(), value);
  return inserted || it->second == value;
}

}  // namespace

bool unify(const TriplePattern& pattern, const Triple& triple, Bindings& bindings) {
  return unifyTerm(pattern.subject, triple.subject, bindings) &&
         unifyTerm(pattern.predicate, triple.predicate, bindings) &&
         unifyTerm(pattern.object, triple.object, bindings);
}

Term substitute(const Term& term, const Bindings& bindings) {
  if (!term.isVariable()) return term;
  auto it = bindings.find(term.value());
  return it == bindings.end() ? term : it->second;
}

Triple substitute(const TriplePattern& pattern, const Bindings& bindings) {
  return {substitute(pattern.subject, bindings), substitute(pattern.predicate, bindings),
          substitute(pattern.object, bindings)};
}

PrefixMap PrefixMap::wellKnown() {
  PrefixMap map;
  map.bind("rdf", std::string(ns::rdf));
  map.bind("rdfs", std::string(ns::rdfs));
  map.bind("owl", std::string(ns::owl));
  map.bind("xsd", std::string(ns::xsd));
  map.bind("socam", std::string(ns::socam));
  map.bind("home", std::string(ns::home));
  return map;
}

void PrefixMap::bind(std::string prefix, std::string base) {
  entries_[std::move(prefix)] = std::move(base);
}

std::optional<std::string> PrefixMap::expand(std::string_view prefix) const {
  auto it = entries_.find(std::string(prefix));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::string> PrefixMap::compact(std::string_view iri) const {
  std::optional<std::string> best;
  std::size_t bestLen = 0;
  for (const auto& [prefix, base] : entries_) {
    if (base.empty() || base.size() < bestLen || iri.substr(0, base.size()) != base) continue;
    auto local = iri.substr(base.size());
    if (!isValidLocalName(local)) continue;
    if (!best || base.size() > bestLen) {
      best = prefix + ":" + std::string(local);
      bestLen = base.size();
    }
  }
  return best;
}

bool isValidPrefixName(std::string_view prefix) {
  if (prefix.empty()) return true;
  if (!std::isalpha(static_cast<unsigned char>(prefix.front()))) return false;
  for (char c : prefix) {
    if (!isNameChar(c)) return false;
  }
  return true;
}

bool isValidLocalName(std::string_view local) {
  if (local.empty()) return false;
  if (!isNameStart(local.front()) && !std::isdigit(static_cast<unsigned char>(local.front()))) {
    return false;
  }
  for (char c : local) {
    if (!isNameChar(c) && c != '.') return false;
  }
  return local.back() != '.';
}

std::string escapeString(std::string_view raw) {
  std::string out;
  out.reserve(raw.size() + 2);
  for (char c : raw) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render(const Term& term, const PrefixMap* prefixes) {
  switch (term.kind()) {
    case TermKind::Iri: {
      if (prefixes) {
        if (auto q = prefixes->compact(term.value())) return *q;
      }
      return "<" + term.value() + ">";
    }
    case TermKind::Blank: return "_:" + term.value();
    case TermKind::Variable: return "?" + term.value();
    case TermKind::Literal: break;
  }
  const std::string& lex = term.value();
  switch (term.literalType()) {
    case LiteralType::String: return "\"" + escapeString(lex) + "\"";
    case LiteralType::Integer:
      if (isIntegerLexical(lex)) return lex;
      break;
    case LiteralType::Boolean: return lex;
    case LiteralType::Double:
      if (isBareDoubleLexical(lex)) return lex;
      break;
    case LiteralType::Other: break;
  }
  return "\"" + escapeString(lex) + "\"^^" + render(Term::iri(term.datatype()), prefixes);
}

std::string render(const Triple& triple, const PrefixMap* prefixes) {
  return render(triple.subject, prefixes) + " " + render(triple.predicate, prefixes) + " " +
         render(triple.object, prefixes);
}

}  // namespace socam
