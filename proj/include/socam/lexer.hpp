#pragma once

// Tokenizer shared by the .ttl, .rules and .trc readers. All three formats
// use the same term syntax: <iri>, prefix:local, _:blank, ?var, "string",
// numbers, booleans and "lex"^^datatype.

#include <cstddef>
#include <string>
#include <string_view>

#include "socam/error.hpp"
#include "socam/term.hpp"

namespace socam {

enum class TokenKind {
  End,
  IriRef,     // text = IRI without brackets
  PName,      // text = prefix, local = local part
  Blank,      // text = label
  Variable,   // text = name
  String,     // text = unescaped value
  Integer,    // text = lexical
  Double,     // text = lexical
  Word,       // bare identifier (a, true, not, equal, Sensed, ...)
  Directive,  // @prefix etc; text = name without '@'
  Punct,      // text = one of . ; , [ ] ( ) * -> ^^ :
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::string local;
  SourceLocation where;

  bool is(TokenKind k, std::string_view t) const { return kind == k && text == t; }
  bool isPunct(std::string_view t) const { return is(TokenKind::Punct, t); }
};

class Lexer {
 public:
  explicit Lexer(std::string_view text, std::size_t firstLine = 1);

  Token next();
  const Token& peek();
  // Unconsumed input after the peeked token (if any) was returned; whitespace trimmed.
  std::string_view rest();
  SourceLocation location() const { return {line_, column_}; }

  [[noreturn]] void fail(const Token& at, std::string message) const;

 private:
  Token scan();
  void skipTrivia();
  char cur() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char at(std::size_t offset) const {
    return pos_ + offset < text_.size() ? text_[pos_ + offset] : '\0';
  }
  void advance(std::size_t n = 1);
  Token scanString(SourceLocation start);
  Token scanNumber(SourceLocation start);
  Token scanName(SourceLocation start);

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column_ = 1;
  bool hasPeek_ = false;
  Token peeked_;
  std::size_t peekStart_ = 0;
};

struct TermOptions {
  bool allowVariables = false;
  bool allowBlank = true;
};

// Reads one term; handles "lex"^^type suffixes. Resolves prefixed names.
Term readTerm(Lexer& lexer, const PrefixMap& prefixes, TermOptions options = {});

// Reads `@prefix p: <iri> .` after the Directive token was consumed.
void readPrefixDirective(Lexer& lexer, PrefixMap& prefixes);

// Parses a whole string holding one `(s p o)` pattern; variables allowed.
TriplePattern parsePattern(std::string_view text, const PrefixMap& prefixes);

}  // namespace socam
