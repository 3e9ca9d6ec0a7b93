#include "socam/lexer.hpp"

#include <cctype>

namespace socam {

namespace {

bool isNameChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool isDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

Lexer::Lexer(std::string_view text, std::size_t firstLine) : text_(text), line_(firstLine) {}

void Lexer::advance(std::size_t n) {
  for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }
}

void Lexer::skipTrivia() {
  while (pos_ < text_.size()) {
    char c = cur();
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
    } else if (c == '#') {
      while (pos_ < text_.size() && cur() != '\n') advance();
    } else {
      break;
    }
  }
}

void Lexer::fail(const Token& at, std::string message) const {
  throw Error(Errc::SyntaxError, std::move(message), at.where);
}

const Token& Lexer::peek() {
  if (!hasPeek_) {
    peekStart_ = pos_;
    peeked_ = scan();
    hasPeek_ = true;
  }
  return peeked_;
}

Token Lexer::next() {
  if (hasPeek_) {
    hasPeek_ = false;
    return std::move(peeked_);
  }
  return scan();
}

std::string_view Lexer::rest() {
  std::size_t from = hasPeek_ ? peekStart_ : pos_;
  std::string_view r = text_.substr(from);
  while (!r.empty() && std::isspace(static_cast<unsigned char>(r.front()))) r.remove_prefix(1);
  while (!r.empty() && std::isspace(static_cast<unsigned char>(r.back()))) r.remove_suffix(1);
  return r;
}

Token Lexer::scan() {
  skipTrivia();
  SourceLocation start = location();
  Token tok;
  tok.where = start;
  if (pos_ >= text_.size()) return tok;

  char c = cur();
  if (c == '<') {
    advance();
    std::string iri;
    while (pos_ < text_.size() && cur() != '>') {
      if (std::isspace(static_cast<unsigned char>(cur()))) {
        throw Error(Errc::SyntaxError, "whitespace inside IRI reference", location());
      }
      iri += cur();
      advance();
    }
    if (pos_ >= text_.size()) throw Error(Errc::SyntaxError, "unterminated IRI reference", start);
    advance();
    tok.kind = TokenKind::IriRef;
    tok.text = std::move(iri);
    return tok;
  }
  if (c == '"') return scanString(start);
  if (isDigit(c) || ((c == '+' || c == '-') && isDigit(at(1)))) return scanNumber(start);
  if (c == '-' && at(1) == '>') {
    advance(2);
    tok.kind = TokenKind::Punct;
    tok.text = "->";
    return tok;
  }
  if (c == '^' && at(1) == '^') {
    advance(2);
    tok.kind = TokenKind::Punct;
    tok.text = "^^";
    return tok;
  }
  if (c == '_' && at(1) == ':') {
    advance(2);
    std::string label;
    while (isNameChar(cur()) || (cur() == '.' && isNameChar(at(1)))) {
      label += cur();
      advance();
    }
    if (label.empty()) throw Error(Errc::SyntaxError, "empty blank node label", start);
    tok.kind = TokenKind::Blank;
    tok.text = std::move(label);
    return tok;
  }
  if (c == '?') {
    advance();
    std::string name;
    while (isNameChar(cur())) {
      name += cur();
      advance();
    }
    if (name.empty()) throw Error(Errc::SyntaxError, "empty variable name", start);
    tok.kind = TokenKind::Variable;
    tok.text = std::move(name);
    return tok;
  }
  if (c == '@') {
    advance();
    std::string name;
    while (isNameChar(cur())) {
      name += cur();
      advance();
    }
    if (name.empty()) throw Error(Errc::SyntaxError, "empty directive", start);
    tok.kind = TokenKind::Directive;
    tok.text = std::move(name);
    return tok;
  }
  if (isNameChar(c) || c == ':') return scanName(start);
  switch (c) {
    case '.': case ';': case ',': case '[': case ']': case '(': case ')': case '*': case '=':
      advance();
      tok.kind = TokenKind::Punct;
      tok.text = std::string(1, c);
      return tok;
    default: break;
  }
  throw Error(Errc::SyntaxError, std::string("unexpected character '") + c + "'", start);
}

Token Lexer::scanString(SourceLocation start) {
  advance();  // opening quote
  std::string value;
  while (true) {
    if (pos_ >= text_.size() || cur() == '\n') {
      throw Error(Errc::UnterminatedLiteral, "string literal is not terminated", start);
    }
    char c = cur();
    if (c == '"') {
      advance();
      break;
    }
    if (c == '\\') {
      SourceLocation escAt = location();
      advance();
      switch (cur()) {
        case '"': value += '"'; break;
        case '\\': value += '\\'; break;
        case 'n': value += '\n'; break;
        case 'r': value += '\r'; break;
        case 't': value += '\t'; break;
        case '\'': value += '\''; break;
        default: throw Error(Errc::SyntaxError, "unknown escape sequence", escAt);
      }
      advance();
      continue;
    }
    value += c;
    advance();
  }
  Token tok;
  tok.kind = TokenKind::String;
  tok.text = std::move(value);
  tok.where = start;
  return tok;
}

Token Lexer::scanNumber(SourceLocation start) {
  std::string lex;
  if (cur() == '+' || cur() == '-') {
    lex += cur();
    advance();
  }
  while (isDigit(cur())) {
    lex += cur();
    advance();
  }
  bool isDouble = false;
  if (cur() == '.' && isDigit(at(1))) {
    isDouble = true;
    lex += cur();
    advance();
    while (isDigit(cur())) {
      lex += cur();
      advance();
    }
  }
  if ((cur() == 'e' || cur() == 'E') &&
      (isDigit(at(1)) || ((at(1) == '+' || at(1) == '-') && isDigit(at(2))))) {
    isDouble = true;
    lex += cur();
    advance();
    if (cur() == '+' || cur() == '-') {
      lex += cur();
      advance();
    }
    while (isDigit(cur())) {
      lex += cur();
      advance();
    }
  }
  Token tok;
  tok.kind = isDouble ? TokenKind::Double : TokenKind::Integer;
  tok.text = std::move(lex);
  tok.where = start;
  return tok;
}

Token Lexer::scanName(SourceLocation start) {
  std::string first;
  while (isNameChar(cur())) {
    first += cur();
    advance();
  }
  Token tok;
  tok.where = start;
  if (cur() != ':') {
    tok.kind = TokenKind::Word;
    tok.text = std::move(first);
    return tok;
  }
  advance();  // ':'
  std::string local;
  while (isNameChar(cur()) || (cur() == '.' && isNameChar(at(1)))) {
    local += cur();
    advance();
  }
  tok.kind = TokenKind::PName;
  tok.text = std::move(first);
  tok.local = std::move(local);
  return tok;
}

Term readTerm(Lexer& lexer, const PrefixMap& prefixes, TermOptions options) {
  Token tok = lexer.next();
  auto resolvePName = [&](const Token& t) {
    auto base = prefixes.expand(t.text);
    if (!base) throw Error(Errc::UnknownPrefix, "prefix '" + t.text + ":' is not bound", t.where);
    try {
      return Term::iri(*base + t.local);
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), t.where);
    }
  };
  auto literal = [&](std::string lex, std::string datatype) {
    try {
      return Term::literal(std::move(lex), std::move(datatype));
    } catch (const Error& e) {
      throw Error(e.code(), e.detail(), tok.where);
    }
  };
  switch (tok.kind) {
    case TokenKind::IriRef:
      try {
        return Term::iri(tok.text);
      } catch (const Error& e) {
        throw Error(e.code(), e.detail(), tok.where);
      }
    case TokenKind::PName: return resolvePName(tok);
    case TokenKind::Blank:
      if (!options.allowBlank) lexer.fail(tok, "blank nodes are not allowed here");
      return Term::blank(tok.text);
    case TokenKind::Variable:
      if (!options.allowVariables) lexer.fail(tok, "variables are only allowed in rule patterns");
      return Term::variable(tok.text);
    case TokenKind::Integer: return literal(tok.text, xsdIri("integer"));
    case TokenKind::Double: return literal(tok.text, xsdIri("double"));
    case TokenKind::Word:
      if (tok.text == "true" || tok.text == "false") return literal(tok.text, xsdIri("boolean"));
      if (tok.text == "a") return rdfType();
      lexer.fail(tok, "unexpected word '" + tok.text + "' where a term was expected");
    case TokenKind::String: {
      if (lexer.peek().isPunct("^^")) {
        lexer.next();
        Token dt = lexer.next();
        std::string datatype;
        if (dt.kind == TokenKind::IriRef) {
          datatype = dt.text;
        } else if (dt.kind == TokenKind::PName) {
          datatype = resolvePName(dt).value();
        } else {
          lexer.fail(dt, "expected datatype IRI after ^^");
        }
        return literal(tok.text, datatype);
      }
      if (lexer.peek().kind == TokenKind::Directive) {
        lexer.fail(lexer.peek(), "language-tagged literals are not supported");
      }
      return literal(tok.text, xsdIri("string"));
    }
    case TokenKind::End: lexer.fail(tok, "unexpected end of input, expected a term");
    default: break;
  }
  lexer.fail(tok, "unexpected '" + tok.text + "' where a term was expected");
}

void readPrefixDirective(Lexer& lexer, PrefixMap& prefixes) {
  Token name = lexer.next();
  if (name.kind != TokenKind::PName || !name.local.empty()) {
    lexer.fail(name, "expected 'prefix:' after @prefix");
  }
  Token iri = lexer.next();
  if (iri.kind != TokenKind::IriRef) lexer.fail(iri, "expected <iri> in @prefix");
  Token dot = lexer.next();
  if (!dot.isPunct(".")) lexer.fail(dot, "expected '.' after @prefix declaration");
  prefixes.bind(name.text, iri.text);
}

TriplePattern parsePattern(std::string_view text, const PrefixMap& prefixes) {
  Lexer lexer(text);
  Token open = lexer.next();
  if (!open.isPunct("(")) lexer.fail(open, "expected '(' to open a triple pattern");
  TermOptions opts{.allowVariables = true, .allowBlank = false};
  TriplePattern p;
  p.subject = readTerm(lexer, prefixes, opts);
  p.predicate = readTerm(lexer, prefixes, opts);
  p.object = readTerm(lexer, prefixes, opts);
  Token close = lexer.next();
  if (!close.isPunct(")")) lexer.fail(close, "expected ')' to close a triple pattern");
  Token end = lexer.next();
  if (end.kind != TokenKind::End) lexer.fail(end, "unexpected text after the pattern");
  return p;
}

}  // namespace socam
