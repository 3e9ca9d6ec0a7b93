#include "socam/turtle.hpp"

#include <map>

#include "socam/lexer.hpp"

namespace socam {

namespace {

class TurtleReader {
 public:
  TurtleReader(std::string_view text, const TurtleOptions& options) : lexer_(text) {
    doc_.prefixes = options.initialPrefixes;
  }

  Document run() {
    while (lexer_.peek().kind != TokenKind::End) {
      const Token& tok = lexer_.peek();
      if (tok.kind == TokenKind::Directive) {
        Token directive = lexer_.next();
        if (directive.text != "prefix") {
          lexer_.fail(directive, "unsupported directive '@" + directive.text + "'");
        }
        readPrefixDirective(lexer_, doc_.prefixes);
        continue;
      }
      statement();
    }
    return std::move(doc_);
  }

 private:
  void rejectBracket() {
    if (lexer_.peek().isPunct("[")) {
      lexer_.fail(lexer_.peek(), "anonymous blank node property lists are not supported");
    }
  }

  void statement() {
    rejectBracket();
    const Token& at = lexer_.peek();
    if (at.kind == TokenKind::Punct || at.kind == TokenKind::String ||
        at.kind == TokenKind::Integer || at.kind == TokenKind::Double) {
      lexer_.fail(at, "expected a subject IRI or blank node");
    }
    Term subject = readTerm(lexer_, doc_.prefixes);
    if (!subject.isResource()) {
      throw Error(Errc::SyntaxError, "subject must be an IRI or blank node", at.where);
    }
    while (true) {
      Term predicate = verb();
      while (true) {
        rejectBracket();
        Term object = readTerm(lexer_, doc_.prefixes);
        doc_.triples.push_back({subject, predicate, std::move(object)});
        if (!lexer_.peek().isPunct(",")) break;
        lexer_.next();
      }
      Token sep = lexer_.next();
      if (sep.isPunct(".")) return;
      if (!sep.isPunct(";")) lexer_.fail(sep, "expected '.', ';' or ','");
      // Turtle allows a dangling ';' before the final '.'.
      while (lexer_.peek().isPunct(";")) lexer_.next();
      if (lexer_.peek().isPunct(".")) {
        lexer_.next();
        return;
      }
    }
  }

  Term verb() {
    const Token& tok = lexer_.peek();
    if (tok.is(TokenKind::Word, "a")) {
      lexer_.next();
      return rdfType();
    }
    if (tok.kind != TokenKind::IriRef && tok.kind != TokenKind::PName) {
      lexer_.fail(tok, "expected a predicate IRI");
    }
    return readTerm(lexer_, doc_.prefixes);
  }

  Lexer lexer_;
  Document doc_;
};

}  // namespace

Document parseTurtle(std::string_view text, const TurtleOptions& options) {
  return TurtleReader(text, options).run();
}

std::string serializeTurtle(const Document& doc) {
  std::string out;
  for (const auto& [prefix, base] : doc.prefixes.entries()) {
    out += "@prefix " + prefix + ": <" + base + "> .\n";
  }
  const PrefixMap* pm = &doc.prefixes;
  // subject -> predicate -> objects, keyed by rendered text for stable order
  std::map<std::string, std::map<std::string, std::set<std::string>>> grouped;
  for (const auto& t : doc.triples) {
    grouped[render(t.subject, pm)][render(t.predicate, pm)].insert(render(t.object, pm));
  }
  for (const auto& [subject, predicates] : grouped) {
    out += "\n" + subject;
    bool firstPredicate = true;
    for (const auto& [predicate, objects] : predicates) {
      out += firstPredicate ? " " : " ;\n    ";
      firstPredicate = false;
      out += predicate;
      bool firstObject = true;
      for (const auto& object : objects) {
        out += firstObject ? " " : " , ";
        firstObject = false;
        out += object;
      }
    }
    out += " .\n";
  }
  return out;
}

std::set<Triple> tripleSet(const Document& doc) {
  return {doc.triples.begin(), doc.triples.end()};
}

}  // namespace socam
