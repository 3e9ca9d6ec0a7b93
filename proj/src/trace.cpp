#include "socam/trace.hpp"

#include <charconv>
#include <sstream>

#include "socam/error.hpp"
#include "socam/lexer.hpp"

namespace socam {

namespace {

std::vector<std::string> splitWords(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word) out.push_back(word);
  return out;
}

std::pair<std::string, std::string> splitOption(const std::string& word, SourceLocation where) {
  auto eq = word.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == word.size()) {
    throw Error(Errc::SyntaxError, "expected key=value, got '" + word + "'", where);
  }
  return {word.substr(0, eq), word.substr(eq + 1)};
}

class TraceReader {
 public:
  explicit TraceReader(std::string_view text) : text_(text) {
    trace_.prefixes = PrefixMap::wellKnown();
  }

  Trace run() {
    std::size_t lineNo = 0;
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      ++lineNo;
      line(text_.substr(start, end - start), lineNo);
      start = end + 1;
    }
    checkSorted(trace_.events);
    return std::move(trace_);
  }

 private:
  void line(std::string_view text, std::size_t lineNo) {
    Lexer lexer(text, lineNo);
    if (lexer.peek().kind == TokenKind::End) return;
    Token first = lexer.next();
    if (first.kind == TokenKind::Directive) {
      directive(lexer, first);
      return;
    }
    if (first.kind != TokenKind::Integer) {
      lexer.fail(first, "expected a timestamp in milliseconds or a directive");
    }
    TraceEvent event;
    event.line = lineNo;
    auto [ptr, ec] = std::from_chars(first.text.data(), first.text.data() + first.text.size(),
                                     event.time);
    if (ec != std::errc() || event.time < 0) lexer.fail(first, "invalid timestamp");
    Token verb = lexer.next();
    if (verb.is(TokenKind::Word, "assert")) {
      event.kind = TraceEvent::Kind::Assert;
      event.triple.subject = readTerm(lexer, trace_.prefixes);
      event.triple.predicate = readTerm(lexer, trace_.prefixes);
      event.triple.object = readTerm(lexer, trace_.prefixes);
      assertOptions(lexer, event);
    } else if (verb.is(TokenKind::Word, "retract")) {
      event.kind = TraceEvent::Kind::Retract;
      event.triple.subject = wildcardOrTerm(lexer, "s");
      event.triple.predicate = wildcardOrTerm(lexer, "p");
      event.triple.object = wildcardOrTerm(lexer, "o");
      SourceLocation where = lexer.location();
      for (const auto& word : splitWords(lexer.rest())) {
        auto [key, value] = splitOption(word, where);
        if (key != "provider") {
          throw Error(Errc::SyntaxError, "retract accepts only provider=, got '" + key + "'", where);
        }
        event.provider = value;
      }
    } else {
      lexer.fail(verb, "expected 'assert' or 'retract'");
    }
    trace_.events.push_back(std::move(event));
  }

  Term wildcardOrTerm(Lexer& lexer, std::string_view name) {
    if (lexer.peek().isPunct("*")) {
      lexer.next();
      return Term::variable("_" + std::string(name));
    }
    return readTerm(lexer, trace_.prefixes);
  }

  void assertOptions(Lexer& lexer, TraceEvent& event) {
    SourceLocation where = lexer.location();
    for (const auto& word : splitWords(lexer.rest())) {
      auto [key, value] = splitOption(word, where);
      if (key == "provider") {
        event.provider = value;
      } else if (key == "class") {
        auto c = parseClassification(value);
        if (!c || *c == Classification::Deduced) {
          throw Error(Errc::SyntaxError, "class must be Sensed, Defined or Aggregated", where);
        }
        event.classification = c;
      } else {
        bool known = false;
        try {
          known = applyQoCField(event.qoc, key, value);
        } catch (const Error& e) {
          throw Error(e.code(), e.detail(), where);
        }
        if (!known) throw Error(Errc::SyntaxError, "unknown assert option '" + key + "'", where);
      }
    }
    if (event.provider.empty()) {
      throw Error(Errc::SyntaxError, "assert requires provider=<id>", where);
    }
  }

  void directive(Lexer& lexer, const Token& tok) {
    if (tok.text == "prefix") {
      readPrefixDirective(lexer, trace_.prefixes);
      return;
    }
    if (tok.text == "provider") {
      ProviderDecl decl;
      Token id = lexer.next();
      if (id.kind != TokenKind::Word) lexer.fail(id, "expected provider id");
      decl.id = id.text;
      Token kind = lexer.next();
      if (kind.is(TokenKind::Word, "internal")) {
        decl.kind = ProviderKind::Internal;
      } else if (kind.is(TokenKind::Word, "external")) {
        decl.kind = ProviderKind::External;
      } else {
        lexer.fail(kind, "expected 'internal' or 'external'");
      }
      SourceLocation where = lexer.location();
      for (const auto& word : splitWords(lexer.rest())) {
        auto [key, value] = splitOption(word, where);
        decl.attributes[key] = value;
      }
      trace_.providers.push_back(std::move(decl));
      return;
    }
    if (tok.text == "service") {
      ServiceDecl decl;
      Token id = lexer.next();
      if (id.kind != TokenKind::Word) lexer.fail(id, "expected service id");
      decl.id = id.text;
      Token action = lexer.next();
      if (action.kind != TokenKind::Word) lexer.fail(action, "expected action name");
      decl.action = action.text;
      Token open = lexer.next();
      if (!open.isPunct("(")) lexer.fail(open, "expected '(' to open the subscription pattern");
      TermOptions opts{.allowVariables = true, .allowBlank = false};
      decl.pattern.subject = readTerm(lexer, trace_.prefixes, opts);
      decl.pattern.predicate = readTerm(lexer, trace_.prefixes, opts);
      decl.pattern.object = readTerm(lexer, trace_.prefixes, opts);
      Token close = lexer.next();
      if (!close.isPunct(")")) lexer.fail(close, "expected ')' to close the subscription pattern");
      SourceLocation where = lexer.location();
      for (const auto& word : splitWords(lexer.rest())) {
        auto [key, value] = splitOption(word, where);
        if (key == "class") {
          decl.classification = parseClassification(value);
          if (!decl.classification) {
            throw Error(Errc::SyntaxError, "unknown classification '" + value + "'", where);
          }
        } else if (key == "minCertainty") {
          char* end = nullptr;
          double v = std::strtod(value.c_str(), &end);
          if (end != value.c_str() + value.size()) {
            throw Error(Errc::SyntaxError, "minCertainty expects a number", where);
          }
          decl.minCertainty = v;
        } else {
          throw Error(Errc::SyntaxError, "unknown service option '" + key + "'", where);
        }
      }
      trace_.services.push_back(std::move(decl));
      return;
    }
    lexer.fail(tok, "unsupported directive '@" + tok.text + "'");
  }

  std::string_view text_;
  Trace trace_;
};

}  // namespace

Trace parseTrace(std::string_view text) { return TraceReader(text).run(); }

void checkSorted(const std::vector<TraceEvent>& events) {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].time < events[i - 1].time) {
      throw Error(Errc::UnsortedTrace,
                  "event at t=" + std::to_string(events[i].time) + " follows t=" +
                      std::to_string(events[i - 1].time),
                  SourceLocation{events[i].line, 1});
    }
  }
}

}  // namespace socam
