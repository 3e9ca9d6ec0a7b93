#pragma once

// .trc files: a header of @prefix / @provider / @service lines followed by
// one event per line:
//   <t-ms> assert <s> <p> <o> provider=<id> [class=..] [certainty=..]
//          [accuracy=..] [resolution=<n><unit>] [lifetime=<n>ms]
//   <t-ms> retract <s|*> <p|*> <o|*> [provider=<id>]

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "socam/qoc.hpp"
#include "socam/statement.hpp"
#include "socam/term.hpp"

namespace socam {

struct TraceEvent {
  enum class Kind { Assert, Retract };

  Kind kind = Kind::Assert;
  Millis time = 0;
  Triple triple;  // retract: wildcards are variables
  std::string provider;  // assert: required; retract: empty = any
  std::optional<Classification> classification;
  QualityConstraint qoc;
  std::size_t line = 0;
};

enum class ProviderKind { Internal, External };

struct ProviderDecl {
  std::string id;
  ProviderKind kind = ProviderKind::Internal;
  std::map<std::string, std::string> attributes;
};

struct ServiceDecl {
  std::string id;
  std::string action;
  TriplePattern pattern;
  std::optional<Classification> classification;
  std::optional<double> minCertainty;
};

struct Trace {
  PrefixMap prefixes;
  std::vector<ProviderDecl> providers;
  std::vector<ServiceDecl> services;
  std::vector<TraceEvent> events;
};

// Errors: SyntaxError, UnknownPrefix, UnterminatedLiteral, UnsortedTrace.
Trace parseTrace(std::string_view text);

// Errors: UnsortedTrace.
void checkSorted(const std::vector<TraceEvent>& events);

}  // namespace socam
