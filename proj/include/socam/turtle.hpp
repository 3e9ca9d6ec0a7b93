#pragma once

// Reader/writer for the Turtle subset used by ontology and instance files:
// @prefix, `;` and `,` continuations, `a`, <iri>, prefix:local, _:label,
// plain/typed literals, numbers, booleans and `#` comments. Anonymous `[ ]`
// property lists are rejected.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "socam/term.hpp"

namespace socam {

struct Document {
  PrefixMap prefixes;
  std::vector<Triple> triples;  // document order
};

struct TurtleOptions {
  // Bindings available before the first @prefix line.
  PrefixMap initialPrefixes;
};

Document parseTurtle(std::string_view text, const TurtleOptions& options = {});

// Deterministic: prefixes by name, subjects sorted, predicates grouped and
// sorted, objects sorted; duplicate triples collapse.
std::string serializeTurtle(const Document& doc);

std::set<Triple> tripleSet(const Document& doc);

}  // namespace socam
