#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "socam/qoc.hpp"
#include "socam/term.hpp"

namespace socam {

enum class LogKind { Assert, Retract, Derive, UndoDerive, ConflictResolved, Action };

std::string_view toString(LogKind kind);

struct LogEvent {
  Millis time = 0;
  LogKind kind = LogKind::Assert;
  std::optional<Triple> triple;
  std::vector<std::pair<std::string, std::string>> fields;  // rendered, in order

  bool operator==(const LogEvent&) const = default;
};

// `<t> <kind> [<s> <p> <o>] key=value ...`
std::string formatText(const LogEvent& event, const PrefixMap& prefixes);
// One JSON object: {"t":..,"kind":..,"s":..,"p":..,"o":..,<fields>}
std::string formatJson(const LogEvent& event, const PrefixMap& prefixes);

}  // namespace socam
