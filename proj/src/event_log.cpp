#include "socam/event_log.hpp"

#include "json.hpp"

namespace socam {

std::string_view toString(LogKind kind) {
  switch (kind) {
    case LogKind::Assert: return "assert";
    case LogKind::Retract: return "retract";
    case LogKind::Derive: return "derive";
    case LogKind::UndoDerive: return "undo-derive";
    case LogKind::ConflictResolved: return "conflict-resolved";
    case LogKind::Action: return "action";
  }
  return "?";
}

std::string formatText(const LogEvent& event, const PrefixMap& prefixes) {
  std::string out = std::to_string(event.time) + " " + std::string(toString(event.kind));
  if (event.triple) out += " " + render(*event.triple, &prefixes);
  for (const auto& [key, value] : event.fields) out += " " + key + "=" + value;
  return out;
}

std::string formatJson(const LogEvent& event, const PrefixMap& prefixes) {
  nlohmann::ordered_json j;
  j["t"] = event.time;
  j["kind"] = toString(event.kind);
  if (event.triple) {
    j["s"] = render(event.triple->subject, &prefixes);
    j["p"] = render(event.triple->predicate, &prefixes);
    j["o"] = render(event.triple->object, &prefixes);
  }
  for (const auto& [key, value] : event.fields) j[key] = value;
  return j.dump();
}

}  // namespace socam
