#pragma once

// Drivers behind the `socam` executable. They write to the given streams so
// tests can run them in-process.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace socam::cli {

enum class OutputFormat { Text, LineJson };

struct RunConfig {
  std::vector<std::filesystem::path> ontologies;  // plug order
  std::filesystem::path rules;                    // empty: no rules
  std::filesystem::path trace;                    // empty: no events
  bool strict = false;
  OutputFormat format = OutputFormat::Text;
  std::vector<std::string> queries;               // "(s p o)" patterns
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssetError = 1;
inline constexpr int kExitTraceError = 2;

// Ontology module id for a file: its stem ("home.ttl" -> "home").
std::string moduleIdFor(const std::filesystem::path& path);

// Parses and loads every asset, printing each diagnostic as
// `<file>:<line>:<col>: <Code>: <message>` on `err`.
int cmdValidate(const RunConfig& config, std::ostream& out, std::ostream& err);

// Replays the trace and prints header lines, the event log and any query
// results on `out`. Skipped events are reported on `err`.
int cmdRun(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace socam::cli
