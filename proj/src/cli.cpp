#include "socam/cli.hpp"

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "json.hpp"
#include "socam/error.hpp"
#include "socam/lexer.hpp"
#include "socam/ontology.hpp"
#include "socam/rules.hpp"
#include "socam/runtime.hpp"
#include "socam/trace.hpp"
#include "socam/turtle.hpp"

namespace socam::cli {

namespace fs = std::filesystem;

namespace {

std::optional<std::string> readFile(const fs::path& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << path.string() << ": cannot open file\n";
    return std::nullopt;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void report(std::ostream& err, const fs::path& path, const Error& e) {
  err << path.string() << (e.where() ? ":" : ": ") << e.what() << "\n";
}

struct Assets {
  std::vector<Schema> schemas;
  Ontology ontology;
  RuleSet rules;
  Trace trace{PrefixMap::wellKnown(), {}, {}, {}};
  int status = kExitOk;
};

// Loads everything it can; `status` is the worst failure seen.
Assets loadAssets(const RunConfig& config, std::ostream& err, bool showWarnings) {
  Assets assets;
  auto fail = [&](int code) { assets.status = std::max(assets.status, code); };
  if (config.ontologies.empty()) {
    err << "at least one --ontology is required\n";
    fail(kExitAssetError);
  }

  for (const auto& path : config.ontologies) {
    auto text = readFile(path, err);
    if (!text) {
      fail(kExitAssetError);
      continue;
    }
    try {
      auto doc = parseTurtle(*text);
      auto schema = loadSchema(doc, moduleIdFor(path), {config.strict, &assets.ontology});
      for (const auto& w : schema.warnings) {
        if (showWarnings) err << path.string() << ": warning: " << w << "\n";
        spdlog::debug("{}: {}", path.string(), w);
      }
      assets.ontology.plug(schema);
      spdlog::info("plugged module '{}' from {}: {} classes, {} properties", schema.moduleId,
                   path.string(), schema.classes.size(), schema.properties.size());
      assets.schemas.push_back(std::move(schema));
    } catch (const Error& e) {
      report(err, path, e);
      fail(kExitAssetError);
    }
  }

  if (!config.rules.empty()) {
    if (auto text = readFile(config.rules, err)) {
      try {
        assets.rules = parseRules(*text, {PrefixMap::wellKnown(), &assets.ontology});
        spdlog::info("loaded {} rules in {} strata, {} aggregations from {}",
                     assets.rules.rules().size(), assets.rules.strataCount(),
                     assets.rules.aggregations().size(), config.rules.string());
      } catch (const Error& e) {
        report(err, config.rules, e);
        fail(kExitAssetError);
      }
    } else {
      fail(kExitAssetError);
    }
  }

  if (!config.trace.empty()) {
    if (auto text = readFile(config.trace, err)) {
      try {
        assets.trace = parseTrace(*text);
        spdlog::info("read {} events, {} providers, {} services from {}",
                     assets.trace.events.size(), assets.trace.providers.size(),
                     assets.trace.services.size(), config.trace.string());
      } catch (const Error& e) {
        report(err, config.trace, e);
        fail(kExitTraceError);
      }
    } else {
      fail(kExitTraceError);
    }
  }
  return assets;
}

std::string headerText(const RunConfig& config, const Assets& assets) {
  std::string out = "# socam run strict=" + std::string(config.strict ? "true" : "false") + "\n";
  for (std::size_t i = 0; i < config.ontologies.size(); ++i) {
    out += "# module " + assets.schemas[i].moduleId + " " +
           config.ontologies[i].filename().string() + "\n";
  }
  if (!config.rules.empty()) {
    out += "# rules " + config.rules.filename().string() +
           " rules=" + std::to_string(assets.rules.rules().size()) +
           " aggregations=" + std::to_string(assets.rules.aggregations().size()) + "\n";
  }
  if (!config.trace.empty()) {
    out += "# trace " + config.trace.filename().string() +
           " events=" + std::to_string(assets.trace.events.size()) + "\n";
  }
  return out;
}

std::string headerJson(const RunConfig& config, const Assets& assets) {
  nlohmann::ordered_json h;
  h["strict"] = config.strict;
  h["modules"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < config.ontologies.size(); ++i) {
    h["modules"].push_back({{"id", assets.schemas[i].moduleId},
                            {"file", config.ontologies[i].filename().string()}});
  }
  if (!config.rules.empty()) {
    h["rules"] = {{"file", config.rules.filename().string()},
                  {"rules", assets.rules.rules().size()},
                  {"aggregations", assets.rules.aggregations().size()}};
  }
  if (!config.trace.empty()) {
    h["trace"] = {{"file", config.trace.filename().string()},
                  {"events", assets.trace.events.size()}};
  }
  nlohmann::ordered_json j;
  j["header"] = std::move(h);
  return j.dump() + "\n";
}

}  // namespace

std::string moduleIdFor(const fs::path& path) { return path.stem().string(); }

int cmdValidate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto assets = loadAssets(config, err, /*showWarnings=*/true);
  if (assets.status == kExitOk) {
    out << "ok: " << assets.schemas.size() << " modules, " << assets.rules.rules().size()
        << " rules, " << assets.trace.events.size() << " events\n";
  }
  return assets.status;
}

int cmdRun(const RunConfig& config, std::ostream& out, std::ostream& err) {
  auto assets = loadAssets(config, err, /*showWarnings=*/false);
  if (assets.status != kExitOk) return assets.status;

  const PrefixMap& prefixes = assets.trace.prefixes;
  std::vector<TriplePattern> queries;
  for (const auto& q : config.queries) {
    try {
      queries.push_back(parsePattern(q, prefixes));
    } catch (const Error& e) {
      err << "--query '" << q << "': " << e.what() << "\n";
      return kExitAssetError;
    }
  }

  bool json = config.format == OutputFormat::LineJson;
  std::string header = json ? headerJson(config, assets) : headerText(config, assets);

  Engine engine({.strict = config.strict});
  engine.setPrefixes(prefixes);
  std::vector<CycleReport> cycles;
  try {
    for (auto& schema : assets.schemas) engine.plug(std::move(schema));
    engine.setRules(std::move(assets.rules));
    engine.configure(assets.trace);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kExitAssetError;
  }
  try {
    cycles = engine.runTrace(assets.trace.events);
  } catch (const Error& e) {
    report(err, config.trace, e);
    return kExitTraceError;
  }

  out << header;
  for (const auto& cycle : cycles) {
    for (const auto& e : cycle.errors) err << config.trace.string() << ": " << e << "\n";
    for (const auto& ev : cycle.events) {
      out << (json ? formatJson(ev, prefixes) : formatText(ev, prefixes)) << "\n";
    }
  }

  for (std::size_t i = 0; i < queries.size(); ++i) {
    auto matches = engine.query(queries[i]);
    if (json) {
      nlohmann::ordered_json j;
      j["query"] = config.queries[i];
      j["results"] = nlohmann::ordered_json::array();
      for (const auto& m : matches) {
        const auto& t = m.statement.triple;
        j["results"].push_back({{"s", render(t.subject, &prefixes)},
                                {"p", render(t.predicate, &prefixes)},
                                {"o", render(t.object, &prefixes)}});
      }
      out << j.dump() << "\n";
    } else {
      out << "# query " << config.queries[i] << " results=" << matches.size() << "\n";
      for (const auto& m : matches) out << render(m.statement.triple, &prefixes) << "\n";
    }
  }
  return kExitOk;
}

}  // namespace socam::cli
