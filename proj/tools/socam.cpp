// socam: validate context assets and replay traces through the engine.
//
//   socam validate --ontology upper.ttl --ontology home.ttl --rules home.rules
//   socam run --ontology upper.ttl --ontology home.ttl --rules home.rules \
//             --trace scenario.trc --query "(?a home:feasible ?v)"

#include <cstdlib>
#include <iostream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "socam/cli.hpp"

namespace {

void setupLogging() {
  auto logger = spdlog::stderr_color_mt("socam");
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("SOCAM_LOG")) {
    std::string level = env;
    if (level == "debug") spdlog::set_level(spdlog::level::debug);
    else if (level == "info") spdlog::set_level(spdlog::level::info);
  }
}

void addAssetOptions(CLI::App* cmd, socam::cli::RunConfig& config) {
  // missing files are reported by the commands so the exit code says which kind
  cmd->add_option("--ontology", config.ontologies, "Ontology file (.ttl); repeat in plug order");
  cmd->add_option("--rules", config.rules, "Rule file (.rules)");
  cmd->add_option("--trace", config.trace, "Event trace (.trc)");
  cmd->add_flag("--strict", config.strict, "Reject undeclared predicates and classifications");
}

}  // namespace

int main(int argc, char** argv) {
  setupLogging();
  CLI::App app{"SOCAM context engine"};
  app.require_subcommand(1);

  socam::cli::RunConfig config;
  auto* validate = app.add_subcommand("validate", "Parse and load assets; report diagnostics");
  addAssetOptions(validate, config);

  auto* run = app.add_subcommand("run", "Replay a trace and print the event log");
  addAssetOptions(run, config);
  std::string format = "text";
  run->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "line-json"}))
      ->capture_default_str();
  run->add_option("--query", config.queries, "Pattern to query after the run, e.g. \"(?s home:locatedAt ?o)\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : socam::cli::kExitAssetError;
  }

  if (validate->parsed()) return socam::cli::cmdValidate(config, std::cout, std::cerr);
  if (format == "line-json") config.format = socam::cli::OutputFormat::LineJson;
  return socam::cli::cmdRun(config, std::cout, std::cerr);
}
