#pragma once

// The middleware runtime: context providers feed events to the interpreter
// (KB + reasoner + conflict resolver); context-aware services subscribe to
// patterns and emit ActionRecords; everything advertises itself in the
// service registry.

#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "socam/conflict.hpp"
#include "socam/event_log.hpp"
#include "socam/kb.hpp"
#include "socam/reasoner.hpp"
#include "socam/rules.hpp"
#include "socam/trace.hpp"

namespace socam {

enum class ServiceType { Provider, Interpreter, ApplicationService };

std::string_view toString(ServiceType type);

struct ServiceEntry {
  std::string id;
  ServiceType type = ServiceType::Provider;
  std::map<std::string, std::string> attributes;

  bool operator==(const ServiceEntry&) const = default;
};

// Service locating service.
class ServiceRegistry {
 public:
  // Errors: DuplicateServiceId.
  void advertise(ServiceEntry entry);
  bool withdraw(std::string_view id);
  // Entries whose attributes equal every query value (key "type" matches the
  // entry type), ordered by id. An empty query returns everything.
  std::vector<ServiceEntry> lookup(const std::map<std::string, std::string>& query) const;
  bool contains(std::string_view id) const { return entries_.count(std::string(id)) > 0; }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<std::string, ServiceEntry> entries_;
};

class ContextProvider {
 public:
  ContextProvider(std::string id, ProviderKind kind,
                  std::map<std::string, std::string> attributes = {})
      : id_(std::move(id)), kind_(kind), attributes_(std::move(attributes)) {}

  const std::string& id() const noexcept { return id_; }
  ProviderKind kind() const noexcept { return kind_; }
  const std::map<std::string, std::string>& attributes() const noexcept { return attributes_; }
  ServiceEntry advertisement() const;

  // Builds an assert event stamped with this provider's id.
  TraceEvent observe(Millis time, Triple triple, QualityConstraint qoc = {},
                     std::optional<Classification> classification = std::nullopt) const;
  TraceEvent withdraw(Millis time, TriplePattern pattern) const;

 private:
  std::string id_;
  ProviderKind kind_;
  std::map<std::string, std::string> attributes_;
};

// Multi-producer queue; drain() hands events to the single engine thread in
// (time, arrival) order.
class EventQueue {
 public:
  void push(TraceEvent event);
  std::vector<TraceEvent> drain();

 private:
  std::mutex mutex_;
  std::vector<std::pair<std::size_t, TraceEvent>> pending_;
  std::size_t arrivals_ = 0;
};

struct Subscription {
  TriplePattern pattern;
  std::optional<Classification> classification;
  std::optional<double> minCertainty;
};

struct ContextAwareService {
  std::string id;
  std::string action;
  Subscription subscription;
};

struct ActionRecord {
  Millis time = 0;
  std::string serviceId;
  std::string action;
  Bindings params;
  bool activation = true;  // false: the matched context went away

  bool operator==(const ActionRecord&) const = default;
};

struct CycleReport {
  Millis time = 0;
  std::vector<LogEvent> events;
  std::vector<ContextStatement> asserted;
  std::vector<ContextStatement> retracted;
  std::vector<ContextStatement> derived;
  std::vector<ContextStatement> underived;
  std::vector<ConflictSet> resolutions;
  std::vector<ActionRecord> actions;
  std::vector<std::string> errors;  // skipped events
};

struct EngineOptions {
  bool strict = false;
  std::string interpreterId = std::string(kInterpreterId);
  std::size_t maxSettleRounds = 16;
  std::size_t iterationBudget = 10'000;
};

class Engine {
 public:
  explicit Engine(EngineOptions options = {});

  // Re-derives when statements already exist (rules may become active).
  void plug(Schema schema);
  // Unplugs the module, drops its statements and re-derives.
  CycleReport unplug(std::string_view moduleId);
  void setRules(RuleSet rules);
  const RuleSet& rules() const noexcept { return rules_; }
  // Used to render log field values.
  void setPrefixes(PrefixMap prefixes) { prefixes_ = std::move(prefixes); }

  void registerProvider(const ContextProvider& provider);
  void addService(ContextAwareService service);
  // Adds providers and services declared in a trace header.
  void configure(const Trace& trace);

  // One mutation cycle over a batch of events (applied in order).
  CycleReport step(std::span<const TraceEvent> events);
  CycleReport step(const TraceEvent& event) { return step(std::span(&event, 1)); }
  // Folds step() over the events. Errors: UnsortedTrace.
  std::vector<CycleReport> runTrace(const std::vector<TraceEvent>& events);
  // Steps every queued event, one cycle per timestamp.
  std::vector<CycleReport> pump(EventQueue& queue);

  std::vector<QueryMatch> query(const TriplePattern& pattern, const QueryOptions& options = {}) const {
    return kb_.query(pattern, options);
  }
  const ContextKB& kb() const noexcept { return kb_; }
  ContextKB& kb() noexcept { return kb_; }
  const ServiceRegistry& registry() const noexcept { return registry_; }
  ServiceRegistry& registry() noexcept { return registry_; }

 private:
  void apply(const TraceEvent& event, CycleReport& report, std::set<Term>& changed);
  void settle(std::set<Term> changed, Millis now, CycleReport& report);
  void notify(Millis now, CycleReport& report);
  InferOptions inferOptions() const;
  bool aggregationActive(const AggregationSpec& spec) const;

  EngineOptions options_;
  ContextKB kb_;
  RuleSet rules_;
  ConflictResolver resolver_;
  ServiceRegistry registry_;
  std::vector<ContextAwareService> services_;
  // service id -> visible matches at the end of the last cycle
  std::map<std::string, std::map<StatementKey, Bindings>> active_;
  std::optional<Millis> lastCycle_;
  PrefixMap prefixes_ = PrefixMap::wellKnown();
};

std::vector<LogEvent> flattenLog(const std::vector<CycleReport>& cycles);

}  // namespace socam
