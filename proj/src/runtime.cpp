#include "socam/runtime.hpp"

#include <algorithm>
#include <charconv>

#include <spdlog/spdlog.h>

#include "socam/error.hpp"

namespace socam {

namespace {

std::string formatNumber(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void appendQoC(std::vector<std::pair<std::string, std::string>>& fields,
               const std::optional<QualityConstraint>& qoc) {
  if (!qoc) return;
  for (const auto& [kind, metric] : qoc->parameters()) {
    std::string value = formatNumber(metric.value);
    switch (kind) {
      case ParameterKind::Certainty: fields.emplace_back("certainty", value); break;
      case ParameterKind::Accuracy: fields.emplace_back("accuracy", value); break;
      case ParameterKind::Resolution: fields.emplace_back("resolution", value + metric.unit); break;
      case ParameterKind::Freshness: fields.emplace_back("lifetime", value + "ms"); break;
    }
  }
}

}  // namespace

std::string_view toString(ServiceType type) {
  switch (type) {
    case ServiceType::Provider: return "provider";
    case ServiceType::Interpreter: return "interpreter";
    case ServiceType::ApplicationService: return "application-service";
  }
  return "?";
}

void ServiceRegistry::advertise(ServiceEntry entry) {
  if (entries_.count(entry.id)) {
    throw Error(Errc::DuplicateServiceId, "service id '" + entry.id + "' is already advertised");
  }
  std::string id = entry.id;
  entries_.emplace(std::move(id), std::move(entry));
}

bool ServiceRegistry::withdraw(std::string_view id) {
  return entries_.erase(std::string(id)) > 0;
}

std::vector<ServiceEntry> ServiceRegistry::lookup(
    const std::map<std::string, std::string>& query) const {
  std::vector<ServiceEntry> out;
  for (const auto& [id, entry] : entries_) {
    bool ok = std::all_of(query.begin(), query.end(), [&](const auto& kv) {
      if (kv.first == "type") return toString(entry.type) == kv.second;
      auto it = entry.attributes.find(kv.first);
      return it != entry.attributes.end() && it->second == kv.second;
    });
    if (ok) out.push_back(entry);
  }
  return out;
}

ServiceEntry ContextProvider::advertisement() const {
  ServiceEntry entry{id_, ServiceType::Provider, attributes_};
  entry.attributes["kind"] = kind_ == ProviderKind::External ? "external" : "internal";
  return entry;
}

TraceEvent ContextProvider::observe(Millis time, Triple triple, QualityConstraint qoc,
                                    std::optional<Classification> classification) const {
  TraceEvent e;
  e.kind = TraceEvent::Kind::Assert;
  e.time = time;
  e.triple = std::move(triple);
  e.provider = id_;
  e.classification = classification;
  e.qoc = std::move(qoc);
  return e;
}

TraceEvent ContextProvider::withdraw(Millis time, TriplePattern pattern) const {
  TraceEvent e;
  e.kind = TraceEvent::Kind::Retract;
  e.time = time;
  e.triple = std::move(pattern);
  e.provider = id_;
  return e;
}

void EventQueue::push(TraceEvent event) {
  std::lock_guard lock(mutex_);
  pending_.emplace_back(arrivals_++, std::move(event));
}

std::vector<TraceEvent> EventQueue::drain() {
  std::vector<std::pair<std::size_t, TraceEvent>> taken;
  {
    std::lock_guard lock(mutex_);
    taken.swap(pending_);
  }
  std::stable_sort(taken.begin(), taken.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second.time, a.first) < std::tie(b.second.time, b.first);
  });
  std::vector<TraceEvent> out;
  out.reserve(taken.size());
  for (auto& [_, e] : taken) out.push_back(std::move(e));
  return out;
}

Engine::Engine(EngineOptions options)
    : options_(std::move(options)), kb_(KbOptions{options_.strict}) {
  registry_.advertise({options_.interpreterId, ServiceType::Interpreter,
                       {{"role", "context-interpreter"}}});
}

InferOptions Engine::inferOptions() const {
  return {options_.iterationBudget, options_.interpreterId};
}

void Engine::plug(Schema schema) {
  std::set<Term> declared;
  for (const auto& [iri, _] : schema.properties) declared.insert(iri);
  kb_.plug(std::move(schema));
  if (kb_.size() > 0) {
    CycleReport ignored;
    settle(std::move(declared), kb_.clock(), ignored);
  }
}

CycleReport Engine::unplug(std::string_view moduleId) {
  CycleReport report;
  Millis now = kb_.clock();
  report.time = now;
  std::set<Term> changed;
  for (auto& stmt : kb_.unplug(moduleId)) {
    changed.insert(stmt.triple.predicate);
    bool deduced = stmt.classification == Classification::Deduced;
    LogEvent ev{now, deduced ? LogKind::UndoDerive : LogKind::Retract, stmt.triple, {}};
    if (!deduced) ev.fields.emplace_back("provider", stmt.provider);
    ev.fields.emplace_back("reason", "unplug");
    report.events.push_back(std::move(ev));
    (deduced ? report.underived : report.retracted).push_back(std::move(stmt));
  }
  settle(std::move(changed), now, report);
  notify(now, report);
  lastCycle_ = now;
  return report;
}

void Engine::setRules(RuleSet rules) { rules_ = std::move(rules); }

void Engine::registerProvider(const ContextProvider& provider) {
  registry_.advertise(provider.advertisement());
}

void Engine::addService(ContextAwareService service) {
  ServiceEntry entry{service.id, ServiceType::ApplicationService, {{"action", service.action}}};
  if (!service.subscription.pattern.predicate.isVariable()) {
    auto wk = PrefixMap::wellKnown();
    entry.attributes["predicate"] = render(service.subscription.pattern.predicate, &wk);
  }
  registry_.advertise(std::move(entry));
  auto pos = std::lower_bound(services_.begin(), services_.end(), service.id,
                              [](const ContextAwareService& s, const std::string& id) {
                                return s.id < id;
                              });
  services_.insert(pos, std::move(service));
}

void Engine::configure(const Trace& trace) {
  prefixes_ = trace.prefixes;
  for (const auto& p : trace.providers) {
    registerProvider(ContextProvider(p.id, p.kind, p.attributes));
  }
  for (const auto& s : trace.services) {
    addService({s.id, s.action, {s.pattern, s.classification, s.minCertainty}});
  }
}

void Engine::apply(const TraceEvent& event, CycleReport& report, std::set<Term>& changed) {
  if (event.kind == TraceEvent::Kind::Retract) {
    std::optional<std::string_view> provider;
    if (!event.provider.empty()) provider = event.provider;
    for (auto& stmt : kb_.removeMatching(event.triple, provider, /*includeDeduced=*/false)) {
      changed.insert(stmt.triple.predicate);
      report.events.push_back(
          {event.time, LogKind::Retract, stmt.triple, {{"provider", stmt.provider}}});
      report.retracted.push_back(std::move(stmt));
    }
    return;
  }

  ContextStatement stmt;
  stmt.triple = event.triple;
  if (event.classification) {
    stmt.classification = *event.classification;
  } else if (event.triple.predicate == rdfType()) {
    stmt.classification = Classification::Defined;
  } else if (const auto* decl = kb_.ontology().property(event.triple.predicate)) {
    stmt.classification = decl->classifiedAs;
  } else {
    stmt.classification = Classification::Sensed;
  }
  if (!event.qoc.empty()) stmt.qoc = event.qoc;
  stmt.producedAt = event.time;
  stmt.provider = event.provider;

  auto result = kb_.assertStatement(stmt);
  if (!registry_.contains(event.provider)) {
    registerProvider(ContextProvider(event.provider, ProviderKind::Internal));
  }
  for (const auto& w : result.warnings) spdlog::debug("line {}: {}", event.line, w);
  changed.insert(stmt.triple.predicate);
  LogEvent ev{event.time, LogKind::Assert, stmt.triple, {}};
  ev.fields.emplace_back("provider", stmt.provider);
  ev.fields.emplace_back("class", std::string(toString(stmt.classification)));
  appendQoC(ev.fields, stmt.qoc);
  ev.fields.emplace_back("outcome", std::string(toString(result.outcome)));
  report.events.push_back(std::move(ev));
  report.asserted.push_back(std::move(stmt));
}

// Like rules, aggregations over predicates no plugged module declares are
// dormant in strict mode (e.g. after their module was unplugged).
bool Engine::aggregationActive(const AggregationSpec& spec) const {
  if (!kb_.strict()) return true;
  const Ontology& onto = kb_.ontology();
  return onto.property(spec.memberPredicate) && onto.property(spec.sourcePredicate) &&
         onto.property(spec.targetPredicate);
}

void Engine::settle(std::set<Term> changed, Millis now, CycleReport& report) {
  auto inferOpts = inferOptions();
  for (std::size_t round = 0;; ++round) {
    if (round == options_.maxSettleRounds) {
      report.errors.push_back("conflict resolution did not settle within " +
                              std::to_string(options_.maxSettleRounds) + " rounds");
      spdlog::warn("t={}: {}", now, report.errors.back());
      return;
    }
    for (const auto& spec : rules_.aggregations()) {
      if (!aggregationActive(spec)) continue;
      auto agg = aggregate(kb_, spec, now, inferOpts);
      for (auto& stmt : agg.removed) {
        changed.insert(stmt.triple.predicate);
        report.events.push_back({now, LogKind::Retract, stmt.triple, {{"provider", stmt.provider}}});
        report.retracted.push_back(std::move(stmt));
      }
      for (auto& stmt : agg.added) {
        changed.insert(stmt.triple.predicate);
        LogEvent ev{now, LogKind::Assert, stmt.triple, {}};
        ev.fields.emplace_back("provider", stmt.provider);
        ev.fields.emplace_back("class", std::string(toString(stmt.classification)));
        appendQoC(ev.fields, stmt.qoc);
        ev.fields.emplace_back("outcome", "Added");
        report.events.push_back(std::move(ev));
        report.asserted.push_back(std::move(stmt));
      }
    }

    auto conflicts = resolver_.run(kb_, now);
    changed.insert(conflicts.changedPredicates.begin(), conflicts.changedPredicates.end());
    for (auto& set : conflicts.resolved) {
      LogEvent ev{now, LogKind::ConflictResolved, set.winner->triple, {}};
      ev.fields.emplace_back("provider", set.winner->provider);
      std::string losers;
      for (const auto& l : set.losers) {
        if (!losers.empty()) losers += ",";
        losers += render(l.triple.object, &prefixes_) + "@" + l.provider;
      }
      ev.fields.emplace_back("losers", losers);
      report.events.push_back(std::move(ev));
      report.resolutions.push_back(std::move(set));
    }

    if (round > 0 && changed.empty()) return;

    auto derived = maintain(kb_, rules_, changed, now, inferOpts);
    changed.clear();
    std::sort(derived.removed.begin(), derived.removed.end(),
              [](const auto& a, const auto& b) { return a.key() < b.key(); });
    for (auto& stmt : derived.removed) {
      report.events.push_back({now, LogKind::UndoDerive, stmt.triple, {}});
      report.underived.push_back(std::move(stmt));
    }
    for (auto& stmt : derived.added) {
      LogEvent ev{now, LogKind::Derive, stmt.triple, {}};
      ev.fields.emplace_back("rule", derived.supports.at(stmt.key()).rule);
      ev.fields.emplace_back("certainty", formatNumber(stmt.effectiveCertainty()));
      report.events.push_back(std::move(ev));
      report.derived.push_back(std::move(stmt));
    }
  }
}

void Engine::notify(Millis now, CycleReport& report) {
  for (const auto& service : services_) {
    std::map<StatementKey, Bindings> current;
    const auto& sub = service.subscription;
    for (auto& m : kb_.query(sub.pattern, {.asOf = now, .freshOnly = true})) {
      if (sub.classification && m.statement.classification != *sub.classification) continue;
      if (sub.minCertainty && m.statement.effectiveCertainty() < *sub.minCertainty) continue;
      current.emplace(m.statement.key(), std::move(m.bindings));
    }
    auto& previous = active_[service.id];
    auto emit = [&](const Bindings& params, bool activation) {
      ActionRecord record{now, service.id, service.action, params, activation};
      LogEvent ev{now, LogKind::Action, std::nullopt, {}};
      ev.fields.emplace_back("service", service.id);
      ev.fields.emplace_back("action", service.action);
      ev.fields.emplace_back("phase", activation ? "activate" : "deactivate");
      for (const auto& [name, value] : params) ev.fields.emplace_back("?" + name, render(value, &prefixes_));
      report.events.push_back(std::move(ev));
      report.actions.push_back(std::move(record));
    };
    for (const auto& [key, params] : previous) {
      if (!current.count(key)) emit(params, false);
    }
    for (const auto& [key, params] : current) {
      if (!previous.count(key)) emit(params, true);
    }
    previous = std::move(current);
  }
}

CycleReport Engine::step(std::span<const TraceEvent> events) {
  CycleReport report;
  Millis now = kb_.clock();
  for (const auto& e : events) now = std::max(now, e.time);
  report.time = now;

  std::set<Term> changed;
  for (const auto& event : events) {
    try {
      apply(event, report, changed);
    } catch (const Error& e) {
      std::string message = (event.line ? "line " + std::to_string(event.line)
                                        : "t=" + std::to_string(event.time)) +
                            ": " + e.what();
      spdlog::warn("skipping event: {}", message);
      report.errors.push_back(std::move(message));
    }
  }
  kb_.advanceClock(now);

  if (lastCycle_) {
    for (const auto* s : kb_.all()) {
      auto stale = s->statement.staleFrom();
      if (stale && *stale > *lastCycle_ && *stale <= now) {
        changed.insert(s->statement.triple.predicate);
      }
    }
  }

  try {
    settle(std::move(changed), now, report);
  } catch (const Error& e) {
    spdlog::warn("t={}: {}", now, e.what());
    report.errors.push_back(e.what());
  }
  notify(now, report);
  lastCycle_ = now;
  spdlog::debug("t={}: {} asserted, {} retracted, {} derived, {} underived, {} resolutions, {} actions",
                now, report.asserted.size(), report.retracted.size(), report.derived.size(),
                report.underived.size(), report.resolutions.size(), report.actions.size());
  return report;
}

std::vector<CycleReport> Engine::runTrace(const std::vector<TraceEvent>& events) {
  checkSorted(events);
  std::vector<CycleReport> cycles;
  cycles.reserve(events.size());
  for (const auto& e : events) cycles.push_back(step(e));
  return cycles;
}

std::vector<CycleReport> Engine::pump(EventQueue& queue) {
  auto events = queue.drain();
  std::vector<CycleReport> cycles;
  std::size_t i = 0;
  while (i < events.size()) {
    std::size_t j = i;
    while (j < events.size() && events[j].time == events[i].time) ++j;
    cycles.push_back(step(std::span(events.data() + i, j - i)));
    i = j;
  }
  return cycles;
}

std::vector<LogEvent> flattenLog(const std::vector<CycleReport>& cycles) {
  std::vector<LogEvent> out;
  for (const auto& c : cycles) out.insert(out.end(), c.events.begin(), c.events.end());
  return out;
}

}  // namespace socam
