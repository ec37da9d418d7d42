#include "hivabm/trace_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace hivabm {
namespace {

// Insertion-ordered JSON keeps every emitted document in canonical key
// order, which is what makes re-exports byte-identical.
using ordered_json = nlohmann::ordered_json;

ordered_json parse_file(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error(std::string(what) + " file " + path +
                             ": cannot open for reading");
  }
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string(what) + " file " + path + ": " +
                             e.what());
  }
}

ordered_json config_to_json(const SimConfig& cfg) {
  ordered_json j;
  j["max_primary"] = cfg.max_primary;
  j["max_secondary"] = cfg.max_secondary;
  j["max_fsw"] = cfg.max_fsw;
  j["max_infected_fsw"] = cfg.max_infected_fsw;
  j["max_exsecondary"] = cfg.max_exsecondary;
  j["tobecoupled"] = cfg.tobecoupled;
  j["commitment"] = cfg.commitment.value();
  j["condom_usage"] = cfg.condom_usage.value();
  j["couplings_per_month"] = cfg.couplings_per_month;
  j["avg_client_month"] = cfg.avg_client_month;
  j["fsw_preference"] = cfg.fsw_preference;
  j["transmission_probability"] = cfg.transmission_probability;
  j["ticks"] = cfg.ticks;
  j["seed"] = cfg.seed;
  return j;
}

// Strict field-by-field parse. Every problem is collected rather than thrown
// so a bad file is reported in one pass; returns false when problems exist.
bool config_from_json(const ordered_json& j, SimConfig& cfg,
                      std::vector<std::string>& problems) {
  if (!j.is_object()) {
    problems.push_back("config must be a JSON object");
    return false;
  }

  static const char* const known[] = {
      "max_primary",     "max_secondary",
      "max_fsw",         "max_infected_fsw",
      "max_exsecondary", "tobecoupled",
      "commitment",      "condom_usage",
      "couplings_per_month", "avg_client_month",
      "fsw_preference",  "transmission_probability",
      "ticks",           "seed",
  };
  for (const auto& item : j.items()) {
    bool recognized = false;
    for (const char* key : known) recognized |= item.key() == key;
    if (!recognized) problems.push_back("unknown key \"" + item.key() + "\"");
  }

  auto get_int = [&](const char* key, int& out) {
    if (!j.contains(key)) {
      problems.push_back("missing required key \"" + std::string(key) + "\"");
      return false;
    }
    if (!j.at(key).is_number_integer()) {
      problems.push_back("key \"" + std::string(key) +
                         "\" must be an integer");
      return false;
    }
    out = j.at(key).get<int>();
    return true;
  };
  auto get_percent = [&](const char* key, Percent& out) {
    int raw = 0;
    if (!get_int(key, raw)) return;
    if (raw < 0 || raw > 100) {
      problems.push_back("key \"" + std::string(key) +
                         "\" must be in [0, 100]");
      return;
    }
    out = Percent(raw);
  };
  auto get_probability = [&](const char* key, double& out) {
    if (!j.contains(key)) return;  // optional, default kept
    if (!j.at(key).is_number()) {
      problems.push_back("key \"" + std::string(key) + "\" must be a number");
      return;
    }
    out = j.at(key).get<double>();
  };

  get_int("max_primary", cfg.max_primary);
  get_int("max_secondary", cfg.max_secondary);
  get_int("max_fsw", cfg.max_fsw);
  get_int("max_infected_fsw", cfg.max_infected_fsw);
  get_int("max_exsecondary", cfg.max_exsecondary);
  get_int("tobecoupled", cfg.tobecoupled);
  get_percent("commitment", cfg.commitment);
  get_percent("condom_usage", cfg.condom_usage);
  get_int("couplings_per_month", cfg.couplings_per_month);
  get_int("avg_client_month", cfg.avg_client_month);
  get_probability("fsw_preference", cfg.fsw_preference);
  get_probability("transmission_probability", cfg.transmission_probability);
  get_int("ticks", cfg.ticks);

  if (!j.contains("seed")) {
    problems.push_back("missing required key \"seed\"");
  } else if (!j.at("seed").is_number_unsigned()) {
    problems.push_back("key \"seed\" must be a non-negative integer");
  } else {
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  return problems.empty();
}

ordered_json event_to_json(const CouplingEvent& event) {
  ordered_json j;
  j["tick"] = event.tick;
  j["male"] = event.male;
  j["female"] = event.female;
  j["protected"] = event.protected_act;
  if (event.transmission) {
    j["transmission"] = ordered_json{{"infected", event.transmission->infected},
                                     {"source", event.transmission->source}};
  } else {
    j["transmission"] = nullptr;
  }
  return j;
}

ordered_json counters_to_json(const CounterSnapshot& snap) {
  ordered_json j;
  j["tick"] = snap.tick;
  for (const CounterField& field : counter_fields()) {
    j[field.name] = snap.*field.member;
  }
  return j;
}

bool counters_from_json(const ordered_json& j, CounterSnapshot& snap,
                        const std::string& where,
                        std::vector<std::string>& problems) {
  if (!j.is_object()) {
    problems.push_back(where + ": must be a JSON object");
    return false;
  }
  bool ok = true;
  auto get = [&](const char* key, auto& out) {
    if (!j.contains(key) || !j.at(key).is_number_integer()) {
      problems.push_back(where + ": missing or non-integer \"" +
                         std::string(key) + "\"");
      ok = false;
      return;
    }
    out = j.at(key).get<std::remove_reference_t<decltype(out)>>();
  };
  get("tick", snap.tick);
  for (const CounterField& field : counter_fields()) {
    get(field.name, snap.*field.member);
  }
  return ok;
}

bool trace_file_from_json(const ordered_json& j, TraceFile& out,
                          std::vector<std::string>& problems) {
  if (!j.is_object()) {
    problems.push_back("trace must be a JSON object");
    return false;
  }
  for (const char* key : {"config", "seed", "events", "final_counters"}) {
    if (!j.contains(key)) {
      problems.push_back("missing required key \"" + std::string(key) + "\"");
    }
  }
  if (!problems.empty()) return false;

  {
    std::vector<std::string> config_problems;
    if (!config_from_json(j.at("config"), out.config, config_problems)) {
      for (const std::string& p : config_problems) {
        problems.push_back("config: " + p);
      }
    }
  }
  if (!j.at("seed").is_number_unsigned()) {
    problems.push_back("\"seed\" must be a non-negative integer");
  } else {
    out.seed = j.at("seed").get<std::uint64_t>();
  }
  if (!j.at("events").is_array()) {
    problems.push_back("\"events\" must be an array");
  } else {
    out.events.reserve(j.at("events").size());
    std::size_t index = 0;
    for (const ordered_json& ej : j.at("events")) {
      const std::string where = "event " + std::to_string(index++);
      CouplingEvent event;
      if (!ej.is_object() || !ej.contains("tick") || !ej.contains("male") ||
          !ej.contains("female") || !ej.contains("protected") ||
          !ej.contains("transmission") || !ej.at("tick").is_number_integer() ||
          !ej.at("male").is_number_unsigned() ||
          !ej.at("female").is_number_unsigned() ||
          !ej.at("protected").is_boolean()) {
        problems.push_back(where + ": malformed");
        continue;
      }
      event.tick = ej.at("tick").get<int>();
      event.male = ej.at("male").get<PersonId>();
      event.female = ej.at("female").get<PersonId>();
      event.protected_act = ej.at("protected").get<bool>();
      const ordered_json& tj = ej.at("transmission");
      if (!tj.is_null()) {
        if (!tj.is_object() || !tj.contains("infected") ||
            !tj.contains("source") || !tj.at("infected").is_number_unsigned() ||
            !tj.at("source").is_number_unsigned()) {
          problems.push_back(where + ": malformed transmission");
          continue;
        }
        event.transmission = CouplingEvent::Transmission{
            tj.at("infected").get<PersonId>(), tj.at("source").get<PersonId>()};
      }
      out.events.push_back(event);
    }
  }
  counters_from_json(j.at("final_counters"), out.final_counters,
                     "final_counters", problems);
  return problems.empty();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  out << text;
}

}  // namespace

SimConfig load_config(const std::string& path) {
  const ordered_json j = parse_file(path, "config");
  SimConfig cfg;
  std::vector<std::string> problems;
  config_from_json(j, cfg, problems);
  if (problems.empty()) {
    for (const std::string& violation : validate_config(cfg)) {
      problems.push_back(violation);
    }
  }
  if (!problems.empty()) {
    std::ostringstream message;
    message << "config file " << path << ":";
    for (const std::string& p : problems) message << "\n  - " << p;
    throw std::invalid_argument(message.str());
  }
  return cfg;
}

void write_config(const SimConfig& cfg, const std::string& path) {
  write_text(path, config_to_json(cfg).dump(2) + "\n");
}

void write_trace_json(const Trace& trace, const std::string& path) {
  ordered_json j;
  j["config"] = config_to_json(trace.config);
  j["seed"] = trace.seed;
  ordered_json events = ordered_json::array();
  for (const CouplingEvent& event : trace.events) {
    events.push_back(event_to_json(event));
  }
  j["events"] = std::move(events);
  j["final_counters"] = counters_to_json(compute_counters(trace.final_state));
  write_text(path, j.dump() + "\n");
}

TraceFile load_trace_json(const std::string& path) {
  const ordered_json j = parse_file(path, "trace");
  TraceFile tf;
  std::vector<std::string> problems;
  if (!trace_file_from_json(j, tf, problems)) {
    std::ostringstream message;
    message << "trace file " << path << ":";
    for (const std::string& p : problems) message << "\n  - " << p;
    throw std::runtime_error(message.str());
  }
  return tf;
}

contracts::ValidationReport validate_trace_file(const std::string& path) {
  const ordered_json j = parse_file(path, "trace");
  TraceFile tf;
  contracts::ValidationReport report;
  if (!trace_file_from_json(j, tf, report.structural_errors)) {
    report.pass = false;
    return report;
  }
  report = contracts::validate_events(tf.config, tf.events, {}, nullptr,
                                      &tf.final_counters);
  if (tf.seed != tf.config.seed) {
    report.structural_errors.push_back(
        "trace seed " + std::to_string(tf.seed) +
        " differs from config seed " + std::to_string(tf.config.seed));
    report.pass = false;
  }
  return report;
}

void write_timeseries_csv(const Trace& trace, const std::string& path) {
  std::vector<long long> new_infections(trace.snapshots.size(), 0);
  for (const CouplingEvent& event : trace.events) {
    if (event.transmission && event.tick >= 1 &&
        static_cast<std::size_t>(event.tick) <= new_infections.size()) {
      ++new_infections[static_cast<std::size_t>(event.tick) - 1];
    }
  }

  std::ostringstream csv;
  csv << "tick";
  for (const CounterField& field : counter_fields()) csv << ',' << field.name;
  csv << ",new_infections\n";
  for (std::size_t i = 0; i < trace.snapshots.size(); ++i) {
    const CounterSnapshot& snap = trace.snapshots[i];
    csv << snap.tick;
    for (const CounterField& field : counter_fields()) {
      csv << ',' << snap.*field.member;
    }
    csv << ',' << new_infections[i] << '\n';
  }
  write_text(path, csv.str());
}

std::string report_to_json(const contracts::ValidationReport& report) {
  ordered_json j;
  j["pass"] = report.pass;
  j["structural_errors"] = report.structural_errors;
  ordered_json violations = ordered_json::array();
  for (const contracts::Violation& v : report.violations) {
    violations.push_back(ordered_json{{"schema", v.schema},
                                      {"subject", v.subject},
                                      {"description", v.description},
                                      {"tick", v.tick}});
  }
  j["violations"] = std::move(violations);
  j["mismatches"] = report.mismatches;
  return j.dump(2) + "\n";
}

}  // namespace hivabm
