/*
 * Python bindings for the simulator core: configuration, single runs,
 * replicated sweeps with aggregation and export, and trace validation.
 * Thin by design — all behavior lives in the C++ library.
 */
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <stdexcept>

#include "hivabm/contracts.hpp"
#include "hivabm/engine.hpp"
#include "hivabm/experiments.hpp"
#include "hivabm/trace_io.hpp"

namespace py = pybind11;
using namespace hivabm;

namespace {

// Percent fields are exposed as plain ints with a python-friendly error.
void set_percent(Percent& field, const char* name, int value) {
  if (value < 0 || value > 100) {
    throw std::invalid_argument(std::string(name) + " must be in [0, 100]");
  }
  field = Percent(value);
}

py::dict snapshot_dict(const CounterSnapshot& snap) {
  py::dict d;
  d["tick"] = snap.tick;
  for (const CounterField& field : counter_fields()) {
    d[field.name] = snap.*(field.member);
  }
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "agent-based simulator of HIV spread across four sub-populations";

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("max_primary", &SimConfig::max_primary)
      .def_readwrite("max_secondary", &SimConfig::max_secondary)
      .def_readwrite("max_fsw", &SimConfig::max_fsw)
      .def_readwrite("max_infected_fsw", &SimConfig::max_infected_fsw)
      .def_readwrite("max_exsecondary", &SimConfig::max_exsecondary)
      .def_readwrite("tobecoupled", &SimConfig::tobecoupled)
      .def_property(
          "commitment",
          [](const SimConfig& cfg) { return cfg.commitment.value(); },
          [](SimConfig& cfg, int value) {
            set_percent(cfg.commitment, "commitment", value);
          })
      .def_property(
          "condom_usage",
          [](const SimConfig& cfg) { return cfg.condom_usage.value(); },
          [](SimConfig& cfg, int value) {
            set_percent(cfg.condom_usage, "condom_usage", value);
          })
      .def_readwrite("couplings_per_month", &SimConfig::couplings_per_month)
      .def_readwrite("avg_client_month", &SimConfig::avg_client_month)
      .def_readwrite("fsw_preference", &SimConfig::fsw_preference)
      .def_readwrite("transmission_probability",
                     &SimConfig::transmission_probability)
      .def_readwrite("ticks", &SimConfig::ticks)
      .def_readwrite("seed", &SimConfig::seed)
      .def(py::self == py::self);

  m.def("validate_config", &validate_config, py::arg("config"),
        "One message per broken config invariant; empty when valid.");
  m.def("load_config", &load_config, py::arg("path"));
  m.def("write_config", &write_config, py::arg("config"), py::arg("path"));

  py::class_<CouplingEvent>(m, "CouplingEvent")
      .def_readonly("tick", &CouplingEvent::tick)
      .def_readonly("male", &CouplingEvent::male)
      .def_readonly("female", &CouplingEvent::female)
      .def_readonly("protected_act", &CouplingEvent::protected_act)
      .def_property_readonly(
          "transmission",
          [](const CouplingEvent& event) -> py::object {
            if (!event.transmission) return py::none();
            return py::make_tuple(event.transmission->infected,
                                  event.transmission->source);
          },
          "(infected_id, source_id) or None")
      .def("__repr__", [](const CouplingEvent& event) {
        std::ostringstream out;
        out << "CouplingEvent(tick=" << event.tick << ", male=" << event.male
            << ", female=" << event.female
            << ", protected_act=" << (event.protected_act ? "True" : "False")
            << ", transmission=";
        if (event.transmission) {
          out << "(" << event.transmission->infected << ", "
              << event.transmission->source << ")";
        } else {
          out << "None";
        }
        out << ")";
        return out.str();
      });

  py::class_<CounterSnapshot>(m, "CounterSnapshot")
      .def_readonly("tick", &CounterSnapshot::tick)
      .def_readonly("infected_fsws", &CounterSnapshot::infected_fsws)
      .def_readonly("infected_primaries", &CounterSnapshot::infected_primaries)
      .def_readonly("infected_secondaries",
                    &CounterSnapshot::infected_secondaries)
      .def_readonly("noncommitted_secondaries",
                    &CounterSnapshot::noncommitted_secondaries)
      .def_readonly("noncommitted_infected_secondaries",
                    &CounterSnapshot::noncommitted_infected_secondaries)
      .def_readonly("total_infected", &CounterSnapshot::total_infected)
      .def_readonly("fsw_back_infected", &CounterSnapshot::fsw_back_infected)
      .def_readonly("primaries_back_infected",
                    &CounterSnapshot::primaries_back_infected)
      .def_readonly("primaries_back_infected_from_secondary",
                    &CounterSnapshot::primaries_back_infected_from_secondary)
      .def_readonly("primaries_back_infected_from_exsecondary",
                    &CounterSnapshot::primaries_back_infected_from_exsecondary)
      .def("as_dict", &snapshot_dict)
      .def(py::self == py::self);

  m.def("counter_names", &counter_names,
        "Canonical metric names, in CSV column order.");

  py::class_<Trace>(m, "Trace")
      .def_readonly("config", &Trace::config)
      .def_readonly("seed", &Trace::seed)
      .def_readonly("events", &Trace::events)
      .def_readonly("snapshots", &Trace::snapshots)
      .def_property_readonly("final_counters", [](const Trace& trace) {
        return compute_counters(trace.final_state);
      });

  m.def("run", &run, py::arg("config"),
        "Deterministic simulation of config.ticks months.");
  m.def("write_trace_json", &write_trace_json, py::arg("trace"),
        py::arg("path"));
  m.def("write_timeseries_csv", &write_timeseries_csv, py::arg("trace"),
        py::arg("path"));

  py::class_<contracts::Violation>(m, "Violation")
      .def_readonly("schema", &contracts::Violation::schema)
      .def_readonly("subject", &contracts::Violation::subject)
      .def_readonly("description", &contracts::Violation::description)
      .def_readonly("tick", &contracts::Violation::tick)
      .def("__repr__", [](const contracts::Violation& v) {
        return "Violation(schema=" + v.schema + ", subject=" + v.subject +
               ", tick=" + std::to_string(v.tick) + ")";
      });

  py::class_<contracts::ValidationReport>(m, "ValidationReport")
      .def_readonly("passed", &contracts::ValidationReport::pass)
      .def_readonly("structural_errors",
                    &contracts::ValidationReport::structural_errors)
      .def_readonly("violations", &contracts::ValidationReport::violations)
      .def_readonly("mismatches", &contracts::ValidationReport::mismatches)
      .def("summary", &contracts::ValidationReport::summary)
      .def("to_json",
           [](const contracts::ValidationReport& report) {
             return report_to_json(report);
           })
      .def("__bool__", [](const contracts::ValidationReport& report) {
        return report.pass;
      });

  m.def("validate_trace", &contracts::validate_trace, py::arg("trace"),
        "Replay a trace against every state and event predicate.");
  m.def("validate_trace_file", &validate_trace_file, py::arg("path"));

  py::class_<Aggregate>(m, "Aggregate")
      .def_readonly("n", &Aggregate::n)
      .def_readonly("min", &Aggregate::min)
      .def_readonly("max", &Aggregate::max)
      .def_readonly("mean", &Aggregate::mean)
      .def_readonly("ci_low", &Aggregate::ci_low)
      .def_readonly("ci_high", &Aggregate::ci_high)
      .def(py::self == py::self)
      .def("__repr__", [](const Aggregate& agg) {
        std::ostringstream out;
        out << "Aggregate(n=" << agg.n << ", min=" << format_decimal(agg.min)
            << ", max=" << format_decimal(agg.max)
            << ", mean=" << format_decimal(agg.mean) << ", ci=["
            << format_decimal(agg.ci_low) << ", "
            << format_decimal(agg.ci_high) << "])";
        return out.str();
      });

  m.def("aggregate", &aggregate, py::arg("values"),
        "Exact min/max/mean plus the normal-approximation 95% interval.");
  m.def("format_decimal", &format_decimal, py::arg("value"),
        "Six significant digits, plain decimal, no trailing zeros.");

  m.def("run_replicates", &run_replicates, py::arg("config"), py::arg("n"),
        py::arg("base_seed"), py::arg("threads") = 0,
        "Final-tick counters of n runs seeded base_seed + i.");

  py::class_<SweepPoint>(m, "SweepPoint")
      .def_readonly("param_value", &SweepPoint::param_value)
      .def_readonly("seeds", &SweepPoint::seeds)
      .def_readonly("replicates", &SweepPoint::replicates)
      .def_readonly("aggregates", &SweepPoint::aggregates);

  py::class_<SweepResult>(m, "SweepResult")
      .def_property_readonly(
          "param",
          [](const SweepResult& result) {
            return std::string(to_string(result.param));
          })
      .def_readonly("points", &SweepResult::points);

  m.def(
      "sweep",
      [](const SimConfig& base, const std::string& param,
         const std::vector<int>& values, int replicates,
         std::uint64_t base_seed, int threads) {
        const auto parsed = sweep_param_from_string(param);
        if (!parsed) {
          throw std::invalid_argument("unknown sweep parameter: " + param);
        }
        std::vector<Percent> points;
        points.reserve(values.size());
        for (const int value : values) {
          if (value < 0 || value > 100) {
            throw std::invalid_argument("sweep values must be in [0, 100]");
          }
          points.emplace_back(value);
        }
        return sweep(base, *parsed, points, replicates, base_seed, threads);
      },
      py::arg("base_config"), py::arg("param"), py::arg("values"),
      py::arg("replicates"), py::arg("base_seed"), py::arg("threads") = 0,
      "Sweep 'commitment' or 'condom_usage' over percent values.");

  m.def("export_sweep_csv", &export_sweep_csv, py::arg("result"),
        py::arg("path_prefix"),
        "Writes <prefix>.replicates.csv and <prefix>.aggregates.csv.");
  m.def("export_errorbar_svg", &export_errorbar_svg, py::arg("result"),
        py::arg("metric"), py::arg("path"),
        "Min-max whisker, CI box, and mean marker per sweep point.");
}
