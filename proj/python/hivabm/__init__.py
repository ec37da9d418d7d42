"""Agent-based simulator of HIV spread across four sub-populations.

Everything lives in the compiled core; this package just re-exports it.
"""

from ._core import (
    Aggregate,
    CouplingEvent,
    CounterSnapshot,
    SimConfig,
    SweepPoint,
    SweepResult,
    Trace,
    ValidationReport,
    Violation,
    aggregate,
    counter_names,
    export_errorbar_svg,
    export_sweep_csv,
    format_decimal,
    load_config,
    run,
    run_replicates,
    sweep,
    validate_config,
    validate_trace,
    validate_trace_file,
    write_config,
    write_timeseries_csv,
    write_trace_json,
)

__all__ = [
    "Aggregate",
    "CouplingEvent",
    "CounterSnapshot",
    "SimConfig",
    "SweepPoint",
    "SweepResult",
    "Trace",
    "ValidationReport",
    "Violation",
    "aggregate",
    "counter_names",
    "export_errorbar_svg",
    "export_sweep_csv",
    "format_decimal",
    "load_config",
    "run",
    "run_replicates",
    "sweep",
    "validate_config",
    "validate_trace",
    "validate_trace_file",
    "write_config",
    "write_timeseries_csv",
    "write_trace_json",
]
