"""Aspect-oriented mini-DSL weaving with CTL model checking and trace conformance."""

from .cfg import Cfg, CfgNode, build_cfg, to_dot
from .ctl import Assignment, FinitePath, Lasso, SatResult, check_config, check_ctl, sat_set
from .formulas import eval_prop, format_formula, parse_ctl, parse_prop
from .frontend import collect_aspect_info, parse, pretty_print, tokenize
from .kripke import KripkeStructure, emit, from_cfg, load
from .pipeline import Report, emit_concern_graph, load_program, report_to_json, run_pipeline
from .properties import PropertySpec, parse_property_file
from .traces import TraceReport, check_trace, check_trace_set, parse_trace_file
from .weaving import (
    AdviceBinding,
    JoinPoint,
    Signature,
    WovenProgram,
    enumerate_join_points,
    match,
    presence_valuation,
    weave,
)

__version__ = "0.1.0"
