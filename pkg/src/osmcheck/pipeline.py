"""End-to-end verification: parse, weave, build models, check, report.

Violations are reported with a nonzero exit so the developer can edit
the sources and re-run; there is no automated revision step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .cfg import build_cfg
from .ctl import Assignment, FinitePath, Lasso, check_config, check_ctl
from .errors import OsmError, UnknownMethodError
from .formulas import And, Atom, Implies
from .frontend import merge_programs, parse
from .kripke import from_cfg
from .nodes import Program
from .properties import PropertySpec
from .weaving import presence_valuation, weave


@dataclass(frozen=True)
class ReportEntry:
    name: str
    kind: str
    target: object
    holds: bool
    evidence: object


@dataclass(frozen=True)
class Report:
    entries: tuple
    stats: dict
    warnings: tuple
    status: str  # "pass" | "fail"


def load_program(paths) -> Program:
    """Parse and merge a set of `.osm` files (directories are expanded)."""
    files = []
    for p in paths:
        p = Path(p)
        if p.is_dir():
            files.extend(sorted(p.glob("*.osm")))
        elif p.exists():
            files.append(p)
        else:
            raise OsmError(f"no such source: {p}")
    if not files:
        raise OsmError("no .osm source files found")
    programs = []
    for f in files:
        try:
            programs.append(parse(f.read_text(encoding="utf-8"), check_precedence=False))
        except OsmError as exc:
            raise OsmError(f"{f}: {exc}") from exc
    return merge_programs(programs)


def run_pipeline(program: Program, spec: PropertySpec, strict_atoms: bool = False, inline_depth: int = 16) -> Report:
    """Weave, build one model per ctl target, and check every entry."""
    woven = weave(program)
    valuation = presence_valuation(woven, spec.aliases)
    warnings = []
    models = {}
    for entry in spec.entries:
        if entry.kind == "ctl" and entry.target not in models:
            if program.find_method(entry.target) is None:
                raise UnknownMethodError(f"ctl entry {entry.name!r} targets unknown method {entry.target!r}")
            models[entry.target] = from_cfg(build_cfg(woven, entry.target, inline_depth))

    entries = []
    for entry in spec.entries:
        if entry.kind == "config":
            (_, result), = check_config([(entry.name, entry.formula)], valuation)
        else:
            result = check_ctl(models[entry.target], entry.formula, strict_atoms, warnings)
        entries.append(ReportEntry(entry.name, entry.kind, entry.target, result.holds, result.evidence))

    stats = {
        "bindings": len(woven.bindings),
        "models": {
            target: {"states": len(m.states), "transitions": len(m.transitions)}
            for target, m in sorted(models.items())
        },
    }
    status = "pass" if all(e.holds for e in entries) else "fail"
    return Report(tuple(entries), stats, tuple(warnings), status)


def evidence_to_json(evidence):
    if evidence is None:
        return None
    if isinstance(evidence, Assignment):
        return {"kind": "assignment", "valuation": dict(sorted(evidence.valuation.items()))}
    if isinstance(evidence, FinitePath):
        return {"kind": "path", "states": list(evidence.states)}
    if isinstance(evidence, Lasso):
        return {"kind": "lasso", "prefix": list(evidence.prefix), "cycle": list(evidence.cycle)}
    raise TypeError(f"unknown evidence {evidence!r}")  # pragma: no cover


def report_to_json(report: Report) -> str:
    doc = {
        "version": 1,
        "entries": [
            {
                "name": e.name,
                "kind": e.kind,
                "target": e.target,
                "holds": e.holds,
                "evidence": evidence_to_json(e.evidence),
            }
            for e in report.entries
        ],
        "stats": report.stats,
        "warnings": list(report.warnings),
        "status": report.status,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def emit_concern_graph(named_formulas, warnings=None) -> str:
    """DOT digraph of concern dependencies from implication formulas.

    A formula `X -> (Y1 & ... & Yn)` with atomic X and Yi contributes
    edges X->Yi; any other shape is skipped with a warning.
    """
    edges = []

    def flatten_conj(f):
        if isinstance(f, Atom):
            return [f.name]
        if isinstance(f, And):
            left = flatten_conj(f.left)
            right = flatten_conj(f.right)
            if left is None or right is None:
                return None
            return left + right
        return None

    for name, formula in named_formulas:
        atoms = None
        if isinstance(formula, Implies) and isinstance(formula.left, Atom):
            atoms = flatten_conj(formula.right)
        if atoms is None:
            if warnings is not None:
                warnings.append(f"{name}: not of the form X -> (Y1 & ... & Yn); skipped")
            continue
        for target in atoms:
            edge = (formula.left.name, target)
            if edge not in edges:
                edges.append(edge)

    lines = ["digraph concerns {"]
    for src, dst in edges:
        lines.append(f"  {src} -> {dst};")
    lines.append("}")
    return "\n".join(lines) + "\n"
