"""`osm` command line interface.

Exit codes: 0 all properties/traces pass, 1 at least one violation or
non-conforming trace, 2 usage/parse/internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .cfg import build_cfg, to_dot
from .errors import OsmError
from .frontend import collect_aspect_info
from .kripke import emit, from_cfg
from .pipeline import (
    emit_concern_graph,
    load_program,
    report_to_json,
    run_pipeline,
)
from .properties import PropertySpec, parse_property_file
from .traces import check_trace_set, parse_trace_file
from .weaving import weave


def _add_sources(parser):
    parser.add_argument("sources", nargs="+", help=".osm files or directories")


def _add_common(parser):
    parser.add_argument("--out", help="write output to this file instead of stdout")
    parser.add_argument("--inline-depth", type=int, default=16, help="inline depth limit")


def _build_argparser():
    parser = argparse.ArgumentParser(prog="osm", description="Aspect weaving and model-checking toolchain")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="syntax-check sources and list aspect info")
    _add_sources(p)

    p = sub.add_parser("weave", help="list advice bindings")
    _add_sources(p)

    p = sub.add_parser("cfg", help="emit the woven control-flow graph as DOT")
    p.add_argument("method", help="qualified method name Type.method")
    _add_sources(p)
    _add_common(p)

    p = sub.add_parser("kripke", help="emit the Kripke model")
    p.add_argument("method", help="qualified method name Type.method")
    _add_sources(p)
    _add_common(p)
    p.add_argument("--format", choices=["json", "dot"], default="json")

    p = sub.add_parser("check", help="run the full pipeline against a property file")
    _add_sources(p)
    _add_common(p)
    p.add_argument("--props", required=True, help="property file (.props)")
    p.add_argument("--alias", action="append", default=[], metavar="ASPECT=ID", help="extra concern alias")
    p.add_argument("--strict-atoms", action="store_true", help="error on atoms absent from the model")

    p = sub.add_parser("trace", help="check observed traces against a method's model")
    p.add_argument("method", help="qualified method name Type.method")
    p.add_argument("tracefile", help="trace file, one event label per line")
    _add_sources(p)
    _add_common(p)

    p = sub.add_parser("graph", help="emit the concern-dependency graph as DOT")
    p.add_argument("--props", required=True, help="property file (.props)")

    return parser


def _write(text, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_aliases(pairs):
    aliases = {}
    for pair in pairs:
        key, sep, value = pair.partition("=")
        if not sep or not key or not value:
            raise OsmError(f"bad --alias {pair!r}; expected AspectName=ConcernId")
        aliases[key] = value
    return aliases


def _load_props(path):
    p = Path(path)
    if not p.exists():
        raise OsmError(f"no such property file: {p}")
    return parse_property_file(p.read_text(encoding="utf-8"))


def _run(args) -> int:
    if args.command == "parse":
        program = load_program(args.sources)
        for info in collect_aspect_info(program):
            print(
                f"{info.name}: pointcuts={info.pointcuts} "
                f"before={info.before} after={info.after} around={info.around}"
            )
        print(f"ok: {len(program.declarations)} declarations")
        return 0

    if args.command == "weave":
        woven = weave(load_program(args.sources))
        for b in woven.bindings:
            path = ".".join(str(i) for i in b.joinpoint.path)
            sig = b.joinpoint.signature
            print(
                f"{b.joinpoint.owner}[{path}] {sig.receiver}.{sig.method}/{sig.arity}"
                f" -> {b.aspect}.{b.kind}#{b.ordinal} rank={b.rank}"
            )
        print(f"ok: {len(woven.bindings)} bindings")
        return 0

    if args.command == "cfg":
        woven = weave(load_program(args.sources))
        cfg = build_cfg(woven, args.method, args.inline_depth)
        _write(to_dot(cfg), args.out)
        return 0

    if args.command == "kripke":
        woven = weave(load_program(args.sources))
        model = from_cfg(build_cfg(woven, args.method, args.inline_depth))
        _write(emit(model, args.format), args.out)
        return 0

    if args.command == "check":
        spec = _load_props(args.props)
        aliases = dict(spec.aliases)
        aliases.update(_parse_aliases(args.alias))
        spec = PropertySpec(aliases, spec.entries)
        program = load_program(args.sources)
        report = run_pipeline(program, spec, args.strict_atoms, args.inline_depth)
        _write(report_to_json(report), args.out)
        return 0 if report.status == "pass" else 1

    if args.command == "trace":
        woven = weave(load_program(args.sources))
        model = from_cfg(build_cfg(woven, args.method, args.inline_depth))
        trace = parse_trace_file(Path(args.tracefile).read_text(encoding="utf-8"))
        report = check_trace_set(model, [trace])
        doc = {
            "version": 1,
            "traces": [
                {"conforming": v.conforming, "divergence": v.divergence} for v in report.verdicts
            ],
            "conforming": report.conforming,
            "total": report.total,
            "fraction": str(report.fraction) if report.fraction is not None else None,
            "warnings": list(report.warnings),
        }
        _write(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
        return 0 if report.conforming == report.total else 1

    if args.command == "graph":
        spec = _load_props(args.props)
        warnings = []
        named = [(e.name, e.formula) for e in spec.entries if e.kind == "config"]
        dot = emit_concern_graph(named, warnings)
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        sys.stdout.write(dot)
        return 0

    raise OsmError(f"unknown command {args.command!r}")  # pragma: no cover


def main(argv=None) -> int:
    parser = _build_argparser()
    try:
        args = parser.parse_args(argv)
        return _run(args)
    except OsmError as exc:
        print(f"osm: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"osm: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
