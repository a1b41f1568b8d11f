"""Line-oriented `.props` property files: aliases plus named config/ctl entries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import FormulaParseError, PropertySpecError
from .formulas import parse_ctl, parse_prop


@dataclass(frozen=True)
class PropertyEntry:
    name: str
    kind: str  # "config" | "ctl"
    target: Optional[str]  # qualified method name; required for ctl
    text: str
    formula: object


@dataclass(frozen=True)
class PropertySpec:
    aliases: dict  # aspect name -> concern id
    entries: tuple


def parse_property_file(text: str) -> PropertySpec:
    aliases = {}
    entries = []
    names = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head, _, rest = line.partition(" ")
        if head == "alias":
            key, sep, value = rest.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key or not value:
                raise PropertySpecError(lineno, "expected `alias AspectName = ConcernId`")
            if key in aliases:
                raise PropertySpecError(lineno, f"duplicate alias for {key!r}")
            aliases[key] = value
        elif head in ("config", "ctl"):
            decl, sep, formula_text = rest.partition(":")
            if not sep:
                raise PropertySpecError(lineno, f"expected `:` in {head} entry")
            decl = decl.strip()
            formula_text = formula_text.strip()
            target = None
            if head == "ctl":
                name, at, target = decl.partition("@")
                name, target = name.strip(), target.strip()
                if not at or not target or "." not in target:
                    raise PropertySpecError(lineno, "expected `ctl name @ Type.method: formula`")
            else:
                name = decl
            if not name:
                raise PropertySpecError(lineno, "entry name is empty")
            if name in names:
                raise PropertySpecError(lineno, f"duplicate entry name {name!r}")
            names.add(name)
            try:
                formula = parse_prop(formula_text) if head == "config" else parse_ctl(formula_text)
            except FormulaParseError as exc:
                raise PropertySpecError(lineno, f"bad formula: {exc}") from exc
            entries.append(PropertyEntry(name, head, target, formula_text, formula))
        else:
            raise PropertySpecError(lineno, f"unknown directive {head!r}")
    return PropertySpec(aliases, tuple(entries))
