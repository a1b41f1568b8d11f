"""Kripke structures: CFG translation, JSON/DOT emission and loading."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .cfg import ACTION, BRANCH, ENTRY, ERROR, EXIT, Cfg
from .errors import EmptyInitialError, SchemaError, TotalityError


@dataclass(frozen=True, eq=True)
class KripkeStructure:
    states: frozenset
    initial: frozenset
    transitions: frozenset  # of (src, dst) pairs
    labeling: dict  # state -> frozenset of atomic propositions

    def __post_init__(self):
        object.__setattr__(self, "_succ", None)

    def successors(self, state):
        if self._succ is None:
            succ = {s: [] for s in self.states}
            for src, dst in sorted(self.transitions):
                succ[src].append(dst)
            object.__setattr__(self, "_succ", succ)
        return self._succ[state]

    def labels(self, state):
        return self.labeling[state]

    def vocabulary(self):
        vocab = set()
        for labels in self.labeling.values():
            vocab |= labels
        return vocab


def _node_labels(node):
    if node.kind == ENTRY:
        labels = {"entry"}
    elif node.kind == EXIT:
        labels = {"exit", "terminated"}
    elif node.kind == ERROR:
        labels = {"error", "terminated"}
    elif node.kind == BRANCH:
        labels = {f"action:branch:{node.label}"}
    else:  # action
        if node.call is not None:
            labels = {f"action:{node.call.method}", f"call:{node.call.receiver}.{node.call.method}"}
        else:
            labels = {f"action:{node.label}"}
    if node.origin is not None:
        labels.add(f"advice:{node.origin.aspect}.{node.origin.kind}")
        labels.add(f"aspect:{node.origin.aspect}")
    for prop in node.props:
        labels.add(f"prop:{prop}")
    return frozenset(labels)


def from_cfg(cfg: Cfg) -> KripkeStructure:
    """One state per CFG node (same ids); guards dropped; totality restored
    by self-loops on Exit/Error, which also gain the `terminated` marker."""
    states = frozenset(n.id for n in cfg.nodes)
    transitions = {(f, t) for f, t, _ in cfg.edges}
    transitions.add((cfg.exit, cfg.exit))
    if cfg.error is not None:
        transitions.add((cfg.error, cfg.error))
    labeling = {n.id: _node_labels(n) for n in cfg.nodes}
    return KripkeStructure(states, frozenset({cfg.entry}), frozenset(transitions), labeling)


def emit(model: KripkeStructure, format: str = "json") -> str:
    """Serialize deterministically as JSON (schema version 1) or DOT."""
    if format == "json":
        doc = {
            "version": 1,
            "states": [{"id": s, "labels": sorted(model.labels(s))} for s in sorted(model.states)],
            "initial": sorted(model.initial),
            "transitions": [list(t) for t in sorted(model.transitions)],
        }
        return json.dumps(doc, indent=2) + "\n"
    if format == "dot":
        lines = ["digraph kripke {"]
        for s in sorted(model.states):
            label = "\\n".join([str(s)] + sorted(model.labels(s)))
            shape = "doublecircle" if s in model.initial else "box"
            lines.append(f'  s{s} [shape={shape}, label="{label}"];')
        for f, t in sorted(model.transitions):
            lines.append(f"  s{f} -> s{t};")
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}")


def load(text: str) -> KripkeStructure:
    """Parse the JSON schema back into a structure, validating totality."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    expected = {"version", "states", "initial", "transitions"}
    if set(doc) - expected:
        raise SchemaError(f"unknown fields: {sorted(set(doc) - expected)}")
    if set(doc) != expected:
        raise SchemaError(f"missing fields: {sorted(expected - set(doc))}")
    if doc["version"] != 1:
        raise SchemaError(f"unsupported version {doc['version']!r}")

    states = set()
    labeling = {}
    if not isinstance(doc["states"], list):
        raise SchemaError("states must be a list")
    for entry in doc["states"]:
        if not isinstance(entry, dict) or set(entry) != {"id", "labels"}:
            raise SchemaError(f"bad state entry {entry!r}")
        sid = entry["id"]
        if not isinstance(sid, int) or sid in states:
            raise SchemaError(f"bad or duplicate state id {sid!r}")
        if not isinstance(entry["labels"], list) or not all(isinstance(l, str) for l in entry["labels"]):
            raise SchemaError(f"bad labels for state {sid}")
        states.add(sid)
        labeling[sid] = frozenset(entry["labels"])

    initial = doc["initial"]
    if not isinstance(initial, list) or not all(isinstance(s, int) for s in initial):
        raise SchemaError("initial must be a list of state ids")
    if not initial:
        raise EmptyInitialError("initial state set is empty")
    if not set(initial) <= states:
        raise SchemaError("initial references unknown states")

    transitions = set()
    if not isinstance(doc["transitions"], list):
        raise SchemaError("transitions must be a list")
    for pair in doc["transitions"]:
        if not isinstance(pair, list) or len(pair) != 2 or not all(isinstance(s, int) for s in pair):
            raise SchemaError(f"bad transition {pair!r}")
        if pair[0] not in states or pair[1] not in states:
            raise SchemaError(f"transition references unknown state: {pair!r}")
        transitions.add((pair[0], pair[1]))

    sources = {f for f, _ in transitions}
    for s in sorted(states):
        if s not in sources:
            raise TotalityError(f"state {s} has no successor")

    return KripkeStructure(frozenset(states), frozenset(initial), frozenset(transitions), labeling)
