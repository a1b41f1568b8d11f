"""Conformance of observed event traces against a Kripke model.

A trace conforms when some model path, starting at an initial state,
visits action-bearing states whose labels match the events in order;
entry, exit and branch states are skipped transparently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import EmptyTraceError
from .kripke import KripkeStructure


@dataclass(frozen=True)
class TraceVerdict:
    conforming: bool
    divergence: Optional[int] = None  # index of the first unmatched event


@dataclass(frozen=True)
class TraceReport:
    verdicts: tuple
    conforming: int
    total: int
    fraction: Optional[Fraction]  # None when there are no traces
    warnings: tuple = ()


def event_labels(labels):
    """Event names carried by a state (branch pseudo-actions excluded)."""
    return {
        l[len("action:"):]
        for l in labels
        if l.startswith("action:") and not l.startswith("action:branch:")
    }


class _Matcher:
    def __init__(self, model: KripkeStructure):
        self.model = model
        self.events = {s: event_labels(model.labels(s)) for s in model.states}

    def closure(self, seeds):
        """Event states reachable from seeds through non-event states.

        Seeds that are themselves event states are candidates directly.
        """
        out = set()
        stack = []
        visited = set()
        for s in seeds:
            if self.events[s]:
                out.add(s)
            elif s not in visited:
                visited.add(s)
                stack.append(s)
        while stack:
            u = stack.pop()
            for t in self.model.successors(u):
                if self.events[t]:
                    out.add(t)
                elif t not in visited:
                    visited.add(t)
                    stack.append(t)
        return out

    def check(self, trace) -> TraceVerdict:
        frontier = self.closure(self.model.initial)
        for i, event in enumerate(trace):
            matched = {s for s in frontier if event in self.events[s]}
            if not matched:
                return TraceVerdict(False, i)
            seeds = set()
            for s in matched:
                seeds.update(self.model.successors(s))
            frontier = self.closure(seeds)
        return TraceVerdict(True)


def check_trace(model: KripkeStructure, trace) -> TraceVerdict:
    if not trace:
        raise EmptyTraceError("trace is empty")
    return _Matcher(model).check(list(trace))


def check_trace_set(model: KripkeStructure, traces) -> TraceReport:
    traces = list(traces)
    for i, t in enumerate(traces):
        if not t:
            raise EmptyTraceError(f"trace {i} is empty")
    matcher = _Matcher(model)
    verdicts = tuple(matcher.check(t) for t in traces)
    conforming = sum(1 for v in verdicts if v.conforming)
    total = len(traces)
    warnings = ()
    fraction = None
    if total:
        fraction = Fraction(conforming, total)
    else:
        warnings = ("no traces given; conformance fraction is undefined",)
    return TraceReport(verdicts, conforming, total, fraction, warnings)


def parse_trace_file(text: str):
    """One event label per line; blank lines and `#` comments ignored."""
    events = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        events.append(line)
    return events
