"""Explicit-state CTL checking by fixpoint labeling, with evidence paths.

E-quantified operators are computed directly (EX by preimage, EU as a
least fixpoint, EG as a greatest fixpoint); A-quantified operators go
through the standard dualities. Counterexamples and witnesses are
BFS-shortest with ties broken by smallest state id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import UnknownAtomError
from .formulas import And, Atom, Const, Iff, Implies, Not, Or, Temporal, Until
from .kripke import KripkeStructure


@dataclass(frozen=True)
class Assignment:
    valuation: dict


@dataclass(frozen=True)
class FinitePath:
    states: tuple


@dataclass(frozen=True)
class Lasso:
    prefix: tuple
    cycle: tuple


@dataclass(frozen=True)
class SatResult:
    holds: bool
    evidence: Optional[object] = None  # Assignment | FinitePath | Lasso


def _pre_exists(model, target):
    return frozenset(s for s in model.states if any(t in target for t in model.successors(s)))


def _eu(model, hold, target):
    """Least fixpoint of E[hold U target]."""
    sat = set(target)
    changed = True
    while changed:
        changed = False
        for s in model.states:
            if s not in sat and s in hold and any(t in sat for t in model.successors(s)):
                sat.add(s)
                changed = True
    return frozenset(sat)


def _eg(model, hold):
    """Greatest fixpoint of EG hold."""
    sat = set(hold)
    changed = True
    while changed:
        changed = False
        for s in list(sat):
            if not any(t in sat for t in model.successors(s)):
                sat.discard(s)
                changed = True
    return frozenset(sat)


def sat_set(model: KripkeStructure, formula, strict_atoms: bool = False, warnings=None):
    """Exact satisfaction set of a CTL formula over the model's states.

    Atoms outside the model's label vocabulary are false everywhere and
    reported via `warnings` (a list), unless strict_atoms raises instead.
    """
    states = frozenset(model.states)
    vocab = model.vocabulary()

    def sat(f):
        if isinstance(f, Atom):
            if f.name not in vocab:
                if strict_atoms:
                    raise UnknownAtomError(f.name)
                if warnings is not None:
                    msg = f"atom {f.name!r} does not occur in the model; treated as false"
                    if msg not in warnings:
                        warnings.append(msg)
                return frozenset()
            return frozenset(s for s in states if f.name in model.labels(s))
        if isinstance(f, Const):
            return states if f.value else frozenset()
        if isinstance(f, Not):
            return states - sat(f.operand)
        if isinstance(f, And):
            return sat(f.left) & sat(f.right)
        if isinstance(f, Or):
            return sat(f.left) | sat(f.right)
        if isinstance(f, Implies):
            return (states - sat(f.left)) | sat(f.right)
        if isinstance(f, Iff):
            a, b = sat(f.left), sat(f.right)
            return (a & b) | ((states - a) & (states - b))
        if isinstance(f, Temporal):
            if f.op == "EX":
                return _pre_exists(model, sat(f.operand))
            if f.op == "AX":  # AX f = !EX !f
                return states - _pre_exists(model, states - sat(f.operand))
            if f.op == "EF":  # EF f = E[true U f]
                return _eu(model, states, sat(f.operand))
            if f.op == "AG":  # AG f = !EF !f
                return states - _eu(model, states, states - sat(f.operand))
            if f.op == "EG":
                return _eg(model, sat(f.operand))
            if f.op == "AF":  # AF f = !EG !f
                return states - _eg(model, states - sat(f.operand))
            raise ValueError(f.op)  # pragma: no cover
        if isinstance(f, Until):
            a, b = sat(f.left), sat(f.right)
            if f.path == "E":
                return _eu(model, a, b)
            # A[f U g] = !(E[!g U !f & !g] | EG !g)
            not_f, not_g = states - a, states - b
            return states - (_eu(model, not_g, not_f & not_g) | _eg(model, not_g))
        raise TypeError(f"not a CTL formula: {f!r}")  # pragma: no cover

    return sat(formula)


def _bfs_path(model, starts, targets, allowed=None):
    """Shortest path from a start to a target; deterministic by state id.

    `allowed` restricts the states a path may pass through before the
    target (the target state itself need not be allowed).
    """
    starts = sorted(starts)
    hit = [s for s in starts if s in targets]
    if hit:
        return (min(hit),)
    parent = {}
    layer = [s for s in starts if allowed is None or s in allowed]
    seen = set(layer)
    while layer:
        nxt = []
        for u in layer:
            for v in model.successors(u):
                if v not in seen:
                    seen.add(v)
                    parent[v] = u
                    nxt.append(v)
        hit = sorted(v for v in nxt if v in targets)
        if hit:
            path = [hit[0]]
            while path[-1] in parent:
                path.append(parent[path[-1]])
            return tuple(reversed(path))
        layer = sorted(v for v in nxt if allowed is None or v in allowed)
    return None


def _lasso(model, start, region):
    """Walk smallest-id successors inside region until a state repeats."""
    seq = [start]
    index = {start: 0}
    cur = start
    while True:
        nxt = min(t for t in model.successors(cur) if t in region)
        if nxt in index:
            i = index[nxt]
            return Lasso(tuple(seq[:i]), tuple(seq[i:]))
        index[nxt] = len(seq)
        seq.append(nxt)
        cur = nxt


def check_ctl(model: KripkeStructure, formula, strict_atoms: bool = False, warnings=None) -> SatResult:
    """Check `initial subset of sat_set` and extract shape-specific evidence."""
    states = frozenset(model.states)
    sat = sat_set(model, formula, strict_atoms, warnings)
    holds = model.initial <= sat

    def sub(f):
        return sat_set(model, f, strict_atoms=False)

    def witness(f, from_initials):
        """Witness evidence for a formula that holds at some initial states."""
        if isinstance(f, Temporal) and f.op == "EF":
            path = _bfs_path(model, from_initials, sub(f.operand))
            return FinitePath(path) if path else None
        if isinstance(f, Until) and f.path == "E":
            good, target = sub(f.left), sub(f.right)
            path = _bfs_path(model, from_initials, target, allowed=good)
            return FinitePath(path) if path else None
        if isinstance(f, Temporal) and f.op == "EX":
            target = sub(f.operand)
            for s in sorted(from_initials):
                hits = [t for t in model.successors(s) if t in target]
                if hits:
                    return FinitePath((s, min(hits)))
            return None
        if isinstance(f, Temporal) and f.op == "EG":
            region = _eg(model, sub(f.operand))
            starters = sorted(set(from_initials) & region)
            if starters:
                return _lasso(model, starters[0], region)
            return None
        return None

    evidence = None
    if not holds:
        failing = model.initial - sat
        if isinstance(formula, Temporal) and formula.op == "AG":
            bad = states - sub(formula.operand)
            path = _bfs_path(model, model.initial, bad)
            evidence = FinitePath(path) if path else None
        elif isinstance(formula, Temporal) and formula.op == "AF":
            region = _eg(model, states - sub(formula.operand))
            starters = sorted(set(failing) & region)
            if starters:
                evidence = _lasso(model, starters[0], region)
        elif isinstance(formula, Not):
            # a failing negation means the operand holds somewhere initial;
            # its witness is the counterexample
            evidence = witness(formula.operand, failing)
    else:
        evidence = witness(formula, model.initial)
    return SatResult(holds, evidence)


def check_config(entries, valuation):
    """Evaluate named propositional formulas; failures carry the valuation."""
    from .formulas import eval_prop

    results = []
    for name, formula in entries:
        holds = eval_prop(formula, valuation)
        results.append((name, SatResult(holds, None if holds else Assignment(dict(valuation)))))
    return results
