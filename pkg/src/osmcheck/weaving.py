"""Join-point enumeration, pointcut matching and static weaving."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional

from .errors import AliasError
from .frontend import validate_precedence
from .nodes import Call, CallPattern, Program, iter_statements


@dataclass(frozen=True)
class Signature:
    receiver: str
    method: str
    arity: int


@dataclass(frozen=True)
class JoinPoint:
    owner: str  # "Type.method" or "Aspect.kind#ordinal"
    path: tuple
    signature: Signature


@dataclass(frozen=True)
class AdviceBinding:
    joinpoint: JoinPoint
    aspect: str
    ordinal: int  # advice index within its aspect
    kind: str
    rank: int  # lower = higher precedence


@dataclass(frozen=True)
class WovenProgram:
    program: Program
    bindings: tuple

    def bindings_at(self, joinpoint: JoinPoint):
        return [b for b in self.bindings if b.joinpoint == joinpoint]


def glob_match(glob: str, text: str) -> bool:
    """Anchored match where `*` stands for zero or more characters."""
    pattern = ".*".join(re.escape(part) for part in glob.split("*"))
    return re.fullmatch(pattern, text) is not None


def match(pattern: CallPattern, sig: Signature) -> bool:
    if pattern.arity is not None and pattern.arity != sig.arity:
        return False
    return glob_match(pattern.receiver, sig.receiver) and glob_match(pattern.method, sig.method)


def advice_owner(aspect_name: str, kind: str, ordinal: int) -> str:
    return f"{aspect_name}.{kind}#{ordinal}"


def enumerate_join_points(program: Program):
    """One JoinPoint per Call statement, in (declaration, path) order.

    Calls in if/while conditions are checks, not join points; advice
    bodies are walked too since advice code is itself advisable.
    """
    points = []

    def walk(owner, body):
        for path, stmt in iter_statements(body):
            if isinstance(stmt, Call):
                points.append(JoinPoint(owner, path, Signature(stmt.receiver, stmt.method, stmt.arity)))

    for decl in program.declarations:
        if hasattr(decl, "methods"):
            for m in decl.methods:
                walk(f"{decl.name}.{m.name}", m.body)
        else:
            for ordinal, adv in enumerate(decl.advice):
                walk(advice_owner(decl.name, adv.kind, ordinal), adv.body)
    return points


def aspect_ranks(program: Program) -> dict:
    """Precedence rank per aspect: directive order first, then declaration order."""
    validate_precedence(program)
    listed = list(program.precedence or ())
    ranks = {name: i for i, name in enumerate(listed)}
    nxt = len(listed)
    for a in program.aspects():
        if a.name not in ranks:
            ranks[a.name] = nxt
            nxt += 1
    return ranks


def weave(program: Program) -> WovenProgram:
    """Bind every matching advice to every join point.

    An advice never binds to join points inside its own aspect's advice
    bodies. Bindings are stored sorted by (owner, path, rank, ordinal);
    execution order at one join point is given by execution_order().
    """
    ranks = aspect_ranks(program)
    aspect_names = {a.name for a in program.aspects()}
    bindings = []
    for jp in enumerate_join_points(program):
        owner_aspect = jp.owner.split(".", 1)[0]
        for aspect in program.aspects():
            if aspect.name == owner_aspect and owner_aspect in aspect_names:
                continue
            for ordinal, adv in enumerate(aspect.advice):
                if match(aspect.pattern_of(adv), jp.signature):
                    bindings.append(AdviceBinding(jp, aspect.name, ordinal, adv.kind, ranks[aspect.name]))
    bindings.sort(key=lambda b: (b.joinpoint.owner, b.joinpoint.path, b.rank, b.ordinal))
    return WovenProgram(program, tuple(bindings))


def execution_order(bindings):
    """Execution order of one join point's bindings.

    Before-advice run in precedence order, around-advice chain with the
    highest precedence outermost, after-advice in reverse precedence order.
    """
    key = lambda b: (b.rank, b.ordinal)
    befores = sorted((b for b in bindings if b.kind == "before"), key=key)
    arounds = sorted((b for b in bindings if b.kind == "around"), key=key)
    afters = sorted((b for b in bindings if b.kind == "after"), key=key, reverse=True)
    return befores, arounds, afters


ConcernValuation = Mapping[str, bool]


def presence_valuation(
    woven: WovenProgram,
    aliases: Optional[Mapping[str, str]] = None,
    core_id: str = "P",
) -> dict:
    """Truth assignment recording which concerns are actually woven.

    A concern is true iff its aspect has at least one binding; the core
    identifier is true iff the program declares a type with a method.
    Aliased aspects additionally appear under their concern id; an alias
    naming an aspect the program does not declare yields a false concern
    (the concern is simply absent from the system).
    """
    aliases = dict(aliases or {})
    program = woven.program
    aspect_names = [a.name for a in program.aspects()]
    seen_ids = set()
    for concern in aliases.values():
        if concern in seen_ids:
            raise AliasError(f"concern id {concern!r} aliased twice")
        seen_ids.add(concern)
    woven_aspects = {b.aspect for b in woven.bindings}
    valuation = {core_id: any(t.methods for t in program.types())}
    for name in aspect_names:
        valuation[name] = name in woven_aspects
    for key, concern in aliases.items():
        valuation[concern] = valuation.get(key, False)
    return valuation
