"""AST node types for the mini aspect-oriented DSL.

All nodes are immutable; source positions are carried for diagnostics but
excluded from structural equality so round-trip comparisons work.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(frozen=True)
class CallPattern:
    """A `call(receiver.method(arity))` pointcut pattern.

    `receiver` and `method` are glob strings where `*` matches zero or
    more characters; `arity` is an exact count or None for `..` (any).
    """

    receiver: str
    method: str
    arity: Optional[int]


@dataclass(frozen=True)
class Call:
    receiver: str
    method: str
    arity: int = 0


@dataclass(frozen=True)
class If:
    cond: Union[Call, str]
    then: tuple
    orelse: Optional[tuple] = None


@dataclass(frozen=True)
class While:
    cond: Union[Call, str]
    body: tuple


@dataclass(frozen=True)
class Throw:
    exception: str


@dataclass(frozen=True)
class Return:
    pass


@dataclass(frozen=True)
class Atomic:
    label: str


@dataclass(frozen=True)
class Proceed:
    pass


Stmt = Union[Call, If, While, Throw, Return, Atomic, Proceed]


@dataclass(frozen=True)
class MethodDecl:
    name: str
    arity: int
    annotations: tuple = ()
    body: tuple = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class TypeDecl:
    name: str
    methods: tuple = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def method(self, name):
        for m in self.methods:
            if m.name == name:
                return m
        return None


@dataclass(frozen=True)
class PointcutDecl:
    name: str
    pattern: CallPattern
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AdviceDecl:
    kind: str  # before | after | around
    target: Union[str, CallPattern]  # named pointcut or inline pattern
    body: tuple = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)


@dataclass(frozen=True)
class AspectDecl:
    name: str
    pointcuts: tuple = ()
    advice: tuple = ()
    line: int = field(default=0, compare=False)
    col: int = field(default=0, compare=False)

    def pattern_of(self, adv: AdviceDecl) -> CallPattern:
        if isinstance(adv.target, CallPattern):
            return adv.target
        for pc in self.pointcuts:
            if pc.name == adv.target:
                return pc.pattern
        raise KeyError(adv.target)


@dataclass(frozen=True)
class Program:
    declarations: tuple = ()
    precedence: Optional[tuple] = None

    def types(self):
        return [d for d in self.declarations if isinstance(d, TypeDecl)]

    def aspects(self):
        return [d for d in self.declarations if isinstance(d, AspectDecl)]

    def find_method(self, qualified_name):
        """Look up `Type.method`; returns (TypeDecl, MethodDecl) or None."""
        if "." not in qualified_name:
            return None
        tname, mname = qualified_name.split(".", 1)
        for d in self.types():
            if d.name == tname:
                m = d.method(mname)
                if m is not None:
                    return d, m
        return None


def iter_statements(body, prefix=()):
    """Yield (path, stmt) pairs for every statement in a body, depth first.

    Paths locate a statement by child indices: a statement at body index i
    has path (..., i); If branches and While bodies nest one level deeper
    with a branch selector (0 = then/body, 1 = else).
    """
    for i, stmt in enumerate(body):
        path = prefix + (i,)
        yield path, stmt
        if isinstance(stmt, If):
            yield from iter_statements(stmt.then, path + (0,))
            if stmt.orelse is not None:
                yield from iter_statements(stmt.orelse, path + (1,))
        elif isinstance(stmt, While):
            yield from iter_statements(stmt.body, path + (0,))
