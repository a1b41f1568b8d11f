"""Per-method control-flow graphs with static advice and callee inlining."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .errors import InlineDepthError, InlineRecursionError, UnknownMethodError
from .nodes import Atomic, Call, If, Proceed, Return, Throw, While
from .weaving import Signature, WovenProgram, advice_owner, execution_order

ENTRY, EXIT, ERROR, ACTION, BRANCH = "entry", "exit", "error", "action", "branch"


@dataclass(frozen=True)
class AdviceOrigin:
    aspect: str
    kind: str


@dataclass(frozen=True)
class CfgNode:
    id: int
    kind: str
    label: str = ""
    origin: Optional[AdviceOrigin] = None  # None = base code
    call: Optional[Signature] = None
    props: frozenset = frozenset()


@dataclass(frozen=True)
class Cfg:
    method: str
    nodes: tuple  # CfgNode, ascending id
    edges: tuple  # (from_id, to_id, guard), guard in {"", "then", "else"}
    entry: int
    exit: int
    error: Optional[int] = None

    def node(self, node_id) -> CfgNode:
        return self.nodes[node_id]

    def successors(self, node_id):
        return sorted(t for f, t, _ in self.edges if f == node_id)


@dataclass
class _Ctx:
    owner: str
    origin: Optional[AdviceOrigin]
    props: frozenset
    returns: list = field(default_factory=list)
    proceed: Optional[object] = None  # callable(incoming) -> outgoing


class _Builder:
    def __init__(self, woven: WovenProgram, inline_depth: int):
        self.woven = woven
        self.program = woven.program
        self.inline_depth = inline_depth
        self.nodes = []
        self.edges = []  # in insertion order, remapped later
        self.error_id = None
        self.bindings = {}
        for b in woven.bindings:
            self.bindings.setdefault((b.joinpoint.owner, b.joinpoint.path), []).append(b)

    def new_node(self, kind, label="", ctx=None, call=None):
        node = CfgNode(
            len(self.nodes),
            kind,
            label,
            ctx.origin if ctx else None,
            call,
            ctx.props if ctx else frozenset(),
        )
        self.nodes.append(node)
        return node.id

    def attach(self, incoming, node_id):
        for src, guard in incoming:
            self.edges.append((src, node_id, guard))

    def error_node(self):
        if self.error_id is None:
            self.error_id = self.new_node(ERROR)
        return self.error_id

    # statement sequencing -------------------------------------------

    def seq(self, body, path_prefix, ctx, incoming, inline_stack):
        for i, stmt in enumerate(body):
            if not incoming:
                break  # dead code after return/throw is dropped
            incoming = self.stmt(stmt, path_prefix + (i,), ctx, incoming, inline_stack)
        return incoming

    def stmt(self, stmt, path, ctx, incoming, inline_stack):
        if isinstance(stmt, Call):
            return self.join_point(stmt, path, ctx, incoming, inline_stack)
        if isinstance(stmt, If):
            branch, incoming = self.cond(stmt.cond, ctx, incoming)
            out = self.seq(stmt.then, path + (0,), ctx, [(branch, "then")], inline_stack)
            if stmt.orelse is not None:
                out += self.seq(stmt.orelse, path + (1,), ctx, [(branch, "else")], inline_stack)
            else:
                out.append((branch, "else"))
            return out
        if isinstance(stmt, While):
            branch, incoming = self.cond(stmt.cond, ctx, incoming)
            back = self.seq(stmt.body, path + (0,), ctx, [(branch, "then")], inline_stack)
            self.attach(back, branch)
            return [(branch, "else")]
        if isinstance(stmt, Throw):
            node = self.new_node(ACTION, f"throw:{stmt.exception}", ctx)
            self.attach(incoming, node)
            self.edges.append((node, self.error_node(), ""))
            return []
        if isinstance(stmt, Return):
            ctx.returns.extend(incoming)
            return []
        if isinstance(stmt, Atomic):
            node = self.new_node(ACTION, stmt.label, ctx)
            self.attach(incoming, node)
            return [(node, "")]
        if isinstance(stmt, Proceed):
            return ctx.proceed(incoming)
        raise TypeError(f"unknown statement {stmt!r}")  # pragma: no cover

    def cond(self, cond, ctx, incoming):
        """A call condition yields an Action node for the check, then a Branch."""
        if isinstance(cond, Call):
            sig = Signature(cond.receiver, cond.method, cond.arity)
            check = self.new_node(ACTION, f"call:{sig.receiver}.{sig.method}", ctx, call=sig)
            self.attach(incoming, check)
            incoming = [(check, "")]
            label = cond.method
        else:
            label = cond
        branch = self.new_node(BRANCH, label, ctx)
        self.attach(incoming, branch)
        return branch, incoming

    # advice expansion and inlining -----------------------------------

    def join_point(self, call: Call, path, ctx, incoming, inline_stack):
        bound = self.bindings.get((ctx.owner, path), [])
        befores, arounds, afters = execution_order(bound)

        for b in befores:
            incoming = self.advice_body(b, incoming, inline_stack)

        def chain(k, inc):
            if k == len(arounds):
                return self.inline_call(call, ctx, inc, inline_stack)
            return self.advice_body(arounds[k], inc, inline_stack, proceed=lambda i: chain(k + 1, i))

        incoming = chain(0, incoming)

        for b in afters:
            incoming = self.advice_body(b, incoming, inline_stack)
        return incoming

    def advice_body(self, binding, incoming, inline_stack, proceed=None):
        aspect = next(a for a in self.program.aspects() if a.name == binding.aspect)
        adv = aspect.advice[binding.ordinal]
        ctx = _Ctx(
            owner=advice_owner(binding.aspect, binding.kind, binding.ordinal),
            origin=AdviceOrigin(binding.aspect, binding.kind),
            props=frozenset(),
            proceed=proceed,
        )
        out = self.seq(adv.body, (), ctx, incoming, inline_stack)
        return out + ctx.returns

    def inline_call(self, call: Call, ctx, incoming, inline_stack):
        qname = f"{call.receiver}.{call.method}"
        found = self.program.find_method(qname)
        if found is None:
            sig = Signature(call.receiver, call.method, call.arity)
            node = self.new_node(ACTION, f"call:{qname}", ctx, call=sig)
            self.attach(incoming, node)
            return [(node, "")]
        if qname in inline_stack:
            raise InlineRecursionError(inline_stack[inline_stack.index(qname):] + (qname,))
        if len(inline_stack) + 1 > self.inline_depth:
            raise InlineDepthError(f"inline depth limit {self.inline_depth} exceeded at {qname}")
        _, method = found
        callee_ctx = _Ctx(owner=qname, origin=None, props=frozenset(method.annotations))
        out = self.seq(method.body, (), callee_ctx, incoming, inline_stack + (qname,))
        return out + callee_ctx.returns


def _renumber(nodes, edges, entry):
    """Depth-first preorder ids from entry, successors in insertion order."""
    succ = {}
    for f, t, _ in edges:
        succ.setdefault(f, []).append(t)
    order = []
    seen = set()
    stack = [entry]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        order.append(n)
        stack.extend(reversed(succ.get(n, [])))
    for node in nodes:  # unreachable nodes (never-returning bodies) keep creation order
        if node.id not in seen:
            order.append(node.id)
    remap = {old: new for new, old in enumerate(order)}
    new_nodes = sorted((replace(nodes[old], id=remap[old]) for old in order), key=lambda n: n.id)
    new_edges = sorted(set((remap[f], remap[t], g) for f, t, g in edges))
    return tuple(new_nodes), tuple(new_edges), remap


def build_cfg(woven: WovenProgram, method: str, inline_depth: int = 16) -> Cfg:
    """Build the woven control-flow graph of `Type.method`.

    Matched advice is expanded at each call join point (befores, around
    chain, afters); in-program callees are inlined with recursion and
    depth checks; external calls become single Action nodes.
    """
    if woven.program.find_method(method) is None:
        raise UnknownMethodError(f"unknown method {method!r}")
    builder = _Builder(woven, inline_depth)
    entry = builder.new_node(ENTRY)
    exit_id = builder.new_node(EXIT)
    _, mdecl = woven.program.find_method(method)
    ctx = _Ctx(owner=method, origin=None, props=frozenset(mdecl.annotations))
    out = builder.seq(mdecl.body, (), ctx, [(entry, "")], (method,))
    builder.attach(out + ctx.returns, exit_id)
    nodes, edges, remap = _renumber(builder.nodes, builder.edges, entry)
    return Cfg(
        method,
        nodes,
        edges,
        remap[entry],
        remap[exit_id],
        None if builder.error_id is None else remap[builder.error_id],
    )


def to_dot(cfg: Cfg) -> str:
    """Deterministic DOT rendering; advice-origin nodes carry group=<aspect>."""
    shapes = {ENTRY: "circle", EXIT: "doublecircle", ERROR: "octagon", ACTION: "box", BRANCH: "diamond"}
    lines = ["digraph cfg {"]
    for node in cfg.nodes:
        label = node.label if node.kind in (ACTION, BRANCH) else node.kind
        attrs = [f'label="{node.id}: {label}"', f"shape={shapes[node.kind]}"]
        if node.origin is not None:
            attrs.append(f'group="{node.origin.aspect}"')
        lines.append(f"  n{node.id} [{', '.join(attrs)}];")
    for f, t, guard in sorted(cfg.edges):
        suffix = f' [label="{guard}"]' if guard else ""
        lines.append(f"  n{f} -> n{t}{suffix};")
    lines.append("}")
    return "\n".join(lines) + "\n"
