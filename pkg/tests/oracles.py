"""Independent brute-force oracles and random input generators.

Everything here recomputes results from first principles, on purpose:
none of it shares code paths with the implementation it checks.
"""

from __future__ import annotations

from osmcheck.formulas import And, Atom, Const, Iff, Implies, Not, Or, Temporal, Until
from osmcheck.kripke import KripkeStructure
from osmcheck.nodes import (
    AdviceDecl,
    AspectDecl,
    Atomic,
    Call,
    CallPattern,
    If,
    MethodDecl,
    PointcutDecl,
    Proceed,
    Program,
    Return,
    Throw,
    TypeDecl,
    While,
)
from osmcheck.traces import event_labels


# glob matching ---------------------------------------------------------


def glob_match_oracle(glob, text):
    """Character-by-character wildcard matching, no regex."""
    if not glob:
        return not text
    if glob[0] == "*":
        return any(glob_match_oracle(glob[1:], text[i:]) for i in range(len(text) + 1))
    return bool(text) and text[0] == glob[0] and glob_match_oracle(glob[1:], text[1:])


# CTL semantics ---------------------------------------------------------


def ctl_sat_oracle(model: KripkeStructure, formula):
    """Satisfaction sets computed by naive fixpoint iteration straight from
    the operator definitions (A-quantified operators computed directly,
    not via dualities)."""
    states = sorted(model.states)
    succ = {s: list(model.successors(s)) for s in states}

    def lfp(step):
        current = set()
        while True:
            new = step(current)
            if new == current:
                return frozenset(new)
            current = new

    def gfp(step):
        current = set(states)
        while True:
            new = step(current)
            if new == current:
                return frozenset(new)
            current = new

    def sat(f):
        if isinstance(f, Atom):
            return frozenset(s for s in states if f.name in model.labels(s))
        if isinstance(f, Const):
            return frozenset(states) if f.value else frozenset()
        if isinstance(f, Not):
            return frozenset(states) - sat(f.operand)
        if isinstance(f, And):
            return sat(f.left) & sat(f.right)
        if isinstance(f, Or):
            return sat(f.left) | sat(f.right)
        if isinstance(f, Implies):
            return (frozenset(states) - sat(f.left)) | sat(f.right)
        if isinstance(f, Iff):
            a, b = sat(f.left), sat(f.right)
            return frozenset(s for s in states if (s in a) == (s in b))
        if isinstance(f, Temporal):
            a = sat(f.operand)
            if f.op == "EX":
                return frozenset(s for s in states if any(t in a for t in succ[s]))
            if f.op == "AX":
                return frozenset(s for s in states if all(t in a for t in succ[s]))
            if f.op == "EF":
                return lfp(lambda x: a | {s for s in states if any(t in x for t in succ[s])})
            if f.op == "AF":
                return lfp(lambda x: a | {s for s in states if all(t in x for t in succ[s])})
            if f.op == "EG":
                return gfp(lambda x: a & {s for s in states if any(t in x for t in succ[s])})
            if f.op == "AG":
                return gfp(lambda x: a & {s for s in states if all(t in x for t in succ[s])})
            raise ValueError(f.op)
        if isinstance(f, Until):
            a, b = sat(f.left), sat(f.right)
            if f.path == "E":
                return lfp(lambda x: b | (a & {s for s in states if any(t in x for t in succ[s])}))
            return lfp(lambda x: b | (a & {s for s in states if all(t in x for t in succ[s])}))
        raise TypeError(f)

    return sat(formula)


def bfs_distance_oracle(model, starts, targets):
    """Length (in states) of the shortest path from a start to a target."""
    frontier = sorted(starts)
    seen = set(frontier)
    dist = 1
    while frontier:
        if any(s in targets for s in frontier):
            return dist
        nxt = []
        for s in frontier:
            for t in model.successors(s):
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
        frontier = nxt
        dist += 1
    return None


# trace conformance -----------------------------------------------------


def trace_conformance_oracle(model: KripkeStructure, trace):
    """Exhaustive path search over (state, consumed-prefix) pairs.

    Returns (conforming, longest matchable prefix length).
    """
    events = {s: event_labels(model.labels(s)) for s in model.states}
    n = len(trace)
    best = 0
    seen = set()
    stack = [(s, 0) for s in sorted(model.initial)]
    while stack:
        s, i = stack.pop()
        if i == n:
            return True, n
        if events[s]:
            if trace[i] in events[s]:
                i += 1
                best = max(best, i)
                if i == n:
                    return True, n
            else:
                continue
        if (s, i) in seen:
            continue
        seen.add((s, i))
        for t in model.successors(s):
            stack.append((t, i))
    return False, best


# random generators -----------------------------------------------------


def random_model(rng, max_states=8, max_atoms=4):
    n = rng.randint(1, max_states)
    atoms = [f"p{i}" for i in range(max_atoms)]
    states = frozenset(range(n))
    labeling = {
        s: frozenset(a for a in atoms if rng.random() < 0.4) for s in states
    }
    transitions = set()
    for s in states:
        out = rng.sample(range(n), rng.randint(1, n))
        for t in out:
            transitions.add((s, t))
    k = rng.randint(1, n)
    initial = frozenset(rng.sample(range(n), k))
    return KripkeStructure(states, initial, frozenset(transitions), labeling)


def random_ctl_formula(rng, depth=4, atoms=("p0", "p1", "p2", "p3", "q_unknown")):
    if depth <= 0 or rng.random() < 0.25:
        roll = rng.random()
        if roll < 0.15:
            return Const(rng.random() < 0.5)
        return Atom(rng.choice(atoms))
    kind = rng.choice(["not", "and", "or", "implies", "iff", "temporal", "until"])
    if kind == "not":
        return Not(random_ctl_formula(rng, depth - 1, atoms))
    if kind == "temporal":
        op = rng.choice(["AX", "EX", "AF", "EF", "AG", "EG"])
        return Temporal(op, random_ctl_formula(rng, depth - 1, atoms))
    left = random_ctl_formula(rng, depth - 1, atoms)
    right = random_ctl_formula(rng, depth - 1, atoms)
    if kind == "and":
        return And(left, right)
    if kind == "or":
        return Or(left, right)
    if kind == "implies":
        return Implies(left, right)
    if kind == "iff":
        return Iff(left, right)
    return Until(rng.choice(["A", "E"]), left, right)


_EXTERNALS = ["Db", "Net", "Log"]
_METHODS = ["save", "send", "getItem", "getAll", "reset"]


def _random_glob(rng, names):
    base = rng.choice(names)
    roll = rng.random()
    if roll < 0.3:
        return "*"
    if roll < 0.55:
        return base
    if roll < 0.8:
        return base[: max(1, len(base) // 2)] + "*"
    return "*" + base[len(base) // 2 :]


def random_program(rng, max_aspects=4, max_calls=10):
    """A random valid mini-DSL program with a bounded number of calls."""
    class_names = [f"Svc{i}" for i in range(rng.randint(1, 3))]
    receivers = class_names + _EXTERNALS
    calls_left = [max_calls]

    def random_call():
        calls_left[0] -= 1
        return Call(rng.choice(receivers), rng.choice(_METHODS), rng.randint(0, 2))

    def random_body(depth):
        stmts = []
        for _ in range(rng.randint(0, 3)):
            roll = rng.random()
            if roll < 0.45 and calls_left[0] > 0:
                stmts.append(random_call())
            elif roll < 0.65:
                stmts.append(Atomic(rng.choice(["tick", "log-step", "audit"])))
            elif roll < 0.8 and depth > 0:
                then = random_body(depth - 1)
                orelse = None
                if rng.random() < 0.5:
                    orelse = random_body(depth - 1) + ((Throw("Boom"),) if rng.random() < 0.3 else ())
                stmts.append(If(rng.choice(["ready", Call("Check", "ok", 0)]), then, orelse))
            elif roll < 0.9 and depth > 0:
                stmts.append(While("more", random_body(depth - 1)))
            else:
                stmts.append(Atomic("noop"))
        if rng.random() < 0.3:
            stmts.append(Return())
        return tuple(stmts)

    decls = []
    for cname in class_names:
        methods = []
        for j in range(rng.randint(1, 2)):
            annotations = ("sensitive",) if rng.random() < 0.3 else ()
            methods.append(MethodDecl(rng.choice(_METHODS) + str(j), rng.randint(0, 2), annotations, random_body(2)))
        decls.append(TypeDecl(cname, tuple(methods)))

    aspect_names = [f"Asp{i}" for i in range(rng.randint(0, max_aspects))]
    for aname in aspect_names:
        pointcuts = []
        for k in range(rng.randint(1, 2)):
            pattern = CallPattern(
                _random_glob(rng, receivers),
                _random_glob(rng, _METHODS),
                None if rng.random() < 0.6 else rng.randint(0, 2),
            )
            pointcuts.append(PointcutDecl(f"pc{k}", pattern))
        advice = []
        for _ in range(rng.randint(1, 3)):
            kind = rng.choice(["before", "after", "around"])
            body = (Atomic(f"adv-{aname.lower()}"),)
            if calls_left[0] > 0 and rng.random() < 0.3:
                body += (random_call(),)
            if kind == "around" and rng.random() < 0.8:
                body = body[:1] + (Proceed(),) + body[1:]
            target = rng.choice([pc.name for pc in pointcuts])
            advice.append(AdviceDecl(kind, target, body))
        decls.append(AspectDecl(aname, tuple(pointcuts), tuple(advice)))

    precedence = None
    if aspect_names and rng.random() < 0.5:
        listed = rng.sample(aspect_names, rng.randint(1, len(aspect_names)))
        precedence = tuple(listed)
    return Program(tuple(decls), precedence)


def count_matching_pairs_oracle(program):
    """Brute-force (join point, advice) match count with its own walker."""

    def calls_in(body):
        found = []
        for stmt in body:
            if isinstance(stmt, Call):
                found.append(stmt)
            elif isinstance(stmt, If):
                found.extend(calls_in(stmt.then))
                if stmt.orelse is not None:
                    found.extend(calls_in(stmt.orelse))
            elif isinstance(stmt, While):
                found.extend(calls_in(stmt.body))
        return found

    sites = []  # (owner aspect or None, call)
    for decl in program.declarations:
        if isinstance(decl, TypeDecl):
            for m in decl.methods:
                sites.extend((None, c) for c in calls_in(m.body))
        else:
            for adv in decl.advice:
                sites.extend((decl.name, c) for c in calls_in(adv.body))

    count = 0
    for owner_aspect, call in sites:
        for aspect in program.aspects():
            if aspect.name == owner_aspect:
                continue
            for adv in aspect.advice:
                pat = aspect.pattern_of(adv)
                if (
                    glob_match_oracle(pat.receiver, call.receiver)
                    and glob_match_oracle(pat.method, call.method)
                    and (pat.arity is None or pat.arity == call.arity)
                ):
                    count += 1
    return count
