"""Propositional and CTL formula trees, ASCII parsing and printing.

Syntax: atoms `[A-Za-z_][A-Za-z0-9_.:-]*`, constants `true`/`false`,
connectives `!` `&` `|` `->` `<->` (tightest first; `->`/`<->` right
associative), temporal unaries `AX EX AF EF AG EG` and `A[f U g]`,
`E[f U g]` in CTL formulas only.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FormulaParseError, UnknownAtomError

TEMPORAL_UNARY = frozenset({"AX", "EX", "AF", "EF", "AG", "EG"})


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Const:
    value: bool


@dataclass(frozen=True)
class Not:
    operand: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Iff:
    left: object
    right: object


@dataclass(frozen=True)
class Temporal:
    op: str  # AX EX AF EF AG EG
    operand: object


@dataclass(frozen=True)
class Until:
    path: str  # "A" | "E"
    left: object
    right: object


TRUE = Const(True)
FALSE = Const(False)


def _is_atom_start(ch):
    return ch.isalpha() or ch == "_"


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if _is_atom_start(ch):
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] in "_.:-"):
                if text[j] == "-" and j + 1 < n and text[j + 1] == ">":
                    break
                if text[j] == "-" and j + 1 >= n:
                    break
                j += 1
            tokens.append(("atom", text[i:j], i))
            i = j
            continue
        if ch in "()[]!&|":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch == "-":
            if text.startswith("->", i):
                tokens.append(("->", "->", i))
                i += 2
                continue
            raise FormulaParseError(i, "expected '->'")
        if ch == "<":
            if text.startswith("<->", i):
                tokens.append(("<->", "<->", i))
                i += 3
                continue
            raise FormulaParseError(i, "expected '<->'")
        raise FormulaParseError(i, f"unexpected character {ch!r}")
    tokens.append(("end", "", n))
    return tokens


class _FormulaParser:
    def __init__(self, text, ctl):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ctl = ctl

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.peek()
        if tok[0] != "end":
            self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.peek()
        if tok[0] != kind:
            raise FormulaParseError(tok[2], f"expected {kind!r}, got {tok[1] or 'end of input'!r}", [kind])
        return self.next()

    def parse(self):
        f = self.iff()
        tok = self.peek()
        if tok[0] != "end":
            raise FormulaParseError(tok[2], f"unexpected {tok[1]!r}")
        return f

    def iff(self):
        left = self.implies()
        if self.peek()[0] == "<->":
            self.next()
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.disjunction()
        if self.peek()[0] == "->":
            self.next()
            return Implies(left, self.implies())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek()[0] == "|":
            self.next()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.peek()[0] == "&":
            self.next()
            left = And(left, self.unary())
        return left

    def unary(self):
        tok = self.peek()
        if tok[0] == "!":
            self.next()
            return Not(self.unary())
        if tok[0] == "(":
            self.next()
            f = self.iff()
            self.expect(")")
            return f
        if tok[0] == "atom":
            name = tok[1]
            if self.ctl and name in TEMPORAL_UNARY:
                self.next()
                return Temporal(name, self.unary())
            if self.ctl and name in ("A", "E") and self.tokens[self.pos + 1][0] == "[":
                self.next()
                self.next()  # "["
                left = self.iff()
                sep = self.peek()
                if sep[0] != "atom" or sep[1] != "U":
                    raise FormulaParseError(sep[2], "expected 'U'", ["U"])
                self.next()
                right = self.iff()
                self.expect("]")
                return Until(name, left, right)
            self.next()
            if name == "true":
                return TRUE
            if name == "false":
                return FALSE
            return Atom(name)
        raise FormulaParseError(tok[2], f"expected a formula, got {tok[1] or 'end of input'!r}")


def parse_prop(text: str):
    """Parse a propositional formula (no temporal operators)."""
    return _FormulaParser(text, ctl=False).parse()


def parse_ctl(text: str):
    """Parse a CTL formula."""
    return _FormulaParser(text, ctl=True).parse()


def eval_prop(formula, valuation) -> bool:
    """Truth-functional evaluation against a concern valuation."""
    if isinstance(formula, Atom):
        if formula.name not in valuation:
            raise UnknownAtomError(formula.name)
        return bool(valuation[formula.name])
    if isinstance(formula, Const):
        return formula.value
    if isinstance(formula, Not):
        return not eval_prop(formula.operand, valuation)
    if isinstance(formula, And):
        return eval_prop(formula.left, valuation) and eval_prop(formula.right, valuation)
    if isinstance(formula, Or):
        return eval_prop(formula.left, valuation) or eval_prop(formula.right, valuation)
    if isinstance(formula, Implies):
        return (not eval_prop(formula.left, valuation)) or eval_prop(formula.right, valuation)
    if isinstance(formula, Iff):
        return eval_prop(formula.left, valuation) == eval_prop(formula.right, valuation)
    raise TypeError(f"not a propositional formula: {formula!r}")


_LEVELS = {Iff: 0, Implies: 1, Or: 2, And: 3}


def format_formula(formula) -> str:
    """ASCII rendering; parses back to an equal tree."""

    def render(f, parent_level):
        if isinstance(f, Atom):
            return f.name
        if isinstance(f, Const):
            return "true" if f.value else "false"
        if isinstance(f, Not):
            return "!" + render(f.operand, 4)
        if isinstance(f, Temporal):
            return f.op + " " + render(f.operand, 4)
        if isinstance(f, Until):
            return f"{f.path}[{render(f.left, 0)} U {render(f.right, 0)}]"
        level = _LEVELS[type(f)]
        op = {Iff: "<->", Implies: "->", Or: "|", And: "&"}[type(f)]
        # right-associative operators need parens on a same-level left child
        left = render(f.left, level + 1 if level <= 1 else level)
        right = render(f.right, level if level <= 1 else level + 1)
        text = f"{left} {op} {right}"
        if level < parent_level:
            return "(" + text + ")"
        return text

    return render(formula, 0)


def atoms_of(formula):
    """All atom names in a formula tree."""
    if isinstance(formula, Atom):
        return {formula.name}
    if isinstance(formula, Const):
        return set()
    if isinstance(formula, (Not, Temporal)):
        return atoms_of(formula.operand)
    return atoms_of(formula.left) | atoms_of(formula.right)
