"""Lexer, recursive-descent parser, printer and traversal for the mini-DSL."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DuplicateNameError,
    LexError,
    ParseError,
    PrecedenceError,
    UnknownPointcutError,
)
from .nodes import (
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
    iter_statements,
)

KEYWORDS = frozenset(
    {
        "class",
        "aspect",
        "pointcut",
        "before",
        "after",
        "around",
        "proceed",
        "if",
        "else",
        "while",
        "throw",
        "return",
        "atomic",
        "precedence",
        "call",
        "@prop",
    }
)

SYMBOLS = frozenset({"{", "}", "(", ")", ";", ":", ",", ".", "..", "*"})


@dataclass(frozen=True)
class Token:
    kind: str  # keyword | identifier | number | symbol | eof
    lexeme: str
    line: int
    col: int


def _is_ident_start(ch):
    return ch.isalpha() or ch == "_"


def _is_ident_char(ch):
    return ch.isalnum() or ch in "_-"


def tokenize(source: str):
    """Split source text into tokens; `//` comments and whitespace are skipped.

    Identifiers may contain `-` between alphanumeric characters (so labels
    like `log-start` lex as one token).
    """
    tokens = []
    line, col = 1, 1
    i, n = 0, len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "/" and i + 1 < n and source[i + 1] == "/":
            while i < n and source[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if _is_ident_start(ch):
            j = i + 1
            while j < n and _is_ident_char(source[j]):
                # a trailing '-' is not part of an identifier
                if source[j] == "-" and not (j + 1 < n and (source[j + 1].isalnum() or source[j + 1] == "_")):
                    break
                j += 1
            lex = source[i:j]
            kind = "keyword" if lex in KEYWORDS else "identifier"
            tokens.append(Token(kind, lex, start_line, start_col))
            col += j - i
            i = j
            continue
        if ch.isdigit():
            j = i + 1
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("number", source[i:j], start_line, start_col))
            col += j - i
            i = j
            continue
        if ch == "@":
            if source.startswith("@prop", i):
                tokens.append(Token("keyword", "@prop", start_line, start_col))
                i += 5
                col += 5
                continue
            raise LexError(line, col, ch)
        if ch == ".":
            if i + 1 < n and source[i + 1] == ".":
                tokens.append(Token("symbol", "..", start_line, start_col))
                i += 2
                col += 2
                continue
            tokens.append(Token("symbol", ".", start_line, start_col))
            i += 1
            col += 1
            continue
        if ch in "{}();:,*":
            tokens.append(Token("symbol", ch, start_line, start_col))
            i += 1
            col += 1
            continue
        raise LexError(line, col, ch)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0

    def peek(self, ahead=0):
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self):
        tok = self.peek()
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def error(self, expected):
        tok = self.peek()
        got = tok.lexeme or "end of input"
        raise ParseError(
            tok.line,
            tok.col,
            f"expected {' or '.join(expected)}, got {got!r}",
            expected,
        )

    def expect(self, lexeme):
        tok = self.peek()
        if tok.lexeme != lexeme or tok.kind == "eof":
            self.error([repr(lexeme)])
        return self.next()

    def expect_kind(self, kind, what):
        tok = self.peek()
        if tok.kind != kind:
            self.error([what])
        return self.next()

    def at(self, lexeme):
        tok = self.peek()
        return tok.kind != "eof" and tok.lexeme == lexeme

    # grammar ----------------------------------------------------------

    def program(self):
        decls = []
        precedence = None
        prec_tok = None
        while self.peek().kind != "eof":
            if self.at("class"):
                decls.append(self.typedecl())
            elif self.at("aspect"):
                decls.append(self.aspectdecl())
            elif self.at("precedence"):
                tok = self.peek()
                if precedence is not None:
                    raise ParseError(tok.line, tok.col, "duplicate precedence directive")
                prec_tok = tok
                precedence = self.precedence_directive()
            else:
                self.error(["'class'", "'aspect'", "'precedence'"])
        return Program(tuple(decls), precedence), prec_tok

    def precedence_directive(self):
        self.expect("precedence")
        names = [self.expect_kind("identifier", "aspect name").lexeme]
        while self.at(","):
            self.next()
            names.append(self.expect_kind("identifier", "aspect name").lexeme)
        self.expect(";")
        return tuple(names)

    def typedecl(self):
        kw = self.expect("class")
        name = self.expect_kind("identifier", "class name")
        self.expect("{")
        methods = []
        while not self.at("}"):
            methods.append(self.methoddecl())
        self.expect("}")
        for m in methods:
            if sum(1 for other in methods if other.name == m.name) > 1:
                raise DuplicateNameError(m.line, m.col, f"duplicate method {m.name!r} in class {name.lexeme!r}")
        return TypeDecl(name.lexeme, tuple(methods), kw.line, kw.col)

    def methoddecl(self):
        annotations = []
        while self.at("@prop"):
            self.next()
            self.expect("(")
            annotations.append(self.expect_kind("identifier", "proposition name").lexeme)
            self.expect(")")
        name = self.expect_kind("identifier", "method name")
        self.expect("(")
        arity = 0
        if self.peek().kind == "number":
            arity = int(self.next().lexeme)
        self.expect(")")
        body = self.block(in_around=False)
        return MethodDecl(name.lexeme, arity, tuple(annotations), body, name.line, name.col)

    def block(self, in_around):
        self.expect("{")
        stmts = []
        while not self.at("}"):
            stmts.append(self.stmt(in_around))
        self.expect("}")
        return tuple(stmts)

    def stmt(self, in_around):
        tok = self.peek()
        if self.at("if"):
            self.next()
            self.expect("(")
            cond = self.cond()
            self.expect(")")
            then = self.block(in_around)
            orelse = None
            if self.at("else"):
                self.next()
                orelse = self.block(in_around)
            return If(cond, then, orelse)
        if self.at("while"):
            self.next()
            self.expect("(")
            cond = self.cond()
            self.expect(")")
            body = self.block(in_around)
            return While(cond, body)
        if self.at("throw"):
            self.next()
            name = self.expect_kind("identifier", "exception name")
            self.expect(";")
            return Throw(name.lexeme)
        if self.at("return"):
            self.next()
            self.expect(";")
            return Return()
        if self.at("atomic"):
            self.next()
            label = self.expect_kind("identifier", "label")
            self.expect(";")
            return Atomic(label.lexeme)
        if self.at("proceed"):
            if not in_around:
                raise ParseError(tok.line, tok.col, "proceed() is only allowed in around advice")
            self.next()
            self.expect("(")
            self.expect(")")
            self.expect(";")
            return Proceed()
        if tok.kind == "identifier":
            call = self.call()
            self.expect(";")
            return call
        self.error(["statement"])

    def call(self):
        receiver = self.expect_kind("identifier", "receiver name")
        self.expect(".")
        method = self.expect_kind("identifier", "method name")
        self.expect("(")
        arity = 0
        if self.peek().kind == "number":
            arity = int(self.next().lexeme)
        self.expect(")")
        return Call(receiver.lexeme, method.lexeme, arity)

    def cond(self):
        tok = self.peek()
        if tok.kind != "identifier":
            self.error(["condition"])
        if self.peek(1).lexeme == ".":
            return self.call()
        self.next()
        return tok.lexeme

    def aspectdecl(self):
        kw = self.expect("aspect")
        name = self.expect_kind("identifier", "aspect name")
        self.expect("{")
        pointcuts = []
        advice = []
        while not self.at("}"):
            if self.at("pointcut"):
                pointcuts.append(self.pointcutdecl())
            elif self.at("before") or self.at("after") or self.at("around"):
                advice.append(self.advicedecl())
            else:
                self.error(["'pointcut'", "'before'", "'after'", "'around'"])
        self.expect("}")
        seen = set()
        for pc in pointcuts:
            if pc.name in seen:
                raise DuplicateNameError(pc.line, pc.col, f"duplicate pointcut {pc.name!r} in aspect {name.lexeme!r}")
            seen.add(pc.name)
        for adv in advice:
            if isinstance(adv.target, str) and adv.target not in seen:
                raise UnknownPointcutError(adv.line, adv.col, f"unknown pointcut {adv.target!r}")
        return AspectDecl(name.lexeme, tuple(pointcuts), tuple(advice), kw.line, kw.col)

    def pointcutdecl(self):
        kw = self.expect("pointcut")
        name = self.expect_kind("identifier", "pointcut name")
        self.expect(":")
        self.expect("call")
        self.expect("(")
        pattern = self.pattern()
        self.expect(")")
        self.expect(";")
        return PointcutDecl(name.lexeme, pattern, kw.line, kw.col)

    def advicedecl(self):
        kw = self.next()  # before | after | around
        self.expect("(")
        self.expect(")")
        self.expect(":")
        if self.at("call"):
            self.next()
            self.expect("(")
            target = self.pattern()
            self.expect(")")
        else:
            target = self.expect_kind("identifier", "pointcut name").lexeme
        body = self.block(in_around=kw.lexeme == "around")
        if kw.lexeme != "around":
            for _, stmt in iter_statements(body):
                if isinstance(stmt, Proceed):
                    raise ParseError(kw.line, kw.col, "proceed() is only allowed in around advice")
        else:
            count = sum(1 for _, s in iter_statements(body) if isinstance(s, Proceed))
            if count > 1:
                raise ParseError(kw.line, kw.col, "around advice may contain at most one proceed()")
        return AdviceDecl(kw.lexeme, target, body, kw.line, kw.col)

    def glob(self, stoppers):
        parts = []
        while True:
            tok = self.peek()
            if tok.kind == "identifier" or tok.lexeme == "*":
                parts.append(tok.lexeme)
                self.next()
            else:
                break
            if self.peek().lexeme in stoppers:
                break
        if not parts:
            self.error(["glob"])
        return "".join(parts)

    def pattern(self):
        receiver = self.glob({"."})
        self.expect(".")
        method = self.glob({"("})
        self.expect("(")
        arity = 0
        tok = self.peek()
        if tok.lexeme == "..":
            self.next()
            arity = None
        elif tok.kind == "number":
            arity = int(self.next().lexeme)
        self.expect(")")
        return CallPattern(receiver, method, arity)


def _validate_names(program: Program):
    seen = {}
    for d in program.declarations:
        if d.name in seen:
            raise DuplicateNameError(d.line, d.col, f"duplicate declaration {d.name!r}")
        seen[d.name] = d


def validate_precedence(program: Program):
    """Check the precedence directive against declared aspects."""
    if program.precedence is None:
        return
    aspects = {a.name for a in program.aspects()}
    seen = set()
    for name in program.precedence:
        if name not in aspects:
            raise PrecedenceError(f"precedence names undeclared aspect {name!r}")
        if name in seen:
            raise PrecedenceError(f"precedence lists aspect {name!r} twice")
        seen.add(name)


def parse(source: str, check_precedence: bool = True) -> Program:
    """Parse mini-DSL source text into a validated Program."""
    program, _ = _Parser(tokenize(source)).program()
    _validate_names(program)
    if check_precedence:
        validate_precedence(program)
    return program


def merge_programs(programs) -> Program:
    """Combine per-file Programs into one; at most one precedence directive."""
    decls = []
    precedence = None
    for p in programs:
        decls.extend(p.declarations)
        if p.precedence is not None:
            if precedence is not None:
                raise PrecedenceError("multiple precedence directives across source files")
            precedence = p.precedence
    merged = Program(tuple(decls), precedence)
    _validate_names(merged)
    validate_precedence(merged)
    return merged


# printer --------------------------------------------------------------

_INDENT = "    "


def _fmt_call(call: Call):
    arity = str(call.arity) if call.arity else ""
    return f"{call.receiver}.{call.method}({arity})"


def _fmt_cond(cond):
    return _fmt_call(cond) if isinstance(cond, Call) else cond


def _fmt_pattern(p: CallPattern):
    arity = ".." if p.arity is None else str(p.arity)
    return f"{p.receiver}.{p.method}({arity})"


def _fmt_block(body, depth, out):
    if not body:
        out[-1] += " {}"
        return
    out[-1] += " {"
    pad = _INDENT * (depth + 1)
    for stmt in body:
        if isinstance(stmt, Call):
            out.append(f"{pad}{_fmt_call(stmt)};")
        elif isinstance(stmt, If):
            out.append(f"{pad}if ({_fmt_cond(stmt.cond)})")
            _fmt_block(stmt.then, depth + 1, out)
            if stmt.orelse is not None:
                out[-1] += " else"
                _fmt_block(stmt.orelse, depth + 1, out)
        elif isinstance(stmt, While):
            out.append(f"{pad}while ({_fmt_cond(stmt.cond)})")
            _fmt_block(stmt.body, depth + 1, out)
        elif isinstance(stmt, Throw):
            out.append(f"{pad}throw {stmt.exception};")
        elif isinstance(stmt, Return):
            out.append(f"{pad}return;")
        elif isinstance(stmt, Atomic):
            out.append(f"{pad}atomic {stmt.label};")
        elif isinstance(stmt, Proceed):
            out.append(f"{pad}proceed();")
        else:  # pragma: no cover
            raise TypeError(f"unknown statement {stmt!r}")
    out.append(_INDENT * depth + "}")


def pretty_print(program: Program) -> str:
    """Render a Program canonically; the output reparses to an equal AST."""
    out = []
    if program.precedence is not None:
        out.append("precedence " + ", ".join(program.precedence) + ";")
        out.append("")
    for d in program.declarations:
        if isinstance(d, TypeDecl):
            out.append(f"class {d.name}" + " {")
            for m in d.methods:
                for ann in m.annotations:
                    out.append(f"{_INDENT}@prop({ann})")
                arity = str(m.arity) if m.arity else ""
                out.append(f"{_INDENT}{m.name}({arity})")
                _fmt_block(m.body, 1, out)
            out.append("}")
        else:
            out.append(f"aspect {d.name}" + " {")
            for pc in d.pointcuts:
                out.append(f"{_INDENT}pointcut {pc.name}: call({_fmt_pattern(pc.pattern)});")
            for adv in d.advice:
                if isinstance(adv.target, CallPattern):
                    target = f"call({_fmt_pattern(adv.target)})"
                else:
                    target = adv.target
                out.append(f"{_INDENT}{adv.kind}(): {target}")
                _fmt_block(adv.body, 1, out)
            out.append("}")
        out.append("")
    return "\n".join(out[:-1]) + "\n" if out else ""


# traversal ------------------------------------------------------------


@dataclass(frozen=True)
class AspectInfo:
    name: str
    pointcuts: int
    before: int
    after: int
    around: int


def collect_aspect_info(program: Program):
    """One record per AspectDecl, in declaration order."""
    records = []
    for a in program.aspects():
        counts = {"before": 0, "after": 0, "around": 0}
        for adv in a.advice:
            counts[adv.kind] += 1
        records.append(AspectInfo(a.name, len(a.pointcuts), counts["before"], counts["after"], counts["around"]))
    return records
