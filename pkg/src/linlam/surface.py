"""Surface syntax: a named-variable notation for the core language.

Grammar (loosest to tightest): `+` sum, `|>` match, `#` tensor, `@` scalar
product, `*` application or scalar multiplication (resolved by sort), `.`
scalar action with the scalar on the left (right-associative).  `\\x -> body`
binds a vector variable; a file is a sequence of `let NAME = term;` followed
by an optional bare term.  `--` starts a line comment.

Literals: `true false zerov`, the scalars `0 1 isqrt2 im imsqrt2`, dyadic
numbers (`3`, `-1`, `0.75`, `5/2^3`).  Decimal literals must be dyadic.
The low-level constructs print and re-parse as calls: `var(n)`, `conj(s)`,
`of(t, v)`, `bof(t, s)`, `subst(v)`, `lift(s)`, `shift`.

Binary operators other than `*`/`+` act on vectors; `+` and `*` pick the
vector or the scalar constructor from the sorts of their operands.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .dyadic import DyadicFloat
from .terms import (
    FALSE,
    IM,
    IM_ISQRT2,
    ISQRT2,
    LIFT,
    SCALAR,
    SUBST,
    TRUE,
    VEC,
    ZERO_VEC,
    App,
    Bof,
    Conj,
    Dot,
    DyadicLit,
    Lam,
    LiftUnder,
    MatchPair,
    Of,
    ScalarMul,
    ScalarProd,
    ScalarSum,
    SubstArg,
    Sum,
    Tensor,
    Term,
    Var,
    canonical,
    max_free_index,
    sort_of,
)


class LangError(Exception):
    """Structured front-end failure with a source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class LexError(LangError):
    pass


class ParseError(LangError):
    pass


class ScopeError(LangError):
    pass


class SortError(LangError):
    pass


KEYWORDS = {
    "let",
    "true",
    "false",
    "zerov",
    "isqrt2",
    "im",
    "imsqrt2",
    "var",
    "conj",
    "of",
    "bof",
    "subst",
    "lift",
    "shift",
}

_SYMBOLS = ("|>", "->", "+", "#", "@", "*", ".", "\\", "(", ")", "=", ";", ",")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "number" | symbol text | keyword text | "eof"
    text: str
    value: Optional[Fraction]
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def error(msg):
        raise LexError(msg, line, col)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if text.startswith("--", i):
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_col = col
        if ch == "-" and i + 1 < n and text[i + 1] == ">":
            tokens.append(Token("->", "->", None, line, start_col))
            i += 2
            col += 2
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1 if ch == "-" else i
            while j < n and text[j].isdigit():
                j += 1
            if j < n and text[j] == "." and j + 1 < n and text[j + 1].isdigit():
                j += 1
                while j < n and text[j].isdigit():
                    j += 1
                raw = text[i:j]
                whole, frac = raw.lstrip("-").split(".")
                value = Fraction(int(whole) * 10 ** len(frac) + int(frac), 10 ** len(frac))
                if raw.startswith("-"):
                    value = -value
            elif text.startswith("/2^", j) and j + 3 < n and text[j + 3].isdigit():
                mantissa = int(text[i:j])
                j += 3
                k = j
                while k < n and text[k].isdigit():
                    k += 1
                value = Fraction(mantissa, 2 ** int(text[j:k]))
                j = k
            else:
                value = Fraction(int(text[i:j]))
            tokens.append(Token("number", text[i:j], value, line, start_col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            word = text[i:j]
            kind = word if word in KEYWORDS else "ident"
            tokens.append(Token(kind, word, None, line, start_col))
            col += j - i
            i = j
            continue
        for sym in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append(Token(sym, sym, None, line, start_col))
                i += len(sym)
                col += len(sym)
                break
        else:
            error(f"unexpected character {ch!r}")
    tokens.append(Token("eof", "", None, line, col))
    return tokens


# -- surface AST ---------------------------------------------------------


@dataclass(frozen=True)
class SurfaceTerm:
    line: int
    column: int


@dataclass(frozen=True)
class SName(SurfaceTerm):
    name: str


@dataclass(frozen=True)
class SConst(SurfaceTerm):
    term: Term


@dataclass(frozen=True)
class SNumber(SurfaceTerm):
    value: Fraction


@dataclass(frozen=True)
class SLam(SurfaceTerm):
    name: str
    body: SurfaceTerm


@dataclass(frozen=True)
class SOp(SurfaceTerm):
    op: str
    left: SurfaceTerm
    right: SurfaceTerm


@dataclass(frozen=True)
class SCall(SurfaceTerm):
    head: str
    args: tuple


@dataclass(frozen=True)
class SVarIndex(SurfaceTerm):
    index: int


@dataclass(frozen=True)
class Program:
    definitions: tuple[tuple[str, SurfaceTerm], ...]
    main: Optional[SurfaceTerm]


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text!r}", tok.line, tok.column)
        return self.next()

    def parse_program(self) -> Program:
        defs = []
        while self.peek().kind == "let":
            self.next()
            name = self.expect("ident").text
            self.expect("=")
            body = self.parse_term()
            self.expect(";")
            defs.append((name, body))
        main = None
        if self.peek().kind != "eof":
            main = self.parse_term()
        self.expect("eof")
        return Program(tuple(defs), main)

    def parse_term(self) -> SurfaceTerm:
        tok = self.peek()
        if tok.kind == "\\":
            self.next()
            name = self.expect("ident").text
            self.expect("->")
            body = self.parse_term()
            return SLam(tok.line, tok.column, name, body)
        return self.parse_binary(0)

    # Precedence-climbing over the left-associative binary operators.
    _LEVELS = ("+", "|>", "#", "@", "*")

    def parse_binary(self, level: int) -> SurfaceTerm:
        if level == len(self._LEVELS):
            return self.parse_scaled()
        op = self._LEVELS[level]
        node = self.parse_binary(level + 1)
        while self.peek().kind == op:
            tok = self.next()
            right = self.parse_binary(level + 1)
            node = SOp(tok.line, tok.column, op, node, right)
        return node

    def parse_scaled(self) -> SurfaceTerm:
        node = self.parse_atom()
        if self.peek().kind == ".":
            tok = self.next()
            right = self.parse_scaled()  # right-associative
            return SOp(tok.line, tok.column, ".", node, right)
        return node

    def parse_atom(self) -> SurfaceTerm:
        tok = self.next()
        k = tok.kind
        if k == "(":
            inner = self.parse_term()
            self.expect(")")
            return inner
        if k == "\\":
            self.pos -= 1
            return self.parse_term()
        if k == "number":
            return SNumber(tok.line, tok.column, tok.value)
        if k == "true":
            return SConst(tok.line, tok.column, TRUE)
        if k == "false":
            return SConst(tok.line, tok.column, FALSE)
        if k == "zerov":
            return SConst(tok.line, tok.column, ZERO_VEC)
        if k == "isqrt2":
            return SConst(tok.line, tok.column, ISQRT2)
        if k == "im":
            return SConst(tok.line, tok.column, IM)
        if k == "imsqrt2":
            return SConst(tok.line, tok.column, IM_ISQRT2)
        if k == "shift":
            return SConst(tok.line, tok.column, LIFT)
        if k == "var":
            self.expect("(")
            num = self.expect("number")
            if num.value.denominator != 1 or num.value < 0:
                raise ParseError("variable index must be a natural number", num.line, num.column)
            self.expect(")")
            return SVarIndex(tok.line, tok.column, int(num.value))
        if k in ("conj", "subst", "lift"):
            self.expect("(")
            arg = self.parse_term()
            self.expect(")")
            return SCall(tok.line, tok.column, k, (arg,))
        if k in ("of", "bof"):
            self.expect("(")
            first = self.parse_term()
            self.expect(",")
            second = self.parse_term()
            self.expect(")")
            return SCall(tok.line, tok.column, k, (first, second))
        if k == "ident":
            return SName(tok.line, tok.column, tok.text)
        raise ParseError(f"unexpected {tok.text or 'end of input'!r}", tok.line, tok.column)


def parse(text: str) -> Program:
    """Parse a program: let definitions followed by an optional bare term."""
    return _Parser(tokenize(text)).parse_program()


# -- conversion to the core (de Bruijn) language ---------------------------


def _number_term(s: SNumber) -> Term:
    try:
        value = DyadicFloat.from_fraction(s.value)
    except ValueError:
        raise SortError(
            f"literal {s.value} is not dyadic; only m/2^e scalars exist", s.line, s.column
        ) from None
    return canonical(DyadicLit(value))


def to_debruijn(s: SurfaceTerm, env: dict[str, Term] | None = None, binders: list[str] | None = None) -> Term:
    """Resolve names to de Bruijn indices and operators to sorted constructors."""
    env = env or {}
    binders = binders if binders is not None else []

    def resolve(node: SurfaceTerm) -> Term:
        if isinstance(node, SConst):
            return node.term
        if isinstance(node, SNumber):
            return _number_term(node)
        if isinstance(node, SVarIndex):
            return Var(node.index)
        if isinstance(node, SName):
            if node.name in binders:
                return Var(binders.index(node.name))
            if node.name in env:
                return env[node.name]
            raise ScopeError(f"unbound identifier {node.name!r}", node.line, node.column)
        if isinstance(node, SLam):
            binders.insert(0, node.name)
            try:
                body = resolve(node.body)
            finally:
                binders.pop(0)
            return Lam(body)
        if isinstance(node, SCall):
            args = tuple(resolve(a) for a in node.args)
            if node.head == "conj":
                if sort_of(args[0]) != SCALAR:
                    raise SortError("conj expects a scalar", node.line, node.column)
                return Conj(args[0])
            if node.head == "subst":
                return SubstArg(args[0])
            if node.head == "lift":
                if sort_of(args[0]) != SUBST:
                    raise SortError("lift expects a substitution", node.line, node.column)
                return LiftUnder(args[0])
            if node.head == "of":
                return Of(args[0], args[1])
            if node.head == "bof":
                if sort_of(args[1]) != SUBST:
                    raise SortError("bof expects a substitution argument", node.line, node.column)
                return Bof(args[0], args[1])
            raise AssertionError(node.head)
        assert isinstance(node, SOp)
        left, right = resolve(node.left), resolve(node.right)
        ls, rs_ = sort_of(left), sort_of(right)
        op = node.op
        if op == "+":
            if ls == VEC and rs_ == VEC:
                return Sum((left, right))
            if ls == SCALAR and rs_ == SCALAR:
                return ScalarSum((left, right))
            raise SortError("cannot add a scalar and a vector", node.line, node.column)
        if op == "*":
            if ls == VEC and rs_ == VEC:
                return App(left, right)
            if ls == SCALAR and rs_ == SCALAR:
                return ScalarProd((left, right))
            raise SortError("cannot mix sorts under *; use . to scale a vector", node.line, node.column)
        if op == ".":
            if ls == SCALAR and rs_ == VEC:
                return ScalarMul(left, right)
            raise SortError(". expects a scalar on the left and a vector on the right", node.line, node.column)
        if ls != VEC or rs_ != VEC:
            raise SortError(f"{op} expects two vectors", node.line, node.column)
        if op == "|>":
            return MatchPair(left, right)
        if op == "#":
            return Tensor(left, right)
        assert op == "@"
        return Dot(left, right)

    return canonical(resolve(s))


def load_program(
    text: str, env: dict[str, Term] | None = None, eager: bool = True
) -> tuple[dict[str, Term], Optional[Term]]:
    """Parse and resolve a program; definitions must be closed terms.

    Definitions are normalized once at load time (`eager`), so a name used
    many times does not re-reduce its body at every use site.  The bare main
    term is never pre-reduced.
    """
    program = parse(text)
    env = dict(env) if env else {}
    for name, body in program.definitions:
        term = to_debruijn(body, env)
        if max_free_index(term) is not None:
            raise ScopeError(f"definition {name!r} is not closed", body.line, body.column)
        if eager:
            from .engine import normalize

            # Definitions are values: evaluate them bottom-up once, so uses
            # do not re-reduce shared subterms.
            term = normalize(term, strategy="innermost").term
        env[name] = term
    main = to_debruijn(program.main, env) if program.main is not None else None
    return env, main


def parse_term(text: str, env: dict[str, Term] | None = None) -> Term:
    """Parse a single term (let definitions allowed before it)."""
    _, main = load_program(text, env)
    if main is None:
        raise ParseError("expected a term", 1, 1)
    return main
