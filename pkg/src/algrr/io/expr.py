"""Surface syntax for characteristic-class expressions.

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := '-' factor | RATIONAL | IDENT '(' args ')' | '(' expr ')'

``IDENT`` is one of the class functions below or a Chern generator
``cN`` (``N >= 1``).  Function arguments are bundle expressions: a bundle
name, ``dual(B)`` or ``sum(B1, B2, ...)``; ``lambda`` takes an integer
first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from ..chern import (BundleContext, BundleSymbol, ChernSeries, characteristic_class, direct_sum,
                     dual, power_sums, wedge_power_ch)
from ..chern.classes import elementary_from_power_sums
from ..errors import ArityError, ParseError, UnknownBundle

CLASS_FUNCTIONS = {
    "c": "total_chern",
    "ch": "chern_character",
    "td": "todd",
    "tdC": "todd_complexified",
    "e": "euler",
    "wedge_alt": "alternating_wedge_ch",
}
BUNDLE_FUNCTIONS = ("dual", "sum")
LAMBDA = "lambda"
_GENERATOR = re.compile(r"c([1-9][0-9]*)$")


# AST -----------------------------------------------------------------------


@dataclass(frozen=True)
class BundleRef:
    name: str


@dataclass(frozen=True)
class BundleOp:
    op: str  # "dual" | "sum"
    args: tuple

    def __post_init__(self):
        if self.op == "dual" and len(self.args) != 1:
            raise ArityError(f"dual takes 1 bundle, got {len(self.args)}")
        if self.op == "sum" and len(self.args) < 2:
            raise ArityError(f"sum takes at least 2 bundles, got {len(self.args)}")
        if self.op not in BUNDLE_FUNCTIONS:
            raise ArityError(f"unknown bundle operation {self.op!r}")


BundleExpr = Union[BundleRef, BundleOp]


@dataclass(frozen=True)
class Rational:
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", Fraction(self.value))
        if self.value < 0:
            raise ValueError("rational literals are non-negative; use Neg")


@dataclass(frozen=True)
class Generator:
    index: int
    bundle: BundleExpr

    def __post_init__(self):
        if self.index < 1:
            raise ArityError("Chern generator index starts at 1")


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple

    def __post_init__(self):
        if self.name == LAMBDA:
            if (len(self.args) != 2 or not isinstance(self.args[0], int)
                    or isinstance(self.args[0], bool) or self.args[0] < 0
                    or not isinstance(self.args[1], (BundleRef, BundleOp))):
                raise ArityError("lambda takes a non-negative integer and a bundle")
        elif self.name in CLASS_FUNCTIONS:
            if len(self.args) != 1 or not isinstance(self.args[0], (BundleRef, BundleOp)):
                raise ArityError(f"{self.name} takes 1 bundle, got {len(self.args)} arguments")
        else:
            raise ArityError(f"unknown class function {self.name!r}")


@dataclass(frozen=True)
class Product:
    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("a product needs at least two factors")


@dataclass(frozen=True)
class Sum:
    terms: tuple  # subtracted terms appear wrapped in Neg

    def __post_init__(self):
        if len(self.terms) < 2:
            raise ValueError("a sum needs at least two terms")


@dataclass(frozen=True)
class Neg:
    operand: object


ClassExpr = Union[Rational, Generator, Call, Product, Sum, Neg]


# lexer ---------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<number>[0-9]+(?:/[0-9]+|\.[0-9]+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*(),])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # "number" | "ident" | one of "+-*()," | "end"
    text: str
    line: int
    column: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for off, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line, line_start = line + 1, off + 1
        else:
            kind = m.group() if kind == "op" else kind
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


def _describe(tok: Token) -> str:
    return "end of input" if tok.kind == "end" else repr(tok.text)


def _number(text: str) -> Fraction:
    if "/" in text:
        num, den = text.split("/")
        if int(den) == 0:
            raise ZeroDivisionError
        return Fraction(int(num), int(den))
    return Fraction(text)


# parser --------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def fail(self, expected, what=None):
        tok = self.tok
        expected = frozenset(expected)
        msg = what or f"unexpected {_describe(tok)}, expected one of {sorted(expected)}"
        raise ParseError(msg, tok.line, tok.column, expected)

    def expect(self, kind: str) -> Token:
        if self.tok.kind != kind:
            self.fail({kind})
        tok = self.tok
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self.fail({"+", "-", "*", "end"})
        return node

    def expr(self):
        terms = [self.term()]
        while self.tok.kind in ("+", "-"):
            op = self.tok.kind
            self.i += 1
            t = self.term()
            terms.append(Neg(t) if op == "-" else t)
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))

    def term(self):
        factors = [self.factor()]
        while self.tok.kind == "*":
            self.i += 1
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def factor(self):
        tok = self.tok
        if tok.kind == "-":
            self.i += 1
            return Neg(self.factor())
        if tok.kind == "number":
            self.i += 1
            try:
                return Rational(_number(tok.text))
            except ZeroDivisionError:
                raise ParseError("zero denominator", tok.line, tok.column) from None
        if tok.kind == "(":
            self.i += 1
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "ident":
            return self.call()
        self.fail({"number", "ident", "(", "-"})

    def call(self):
        name_tok = self.expect("ident")
        name = name_tok.text
        gen = _GENERATOR.match(name)
        if not gen and name not in CLASS_FUNCTIONS and name != LAMBDA:
            raise ParseError(f"unknown class function {name!r}", name_tok.line, name_tok.column,
                             frozenset(CLASS_FUNCTIONS) | {LAMBDA, "cN"})
        self.expect("(")
        args = []
        if name == LAMBDA:
            p = self.expect("number")
            if not p.text.isdigit():
                raise ParseError("lambda degree must be an integer", p.line, p.column,
                                 frozenset({"integer"}))
            args.append(int(p.text))
            self.expect(",")
        args.append(self.bundle())
        while self.tok.kind == ",":
            self.i += 1
            args.append(self.bundle())
        self.expect(")")
        if gen:
            if len(args) != 1:
                raise ArityError(f"{name} takes 1 bundle, got {len(args)}")
            return Generator(int(gen.group(1)), args[0])
        return Call(name, tuple(args))

    def bundle(self):
        tok = self.expect("ident")
        if tok.text not in BUNDLE_FUNCTIONS or self.tok.kind != "(":
            return BundleRef(tok.text)
        self.i += 1
        args = [self.bundle()]
        while self.tok.kind == ",":
            self.i += 1
            args.append(self.bundle())
        self.expect(")")
        return BundleOp(tok.text, tuple(args))


def parse_class_expr(text: str) -> ClassExpr:
    return _Parser(text).parse()


def parse_bundle_expr(text: str) -> BundleExpr:
    p = _Parser(text)
    node = p.bundle()
    if p.tok.kind != "end":
        p.fail({"end"})
    return node


# printer -------------------------------------------------------------------


def print_bundle(b: BundleExpr) -> str:
    if isinstance(b, BundleRef):
        return b.name
    return f"{b.op}({','.join(print_bundle(a) for a in b.args)})"


def _atom(node) -> str:
    # a node that can stand in factor position without changing the parse
    if isinstance(node, (Product, Sum)):
        return f"({print_class_expr(node)})"
    return print_class_expr(node)


def print_class_expr(node: ClassExpr) -> str:
    if isinstance(node, Rational):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, Generator):
        return f"c{node.index}({print_bundle(node.bundle)})"
    if isinstance(node, Call):
        args = [str(a) if isinstance(a, int) else print_bundle(a) for a in node.args]
        return f"{node.name}({','.join(args)})"
    if isinstance(node, Neg):
        return "-" + _atom(node.operand)
    if isinstance(node, Product):
        return "*".join(_atom(f) for f in node.factors)
    if isinstance(node, Sum):
        out = []
        for i, t in enumerate(node.terms):
            if isinstance(t, Neg) and i > 0:
                inner = t.operand
                text = f"({print_class_expr(inner)})" if isinstance(inner, Sum) else \
                    print_class_expr(inner)
                out.append(" - " + text)
            else:
                text = f"({print_class_expr(t)})" if isinstance(t, Sum) else print_class_expr(t)
                out.append(text if i == 0 else " + " + text)
        return "".join(out)
    raise TypeError(f"not a class expression: {node!r}")


# evaluation ----------------------------------------------------------------


def resolve_bundle(b: BundleExpr, env: Mapping[str, BundleSymbol]) -> BundleSymbol:
    if isinstance(b, BundleRef):
        try:
            return env[b.name]
        except KeyError:
            raise UnknownBundle(f"bundle {b.name!r} is not declared") from None
    parts = [resolve_bundle(a, env) for a in b.args]
    return dual(parts[0]) if b.op == "dual" else direct_sum(*parts)


def _bundles(node, acc):
    if isinstance(node, (BundleRef, BundleOp)):
        acc.append(node)
    elif isinstance(node, Generator):
        acc.append(node.bundle)
    elif isinstance(node, Call):
        acc.extend(a for a in node.args if not isinstance(a, int))
    elif isinstance(node, Product):
        for f in node.factors:
            _bundles(f, acc)
    elif isinstance(node, Sum):
        for t in node.terms:
            _bundles(t, acc)
    elif isinstance(node, Neg):
        _bundles(node.operand, acc)
    return acc


def eval_class_expr(node: ClassExpr, env: Mapping[str, BundleSymbol], cutoff: int,
                    context: BundleContext | None = None) -> ChernSeries:
    """Evaluate ``node`` with bundle names bound by ``env``.

    Every formal bundle in ``env`` enters the ambient context, so results
    from the same table can be combined.
    """
    if context is None:
        leaves = [leaf for b in env.values() for leaf in b.formal_leaves()]
        context = BundleContext.of(*leaves)
    for b in _bundles(node, []):
        context.require(resolve_bundle(b, env))
    return _eval(node, env, cutoff, context)


def _eval(node, env, cutoff, ctx) -> ChernSeries:
    if isinstance(node, Rational):
        return ChernSeries.constant(ctx, cutoff, node.value)
    if isinstance(node, Generator):
        b = resolve_bundle(node.bundle, env)
        if node.index > b.rank:
            return ChernSeries.zero(ctx, cutoff)
        if b.kind == "formal":
            return ChernSeries.generator(ctx, cutoff, b.name, node.index)
        p = power_sums(b, ctx, cutoff)
        return elementary_from_power_sums(p, node.index)[node.index]
    if isinstance(node, Call):
        if node.name == LAMBDA:
            return wedge_power_ch(resolve_bundle(node.args[1], env), node.args[0], cutoff, ctx)
        b = resolve_bundle(node.args[0], env)
        return characteristic_class(CLASS_FUNCTIONS[node.name], b, cutoff, ctx)
    if isinstance(node, Neg):
        return -_eval(node.operand, env, cutoff, ctx)
    if isinstance(node, Product):
        out = _eval(node.factors[0], env, cutoff, ctx)
        for f in node.factors[1:]:
            out = out * _eval(f, env, cutoff, ctx)
        return out
    if isinstance(node, Sum):
        out = _eval(node.terms[0], env, cutoff, ctx)
        for t in node.terms[1:]:
            out = out + _eval(t, env, cutoff, ctx)
        return out
    raise TypeError(f"not a class expression: {node!r}")
