"""Truncated graded series in the Chern-class generators ``c_j(B)``.

A monomial is a sorted tuple of ``(bundle, j, exponent)`` triples; the
generator ``c_j(B)`` has degree ``j``.  Terms above the cutoff are dropped
on construction and after every product.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import factorial
from typing import Iterable, Mapping

from ..errors import ContextMismatch, UnknownBundle
from .bundles import BundleContext

Monomial = tuple  # tuple[tuple[str, int, int], ...]

ONE: Monomial = ()


def mono_degree(m: Monomial) -> int:
    return sum(j * e for _, j, e in m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    acc: dict[tuple[str, int], int] = {}
    for name, j, e in a:
        acc[(name, j)] = e
    for name, j, e in b:
        acc[(name, j)] = acc.get((name, j), 0) + e
    return tuple((n, j, e) for (n, j), e in sorted(acc.items()))


def mono_str(m: Monomial) -> str:
    if not m:
        return "1"
    parts = []
    for name, j, e in m:
        parts.append(f"c{j}({name})" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts)


_GEN_RE = re.compile(r"\s*c(\d+)\(\s*([A-Za-z_][A-Za-z0-9_]*)\s*\)(?:\^(\d+))?\s*$")


def parse_monomial(text: str) -> Monomial:
    """Inverse of :func:`mono_str`, e.g. ``"c1(T)^2*c1(E)"``."""
    text = text.strip()
    if text == "1":
        return ONE
    out: Monomial = ONE
    for piece in text.split("*"):
        m = _GEN_RE.match(piece)
        if not m or int(m.group(1)) < 1:
            raise ValueError(f"not a Chern monomial: {text!r}")
        exp = int(m.group(3) or 1)
        out = mono_mul(out, ((m.group(2), int(m.group(1)), exp),))
    return out


def mono_sort_key(m: Monomial):
    return (mono_degree(m), m)


class ChernSeries:
    """An element of ``Q[c_j(B)]`` truncated above complex degree ``cutoff``.

    Instances are immutable.  ``factors`` optionally carries the per-root
    factored form the series was built from; it is what makes constructive
    Euler division possible and is ignored by equality.
    """

    __slots__ = ("context", "cutoff", "_terms", "factors")

    def __init__(self, context: BundleContext, cutoff: int, terms: Mapping | None = None,
                 factors=None):
        if cutoff < 0:
            raise ValueError("cutoff must be non-negative")
        self.context = context
        self.cutoff = cutoff
        clean = {}
        for m, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0 and mono_degree(m) <= cutoff:
                for name, j, _ in m:
                    if j > context.rank(name):
                        break
                else:
                    clean[m] = c
        self._terms = clean
        self.factors = factors

    # constructors -------------------------------------------------------

    @classmethod
    def constant(cls, context, cutoff, value=1):
        return cls(context, cutoff, {ONE: value})

    @classmethod
    def zero(cls, context, cutoff):
        return cls(context, cutoff)

    @classmethod
    def generator(cls, context, cutoff, name: str, j: int):
        """The class ``c_j(name)``; zero when ``j`` exceeds the rank."""
        rank = context.rank(name)
        if j == 0:
            return cls.constant(context, cutoff)
        if j < 0 or j > rank:
            return cls.zero(context, cutoff)
        return cls(context, cutoff, {((name, j, 1),): 1})

    # inspection ---------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        """Terms in canonical order: by degree, then lexicographically."""
        return sorted(self._terms.items(), key=lambda kv: mono_sort_key(kv[0]))

    def coefficient(self, m) -> Fraction:
        if isinstance(m, str):
            m = parse_monomial(m)
        return self._terms.get(m, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        return self._terms.get(ONE, Fraction(0))

    def homogeneous(self, degree: int) -> ChernSeries:
        return ChernSeries(self.context, self.cutoff,
                           {m: c for m, c in self._terms.items() if mono_degree(m) == degree})

    def __eq__(self, other):
        if not isinstance(other, ChernSeries):
            return NotImplemented
        return (self.context == other.context and self.cutoff == other.cutoff
                and self._terms == other._terms)

    def __hash__(self):
        return hash((self.context, self.cutoff, frozenset(self._terms.items())))

    def __str__(self):
        if not self._terms:
            return "0"
        out = []
        for m, c in self.items():
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if m == ONE:
                body = str(a)
            elif a == 1:
                body = mono_str(m)
            else:
                body = f"{a}*{mono_str(m)}"
            out.append((sign, body))
        first_sign, first = out[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in out[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self):
        return f"ChernSeries({self}; cutoff={self.cutoff})"

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> ChernSeries:
        if isinstance(other, ChernSeries):
            if other.cutoff != self.cutoff:
                raise ContextMismatch(f"cutoffs differ: {self.cutoff} vs {other.cutoff}")
            self.context.check_same(other.context)
            return other
        return ChernSeries.constant(self.context, self.cutoff, Fraction(other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            out[m] = out.get(m, 0) + c
        return ChernSeries(self.context, self.cutoff, out)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, k) -> ChernSeries:
        k = Fraction(k)
        factors = self.factors.scaled(k) if self.factors is not None else None
        return ChernSeries(self.context, self.cutoff,
                           {m: c * k for m, c in self._terms.items()}, factors)

    def __mul__(self, other):
        if not isinstance(other, ChernSeries):
            return self.scale(other)
        other = self._coerce(other)
        out: dict = {}
        cut = self.cutoff
        b_items = [(m, c, mono_degree(m)) for m, c in other._terms.items()]
        for ma, ca in self._terms.items():
            da = mono_degree(ma)
            for mb, cb, db in b_items:
                if da + db > cut:
                    continue
                m = mono_mul(ma, mb)
                out[m] = out.get(m, 0) + ca * cb
        if self.factors is not None and other.factors is not None:
            factors = self.factors.combine(other.factors)
        elif self.factors is not None:
            factors = self.factors.with_cofactor(other.without_factors())
        elif other.factors is not None:
            factors = other.factors.with_cofactor(self.without_factors())
        else:
            factors = None
        return ChernSeries(self.context, cut, out, factors)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not supported")
        result = ChernSeries.constant(self.context, self.cutoff)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def exp(self) -> ChernSeries:
        """``exp(s)`` for ``s`` with zero constant term (finite by truncation)."""
        if self.constant_term() != 0:
            raise ValueError("exp needs a series with zero constant term")
        result = ChernSeries.constant(self.context, self.cutoff)
        power = result
        for n in range(1, self.cutoff + 1):
            power = power * self
            if power.is_zero():
                break
            result = result + power.scale(Fraction(1, factorial(n)))
        return result

    def with_factors(self, factors) -> ChernSeries:
        return ChernSeries(self.context, self.cutoff, self._terms, factors)

    def without_factors(self) -> ChernSeries:
        return ChernSeries(self.context, self.cutoff, self._terms)

    def truncate(self, cutoff: int) -> ChernSeries:
        return ChernSeries(self.context, cutoff, self._terms)


def series_arith(op: str, a: ChernSeries, b) -> ChernSeries:
    """Add, multiply, or scale; ``b`` is a series for add/mul, a rational for scale."""
    if op == "add":
        if not isinstance(b, ChernSeries):
            raise TypeError("add expects two series")
        return a + b
    if op == "mul":
        if not isinstance(b, ChernSeries):
            raise TypeError("mul expects two series")
        return a * b
    if op == "scale":
        return a.scale(b)
    raise ValueError(f"unknown series operation {op!r}")


def top_extract(s: ChernSeries, top_degree: int) -> ChernSeries:
    """The homogeneous component of ``s`` in degree ``top_degree``."""
    if top_degree > s.cutoff:
        raise ValueError(f"top degree {top_degree} exceeds cutoff {s.cutoff}")
    return s.homogeneous(top_degree)


def from_items(context: BundleContext, cutoff: int, items: Iterable) -> ChernSeries:
    """Build a series from ``(monomial-string, coefficient)`` pairs."""
    terms = {}
    for key, c in items:
        m = parse_monomial(key) if isinstance(key, str) else key
        for name, _, _ in m:
            if name not in context.names:
                raise UnknownBundle(name)
        terms[m] = terms.get(m, 0) + Fraction(c)
    return ChernSeries(context, cutoff, terms)
