"""Characteristic classes via the splitting principle.

Every class is computed from the power sums ``p_k = sum_i x_i^k`` of a
bundle's Chern roots, re-expressed in the elementary symmetric generators
``c_j`` with Newton's identities:

* additive classes  ``sum_i a(x_i)  = rank*a_0 + sum_k a_k p_k``
* multiplicative    ``prod_i f(x_i) = c_top^v * g_0^rank * exp(sum_k b_k p_k)``
  where ``f = x^v g`` and ``log(g/g_0) = sum_k b_k x^k``.

Multiplicative classes keep their per-root factored form
(:class:`Factorization`) so that Euler classes can be divided out
constructively.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from ..errors import NotDivisible, UnsupportedKind
from . import rootseries as rs
from .bundles import (COMPLEXIFY, DUAL, FORMAL, SUM, TENSOR_LINE, BundleContext,
                      BundleSymbol, complexify)
from .series import ChernSeries, mono_str

KINDS = ("total_chern", "chern_character", "todd", "todd_complexified", "euler",
         "alternating_wedge_ch", "wedge_power_ch")


# power sums and elementary symmetric functions ----------------------------


def power_sums(b: BundleSymbol, context: BundleContext, cutoff: int) -> list[ChernSeries]:
    """``[p_0, p_1, ..., p_cutoff]`` for the roots of ``b``; ``p_0`` is the rank."""
    context.require(b)
    if b.kind == FORMAL:
        e = [ChernSeries.generator(context, cutoff, b.name, j) for j in range(cutoff + 1)]
        p = [ChernSeries.constant(context, cutoff, b.rank)]
        for k in range(1, cutoff + 1):
            acc = e[k].scale((-1) ** (k - 1) * k)
            for i in range(1, k):
                acc = acc + (e[k - i] * p[i]).scale((-1) ** (k - 1 + i))
            p.append(acc)
        return p
    if b.kind == DUAL:
        inner = power_sums(b.parts[0], context, cutoff)
        return [s.scale((-1) ** k) for k, s in enumerate(inner)]
    if b.kind == SUM:
        parts = [power_sums(x, context, cutoff) for x in b.parts]
        return [sum(col[1:], col[0]) for col in zip(*parts)]
    if b.kind == COMPLEXIFY:
        inner = power_sums(b.parts[0], context, cutoff)
        return [s.scale(1 + (-1) ** k) for k, s in enumerate(inner)]
    if b.kind == TENSOR_LINE:
        base, line = b.parts
        pb = power_sums(base, context, cutoff)
        y = power_sums(line, context, cutoff)[1]
        ypow = [ChernSeries.constant(context, cutoff)]
        for _ in range(cutoff):
            ypow.append(ypow[-1] * y)
        out = []
        for k in range(cutoff + 1):
            acc = ChernSeries.zero(context, cutoff)
            for m in range(k + 1):
                acc = acc + (pb[m] * ypow[k - m]).scale(comb(k, m))
            out.append(acc)
        return out
    raise UnsupportedKind(f"unknown bundle kind {b.kind!r}")


def elementary_from_power_sums(p: list[ChernSeries], count: int) -> list[ChernSeries]:
    """``[e_0..e_count]`` from power sums by Newton's identities."""
    ctx, cut = p[0].context, p[0].cutoff
    e = [ChernSeries.constant(ctx, cut)]
    for j in range(1, count + 1):
        acc = ChernSeries.zero(ctx, cut)
        for i in range(1, j + 1):
            if i < len(p):
                acc = acc + (e[j - i] * p[i]).scale((-1) ** (i - 1))
        e.append(acc.scale(Fraction(1, j)))
    return e


def additive_class(b: BundleSymbol, a: rs.RootSeries, context: BundleContext,
                   cutoff: int) -> ChernSeries:
    p = power_sums(b, context, cutoff)
    acc = ChernSeries.constant(context, cutoff, b.rank * a.coeff(0))
    for k in range(1, cutoff + 1):
        acc = acc + p[k].scale(a.coeff(k))
    return acc


def _product_over_roots(b: BundleSymbol, f: rs.RootSeries, context: BundleContext,
                        cutoff: int) -> ChernSeries:
    """``prod_i f(x_i)`` over the roots of ``b``, with no factor bookkeeping."""
    v = f.valuation(cutoff + 1)
    if v is None or v * b.rank > cutoff:
        return ChernSeries.zero(context, cutoff)
    g = f.shift(v) if v else f
    p = power_sums(b, context, cutoff)
    logs = g.log()
    expo = ChernSeries.zero(context, cutoff)
    for k in range(1, cutoff + 1):
        expo = expo + p[k].scale(logs.coeff(k))
    out = expo.exp().scale(g.coeff(0) ** b.rank)
    if v:
        top = elementary_from_power_sums(p, b.rank)[b.rank]
        out = out * (top ** v)
    return out.without_factors()


# factored forms -----------------------------------------------------------


def _atoms(b: BundleSymbol, f: rs.RootSeries) -> list[tuple[BundleSymbol, rs.RootSeries]]:
    """Rewrite ``prod over roots of b of f`` as per-root products over atoms.

    Atoms are formal bundles and line twists (whose roots do not split
    over a single formal bundle).
    """
    if b.kind in (FORMAL, TENSOR_LINE):
        return [(b, f)]
    if b.kind == DUAL:
        return _atoms(b.parts[0], f.reflect())
    if b.kind == SUM:
        return [a for part in b.parts for a in _atoms(part, f)]
    if b.kind == COMPLEXIFY:
        return _atoms(b.parts[0], f * f.reflect())
    raise UnsupportedKind(f"unknown bundle kind {b.kind!r}")


class Factorization:
    """``scalar * prod_atoms prod_roots f_atom(x) * cofactor``.

    The cofactor is an ordinary (unfactored) series or None.
    """

    __slots__ = ("context", "cutoff", "scalar", "atoms", "cofactor")

    def __init__(self, context, cutoff, scalar=Fraction(1), atoms=None, cofactor=None):
        self.context = context
        self.cutoff = cutoff
        self.scalar = Fraction(scalar)
        self.atoms: dict[str, tuple[BundleSymbol, rs.RootSeries]] = dict(atoms or {})
        self.cofactor = cofactor

    @classmethod
    def of(cls, b: BundleSymbol, f: rs.RootSeries, context, cutoff) -> Factorization:
        out = cls(context, cutoff)
        for atom, g in _atoms(b, f):
            out._absorb(atom, g)
        return out

    def _absorb(self, atom, g):
        if atom.name in self.atoms:
            g = self.atoms[atom.name][1] * g
        self.atoms[atom.name] = (atom, g)

    def combine(self, other: Factorization) -> Factorization:
        out = Factorization(self.context, self.cutoff, self.scalar * other.scalar, self.atoms,
                            _mul_opt(self.cofactor, other.cofactor))
        for atom, g in other.atoms.values():
            out._absorb(atom, g)
        return out

    def with_cofactor(self, s: ChernSeries) -> Factorization:
        return Factorization(self.context, self.cutoff, self.scalar, self.atoms,
                             _mul_opt(self.cofactor, s))

    def scaled(self, k) -> Factorization:
        return Factorization(self.context, self.cutoff, self.scalar * k, self.atoms,
                             self.cofactor)

    def expand(self) -> ChernSeries:
        out = ChernSeries.constant(self.context, self.cutoff, self.scalar)
        for atom, g in self.atoms.values():
            out = out * _product_over_roots(atom, g, self.context, self.cutoff)
        if self.cofactor is not None:
            out = out * self.cofactor
        return out.with_factors(self)


def _mul_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a * b


def multiplicative_class(b: BundleSymbol, f: rs.RootSeries, cutoff: int,
                         context: BundleContext | None = None) -> ChernSeries:
    """``prod_i f(x_i)`` over the roots of ``b``, carrying its factored form."""
    context = context or BundleContext.of(b)
    context.require(b)
    return Factorization.of(b, f, context, cutoff).expand()


# public operations --------------------------------------------------------


def characteristic_class(kind: str, b: BundleSymbol, cutoff: int,
                         context: BundleContext | None = None, p: int | None = None) -> ChernSeries:
    """Expand the named class of ``b`` in the generators of ``context``.

    ``p`` is required for ``wedge_power_ch`` (the class ``ch(Lambda^p b)``).
    """
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    context = context or BundleContext.of(b)
    context.require(b)
    if kind == "total_chern":
        return multiplicative_class(b, rs.one_plus_x(), cutoff, context)
    if kind == "chern_character":
        return additive_class(b, rs.exp_series(), context, cutoff)
    if kind == "todd":
        return multiplicative_class(b, rs.todd_series(), cutoff, context)
    if kind == "todd_complexified":
        return multiplicative_class(complexify(b), rs.todd_series(), cutoff, context)
    if kind == "euler":
        return multiplicative_class(b, rs.identity_x(), cutoff, context)
    if kind == "alternating_wedge_ch":
        return multiplicative_class(b, rs.one_minus_exp(), cutoff, context)
    if kind == "wedge_power_ch":
        if p is None:
            raise UnsupportedKind("wedge_power_ch needs an exterior power p")
        return wedge_power_ch(b, p, cutoff, context)
    raise UnsupportedKind(f"unsupported class kind {kind!r}")


def wedge_power_ch(b: BundleSymbol, p: int, cutoff: int,
                   context: BundleContext | None = None) -> ChernSeries:
    """``ch(Lambda^p b)``, the ``t^p`` coefficient of ``prod_i (1 + t e^{x_i})``.

    The exponentials ``y_i = e^{x_i}`` have power sums
    ``sum_i e^{m x_i} = rank + sum_k m^k p_k / k!``; Newton's identities
    then give their elementary symmetric functions.
    """
    context = context or BundleContext.of(b)
    context.require(b)
    if p < 0:
        raise ValueError("exterior power must be non-negative")
    if p > b.rank:
        return ChernSeries.zero(context, cutoff)
    ps = power_sums(b, context, cutoff)
    q = [ChernSeries.constant(context, cutoff, b.rank)]
    for m in range(1, p + 1):
        acc = ChernSeries.constant(context, cutoff, b.rank)
        for k in range(1, cutoff + 1):
            acc = acc + ps[k].scale(Fraction(m**k, factorial(k)))
        q.append(acc)
    return elementary_from_power_sums(q, p)[p]


def divide_by_euler(s: ChernSeries, b: BundleSymbol) -> ChernSeries:
    """Remove the factor ``e(b) = prod_i x_i`` from a factored series.

    Only constructive division is supported: ``s`` must carry a per-root
    factorization in which every atom of ``e(b)`` appears with at least
    the required order of vanishing.
    """
    fac = s.factors
    if fac is None:
        raise NotDivisible("series carries no per-root factorization")
    s.context.require(b)
    out = Factorization(fac.context, fac.cutoff, fac.scalar, fac.atoms, fac.cofactor)
    for atom, e in _atoms(b, rs.identity_x()):
        m = e.valuation(2 * b.rank + 1)
        unit = e.coeff(m)
        if atom.name not in out.atoms:
            raise NotDivisible(f"no factor over the roots of {atom.name}")
        _, g = out.atoms[atom.name]
        v = g.valuation(m)
        if v is not None:
            raise NotDivisible(
                f"factor over {atom.name} vanishes to order {v} < {m} at the origin")
        out.atoms[atom.name] = (atom, g.shift(m) * (1 / unit))
    return out.expand()


@dataclass(frozen=True)
class IdentityReport:
    rank: int
    cutoff: int
    holds: bool
    first_discrepancy: tuple[str, Fraction, Fraction] | None = None

    def __post_init__(self):
        if self.holds != (self.first_discrepancy is None):
            raise ValueError("holds must be true exactly when no discrepancy is recorded")


def first_discrepancy(lhs: ChernSeries, rhs: ChernSeries):
    """First monomial (canonical order) where the coefficients differ."""
    keys = set(lhs.terms) | set(rhs.terms)
    for m in sorted(keys, key=lambda m: (sum(j * e for _, j, e in m), m)):
        a, b = lhs.coefficient(m), rhs.coefficient(m)
        if a != b:
            return mono_str(m), a, b
    return None


def verify_rr_identity(k: int, cutoff: int, todd_root: rs.RootSeries | None = None) -> IdentityReport:
    """Check ``Td(T(x)C) * (ch L^even T - ch L^odd T) / e(T) = (-1)^k Td(T)``.

    ``T`` is a formal rank-``k`` bundle.  ``todd_root`` replaces the per-root
    Todd series on both sides (used for falsification controls).
    """
    if k < 1:
        raise ValueError("rank must be >= 1")
    if cutoff < k:
        raise ValueError("cutoff must be at least the rank")
    todd = todd_root or rs.todd_series()
    t = BundleSymbol("T", k)
    ctx = BundleContext.of(t)
    lhs = (multiplicative_class(complexify(t), todd, cutoff, ctx)
           * multiplicative_class(t, rs.one_minus_exp(), cutoff, ctx))
    lhs = divide_by_euler(lhs, t)
    rhs = multiplicative_class(t, todd, cutoff, ctx).scale((-1) ** k)
    bad = first_discrepancy(lhs, rhs)
    return IdentityReport(k, cutoff, bad is None, bad)
