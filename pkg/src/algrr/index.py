"""Topological sides of the algebroid and foliated Riemann-Roch formulas.

Indices are reported for normalized (integral) Chern classes.  The raw
Chern-Weil prefactor ``(-1)^k (2 pi i)^{-k}`` is carried along as a
symbolic tag only; with raw degree-``j`` classes equal to ``(-2 pi i)^j``
times normalized ones it cancels exactly against the top-degree
conversion.  What remains is an orientation sign ``(-1)^p`` on the
holomorphic degree, which is what makes the ``p = 1`` value on a leaf
equal to minus half its Euler characteristic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .chern import (BundleContext, BundleSymbol, ChernSeries, characteristic_class, dual,
                    formal, parse_monomial, top_extract, wedge_power_ch)
from .chern.series import mono_degree, mono_str
from .errors import (DegreeMismatch, NegativeWeight, OddLeafDimension, UnknownBundle,
                     UnsupportedLeafDimension, ValidationError)
from .prefactor import PiMonomial, algebroid_prefactor, two_pi

TANGENT = "F"  # reserved name for the leafwise holomorphic tangent bundle F^(1,0)


class IntegrationFunctional:
    """Linear map from top-degree Chern monomials to rationals.

    Unlisted monomials integrate to zero.
    """

    def __init__(self, top_degree: int, values: Mapping | None = None):
        self.top_degree = top_degree
        self.values = {}
        for key, v in (values or {}).items():
            m = parse_monomial(key) if isinstance(key, str) else tuple(key)
            if mono_degree(m) != top_degree:
                raise DegreeMismatch(
                    f"monomial {mono_str(m)} has degree {mono_degree(m)}, expected {top_degree}")
            self.values[m] = Fraction(v)

    def __call__(self, s: ChernSeries) -> Fraction:
        top = top_extract(s, self.top_degree)
        return sum((c * self.values.get(m, Fraction(0)) for m, c in top.items()), Fraction(0))

    def bundles(self) -> set[str]:
        return {name for m in self.values for name, _, _ in m}

    def __repr__(self):
        body = ", ".join(f"{mono_str(m)}: {v}" for m, v in sorted(self.values.items()))
        return f"IntegrationFunctional({self.top_degree}; {body})"


@dataclass(frozen=True)
class NormalizedIndex:
    value: Fraction
    raw_prefactor: str
    rank: int
    p: int


def algebroid_rr_index(g: BundleSymbol, E: BundleSymbol, p: int, F: IntegrationFunctional,
                       cutoff: int | None = None) -> NormalizedIndex:
    """``(-1)^p F( ch(Lambda^p g*) ch(E) Td(g) )`` in normalized classes."""
    k = g.rank
    if F.top_degree != k:
        raise DegreeMismatch(f"functional has top degree {F.top_degree}, algebroid rank is {k}")
    if not 0 <= p <= k:
        raise ValueError(f"holomorphic degree p={p} outside 0..{k}")
    cutoff = k if cutoff is None else cutoff
    if cutoff < k:
        raise ValueError(f"cutoff {cutoff} below top degree {k}")
    ctx = BundleContext.of(g, E)
    integrand = (wedge_power_ch(dual(g), p, cutoff, ctx)
                 * characteristic_class("chern_character", E, cutoff, ctx)
                 * characteristic_class("todd", g, cutoff, ctx))
    value = (-1) ** p * F(integrand)
    return NormalizedIndex(value, algebroid_prefactor(k).canonical(), k, p)


# foliations ----------------------------------------------------------------


@dataclass(frozen=True)
class LeafSpec:
    genus: int | None
    weight: Fraction
    compact: bool = True
    functional: IntegrationFunctional | None = None

    @property
    def hyperbolic(self) -> bool:
        return self.compact and self.genus is not None and self.genus >= 2

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus


@dataclass(frozen=True)
class FoliationDescriptor:
    """Leaf data for an atomic invariant transverse measure on compact leaves.

    ``bundle_degrees`` maps a tangential line bundle to its degree on each
    leaf (leaf-dimension 1).  The tangent bundle ``F`` is implicit.
    """

    leaf_dimension: int
    leaves: tuple[LeafSpec, ...]
    bundle_degrees: Mapping[str, tuple[Fraction, ...]] = field(default_factory=dict)

    def __post_init__(self):
        if self.leaf_dimension < 1:
            raise ValidationError("leaf dimension must be positive", "/leaf_dimension")
        for i, leaf in enumerate(self.leaves):
            if leaf.weight < 0:
                raise NegativeWeight(f"leaf {i} has negative weight {leaf.weight}")
            if not leaf.compact and leaf.weight != 0:
                raise ValidationError("non-compact leaves carry no transverse mass",
                                      f"/leaves/{i}/weight")
            if not leaf.compact and leaf.genus is not None:
                raise ValidationError("genus given for a non-compact leaf", f"/leaves/{i}/genus")
            if leaf.genus is not None and leaf.genus < 0:
                raise ValidationError("genus must be non-negative", f"/leaves/{i}/genus")
            if leaf.compact and self.leaf_dimension == 1 and leaf.genus is None:
                raise ValidationError("compact leaf needs a genus", f"/leaves/{i}/genus")
        if TANGENT in self.bundle_degrees:
            raise ValidationError(f"bundle name {TANGENT!r} is reserved for the tangent bundle",
                                  f"/bundles/{TANGENT}")
        for name, degs in self.bundle_degrees.items():
            if len(degs) != len(self.leaves):
                raise ValidationError(
                    f"bundle {name} lists {len(degs)} degrees for {len(self.leaves)} leaves",
                    f"/bundles/{name}")

    def compact_leaves(self):
        return [(i, leaf) for i, leaf in enumerate(self.leaves) if leaf.compact]

    def rescaled(self, t) -> FoliationDescriptor:
        t = Fraction(t)
        leaves = tuple(LeafSpec(l.genus, l.weight * t, l.compact, l.functional)
                       for l in self.leaves)
        return FoliationDescriptor(self.leaf_dimension, leaves, dict(self.bundle_degrees))

    def sub_descriptor(self, i: int) -> FoliationDescriptor:
        degs = {name: (d[i],) for name, d in self.bundle_degrees.items()}
        return FoliationDescriptor(self.leaf_dimension, (self.leaves[i],), degs)


def _leaf_degree(fol: FoliationDescriptor, E: str, i: int) -> Fraction:
    leaf = fol.leaves[i]
    if E == TANGENT:
        return Fraction(leaf.euler_characteristic)
    try:
        return Fraction(fol.bundle_degrees[E][i])
    except KeyError:
        raise UnknownBundle(f"no degrees given for bundle {E!r}") from None


def leaf_index(fol: FoliationDescriptor, E: str, p: int, i: int) -> Fraction:
    """Normalized index on leaf ``i`` (unweighted)."""
    leaf = fol.leaves[i]
    k = fol.leaf_dimension
    tangent = formal(TANGENT, k)
    if k == 1 and leaf.functional is None:
        if leaf.genus is None:
            raise ValidationError("leaf has no genus", f"/leaves/{i}/genus")
        values = {f"c1({TANGENT})": leaf.euler_characteristic}
        if E != TANGENT:
            values[f"c1({E})"] = _leaf_degree(fol, E, i)
        F = IntegrationFunctional(1, values)
    else:
        if leaf.genus is not None:
            raise UnsupportedLeafDimension(
                f"genus data only describes leaves of complex dimension 1, not {k}")
        if leaf.functional is None:
            raise ValidationError("leaf needs an integration functional", f"/leaves/{i}/functional")
        F = leaf.functional
        if E != TANGENT and E not in F.bundles() and E not in fol.bundle_degrees:
            raise UnknownBundle(f"bundle {E!r} does not appear in the leaf functional")
    bundle = tangent if E == TANGENT else formal(E, 1)
    return algebroid_rr_index(tangent, bundle, p, F).value


def foliated_rr_index(fol: FoliationDescriptor, E: str, p: int) -> Fraction:
    """Weighted sum of per-leaf indices over the compact leaves."""
    if E != TANGENT and fol.leaf_dimension == 1 and E not in fol.bundle_degrees:
        raise UnknownBundle(f"no degrees given for bundle {E!r}")
    total = Fraction(0)
    for i, leaf in fol.compact_leaves():
        if leaf.weight:
            total += leaf.weight * leaf_index(fol, E, p, i)
    return total


def average_euler(fol: FoliationDescriptor) -> Fraction:
    """Integral of the tangential Euler class: ``sum_i w_i (2 - 2 g_i)``."""
    if fol.leaf_dimension != 1:
        raise UnsupportedLeafDimension("the average Euler character needs leaf dimension 1")
    return sum((leaf.weight * leaf.euler_characteristic for _, leaf in fol.compact_leaves()),
               Fraction(0))


@dataclass(frozen=True)
class PositivityVerdict:
    verdict: str  # "NotPositive" or "Inconclusive"
    witness: Fraction


def positivity_obstruction(fol: FoliationDescriptor, E: str) -> PositivityVerdict:
    """A negative top-degree index rules out a positive metric on ``E``.

    For a positive line bundle the top-degree Dolbeault index is the
    measure of a kernel, hence non-negative; a negative topological value
    is therefore an obstruction.  A non-negative value decides nothing.
    """
    value = foliated_rr_index(fol, E, fol.leaf_dimension)
    return PositivityVerdict("NotPositive" if value < 0 else "Inconclusive", value)


def build_suspension(leaf_specs, bundles: Mapping | None = None) -> FoliationDescriptor:
    """Leaf data for a suspension ``(H x S) / pi_1(X)`` of a surface group action.

    ``leaf_specs`` holds ``(genus, weight, compact)`` triples; a non-compact
    leaf has genus ``None`` and weight 0.  Leaves of genus >= 2 are
    hyperbolic and inherit a leafwise Kähler structure from the half-plane.
    """
    leaves = []
    for i, spec in enumerate(leaf_specs):
        genus, weight, compact = (tuple(spec) + (True,))[:3]
        weight = Fraction(weight)
        if weight < 0:
            raise NegativeWeight(f"leaf {i} has negative weight {weight}")
        if not compact and genus is not None:
            raise ValidationError("genus given for a non-compact leaf", f"/leaves/{i}/genus")
        leaves.append(LeafSpec(None if genus is None else int(genus), weight, bool(compact)))
    degs = {name: tuple(Fraction(d) for d in ds) for name, ds in (bundles or {}).items()}
    return FoliationDescriptor(1, tuple(leaves), degs)


@dataclass(frozen=True)
class ConnesComparison:
    k: int
    lhs: str
    rhs: str
    holds: bool
    ratio: str


def connes_comparison(k: int) -> ConnesComparison:
    """Compare the algebroid prefactor with Connes' for leaves of real dimension ``k``.

    Checks ``(2 pi i)^{-k} (-1)^k = (2 pi)^{-k} (-1)^{k/2}`` and reports the
    ratio of the algebroid index to Connes' index, ``(2 pi)^{-k}``.
    """
    if k < 1:
        raise ValueError("leaf dimension must be positive")
    if k % 2:
        raise OddLeafDimension(f"real leaf dimension {k} is odd")
    lhs = algebroid_prefactor(k)
    connes_sign = PiMonomial.constant((-1) ** (k // 2))
    rhs = two_pi() ** (-k) * connes_sign
    ratio = lhs / connes_sign
    return ConnesComparison(k, lhs.canonical(), rhs.canonical(), lhs == rhs, ratio.canonical())
