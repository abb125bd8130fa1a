"""Formal bundles, derived bundles, and the generator context they live in."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ContextMismatch, RankMismatch, UnknownBundle

FORMAL = "formal"
DUAL = "dual"
SUM = "sum"
COMPLEXIFY = "complexify"
TENSOR_LINE = "tensor_line"


@dataclass(frozen=True)
class BundleSymbol:
    """A named bundle of complex rank ``rank``.

    Formal bundles own a family of Chern roots ``x_1..x_rank``.  Derived
    bundles (dual, direct sum, complexification, twist by a line) own
    no generators of their own: their roots are expressed through the
    roots of the formal bundles in ``parts``.
    """

    name: str
    rank: int
    kind: str = FORMAL
    parts: tuple[BundleSymbol, ...] = ()

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"bundle {self.name!r} must have rank >= 1, got {self.rank}")

    def __str__(self):
        return self.name

    def formal_leaves(self) -> tuple[BundleSymbol, ...]:
        """Formal bundles this bundle is built from, without repeats."""
        if self.kind == FORMAL:
            return (self,)
        seen: dict[str, BundleSymbol] = {}
        for p in self.parts:
            for leaf in p.formal_leaves():
                seen.setdefault(leaf.name, leaf)
        return tuple(seen.values())


def formal(name: str, rank: int) -> BundleSymbol:
    return BundleSymbol(name, rank)


def dual(b: BundleSymbol) -> BundleSymbol:
    if b.kind == DUAL:
        return b.parts[0]
    return BundleSymbol(f"dual({b.name})", b.rank, DUAL, (b,))


def direct_sum(*bs: BundleSymbol) -> BundleSymbol:
    if len(bs) < 2:
        raise ValueError("direct_sum needs at least two bundles")
    return BundleSymbol(
        "sum(" + ",".join(b.name for b in bs) + ")", sum(b.rank for b in bs), SUM, tuple(bs)
    )


def complexify(b: BundleSymbol) -> BundleSymbol:
    """``B (x) C``: roots ``{x_i} u {-x_i}``."""
    return BundleSymbol(f"cx({b.name})", 2 * b.rank, COMPLEXIFY, (b,))


def tensor_line(b: BundleSymbol, line: BundleSymbol) -> BundleSymbol:
    """``B (x) L`` for a line bundle ``L``: roots ``x_i + y``."""
    if line.rank != 1:
        raise RankMismatch(f"tensor_line needs a line bundle, {line.name} has rank {line.rank}")
    return BundleSymbol(f"tensor({b.name},{line.name})", b.rank, TENSOR_LINE, (b, line))


def bundle_transform(op: str, *inputs: BundleSymbol) -> BundleSymbol:
    ops = {"dual": dual, "direct_sum": direct_sum, "complexify": complexify,
           "tensor_line": tensor_line}
    try:
        fn = ops[op]
    except KeyError:
        raise ValueError(f"unknown bundle transform {op!r}") from None
    return fn(*inputs)


class BundleContext:
    """The set of formal bundles whose Chern classes generate a series ring.

    Two series can only be combined when their contexts are equal.
    """

    __slots__ = ("_ranks",)

    def __init__(self, bundles=()):
        ranks: dict[str, int] = {}
        for b in bundles:
            for leaf in b.formal_leaves():
                old = ranks.get(leaf.name)
                if old is not None and old != leaf.rank:
                    raise ValueError(
                        f"bundle name {leaf.name!r} used with ranks {old} and {leaf.rank}"
                    )
                ranks[leaf.name] = leaf.rank
        self._ranks = dict(sorted(ranks.items()))

    @classmethod
    def of(cls, *bundles: BundleSymbol) -> BundleContext:
        return cls(bundles)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._ranks)

    def rank(self, name: str) -> int:
        try:
            return self._ranks[name]
        except KeyError:
            raise UnknownBundle(f"bundle {name!r} is not in context {self}") from None

    def require(self, b: BundleSymbol) -> None:
        for leaf in b.formal_leaves():
            if self._ranks.get(leaf.name) != leaf.rank:
                raise UnknownBundle(f"bundle {leaf.name!r} (rank {leaf.rank}) not in context {self}")

    def check_same(self, other: BundleContext) -> None:
        if self != other:
            raise ContextMismatch(f"contexts differ: {self} vs {other}")

    def __eq__(self, other):
        return isinstance(other, BundleContext) and self._ranks == other._ranks

    def __hash__(self):
        return hash(tuple(self._ranks.items()))

    def __repr__(self):
        inner = ", ".join(f"{n}:{r}" for n, r in self._ranks.items())
        return f"BundleContext({inner})"
