from fractions import Fraction
from itertools import product

from hypothesis import strategies as st

from algrr.chern import BundleContext, ChernSeries, formal

A, B = formal("A", 2), formal("B", 1)
CTX = BundleContext.of(A, B)
CUTOFF = 4


def _monomials(cutoff):
    gens = [("A", 1), ("A", 2), ("B", 1)]
    out = []
    for exps in product(range(cutoff + 1), repeat=len(gens)):
        if sum(j * e for (_, j), e in zip(gens, exps)) <= cutoff:
            out.append(tuple(sorted((n, j, e) for (n, j), e in zip(gens, exps) if e)))
    return out


MONOMIALS = _monomials(CUTOFF)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def series(draw, ctx=CTX, cutoff=CUTOFF):
    terms = draw(st.dictionaries(st.sampled_from(MONOMIALS), rationals, max_size=6))
    return ChernSeries(ctx, cutoff, terms)


def nonzero(q):
    return q if q != 0 else Fraction(1)
