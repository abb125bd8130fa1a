"""Grammar-driven generator of class-expression ASTs."""

from hypothesis import strategies as st

from algrr.io.expr import (CLASS_FUNCTIONS, BundleOp, BundleRef, Call, Generator, Neg, Product,
                           Rational, Sum)

NAMES = ("A", "B", "T")

bundles = st.recursive(
    st.sampled_from(NAMES).map(BundleRef),
    lambda inner: st.one_of(
        inner.map(lambda b: BundleOp("dual", (b,))),
        st.lists(inner, min_size=2, max_size=3).map(lambda bs: BundleOp("sum", tuple(bs))),
    ),
    max_leaves=4,
)

leaves = st.one_of(
    st.fractions(min_value=0, max_value=20, max_denominator=12).map(Rational),
    st.builds(Generator, st.integers(min_value=1, max_value=3), bundles),
    st.builds(lambda f, b: Call(f, (b,)), st.sampled_from(sorted(CLASS_FUNCTIONS)), bundles),
    st.builds(lambda p, b: Call("lambda", (p, b)), st.integers(min_value=0, max_value=3), bundles),
)


def _signed(node):
    return st.one_of(st.just(node), st.just(Neg(node)))


exprs = st.recursive(
    leaves,
    lambda inner: st.one_of(
        st.lists(inner, min_size=2, max_size=3).map(lambda fs: Product(tuple(fs))),
        st.lists(inner.flatmap(_signed), min_size=2, max_size=3).map(lambda ts: Sum(tuple(ts))),
        inner.map(Neg),
    ),
    max_leaves=8,
)
