from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algrr.chern import dual, formal
from algrr.errors import (DegreeMismatch, NegativeWeight, OddLeafDimension,
                          UnsupportedLeafDimension, ValidationError)
from algrr.index import (TANGENT, FoliationDescriptor, IntegrationFunctional, LeafSpec,
                         algebroid_rr_index, average_euler, build_suspension,
                         connes_comparison, foliated_rr_index, leaf_index,
                         positivity_obstruction)
from algrr.prefactor import Gaussian, PiMonomial, algebroid_prefactor, two_pi, two_pi_i

T, E = formal("T", 1), formal("E", 1)


def curve(genus, degree):
    return IntegrationFunctional(1, {"c1(T)": 2 - 2 * genus, "c1(E)": degree})


def test_classical_riemann_roch_on_a_curve():
    res = algebroid_rr_index(T, E, 0, curve(2, 3))
    assert res.value == 2 and res.rank == 1 and res.p == 0
    assert res.raw_prefactor == "i*(2*pi)^-1"


def test_p_one_with_tangent_bundle():
    F = IntegrationFunctional(1, {"c1(T)": -2})
    assert algebroid_rr_index(T, T, 1, F).value == 1


def test_p_one_index_on_curves():
    # -(c1(E) - c1(T)/2) integrated: -(d - (1 - g))
    for g in range(4):
        for d in range(-2, 4):
            assert algebroid_rr_index(T, E, 1, curve(g, d)).value == 1 - g - d


def test_index_of_dual_bundle():
    assert algebroid_rr_index(T, dual(E), 0, curve(1, 2)).value == -2


def test_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        algebroid_rr_index(formal("T", 2), E, 0, curve(0, 0))
    with pytest.raises(DegreeMismatch):
        IntegrationFunctional(2, {"c1(T)": 1})


def test_rank_two_algebroid_on_a_surface():
    # P^1 x P^1 with T = O(2,0) + O(0,2): chi(O) = 1 and chi(T) = 6 (sections: sl2 + sl2)
    T2 = formal("T", 2)
    F = IntegrationFunctional(2, {"c1(T)^2": 8, "c2(T)": 4})
    assert algebroid_rr_index(T2, formal("E", 1), 0, F).value == 1
    assert algebroid_rr_index(T2, T2, 0, F).value == 6


@settings(max_examples=40)
@given(st.integers(0, 4), st.integers(-3, 3), st.integers(1, 4))
def test_cutoff_independence(g, d, extra):
    F = curve(g, d)
    assert algebroid_rr_index(T, E, 0, F, 1 + extra).value == algebroid_rr_index(T, E, 0, F).value


# foliations -----------------------------------------------------------------------


def single_leaf(genus, weight=1, degree=None):
    bundles = {"E": [degree]} if degree is not None else {}
    return build_suspension([(genus, weight)], bundles)


def test_foliated_examples():
    fol = single_leaf(2)
    assert foliated_rr_index(fol, TANGENT, 1) == 1
    assert average_euler(fol) == -2
    two = build_suspension([(2, 1), (3, Fraction(1, 2))])
    assert average_euler(two) == -2 + Fraction(-4, 2)
    mixed = build_suspension([(2, 1), (None, 0, False), (0, 3)])
    assert average_euler(mixed) == -2 + 6


def test_two_leaf_index():
    fol = build_suspension([(2, 1), (3, 2)], {"E": [1, -1]})
    # p = 0: (1 + 1 - 2) * 1 + (-1 + 1 - 3) * 2
    assert foliated_rr_index(fol, "E", 0) == -6


def test_leaf_index_uses_genus_and_degree():
    fol = build_suspension([(1, 5)], {"E": [4]})
    assert leaf_index(fol, "E", 0, 0) == 4


def test_descriptor_validation():
    with pytest.raises(NegativeWeight):
        build_suspension([(2, -1)])
    with pytest.raises(ValidationError) as err:
        build_suspension([(2, 0, False)])
    assert err.value.pointer == "/leaves/0/genus"
    with pytest.raises(ValidationError):
        FoliationDescriptor(1, (LeafSpec(None, Fraction(1), False),))
    with pytest.raises(ValidationError):
        FoliationDescriptor(1, (LeafSpec(-1, Fraction(1)),))
    with pytest.raises(ValidationError):
        FoliationDescriptor(1, (LeafSpec(1, Fraction(1)),), {TANGENT: (Fraction(0),)})
    with pytest.raises(ValidationError):
        FoliationDescriptor(1, (LeafSpec(1, Fraction(1)),), {"E": ()})


def test_higher_leaf_dimension():
    # P^1 x P^1 leaves of weight 3 with L = O(1,0): chi(L) = 2
    F = IntegrationFunctional(2, {"c1(F)^2": 8, "c2(F)": 4, "c1(F)*c1(L)": 2, "c1(L)^2": 0})
    fol = FoliationDescriptor(2, (LeafSpec(None, Fraction(3), True, F),))
    assert foliated_rr_index(fol, "L", 0) == 6
    assert foliated_rr_index(fol, TANGENT, 0) == 18
    with pytest.raises(UnsupportedLeafDimension):
        average_euler(fol)
    with pytest.raises(UnsupportedLeafDimension):
        leaf_index(FoliationDescriptor(2, (LeafSpec(2, Fraction(1), True, F),)), TANGENT, 0, 0)


def test_positivity_example():
    fol = single_leaf(2, 1, -3)
    v = positivity_obstruction(fol, "E")
    assert v.verdict == "Inconclusive" and v.witness == 2
    v = positivity_obstruction(single_leaf(3, 1, 1), "E")
    assert v.verdict == "NotPositive" and v.witness == -3
    assert positivity_obstruction(single_leaf(1, 1, 0), "E").verdict == "Inconclusive"


genera = st.integers(min_value=0, max_value=5)
weights = st.fractions(min_value=0, max_value=5, max_denominator=7)
degrees = st.integers(min_value=-6, max_value=6)


@st.composite
def foliations(draw):
    count = draw(st.integers(min_value=1, max_value=4))
    leaves = [(draw(genera), draw(weights)) for _ in range(count)]
    degs = [draw(degrees) for _ in range(count)]
    return build_suspension(leaves, {"E": degs})


@settings(max_examples=80)
@given(foliations(), st.fractions(min_value=0, max_value=9, max_denominator=5),
       st.sampled_from(["E", TANGENT]), st.integers(0, 1))
def test_scale_equivariance(fol, t, bundle, p):
    assert foliated_rr_index(fol.rescaled(t), bundle, p) == t * foliated_rr_index(fol, bundle, p)
    assert average_euler(fol.rescaled(t)) == t * average_euler(fol)


@settings(max_examples=80)
@given(foliations(), st.sampled_from(["E", TANGENT]), st.integers(0, 1))
def test_additivity_over_leaves(fol, bundle, p):
    parts = sum((foliated_rr_index(fol.sub_descriptor(i), bundle, p)
                 for i in range(len(fol.leaves))), Fraction(0))
    assert parts == foliated_rr_index(fol, bundle, p)


@settings(max_examples=80)
@given(foliations())
def test_p_one_tangent_index_is_minus_half_euler(fol):
    assert foliated_rr_index(fol, TANGENT, 1) == -average_euler(fol) / 2


@settings(max_examples=40)
@given(foliations(), st.fractions(min_value=1, max_value=9, max_denominator=5))
def test_positivity_verdict_is_scale_invariant(fol, t):
    a, b = positivity_obstruction(fol, "E"), positivity_obstruction(fol.rescaled(t), "E")
    assert a.verdict == b.verdict and b.witness == t * a.witness


# prefactors -----------------------------------------------------------------------


def test_gaussian_arithmetic():
    i = Gaussian.of(0, 1)
    assert i * i == Gaussian.of(-1)
    assert i ** -1 == Gaussian.of(0, -1)
    assert str(Gaussian.of(1, -2)) == "(1-2*i)"
    with pytest.raises(ZeroDivisionError):
        Gaussian.of(0).inverse()


def test_prefactor_rendering():
    assert algebroid_prefactor(1).canonical() == "i*(2*pi)^-1"
    assert algebroid_prefactor(2).canonical() == "-(2*pi)^-2"
    assert (two_pi_i() ** 2).canonical() == "-(2*pi)^2"
    assert (two_pi() / two_pi()).canonical() == "1"
    assert PiMonomial.constant(3).canonical() == "3"


@pytest.mark.parametrize("k", [2, 4, 6, 8])
def test_connes_comparison_holds(k):
    res = connes_comparison(k)
    assert res.holds and res.lhs == res.rhs
    assert res.ratio == f"(2*pi)^-{k}"


def test_connes_comparison_signs():
    assert connes_comparison(2).lhs == "-(2*pi)^-2"
    assert connes_comparison(4).lhs == "(2*pi)^-4"
    with pytest.raises(OddLeafDimension):
        connes_comparison(3)
    with pytest.raises(ValueError):
        connes_comparison(0)


def test_trivial_bundle_examples():
    assert algebroid_rr_index(T, E, 0, curve(0, 0)).value == 1
    genus_one = build_suspension([(1, 2), (1, Fraction(1, 3))], {"O": [0, 0]})
    assert foliated_rr_index(genus_one, "O", 0) == 0
    two = build_suspension([(2, 1), (3, 2)], {"O": [0, 0]})
    assert foliated_rr_index(two, "O", 0) == -5


def test_average_euler_examples():
    assert average_euler(build_suspension([(1, 4)])) == 0
    assert average_euler(build_suspension([(2, 3)])) == -6
    assert average_euler(build_suspension([(0, 1)])) == 2
    fol = build_suspension([(1, 5), (None, 0, False)])
    assert average_euler(fol) == 0 and fol.leaves[1].compact is False
    assert build_suspension([(2, 1)]).leaves[0].hyperbolic
