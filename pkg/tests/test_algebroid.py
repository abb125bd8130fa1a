from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from algrr import linalg
from algrr.algebroid import (PARALLELIZABLE, LieAlgebroidPresentation, Representation,
                             cochain_complex, cohomology_dims, connection_curvature,
                             koszul_differential, nijenhuis_check, validate_presentation,
                             wedge_basis)
from algrr.errors import NoComplexStructure, NotAlmostComplex, NotFlat
from oracles import brute_rank, jacobi_violations, koszul_oracle
from strategies_lie import filtered_nilpotent, semidirect

HEISENBERG = LieAlgebroidPresentation.build(3, {(1, 2): {3: 1}})
SL2 = LieAlgebroidPresentation.build(3, {(1, 2): {3: 2}, (3, 1): {1: 2}, (3, 2): {2: -2}})


def abelian(n):
    return LieAlgebroidPresentation.build(n)


def oracle_dims(p, rep):
    n = p.dimension
    mats = [koszul_oracle(p.structure_constants, rep.actions, k) for k in range(n + 1)]
    ranks = [brute_rank(D) for D in mats]
    dims = [comb(n, k) * rep.rank for k in range(n + 1)]
    return [dims[k] - ranks[k] - (ranks[k - 1] if k else 0) for k in range(n + 1)]


# golden values ------------------------------------------------------------------


@pytest.mark.parametrize("n", range(1, 6))
def test_abelian_cohomology_is_the_exterior_algebra(n):
    assert cohomology_dims(abelian(n)) == [comb(n, k) for k in range(n + 1)]


def test_sl2_and_heisenberg():
    assert cohomology_dims(SL2) == [1, 0, 0, 1]
    assert cohomology_dims(HEISENBERG) == [1, 2, 2, 1]


def test_adjoint_coefficients():
    assert cohomology_dims(SL2, Representation.adjoint(SL2)) == [0, 0, 0, 0]
    assert cohomology_dims(HEISENBERG, Representation.adjoint(HEISENBERG)) == [1, 4, 5, 2]
    assert oracle_dims(HEISENBERG, Representation.adjoint(HEISENBERG)) == [1, 4, 5, 2]


def test_heisenberg_differential_by_hand():
    # d(e3*) = -e1* ^ e2*, everything else closed
    D1 = koszul_differential(HEISENBERG, Representation.trivial(3), 1)
    assert D1 == [[0, 0, -1], [0, 0, 0], [0, 0, 0]]
    assert wedge_basis(3, 2) == [(0, 1), (0, 2), (1, 2)]


def test_trivial_rank_two_doubles_dimensions():
    assert cohomology_dims(HEISENBERG, Representation.trivial(3, 2)) == [2, 4, 4, 2]


# validation ---------------------------------------------------------------------


def test_jacobi_violation_is_located():
    bad = LieAlgebroidPresentation.build(3, {(1, 2): {3: 1}, (2, 3): {1: 1}, (1, 3): {1: 1}})
    report = validate_presentation(bad)
    assert not report.valid
    assert report.jacobi == jacobi_violations(bad.structure_constants) == [(1, 2, 3)]


def test_antisymmetry_violation():
    c = [[[Fraction(0)] * 2 for _ in range(2)] for _ in range(2)]
    c[0][1][0] = Fraction(1)  # [e1,e2] = e1 without [e2,e1] = -e1
    report = validate_presentation(LieAlgebroidPresentation.build(2, c))
    assert report.antisymmetry and not report.valid


def test_anchor_must_kill_brackets():
    ok = LieAlgebroidPresentation.build(3, {(1, 2): {3: 1}}, PARALLELIZABLE,
                                        [[1, 0], [0, 1], [0, 0]])
    assert validate_presentation(ok).valid
    bad = LieAlgebroidPresentation.build(3, {(1, 2): {3: 1}}, PARALLELIZABLE,
                                         [[1, 0], [0, 1], [0, 1]])
    assert validate_presentation(bad).anchor


def test_non_flat_representation():
    A1 = [[0, 1], [0, 0]]
    A2 = [[0, 0], [1, 0]]
    rep = Representation.build([A1, A2])
    curv, flat = connection_curvature(abelian(2), rep.actions)
    assert not flat and (1, 2) in curv
    with pytest.raises(NotFlat):
        koszul_differential(abelian(2), rep, 0)
    with pytest.raises(NotFlat):
        cochain_complex(abelian(2), rep)


def test_mismatched_shapes():
    with pytest.raises(ValueError):
        LieAlgebroidPresentation(2, ((((0,),),),))


# complex structures -------------------------------------------------------------

STD_J = [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, -1], [0, 0, 1, 0]]
CROSS_J = [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]]


def test_nijenhuis_block_diagonal_structure_is_integrable():
    # [e1,e2] = e3 stays inside the J-line {e1, e2}: N vanishes identically
    p = LieAlgebroidPresentation.build(4, {(1, 2): {3: 1}}, J=STD_J)
    res = nijenhuis_check(p)
    assert res.integrable and res.eigenspace_dims == {"(1,0)": 2, "(0,1)": 2}


def test_nijenhuis_cross_structure_is_not_integrable():
    p = LieAlgebroidPresentation.build(4, {(1, 2): {3: 1}}, J=CROSS_J)
    res = nijenhuis_check(p)
    assert not res.integrable
    assert res.violating_pair == (1, 2)
    assert res.value == [0, 0, -1, 0]


def test_nijenhuis_needs_a_complex_structure():
    with pytest.raises(NoComplexStructure):
        nijenhuis_check(abelian(2))
    with pytest.raises(NotAlmostComplex):
        nijenhuis_check(LieAlgebroidPresentation.build(2, J=[[1, 0], [0, 1]]))
    report = validate_presentation(LieAlgebroidPresentation.build(2, J=[[1, 0], [0, 1]]))
    assert report.complex_structure


def test_abelian_complex_structure_is_integrable():
    assert nijenhuis_check(LieAlgebroidPresentation.build(4, J=CROSS_J)).integrable


# properties ---------------------------------------------------------------------

presentations = st.one_of(filtered_nilpotent(), semidirect())


def _d_squared_vanishes(p, rep):
    cx = cochain_complex(p, rep)
    for k in range(len(cx.differentials) - 1):
        nxt, cur = cx.differentials[k + 1], cx.differentials[k]
        if nxt and cur:
            assert linalg.is_zero(linalg.matmul(nxt, cur))


@settings(max_examples=200)
@given(filtered_nilpotent())
def test_d_squared_zero_on_nilpotent_presentations(p):
    assert jacobi_violations(p.structure_constants) == []
    _d_squared_vanishes(p, Representation.trivial(p.dimension))
    _d_squared_vanishes(p, Representation.adjoint(p))


@settings(max_examples=100)
@given(semidirect())
def test_d_squared_zero_on_solvable_presentations(p):
    assert validate_presentation(p).valid
    _d_squared_vanishes(p, Representation.trivial(p.dimension))
    _d_squared_vanishes(p, Representation.adjoint(p))


@settings(max_examples=60)
@given(presentations, st.booleans())
def test_differential_matches_cartan_oracle(p, adjoint):
    rep = Representation.adjoint(p) if adjoint else Representation.trivial(p.dimension)
    for k in range(p.dimension + 1):
        assert koszul_differential(p, rep, k) == koszul_oracle(p.structure_constants,
                                                               rep.actions, k)


@settings(max_examples=100)
@given(presentations, st.booleans())
def test_euler_characteristic_vanishes(p, adjoint):
    rep = Representation.adjoint(p) if adjoint else Representation.trivial(p.dimension)
    dims = cohomology_dims(p, rep)
    assert sum((-1) ** k * d for k, d in enumerate(dims)) == 0


@settings(max_examples=100)
@given(filtered_nilpotent())
def test_poincare_duality_for_nilpotent(p):
    # nilpotent algebras are unimodular, so H^k and H^{n-k} have equal dimension
    dims = cohomology_dims(p)
    assert dims == dims[::-1]
    assert dims[0] == 1 and dims[-1] == 1


@settings(max_examples=60)
@given(presentations)
def test_cohomology_matches_brute_force_ranks(p):
    rep = Representation.trivial(p.dimension)
    assert cohomology_dims(p, rep) == oracle_dims(p, rep)
