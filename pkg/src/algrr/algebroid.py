"""Constant-structure Lie algebroids and their Koszul cochain complexes.

Cochains are constant-coefficient forms, so the anchor never acts on them;
it only enters validation (it must kill every bracket, since the frame
directions it maps into commute).  Differentials use the Cartan sign
convention

    (d w)(v_0..v_k) = sum_i (-1)^i  nabla_{v_i} w(..^v_i..)
                    + sum_{i<j} (-1)^{i+j} w([v_i, v_j], ..^v_i..^v_j..)

and wedge monomials are ordered lexicographically by index tuple, with
the representation index varying fastest.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb

from . import linalg
from .errors import NoComplexStructure, NotAlmostComplex, NotFlat

POINT = "point"
PARALLELIZABLE = "parallelizable-constant"


@dataclass(frozen=True)
class LieAlgebroidPresentation:
    """Structure constants ``c[i][j][k]`` with ``[e_i, e_j] = sum_k c[i][j][k] e_k``.

    Indices are 0-based internally; reports use 1-based indices.
    """

    dimension: int
    structure_constants: tuple
    anchor: str = POINT
    anchor_matrix: tuple | None = None
    J: tuple | None = None

    def __post_init__(self):
        n = self.dimension
        if n < 1:
            raise ValueError("dimension must be positive")
        c = self.structure_constants
        if len(c) != n or any(len(r) != n or any(len(v) != n for v in r) for r in c):
            raise ValueError(f"structure constants must be a {n}x{n}x{n} array")
        if self.anchor not in (POINT, PARALLELIZABLE):
            raise ValueError(f"unknown anchor kind {self.anchor!r}")
        if self.anchor == PARALLELIZABLE:
            if self.anchor_matrix is None or len(self.anchor_matrix) != n:
                raise ValueError("parallelizable-constant anchor needs an n x m matrix")
        if self.J is not None and (len(self.J) != n or any(len(r) != n for r in self.J)):
            raise ValueError("J must be an n x n matrix")

    @classmethod
    def build(cls, n, c=None, anchor=POINT, anchor_matrix=None, J=None):
        """Construct from nested lists, or from a sparse ``{(i, j): {k: value}}`` map.

        Sparse brackets are 1-based and completed antisymmetrically.
        """
        if c is None or isinstance(c, dict):
            dense = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
            for (i, j), comps in (c or {}).items():
                for k, v in comps.items():
                    dense[i - 1][j - 1][k - 1] = Fraction(v)
                    dense[j - 1][i - 1][k - 1] = -Fraction(v)
        else:
            dense = [[[Fraction(v) for v in row] for row in plane] for plane in c]
        freeze = lambda m: None if m is None else tuple(tuple(Fraction(x) for x in r) for r in m)
        return cls(n, tuple(tuple(tuple(r) for r in plane) for plane in dense), anchor,
                   freeze(anchor_matrix), freeze(J))

    def bracket(self, u, v) -> list[Fraction]:
        """Bracket of two coefficient vectors."""
        n = self.dimension
        c = self.structure_constants
        out = [Fraction(0)] * n
        for i in range(n):
            if u[i]:
                for j in range(n):
                    if v[j]:
                        w = u[i] * v[j]
                        for k in range(n):
                            if c[i][j][k]:
                                out[k] += w * c[i][j][k]
        return out

    def basis(self, i) -> list[Fraction]:
        return [Fraction(int(k == i)) for k in range(self.dimension)]


@dataclass(frozen=True)
class Representation:
    """Action matrices ``A_i`` of ``nabla_{e_i}`` on a rank-``r`` fiber."""

    rank: int
    actions: tuple

    @classmethod
    def trivial(cls, n: int, r: int = 1) -> Representation:
        return cls(r, tuple(tuple(tuple(Fraction(0) for _ in range(r)) for _ in range(r))
                            for _ in range(n)))

    @classmethod
    def build(cls, matrices) -> Representation:
        mats = tuple(tuple(tuple(Fraction(x) for x in row) for row in m) for m in matrices)
        r = len(mats[0]) if mats else 0
        return cls(r, mats)

    @classmethod
    def adjoint(cls, p: LieAlgebroidPresentation) -> Representation:
        n = p.dimension
        c = p.structure_constants
        return cls(n, tuple(tuple(tuple(c[i][j][k] for j in range(n)) for k in range(n))
                            for i in range(n)))


@dataclass
class ValidationReport:
    antisymmetry: list = field(default_factory=list)
    jacobi: list = field(default_factory=list)
    anchor: list = field(default_factory=list)
    complex_structure: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not (self.antisymmetry or self.jacobi or self.anchor or self.complex_structure)

    def as_dict(self):
        return {
            "valid": self.valid,
            "antisymmetry_violations": [list(t) for t in self.antisymmetry],
            "jacobi_violations": [list(t) for t in self.jacobi],
            "anchor_violations": [list(t) for t in self.anchor],
            "complex_structure_violations": [list(t) for t in self.complex_structure],
        }


def validate_presentation(p: LieAlgebroidPresentation) -> ValidationReport:
    """Check antisymmetry, Jacobi, anchor compatibility, and ``J^2 = -1``.

    Every violation is listed (1-based indices); nothing is raised.
    """
    n = p.dimension
    c = p.structure_constants
    rep = ValidationReport()
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if c[i][j][k] != -c[j][i][k]:
                    rep.antisymmetry.append((i + 1, j + 1, k + 1))
    ordered = combinations(range(n), 3) if not rep.antisymmetry else (
        (i, j, k) for i in range(n) for j in range(n) for k in range(n))
    for i, j, k in ordered:
        for m in range(n):
            s = Fraction(0)
            for l in range(n):
                s += (c[i][j][l] * c[l][k][m] + c[j][k][l] * c[l][i][m]
                      + c[k][i][l] * c[l][j][m])
            if s != 0:
                rep.jacobi.append((i + 1, j + 1, k + 1))
                break
    if p.anchor == PARALLELIZABLE:
        rho = p.anchor_matrix
        m = len(rho[0]) if rho else 0
        for i in range(n):
            for j in range(i + 1, n):
                image = [sum((c[i][j][k] * rho[k][a] for k in range(n)), Fraction(0))
                         for a in range(m)]
                if any(image):
                    rep.anchor.append((i + 1, j + 1))
    if p.J is not None:
        sq = linalg.matmul([list(r) for r in p.J], [list(r) for r in p.J])
        for a in range(n):
            for b in range(n):
                if sq[a][b] != -int(a == b):
                    rep.complex_structure.append((a + 1, b + 1))
    return rep


def connection_curvature(p: LieAlgebroidPresentation, actions):
    """Curvature ``R(e_i, e_j) = [A_i, A_j] - sum_k c[i][j][k] A_k`` for ``i < j``.

    Returns ``(curvature, flat)`` where ``curvature`` maps 1-based pairs to
    matrices.
    """
    n = p.dimension
    if len(actions) != n:
        raise ValueError(f"need {n} action matrices, got {len(actions)}")
    mats = [linalg.as_matrix(a) for a in actions]
    r = len(mats[0]) if mats else 0
    for m in mats:
        if len(m) != r or any(len(row) != r for row in m):
            raise ValueError("action matrices must be square and of equal size")
    c = p.structure_constants
    curv = {}
    for i in range(n):
        for j in range(i + 1, n):
            R = linalg.commutator(mats[i], mats[j])
            for k in range(n):
                if c[i][j][k]:
                    R = linalg.add(R, mats[k], -c[i][j][k])
            curv[(i + 1, j + 1)] = R
    flat = all(linalg.is_zero(R) for R in curv.values())
    return curv, flat


def wedge_basis(n: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(n), k))


def _sort_sign(m: int, rest: tuple[int, ...]):
    """Sign and sorted tuple for ``e^m ^ e^rest``; ``(0, None)`` if ``m`` repeats."""
    if m in rest:
        return 0, None
    pos = sum(1 for x in rest if x < m)
    return (-1) ** pos, tuple(sorted(rest + (m,)))


def koszul_differential(p: LieAlgebroidPresentation, rep: Representation, k: int,
                        check_flat: bool = True):
    """Matrix of ``d: C^k -> C^{k+1}`` (rows index degree ``k+1`` cochains)."""
    n = p.dimension
    if not 0 <= k <= n:
        raise ValueError(f"degree {k} out of range 0..{n}")
    if check_flat:
        _, flat = connection_curvature(p, rep.actions)
        if not flat:
            raise NotFlat("representation has nonzero curvature")
    r = rep.rank
    src = wedge_basis(n, k)
    dst = wedge_basis(n, k + 1)
    src_index = {I: a for a, I in enumerate(src)}
    D = linalg.zeros(len(dst) * r, len(src) * r)
    c = p.structure_constants
    A = rep.actions
    for row_block, J in enumerate(dst):
        for i, ji in enumerate(J):
            rest = J[:i] + J[i + 1:]
            col_block = src_index[rest]
            sign = (-1) ** i
            for b in range(r):
                for a in range(r):
                    if A[ji][b][a]:
                        D[row_block * r + b][col_block * r + a] += sign * A[ji][b][a]
        for i, l in combinations(range(len(J)), 2):
            sign = (-1) ** (i + l)
            rest = tuple(x for t, x in enumerate(J) if t not in (i, l))
            for m in range(n):
                coef = c[J[i]][J[l]][m]
                if not coef:
                    continue
                s, I = _sort_sign(m, rest)
                if not s:
                    continue
                col_block = src_index[I]
                for a in range(r):
                    D[row_block * r + a][col_block * r + a] += sign * s * coef
    return D


@dataclass
class CochainComplex:
    dims: list[int]
    differentials: list  # D_k : C^k -> C^{k+1}, k = 0..n (D_n maps to the zero space)


def cochain_complex(p: LieAlgebroidPresentation, rep: Representation | None = None) -> CochainComplex:
    rep = rep or Representation.trivial(p.dimension)
    _, flat = connection_curvature(p, rep.actions)
    if not flat:
        raise NotFlat("representation has nonzero curvature")
    n = p.dimension
    dims = [comb(n, k) * rep.rank for k in range(n + 1)]
    diffs = [koszul_differential(p, rep, k, check_flat=False) for k in range(n + 1)]
    return CochainComplex(dims, diffs)


def cohomology_dims(p: LieAlgebroidPresentation, rep: Representation | None = None) -> list[int]:
    """``dim H^k = dim C^k - rank D_k - rank D_{k-1}`` for ``k = 0..n``."""
    cx = cochain_complex(p, rep)
    ranks = [linalg.rank(D) for D in cx.differentials]
    return [cx.dims[k] - ranks[k] - (ranks[k - 1] if k else 0) for k in range(len(cx.dims))]


@dataclass
class NijenhuisResult:
    integrable: bool
    violating_pair: tuple[int, int] | None = None
    value: list | None = None
    eigenspace_dims: dict | None = None


def nijenhuis_check(p: LieAlgebroidPresentation) -> NijenhuisResult:
    """Evaluate ``N(u,v) = [Ju,Jv] - J[Ju,v] - J[u,Jv] - [u,v]`` on basis pairs."""
    if p.J is None:
        raise NoComplexStructure("presentation has no almost complex structure J")
    n = p.dimension
    J = [list(r) for r in p.J]
    if n % 2 or not _squares_to_minus_one(J):
        raise NotAlmostComplex("J does not square to -1")

    def apply(v):
        return [sum((J[a][b] * v[b] for b in range(n)), Fraction(0)) for a in range(n)]

    for i in range(n):
        for j in range(i + 1, n):
            u, v = p.basis(i), p.basis(j)
            Ju, Jv = apply(u), apply(v)
            terms = [p.bracket(Ju, Jv), apply(p.bracket(Ju, v)), apply(p.bracket(u, Jv)),
                     p.bracket(u, v)]
            N = [terms[0][a] - terms[1][a] - terms[2][a] - terms[3][a] for a in range(n)]
            if any(N):
                return NijenhuisResult(False, (i + 1, j + 1), N)
    return NijenhuisResult(True, eigenspace_dims={"(1,0)": n // 2, "(0,1)": n // 2})


def _squares_to_minus_one(J) -> bool:
    n = len(J)
    sq = linalg.matmul(J, J)
    return all(sq[a][b] == -int(a == b) for a in range(n) for b in range(n))
