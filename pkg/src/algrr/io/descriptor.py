"""Problem descriptor files (JSON) and their validation.

Every descriptor is an object with a ``kind`` field; the remaining fields
depend on the kind (the schema is documented in the README).
Errors carry a JSON pointer to the offending field.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ..algebroid import (PARALLELIZABLE, POINT, LieAlgebroidPresentation, Representation,
                         ValidationReport, connection_curvature, validate_presentation)
from ..chern import BundleSymbol, formal, parse_monomial
from ..chern.series import mono_degree
from ..errors import (AlgRRError, DegreeMismatch, DescriptorIOError, ParseError, SchemaError,
                      ValidationError)
from ..index import TANGENT, FoliationDescriptor, IntegrationFunctional, LeafSpec
from .expr import parse_bundle_expr, resolve_bundle

KINDS = ("identity-check", "cohomology", "algebroid-index", "foliated-index", "euler",
         "positivity")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_DECIMAL = re.compile(r"\s*(-?\d+(?:\.\d+)?|-?\d+\s*/\s*-?\d+)\s*$")


@dataclass(frozen=True)
class IdentityCheck:
    rank: int
    cutoff: int


@dataclass(frozen=True)
class CohomologyProblem:
    presentation: LieAlgebroidPresentation
    representation: Representation
    report: ValidationReport
    flat: bool


@dataclass(frozen=True)
class AlgebroidIndexProblem:
    algebroid: BundleSymbol
    bundle: BundleSymbol
    p: int
    functional: IntegrationFunctional
    cutoff: int


@dataclass(frozen=True)
class FoliatedIndexProblem:
    foliation: FoliationDescriptor
    bundle: str
    p: int


@dataclass(frozen=True)
class EulerProblem:
    foliation: FoliationDescriptor


@dataclass(frozen=True)
class PositivityProblem:
    foliation: FoliationDescriptor
    bundle: str


@dataclass(frozen=True)
class ProblemDescriptor:
    kind: str
    payload: object


# field helpers ---------------------------------------------------------------


def pointer(*parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def parse_rational(value, where: str) -> Fraction:
    """Exact rational from an int, an ``"a/b"`` or decimal string, or ``{"num", "den"}``."""
    if isinstance(value, bool):
        raise SchemaError("expected a rational, got a boolean", where)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise SchemaError("floating point numbers are not allowed; use \"a/b\" or a decimal "
                          "string", where)
    if isinstance(value, str):
        if not _DECIMAL.match(value):
            raise SchemaError(f"not a rational: {value!r}", where)
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError:
            raise SchemaError("zero denominator", where) from None
    if isinstance(value, dict) and set(value) == {"num", "den"}:
        num, den = value["num"], value["den"]
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (num, den)):
            raise SchemaError("num and den must be integers", where)
        if den == 0:
            raise SchemaError("zero denominator", pointer_join(where, "den"))
        return Fraction(num, den)
    raise SchemaError(f"expected a rational, got {type(value).__name__}", where)


def pointer_join(base: str, *parts) -> str:
    return base + pointer(*parts)


def _int(value, where, minimum=None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"expected an integer, got {type(value).__name__}", where)
    if minimum is not None and value < minimum:
        raise ValidationError(f"must be at least {minimum}, got {value}", where)
    return value


def _object(value, where) -> dict:
    if not isinstance(value, dict):
        raise SchemaError(f"expected an object, got {type(value).__name__}", where)
    return value


def _list(value, where) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"expected an array, got {type(value).__name__}", where)
    return value


def _only(obj: dict, allowed, where=""):
    for key in obj:
        if key not in allowed:
            raise SchemaError(f"unknown field {key!r}", pointer_join(where, key))


def _require(obj: dict, key: str, where=""):
    if key not in obj:
        raise SchemaError(f"missing required field {key!r}", pointer_join(where, key))
    return obj[key]


def _matrix(value, where, rows=None, cols=None):
    m = _list(value, where)
    if rows is not None and len(m) != rows:
        raise ValidationError(f"expected {rows} rows, got {len(m)}", where)
    out = []
    for i, row in enumerate(m):
        row = _list(row, pointer_join(where, i))
        if cols is not None and len(row) != cols:
            raise ValidationError(f"expected {cols} columns, got {len(row)}", pointer_join(where, i))
        out.append([parse_rational(x, pointer_join(where, i, j)) for j, x in enumerate(row)])
    return out


# kinds -----------------------------------------------------------------------


def _identity(d: dict) -> IdentityCheck:
    _only(d, {"kind", "rank", "cutoff"})
    rank = _int(_require(d, "rank"), "/rank", 1)
    cutoff = _int(d.get("cutoff", 2 * rank), "/cutoff", 1)
    if cutoff < rank:
        raise ValidationError(f"cutoff {cutoff} is below the rank {rank}", "/cutoff")
    return IdentityCheck(rank, cutoff)


def _presentation(d, where="/presentation") -> LieAlgebroidPresentation:
    d = _object(d, where)
    _only(d, {"dimension", "brackets", "structure_constants", "anchor", "J"}, where)
    n = _int(_require(d, "dimension", where), pointer_join(where, "dimension"), 1)
    if "brackets" in d and "structure_constants" in d:
        raise SchemaError("give either brackets or structure_constants, not both", where)
    if "structure_constants" in d:
        sc_where = pointer_join(where, "structure_constants")
        planes = _list(d["structure_constants"], sc_where)
        if len(planes) != n:
            raise ValidationError(f"expected {n} planes, got {len(planes)}", sc_where)
        c = [_matrix(pl, pointer_join(sc_where, i), n, n) for i, pl in enumerate(planes)]
    else:
        c = {}
        br_where = pointer_join(where, "brackets")
        for t, entry in enumerate(_list(d.get("brackets", []), br_where)):
            at = pointer_join(br_where, t)
            entry = _list(entry, at)
            if len(entry) != 4:
                raise SchemaError("a bracket entry is [i, j, k, coefficient]", at)
            i, j, k = (_int(entry[x], pointer_join(at, x), 1) for x in range(3))
            if max(i, j, k) > n:
                raise ValidationError(f"index exceeds dimension {n}", at)
            if i == j:
                raise ValidationError("[e_i, e_i] must vanish", at)
            coef = parse_rational(entry[3], pointer_join(at, 3))
            key = (i, j) if i < j else (j, i)
            sign = 1 if i < j else -1
            comps = c.setdefault(key, {})
            comps[k] = comps.get(k, Fraction(0)) + sign * coef
    anchor, anchor_matrix = POINT, None
    if "anchor" in d:
        a_where = pointer_join(where, "anchor")
        a = d["anchor"]
        if a == POINT:
            pass
        elif isinstance(a, dict):
            _only(a, {"kind", "matrix"}, a_where)
            if _require(a, "kind", a_where) != PARALLELIZABLE:
                raise SchemaError(f"anchor kind must be {POINT!r} or {PARALLELIZABLE!r}",
                                  pointer_join(a_where, "kind"))
            anchor = PARALLELIZABLE
            anchor_matrix = _matrix(_require(a, "matrix", a_where),
                                    pointer_join(a_where, "matrix"), n)
            widths = {len(r) for r in anchor_matrix}
            if len(widths) > 1:
                raise ValidationError("anchor matrix rows differ in length",
                                      pointer_join(a_where, "matrix"))
        else:
            raise SchemaError(f"anchor must be {POINT!r} or an object", a_where)
    J = _matrix(d["J"], pointer_join(where, "J"), n, n) if "J" in d else None
    return LieAlgebroidPresentation.build(n, c, anchor, anchor_matrix, J)


def _representation(value, p: LieAlgebroidPresentation, where="/representation"):
    n = p.dimension
    if value is None or value == "trivial":
        return Representation.trivial(n)
    if value == "adjoint":
        return Representation.adjoint(p)
    value = _object(value, where)
    _only(value, {"trivial", "matrices"}, where)
    if "trivial" in value:
        return Representation.trivial(n, _int(value["trivial"], pointer_join(where, "trivial"), 1))
    m_where = pointer_join(where, "matrices")
    mats = _list(_require(value, "matrices", where), m_where)
    if len(mats) != n:
        raise ValidationError(f"need one action matrix per basis section ({n})", m_where)
    first = _list(mats[0], pointer_join(m_where, 0))
    r = len(first)
    if r < 1:
        raise ValidationError("representation rank must be positive", pointer_join(m_where, 0))
    return Representation.build([_matrix(m, pointer_join(m_where, i), r, r)
                                 for i, m in enumerate(mats)])


def _cohomology(d: dict, strict: bool) -> CohomologyProblem:
    _only(d, {"kind", "presentation", "representation"})
    p = _presentation(_require(d, "presentation"))
    rep = _representation(d.get("representation"), p)
    report = validate_presentation(p)
    _, flat = connection_curvature(p, rep.actions)
    if strict:
        if report.jacobi:
            i, j, k = report.jacobi[0]
            raise ValidationError(f"Jacobi identity fails on (e{i}, e{j}, e{k})",
                                  "/presentation/brackets")
        if report.antisymmetry:
            raise ValidationError("bracket is not antisymmetric",
                                  "/presentation/structure_constants")
        if report.anchor:
            raise ValidationError("anchor does not kill brackets", "/presentation/anchor")
        if report.complex_structure:
            raise ValidationError("J does not square to -1", "/presentation/J")
        if not flat:
            raise ValidationError("representation is not flat", "/representation")
    return CohomologyProblem(p, rep, report, flat)


def _bundle_table(value, where="/bundles") -> dict[str, int]:
    table = _object(value, where)
    out = {}
    for name, rank in table.items():
        if not _NAME.match(name):
            raise SchemaError(f"invalid bundle name {name!r}", pointer_join(where, name))
        out[name] = _int(rank, pointer_join(where, name), 1)
    return out


def _bundle_expr(text, env, where) -> BundleSymbol:
    if not isinstance(text, str):
        raise SchemaError("expected a bundle expression string", where)
    try:
        return resolve_bundle(parse_bundle_expr(text), env)
    except ParseError as e:
        raise SchemaError(f"bad bundle expression: {e}", where) from None
    except AlgRRError as e:
        raise ValidationError(str(e), where) from None


def _functional(value, top_degree, names, where) -> IntegrationFunctional:
    table = _object(value, where)
    values = {}
    for key, v in table.items():
        at = pointer_join(where, key)
        try:
            m = parse_monomial(key)
        except (ValueError, AlgRRError):
            raise SchemaError(f"not a Chern monomial: {key!r}", at) from None
        if mono_degree(m) != top_degree:
            raise ValidationError(f"monomial has degree {mono_degree(m)}, expected {top_degree}",
                                  at)
        for name, _, _ in m:
            if name not in names:
                raise ValidationError(f"unknown bundle {name!r}", at)
        values[m] = parse_rational(v, at)
    try:
        return IntegrationFunctional(top_degree, values)
    except DegreeMismatch as e:
        raise ValidationError(str(e), where) from None


def _algebroid_index(d: dict) -> AlgebroidIndexProblem:
    _only(d, {"kind", "bundles", "algebroid", "bundle", "p", "functional", "cutoff"})
    ranks = _bundle_table(_require(d, "bundles"))
    env = {name: formal(name, r) for name, r in ranks.items()}
    g = _bundle_expr(_require(d, "algebroid"), env, "/algebroid")
    E = _bundle_expr(_require(d, "bundle"), env, "/bundle")
    p = _int(d.get("p", 0), "/p", 0)
    if p > g.rank:
        raise ValidationError(f"p={p} exceeds the algebroid rank {g.rank}", "/p")
    F = _functional(_require(d, "functional"), g.rank, ranks, "/functional")
    cutoff = _int(d.get("cutoff", g.rank), "/cutoff", 1)
    if cutoff < g.rank:
        raise ValidationError(f"cutoff {cutoff} is below the top degree {g.rank}", "/cutoff")
    return AlgebroidIndexProblem(g, E, p, F, cutoff)


def _leaf(entry, k, where) -> LeafSpec:
    if isinstance(entry, list):
        if not 2 <= len(entry) <= 3:
            raise SchemaError("a leaf is [genus, weight] or [genus, weight, compact]", where)
        fields = dict(zip(("genus", "weight", "compact"), entry))
    else:
        fields = _object(entry, where)
        _only(fields, {"genus", "weight", "compact", "functional"}, where)
    compact = fields.get("compact", True)
    if not isinstance(compact, bool):
        raise SchemaError("compact must be a boolean", pointer_join(where, "compact"))
    genus = fields.get("genus")
    if genus is not None:
        genus = _int(genus, pointer_join(where, "genus"))
        if genus < 0:
            raise ValidationError(f"genus must be non-negative, got {genus}",
                                  pointer_join(where, "genus"))
        if k != 1:
            raise ValidationError("genus data only describes leaves of dimension 1",
                                  pointer_join(where, "genus"))
        if not compact:
            raise ValidationError("genus given for a non-compact leaf",
                                  pointer_join(where, "genus"))
    weight = parse_rational(_require(fields, "weight", where), pointer_join(where, "weight"))
    if weight < 0:
        raise ValidationError(f"weight must be non-negative, got {weight}",
                              pointer_join(where, "weight"))
    if not compact and weight != 0:
        raise ValidationError("non-compact leaves carry no transverse mass",
                              pointer_join(where, "weight"))
    functional = None
    if "functional" in fields:
        functional = fields["functional"]  # checked against the bundle table by the caller
    elif compact and k == 1 and genus is None:
        raise ValidationError("compact leaf needs a genus", pointer_join(where, "genus"))
    elif compact and k > 1:
        raise ValidationError("leaf needs an integration functional",
                              pointer_join(where, "functional"))
    return LeafSpec(genus, weight, compact, functional)


def _foliation(d: dict) -> FoliationDescriptor:
    k = _int(d.get("leaf_dimension", 1), "/leaf_dimension", 1)
    raw = _list(_require(d, "leaves"), "/leaves")
    bundles = {}
    if "bundles" in d:
        table = _object(d["bundles"], "/bundles")
        for name, degs in table.items():
            at = pointer_join("/bundles", name)
            if not _NAME.match(name):
                raise SchemaError(f"invalid bundle name {name!r}", at)
            if name == TANGENT:
                raise ValidationError(f"{TANGENT!r} is reserved for the leaf tangent bundle", at)
            degs = _list(degs, at)
            if len(degs) != len(raw):
                raise ValidationError(f"{len(degs)} degrees for {len(raw)} leaves", at)
            bundles[name] = tuple(parse_rational(x, pointer_join(at, i)) for i, x in enumerate(degs))
    names = set(bundles) | {TANGENT}
    leaves = []
    for i, entry in enumerate(raw):
        where = pointer_join("/leaves", i)
        leaf = _leaf(entry, k, where)
        if leaf.functional is not None:
            F = _functional(leaf.functional, k, names, pointer_join(where, "functional"))
            leaf = LeafSpec(leaf.genus, leaf.weight, leaf.compact, F)
        leaves.append(leaf)
    try:
        return FoliationDescriptor(k, tuple(leaves), bundles)
    except ValidationError:
        raise
    except AlgRRError as e:
        raise ValidationError(str(e), "/leaves") from None


def _bundle_name(d, fol: FoliationDescriptor, default=None) -> str:
    name = d.get("bundle", default)
    if name is None:
        raise SchemaError("missing required field 'bundle'", "/bundle")
    if not isinstance(name, str):
        raise SchemaError("bundle must be a name", "/bundle")
    if name != TANGENT and name not in fol.bundle_degrees:
        if fol.leaf_dimension == 1 or not any(
                leaf.functional and name in leaf.functional.bundles() for leaf in fol.leaves):
            raise ValidationError(f"unknown bundle {name!r}", "/bundle")
    return name


def _foliated_index(d: dict) -> FoliatedIndexProblem:
    _only(d, {"kind", "leaf_dimension", "leaves", "bundles", "bundle", "p"})
    fol = _foliation(d)
    p = _int(_require(d, "p"), "/p", 0)
    if p > fol.leaf_dimension:
        raise ValidationError(f"p={p} exceeds the leaf dimension {fol.leaf_dimension}", "/p")
    return FoliatedIndexProblem(fol, _bundle_name(d, fol, TANGENT), p)


def _euler(d: dict) -> EulerProblem:
    _only(d, {"kind", "leaf_dimension", "leaves", "bundles"})
    fol = _foliation(d)
    if fol.leaf_dimension != 1:
        raise ValidationError("the average Euler character needs leaf dimension 1",
                              "/leaf_dimension")
    return EulerProblem(fol)


def _positivity(d: dict) -> PositivityProblem:
    _only(d, {"kind", "leaf_dimension", "leaves", "bundles", "bundle"})
    fol = _foliation(d)
    return PositivityProblem(fol, _bundle_name(d, fol))


# entry points ----------------------------------------------------------------


def descriptor_from_dict(d, strict: bool = True) -> ProblemDescriptor:
    """Validate a decoded descriptor.

    With ``strict=False`` an invalid presentation is kept (with its report)
    instead of raising, so it can be inspected.
    """
    d = _object(d, "")
    kind = _require(d, "kind")
    if kind not in KINDS:
        raise SchemaError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}", "/kind")
    if kind == "identity-check":
        payload = _identity(d)
    elif kind == "cohomology":
        payload = _cohomology(d, strict)
    elif kind == "algebroid-index":
        payload = _algebroid_index(d)
    elif kind == "foliated-index":
        payload = _foliated_index(d)
    elif kind == "euler":
        payload = _euler(d)
    else:
        payload = _positivity(d)
    return ProblemDescriptor(kind, payload)


def _reject_float(text):
    raise SchemaError(f"floating point literal {text} is not allowed; use \"a/b\" or a "
                      "decimal string")


def read_json(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise DescriptorIOError(f"cannot read {path}: {e.strerror or e}") from None
    except UnicodeDecodeError:
        raise DescriptorIOError(f"{path} is not UTF-8 text") from None
    try:
        return json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


def load_descriptor(path, strict: bool = True) -> ProblemDescriptor:
    return descriptor_from_dict(read_json(path), strict)


def load_bundle_table(path) -> dict[str, BundleSymbol]:
    """A ``{"name": rank}`` table, optionally wrapped as ``{"bundles": {...}}``."""
    d = _object(read_json(path), "")
    where = ""
    if set(d) == {"bundles"}:
        d, where = d["bundles"], "/bundles"
    return {name: formal(name, r) for name, r in _bundle_table(d, where).items()}
