"""Canonical JSON records for results.

Rationals become ``{"num": n, "den": d}`` in lowest terms with ``d > 0``;
series become ``[[monomial, rational], ...]`` in canonical monomial order;
mapping keys are sorted.  The output is compact and byte-stable.
"""

from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

from ..algebroid import ValidationReport
from ..chern import ChernSeries, mono_str


def rational(value) -> dict:
    if isinstance(value, tuple):
        value = Fraction(*value)
    q = Fraction(value)
    return {"num": q.numerator, "den": q.denominator}


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, float):
        raise TypeError("floating point values have no canonical exact form")
    if isinstance(obj, ChernSeries):
        return [[m, rational(c)] for m, c in series_items(obj)]
    if isinstance(obj, ValidationReport):
        return to_jsonable(obj.as_dict())
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(obj[k]) for k in sorted(obj, key=str)}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def series_items(s: ChernSeries):
    return [(mono_str(m), c) for m, c in s.items()]


def _sorted_keys(obj):
    # rationals keep num before den; every other mapping is key-sorted
    if isinstance(obj, dict):
        if list(obj) == ["num", "den"]:
            return obj
        return {k: _sorted_keys(obj[k]) for k in sorted(obj)}
    if isinstance(obj, list):
        return [_sorted_keys(x) for x in obj]
    return obj


def serialize_result(result) -> str:
    return json.dumps(_sorted_keys(to_jsonable(result)), separators=(",", ":"),
                      ensure_ascii=True)
