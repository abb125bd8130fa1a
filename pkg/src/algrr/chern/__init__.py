"""Exact truncated series in formal Chern roots."""

from .bundles import (BundleContext, BundleSymbol, bundle_transform, complexify, direct_sum,
                      dual, formal, tensor_line)
from .classes import (KINDS, Factorization, IdentityReport, additive_class, characteristic_class,
                      divide_by_euler, multiplicative_class, power_sums, verify_rr_identity,
                      wedge_power_ch)
from .rootseries import RootSeries
from .series import ChernSeries, from_items, mono_str, parse_monomial, series_arith, top_extract

__all__ = [
    "BundleContext", "BundleSymbol", "ChernSeries", "Factorization", "IdentityReport", "KINDS",
    "RootSeries", "additive_class", "bundle_transform", "characteristic_class", "complexify",
    "direct_sum", "divide_by_euler", "dual", "formal", "from_items", "mono_str",
    "multiplicative_class", "parse_monomial", "power_sums", "series_arith", "tensor_line",
    "top_extract", "verify_rr_identity", "wedge_power_ch",
]
