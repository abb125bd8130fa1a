"""Class-expression syntax, descriptor files and canonical result records."""

from .descriptor import (KINDS, ProblemDescriptor, descriptor_from_dict, load_bundle_table,
                         load_descriptor, parse_rational)
from .expr import (ClassExpr, eval_class_expr, parse_bundle_expr, parse_class_expr,
                   print_class_expr)
from .serialize import rational, serialize_result, to_jsonable

__all__ = [
    "KINDS", "ClassExpr", "ProblemDescriptor", "descriptor_from_dict", "eval_class_expr",
    "load_bundle_table", "load_descriptor", "parse_bundle_expr", "parse_class_expr",
    "parse_rational", "print_class_expr", "rational", "serialize_result", "to_jsonable",
]
