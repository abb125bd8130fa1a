from fractions import Fraction

import pytest
from hypothesis import given, settings

from algrr.chern import BundleContext, characteristic_class, direct_sum, dual, formal
from algrr.errors import ArityError, ParseError, UnknownBundle
from algrr.io import eval_class_expr, parse_bundle_expr, parse_class_expr, print_class_expr
from algrr.io.expr import (BundleOp, BundleRef, Call, Generator, Neg, Product, Rational, Sum,
                           tokenize)
from strategies_expr import exprs

A, B, T = BundleRef("A"), BundleRef("B"), BundleRef("T")


def test_product_example():
    assert parse_class_expr("ch(E)*td(T)") == Product((Call("ch", (BundleRef("E"),)),
                                                       Call("td", (T,))))


def test_difference_example():
    ast = parse_class_expr("tdC(sum(A,B)) - td(A)*td(B)")
    assert ast == Sum((Call("tdC", (BundleOp("sum", (A, B)),)),
                       Neg(Product((Call("td", (A,)), Call("td", (B,)))))))


def test_unbalanced_parenthesis():
    with pytest.raises(ParseError) as err:
        parse_class_expr("ch(E")
    assert (err.value.line, err.value.column) == (1, 5)
    assert err.value.expected == {")"}


def test_precedence_and_associativity():
    ast = parse_class_expr("1 + 2*3 - 4")
    assert ast == Sum((Rational(1), Product((Rational(2), Rational(3))), Neg(Rational(4))))
    assert parse_class_expr("(1 + 2)*3") == Product((Sum((Rational(1), Rational(2))), Rational(3)))


def test_literals():
    assert parse_class_expr("0.25") == Rational(Fraction(1, 4))
    assert parse_class_expr("3/6") == Rational(Fraction(1, 2))
    assert parse_class_expr("-c2(B)") == Neg(Generator(2, B))
    assert parse_class_expr("lambda(2, dual(T))") == Call("lambda", (2, BundleOp("dual", (T,))))


def test_multiline_positions():
    with pytest.raises(ParseError) as err:
        parse_class_expr("ch(E) +\n  td(T) $")
    assert (err.value.line, err.value.column) == (2, 9)
    with pytest.raises(ParseError) as err:
        parse_class_expr("ch(E) +\n   * td(T)")
    assert (err.value.line, err.value.column) == (2, 4)
    assert {"number", "ident", "(", "-"} <= err.value.expected


@pytest.mark.parametrize("text", ["", "ch()", "ch(E) td(T)", "pont(E)", "c0(E)", "1/0",
                                  "lambda(E)", "lambda(1/2, E)", "td(1)", "ch(E))"])
def test_syntax_errors(text):
    with pytest.raises(ParseError):
        parse_class_expr(text)


@pytest.mark.parametrize("text", ["td(A, B)", "lambda(1, A, B)", "sum(A)", "c1(A, B)",
                                  "dual(A, B)"])
def test_arity_errors(text):
    with pytest.raises((ArityError, ParseError)):
        parse_class_expr(f"ch({text})" if text.startswith(("sum", "dual")) else text)


def test_ast_invariants():
    with pytest.raises(ArityError):
        Call("td", (A, B))
    with pytest.raises(ArityError):
        BundleOp("sum", (A,))
    with pytest.raises(ValueError):
        Rational(-1)
    with pytest.raises(ValueError):
        Product((Rational(1),))


def test_tokens_carry_positions():
    toks = tokenize("td(T)\n*2")
    assert [(t.kind, t.line, t.column) for t in toks] == [
        ("ident", 1, 1), ("(", 1, 3), ("ident", 1, 4), (")", 1, 5), ("*", 2, 1),
        ("number", 2, 2), ("end", 2, 3)]


def test_bundle_expressions():
    assert parse_bundle_expr("sum(A, dual(B))") == BundleOp("sum", (A, BundleOp("dual", (B,))))
    with pytest.raises(ParseError):
        parse_bundle_expr("A B")


@settings(max_examples=600)
@given(exprs)
def test_round_trip(ast):
    text = print_class_expr(ast)
    assert parse_class_expr(text) == ast
    assert print_class_expr(parse_class_expr(text)) == text


# evaluation ---------------------------------------------------------------------

ENV = {"T": formal("T", 1), "E": formal("E", 2), "A": formal("A", 1), "B": formal("B", 1)}


def ev(text, cutoff, env=None):
    return eval_class_expr(parse_class_expr(text), env or ENV, cutoff)


def test_eval_examples():
    one = {"T": formal("T", 1)}
    assert str(ev("td(T)", 2, one)) == "1 + 1/2*c1(T) + 1/12*c1(T)^2"
    assert ev("ch(E) - ch(E)", 3).is_zero()
    assert str(ev("e(T)*td(T)", 2, one)) == "c1(T) + 1/2*c1(T)^2"


def test_eval_matches_engine():
    ctx = BundleContext.of(*ENV.values())
    S = direct_sum(ENV["A"], ENV["B"])
    assert ev("tdC(sum(A,B)) - tdC(A)*tdC(B)", 4).is_zero()
    assert ev("lambda(2, dual(E))", 3) == characteristic_class("wedge_power_ch", dual(ENV["E"]),
                                                               3, ctx, 2)
    assert ev("wedge_alt(sum(A,B))", 3) == characteristic_class("alternating_wedge_ch", S, 3, ctx)
    assert ev("c(E)", 2) == ev("1 + c1(E) + c2(E)", 2)
    assert ev("c2(sum(A,B))", 2) == ev("c1(A)*c1(B)", 2)
    assert ev("c3(E)", 3).is_zero()


def test_eval_unknown_bundle():
    with pytest.raises(UnknownBundle):
        ev("td(Z)", 2)


@settings(max_examples=100)
@given(exprs)
def test_eval_is_total_on_generated_trees(ast):
    env = {name: formal(name, r) for name, r in (("A", 1), ("B", 2), ("T", 1))}
    s = eval_class_expr(ast, env, 2)
    # a printed tree evaluates to the same series
    assert eval_class_expr(parse_class_expr(print_class_expr(ast)), env, 2) == s
