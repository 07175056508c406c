import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cesaro.expr import (
    BinOp,
    Call,
    ExprEvalError,
    ExprSyntaxError,
    Neg,
    Num,
    Var,
    constant_from_source,
    evaluate,
    parse_expr,
    sequence_from_source,
    to_source,
    weight_from_source,
)


def test_basic_shapes():
    assert parse_expr("x^2") == BinOp("^", Var("x"), Num(2.0))
    assert parse_expr("(1-x)^0.5") == BinOp("^", BinOp("-", Num(1.0), Var("x")), Num(0.5))


def test_precedence():
    assert parse_expr("-x^2") == Neg(BinOp("^", Var("x"), Num(2.0)))
    assert parse_expr("2^3^2") == BinOp("^", Num(2.0), BinOp("^", Num(3.0), Num(2.0)))
    assert parse_expr("1+2*x") == BinOp("+", Num(1.0), BinOp("*", Num(2.0), Var("x")))
    assert parse_expr("2^-1") == BinOp("^", Num(2.0), Neg(Num(1.0)))
    assert evaluate(parse_expr("8/2/2"), {}) == 2.0
    assert evaluate(parse_expr("  2 ^ 3 ^ 2 "), {}) == 512.0


def test_factor_expression_at_one():
    b = sequence_from_source("sqrt(k)-sqrt(k-1)")
    assert b(1) == 1.0


def test_complex_literal():
    assert constant_from_source("0.5-2*i") == 0.5 - 2j
    b = sequence_from_source("(1-0.5*i)*(1+1/k)")
    assert b(1) == 2 - 1j


def test_altblock():
    b = sequence_from_source("altblock(k)")
    assert b.values(np.arange(1, 9)).real.tolist() == [1, -1, -1, 1, 1, 1, 1, -1]


@pytest.mark.parametrize(
    "src,offset",
    [("1+", 2), ("(x", 2), ("x $ 2", 2), ("foo(x)", 0), ("y+1", 0), ("pow(x)", 0), ("x)", 1)],
)
def test_syntax_errors_carry_offsets(src, offset):
    with pytest.raises(ExprSyntaxError) as info:
        parse_expr(src, variables=("x",))
    assert info.value.offset == offset


def test_empty():
    with pytest.raises(ExprSyntaxError):
        parse_expr("  ")


@pytest.mark.parametrize("src", ["1/(x-x)", "log(x-1)", "sqrt(-x)", "(-x)^0.5", "exp(1000*x)"])
def test_evaluation_errors(src):
    with pytest.raises(ExprEvalError):
        evaluate(parse_expr(src), {"x": np.array([0.5, 1.0])})


def test_weight_must_be_real():
    f = weight_from_source("x*i")
    with pytest.raises(ExprEvalError):
        f.values(np.array([0.5]))


_leaves = st.one_of(
    st.floats(0, 1e6, allow_nan=False).map(Num),
    st.sampled_from([Var("x"), Var("k")]),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*/^"), children, children).map(lambda t: BinOp(*t)),
        children.map(lambda c: Call("sqrt", (c,))),
        st.tuples(children, children).map(lambda t: Call("pow", t)),
    )


@settings(max_examples=300, deadline=None)
@given(st.recursive(_leaves, _extend, max_leaves=12))
def test_round_trip(e):
    assert parse_expr(to_source(e)) == e
