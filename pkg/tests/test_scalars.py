from __future__ import annotations

from fractions import Fraction

import pytest

from knotrep.errors import FieldError, IndeterminateRankError, ParseError
from knotrep.scalars import ExactBackend, NumericBackend
from knotrep.scalars.field import field_from_minimal_polynomial, make_lambda_field, squarefree_and_simple_roots
from knotrep.scalars.poly import LaurentPolynomial, parse_polynomial


def P(text, var="t"):
    return parse_polynomial(text, var)


def test_parse_and_print():
    assert P("t^2-3*t+1").to_string() == "t^2 - 3*t + 1"
    assert P("t - 1 + t^-1").low == -1
    assert P("3/2*x+1/2", "x").coeffs == (Fraction(1, 2), Fraction(3, 2))


@pytest.mark.parametrize("bad", ["1/(t+1)", "t+", "sin(t)"])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        P(bad)


def test_laurent_arithmetic():
    a, b = P("t-1"), P("t+1")
    assert a * b == P("t^2-1")
    assert (a * b).exact_div(a) == b
    assert P("t^4-1").gcd(P("t^2-1")).monic() == P("t^2-1")
    assert P("t^2-t+1").is_palindromic()
    assert P("t^3-t^2+t").is_associate(P("-t^2+t-1"))
    assert P("t^2-3*t+1").substitute_power(2) == P("t^4-3*t^2+1")


def test_squarefree_split():
    s = squarefree_and_simple_roots(P("(t-1)^2*(t+2)"))
    assert s.multiple_part.monic() == P("t-1")
    assert s.has_roots


def test_field_arithmetic_golden_ratio():
    field, lam = field_from_minimal_polynomial(P("x^2-x-1", "x"), 1.618)
    assert lam * lam == lam + 1
    assert lam.inverse() == lam - 1
    assert abs(complex(field.root_value(__import__("mpmath").mp)) - 1.6180339887) < 1e-9


def test_field_reducible_polynomial_is_cut_down():
    field, lam = field_from_minimal_polynomial(P("(x^2-4)*(x^2+1)", "x"), 2.001)
    assert field.degree == 1
    assert lam.to_fraction() == 2
    field, lam = field_from_minimal_polynomial(P("(x^2-4)*(x^2+1)", "x"), 1j)
    assert field.modulus_polynomial().to_string("x") == "x^2 + 1"


def test_selector_must_be_close_to_a_root():
    with pytest.raises(FieldError):
        field_from_minimal_polynomial(P("x^2-4", "x"), 2.1)


def test_make_lambda_field_from_delta():
    field, lam = make_lambda_field(P("t^2-t+1"), complex(0.5, 0.866), lambda_hint=complex(0.866, 0.5))
    assert field.modulus_polynomial().to_string("x") == "x^4 - x^2 + 1"
    assert P("t^2-t+1").evaluate(lam * lam) == field.zero


def test_make_lambda_field_rejects_bad_hint():
    with pytest.raises(FieldError):
        make_lambda_field(P("t^2-3*t+1"), 2.618, lambda_hint=3.0)


def test_exact_linear_algebra():
    field, lam = field_from_minimal_polynomial(P("x^2-x-1", "x"), 1.618)
    be = ExactBackend(field)
    m = be.asarray([[lam, 1], [lam * lam, lam]])
    assert be.rank(m) == 1
    assert be.det(be.asarray([[lam, 1], [1, lam]])) == lam
    inv = be.inv(be.asarray([[lam, 1], [0, lam]]))
    assert (be.asarray([[lam, 1], [0, lam]]) @ inv == be.eye(2)).all()
    ns = be.nullspace(m)
    assert len(ns) == 1 and all(x == 0 for x in m @ ns[0])


def test_numeric_rank_and_band():
    be = NumericBackend(128)
    assert be.rank(be.asarray([[1, 2], [2, 4]])) == 1
    assert be.rank(be.asarray([[1, 0], [0, 1e-60]])) == 1
    with pytest.raises(IndeterminateRankError) as err:
        be.rank(be.asarray([[1, 0], [0, 1e-20]]))
    assert err.value.code == "INDETERMINATE_RANK"


def test_numeric_format():
    be = NumericBackend(64)
    assert be.format(be.scalar(1.5), 5) == "1.5"
    assert be.format(be.scalar(complex(1, -2)), 5) == "1.0-2.0i"


def test_numeric_embedding_of_field():
    field, lam = field_from_minimal_polynomial(P("x^4-x^2+1", "x"), complex(0.866, 0.5))
    be = NumericBackend(256, field=field)
    x = be.scalar(lam * lam - 1)
    assert be.is_zero(x - be.scalar(lam) ** 2 + 1)
    assert abs(complex(be.lam) - complex(0.8660254037844386, 0.5)) < 1e-12
