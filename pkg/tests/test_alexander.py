from __future__ import annotations

import pytest

from knotrep.alexander import alexander_matrix, alexander_polynomial, check_hypotheses, normalize
from knotrep.errors import HypothesisFailure, NotAKnotError
from knotrep.knots import load_table, parse_presentation, trefoil_two_generator, wirtinger_presentation
from knotrep.scalars.poly import parse_polynomial

from conftest import setup

EXPECTED = {
    "0_1": "1",
    "3_1": "t^2 - t + 1",
    "4_1": "t^2 - 3*t + 1",
    "5_1": "t^4 - t^3 + t^2 - t + 1",
    "5_2": "2*t^2 - 3*t + 2",
    "6_1": "2*t^2 - 5*t + 2",
}


@pytest.mark.parametrize("name", sorted(EXPECTED))
def test_table_polynomials(name):
    delta = alexander_polynomial(wirtinger_presentation(name, load_table()))
    assert delta.to_string() == EXPECTED[name]
    assert delta.is_palindromic()
    assert abs(delta(1)) == 1


def test_normal_form():
    assert normalize(parse_polynomial("-t^-1 + 1 - t", "t")).to_string() == "t^2 - t + 1"


def test_alexander_matrix_shape():
    p = wirtinger_presentation("4_1", load_table())
    m = alexander_matrix(p)
    assert len(m) == len(p.relators) and len(m[0]) == p.num_generators


def test_presentations_agree():
    assert alexander_polynomial(trefoil_two_generator()) == alexander_polynomial(
        wirtinger_presentation("3_1", load_table()))
    # torus knot T(2,5) from x^2 = y^5 with a meridian generator
    p = parse_presentation("<x,y,m | x^2 = y^5, m = x y^-2>")
    assert alexander_polynomial(p).to_string() == EXPECTED["5_1"]


def test_not_a_knot_group_is_rejected():
    with pytest.raises(NotAKnotError):
        alexander_polynomial(parse_presentation("<a,b | a b a^-1 b^-1>"))


def test_hypotheses_trefoil():
    _, delta, be, lam, _ = setup("3_1")
    for n in (2, 3, 4, 5):
        assert check_hypotheses(delta, lam, n, be).verdict
    report = check_hypotheses(delta, lam, 6, be)
    assert not report.verdict
    assert report.failing_k == [5]
    with pytest.raises(HypothesisFailure) as err:
        report.raise_if_failed()
    assert list(err.value.failing_k) == [5]


def test_hypotheses_figure_eight():
    _, delta, be, lam, _ = setup("4_1")
    assert all(check_hypotheses(delta, lam, n, be).verdict for n in range(2, 13))


def test_hypotheses_report_serializes():
    _, delta, be, lam, _ = setup("3_1")
    d = check_hypotheses(delta, lam, 6, be).to_dict()
    assert d["verdict"] is False and d["failing_k"] == [5]
