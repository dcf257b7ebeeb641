from __future__ import annotations

import pytest

from knotrep.cohomology import (CohomologySummary, cochain_dims, cocycle_space, coboundary_vectors, is_cocycle,
                                verify_ladder, verify_main_theorem, word_from_text)
from knotrep.knots import trefoil_two_generator
from knotrep.reps import module_action
from knotrep.scalars import ExactBackend

from conftest import presentation, setup


def test_summary_validation():
    with pytest.raises(ArithmeticError):
        CohomologySummary(0, 3, 2, 2, 1, "x", 2, "exact")
    s = CohomologySummary(0, 4, 3, 1, 1, "sl:2", 3, "exact")
    assert s.dims() == (0, 4, 3, 1, 1)


@pytest.mark.parametrize("n,z1,h1", [(2, 4, 1), (3, 10, 2), (4, 18, 3)])
def test_trefoil_small_sl(trefoil, n, z1, h1):
    p, _, _, _, rho = trefoil
    s = cochain_dims(p, module_action(rho, "sl", n))
    assert (s.h0, s.z1, s.h1) == (0, z1, h1)


def test_trefoil_two_generator_agrees(trefoil):
    p, _, be, lam, rho = trefoil
    q = trefoil_two_generator()
    from knotrep.cohomology import reducible_metabelian
    rho2 = reducible_metabelian(q, lam, be)
    for kind, param in (("R", 4), ("R", 6), ("sl", 3)):
        assert cochain_dims(p, module_action(rho, kind, param)).dims() == \
            cochain_dims(q, module_action(rho2, kind, param)).dims()


def test_trivial_module():
    p = presentation("4_1")
    s = cochain_dims(p, module_action(None, "C", 1, presentation=p, backend=ExactBackend()))
    assert (s.h0, s.h1, s.h2) == (1, 1, 0)


def test_scalar_module_at_rational_roots():
    # 6_1 has Delta = (2t - 1)(t - 2)
    p = presentation("6_1")
    be = ExactBackend()
    for alpha, h1 in ((2, 1), (be.one / 2, 1), (3, 0), (-1, 0)):
        s = cochain_dims(p, module_action(None, "C", alpha, presentation=p, backend=be))
        assert s.h1 == h1 and s.h2 == h1


def test_cocycle_space_and_coboundaries(figure_eight):
    p, _, _, _, rho = figure_eight
    act = module_action(rho, "sl", 3)
    basis = cocycle_space(p, act)
    assert len(basis) == 10
    assert all(is_cocycle(p, act, v) for v in basis)
    assert all(is_cocycle(p, act, v) for v in coboundary_vectors(p, act))


def test_verify_main_theorem_figure_eight(figure_eight):
    p, delta, be, lam, rho = figure_eight
    report = verify_main_theorem(p, lam, 4, be, delta, rho)
    assert report.status == "pass"
    d = report.to_dict()
    assert d["advisory"]["regular"] is True
    assert d["dimensions"]["sl:4"]["z1"] == 18


def test_verify_ladder_figure_eight(figure_eight):
    p, delta, be, lam, rho = figure_eight
    report = verify_ladder(p, lam, 4, be, delta, rho)
    assert report.status == "pass"
    assert [a.actual for a in report.assertions] == [1, 1, 3]


def test_verify_reports_hypothesis_failure(trefoil):
    p, delta, be, lam, rho = trefoil
    report = verify_main_theorem(p, lam, 6, be, delta, rho)
    assert report.status == "hypothesis_failure"
    assert report.advisory["failing_k"] == [5]
    assert report.dimensions["sl:6"].z1 == 42


def test_word_from_text():
    p = trefoil_two_generator()
    assert word_from_text("S T^-1", p).letters == ((0, 1), (1, -1))
