from __future__ import annotations

import numpy as np
import pytest

from knotrep.errors import CocycleError, RelatorError
from knotrep.knots import Word, trefoil_two_generator
from knotrep.reps import (Representation, adjoint_matrix, binomial_action_entry, burde_derham, clebsch_gordan_check,
                          diagonal_rep, irreducibility_test, ladder_intertwines, module_action, normalized_cocycle,
                          parse_module, sl_coordinates, sl_matrix, solve_scalar_cocycles, sym_matrix, symmetric_power)
from knotrep.scalars import ExactBackend, NumericBackend

from conftest import setup

Q = ExactBackend()


def test_burde_derham_is_certified(trefoil):
    p, _, be, lam, rho = trefoil
    assert not rho.abelian
    assert all(be.is_zero(d - 1) for d in rho.determinants())
    assert rho.residual() == 0
    assert rho.images[p.meridian][0, 1] == 0  # z(meridian) = 0


def test_trefoil_two_generator_cocycle():
    _, _, be, lam, _ = setup("3_1")
    p = trefoil_two_generator()
    z = normalized_cocycle(p, lam * lam, be).scalar_values()
    assert z == [be.zero, be.one]


def test_wirtinger_cocycle_values(trefoil):
    p, _, be, lam, _ = trefoil
    z = normalized_cocycle(p, lam * lam, be).scalar_values()
    assert [be.format(x) for x in z] == ["0", "1", "-lam^2 + 1"]


def test_coboundary_gives_abelian_rep(figure_eight):
    p, _, be, lam, _ = figure_eight
    alpha = lam * lam
    cob = [alpha ** w - 1 for w in p.phi]
    assert burde_derham(p, lam, cob, be).abelian


def test_non_cocycle_rejected(figure_eight):
    p, _, be, lam, _ = figure_eight
    with pytest.raises(CocycleError):
        burde_derham(p, lam, [0, 1, 0, 0], be)


def test_cocycles_vanish_away_from_roots(figure_eight):
    p, _, be, _, _ = figure_eight
    assert solve_scalar_cocycles(p, 2, be).h1 == 0
    with pytest.raises(CocycleError):
        normalized_cocycle(p, 2, be)


def test_relator_check_rejects_non_representations():
    p = trefoil_two_generator()
    with pytest.raises(RelatorError):
        Representation(p, [[[1, 1], [0, 1]], [[1, 0], [1, 1]]], Q)
    with pytest.raises(RelatorError):
        Representation(p, [[[2, 0], [0, 1]], [[2, 0], [0, 1]]], Q)


def test_parabolic_trefoil_rep_is_irreducible():
    p = trefoil_two_generator()
    rho = Representation(p, [[[1, 1], [0, 1]], [[1, 0], [-1, 1]]], Q)
    res = irreducibility_test(rho)
    assert res.irreducible and res.span_dimension == 4


def test_reducible_rep_has_witness(figure_eight):
    _, _, be, _, rho = figure_eight
    r3 = symmetric_power(rho, 3)
    res = irreducibility_test(r3)
    assert not res.irreducible
    assert res.span_dimension == 6
    assert res.witness is not None and len(res.witness) == 1
    v = res.witness[0]
    for m in r3.images:
        w = m @ v
        assert be.rank(np.stack([v, w], axis=1)) == 1


def test_irreducibility_numeric(figure_eight_numeric):
    _, _, be, _, rho = figure_eight_numeric
    res = irreducibility_test(symmetric_power(rho, 3))
    assert not res.irreducible and res.span_dimension == 6


def test_sym_matrix_small_cases():
    A = Q.asarray([[2, 3], [1, 2]])
    assert (sym_matrix(A, 1, Q) == Q.eye(1)).all()
    # r_2 is conjugate to the identity representation: same trace and determinant
    r2 = sym_matrix(A, 2, Q)
    assert r2[0, 0] + r2[1, 1] == 4 and Q.det(r2) == 1


def test_sym_matrix_binomial_form(figure_eight):
    _, _, be, lam, _ = figure_eight
    b = lam + 3
    A = be.asarray([[lam, b / lam], [0, 1 / lam]])
    n = 5
    m = sym_matrix(A, n, be)
    for k in range(1, n + 1):
        for l in range(1, n + 1):
            assert m[k - 1, l - 1] == binomial_action_entry(lam, b, n, l, k, be)


def test_sl_coordinates_round_trip():
    n = 4
    v = Q.asarray([[i - 3] for i in range(n * n - 1)])[:, 0]
    m = sl_matrix(v, n, Q)
    assert sum(m[i, i] for i in range(n)) == 0
    assert (sl_coordinates(m, Q) == v).all()


def test_adjoint_matrix_matches_conjugation():
    n = 3
    g = Q.asarray([[1, 2, 0], [0, 1, 0], [1, 3, 1]])
    gi = Q.inv(g)
    ad = adjoint_matrix(g, gi, Q)
    for k in range(n * n - 1):
        e = Q.vector(n * n - 1)
        e[k] = Q.one
        assert (sl_coordinates(g @ sl_matrix(e, n, Q) @ gi, Q) == ad[:, k]).all()


def test_clebsch_gordan_and_ladder():
    A = Q.asarray([[3, 2], [4, 3]])
    for n in range(2, 7):
        assert clebsch_gordan_check(A, n, Q)
    U = Q.asarray([[2, 5], [0, Q.one / 2]])
    for n in range(3, 8):
        assert ladder_intertwines(U, n, Q)


def test_clebsch_gordan_numeric():
    be = NumericBackend(128)
    A = be.asarray([[complex(1, 1), 2], [0.5, complex(1, -1)]])
    assert be.is_zero(be.det(A) - 1)
    assert clebsch_gordan_check(A, 5, be)


def test_module_action_dimensions(trefoil):
    p, _, be, lam, rho = trefoil
    assert module_action(rho, "R", 10).dim == 11
    assert module_action(rho, "sl", 4).dim == 15
    assert module_action(None, "C", 2, presentation=p, backend=be).dim == 1
    with pytest.raises(ValueError):
        module_action(rho, "R", -1)
    with pytest.raises(ValueError):
        module_action(rho, "sl", 1)
    with pytest.raises(ValueError):
        module_action(None, "C", 0, presentation=p, backend=be)


def test_parse_module():
    assert parse_module("sl:6") == ("sl", "6")
    assert parse_module("R:10") == ("R", "10")
    assert parse_module("C:root(x^2-3*x+1, 0.38)") == ("C", "root(x^2-3*x+1, 0.38)")
    with pytest.raises(ValueError):
        parse_module("gl:3")


def test_word_cache_consistency(figure_eight):
    p, _, be, _, rho = figure_eight
    w = Word([(0, 1), (2, -1), (1, 2), (3, -1)])
    m, mi = rho.word_pair(w)
    assert (m @ mi == be.eye(2)).all()
    direct = be.eye(2)
    for g, e in w.letters:
        direct = direct @ rho.letter(g, e)
    assert (direct == rho.word_matrix(w)).all()


def test_diagonal_rep(figure_eight):
    p, _, be, lam, _ = figure_eight
    d = diagonal_rep(p, lam, be)
    assert d.residual() == 0
    assert not irreducibility_test(d).irreducible
