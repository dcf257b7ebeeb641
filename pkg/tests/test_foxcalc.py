from __future__ import annotations

from knotrep.cohomology import fox_blocks
from knotrep.foxcalc import GroupRingElement, evaluate, fox_derivative, fox_jacobian, fundamental_identity_holds
from knotrep.knots import Word
from knotrep.reps import module_action

from conftest import setup

a, b = Word.gen(0), Word.gen(1)
E = GroupRingElement.of


def test_basic_derivatives():
    # d(ab)/da = 1, d(ab)/db = a, d(a^-1)/da = -a^-1
    assert fox_derivative(a * b, 0) == GroupRingElement.one()
    assert fox_derivative(a * b, 1) == E(a)
    assert fox_derivative(a.inverse(), 0) == E(a.inverse(), -1)
    assert fox_derivative(a ** 3, 0) == E(Word()) + E(a) + E(a ** 2)


def test_product_rule():
    u, v = Word([(0, 1), (1, -1)]), Word([(1, 2), (0, 1)])
    for g in (0, 1):
        assert fox_derivative(u * v, g) == fox_derivative(u, g) + E(u) * fox_derivative(v, g)


def test_group_ring_arithmetic():
    x = E(a) + E(b, 2)
    assert (x - x) == GroupRingElement()
    assert x.augmentation() == 3
    assert (E(a) * E(a.inverse())) == GroupRingElement.one()


def test_fundamental_identity_on_trefoil_relator():
    r = Word([(0, 1), (1, 1), (0, 1), (1, -1), (0, -1), (1, -1)])
    assert fundamental_identity_holds(r, 2)
    jac = fox_jacobian([r], 2)
    assert len(jac) == 1 and len(jac[0]) == 2


def test_evaluate_matches_fox_blocks():
    p, _, _, _, rho = setup("4_1")
    act = module_action(rho, "sl", 3)
    blocks = fox_blocks(p, act)
    for j, r in enumerate(p.relators):
        for i in range(p.num_generators):
            assert (evaluate(fox_derivative(r, i), act) == blocks[j][i]).all()
