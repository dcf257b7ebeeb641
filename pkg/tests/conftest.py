from __future__ import annotations

import functools

import pytest

from knotrep import alexander_polynomial, load_table, parse_knot_input, parse_lambda, resolve_lambda, wirtinger_presentation
from knotrep.cohomology import reducible_metabelian

TREFOIL_LAMBDA = "root(x^4-x^2+1, 0.866+0.5i)"
FIGURE_EIGHT_LAMBDA = "root(x^2-x-1, 1.618)"
LAMBDAS = {"3_1": TREFOIL_LAMBDA, "4_1": FIGURE_EIGHT_LAMBDA}


@functools.lru_cache(maxsize=None)
def presentation(name: str):
    return wirtinger_presentation(parse_knot_input(name, "name", load_table()))


@functools.lru_cache(maxsize=None)
def setup(name: str, backend: str = "exact", precision: int = 256):
    """(presentation, Delta, backend, lambda, rho) for a table knot."""
    p = presentation(name)
    delta = alexander_polynomial(p)
    be, lam = resolve_lambda(parse_lambda(LAMBDAS[name]), delta, backend, precision)
    return p, delta, be, lam, reducible_metabelian(p, lam, be)


@pytest.fixture(scope="session")
def trefoil():
    return setup("3_1")


@pytest.fixture(scope="session")
def figure_eight():
    return setup("4_1")


@pytest.fixture(scope="session")
def figure_eight_numeric():
    return setup("4_1", "numeric")
