import random

import pytest

from hallvertex.algebra import MPoly, root
from hallvertex.quiver import a1_quiver, jordan_quiver, kronecker_quiver


@pytest.fixture
def A1():
    return a1_quiver()


@pytest.fixture
def J():
    return jordan_quiver()


@pytest.fixture
def K():
    return kronecker_quiver()


@pytest.fixture
def rng():
    return random.Random(20240817)


def random_poly(rng, variables, max_deg=2, max_terms=4, coeff_range=4):
    """Random sparse polynomial of total degree at most max_deg."""
    p = MPoly.zero()
    for _ in range(rng.randint(1, max_terms)):
        term = MPoly.const(rng.randint(-coeff_range, coeff_range))
        budget = max_deg
        for v in variables:
            e = rng.randint(0, budget)
            budget -= e
            if e:
                term = term * MPoly.var(v) ** e
        p = p + term
    return p
