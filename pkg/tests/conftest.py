import numpy as np
import pytest

from isoread.automorphism import enumerate_automorphisms, pair_orbits
from isoread.generators import gen_cycle_pair


def named_coeffs(orbits, assignment):
    """Coefficient vector from {(i, j): value} using one representative pair per orbit."""
    c = np.full(orbits.m, np.nan)
    for (i, j), v in assignment.items():
        c[orbits.orbit_id[i, j]] = v
    assert not np.isnan(c).any()
    return c


@pytest.fixture(scope="session")
def c6():
    return gen_cycle_pair(3)[1]


@pytest.fixture(scope="session")
def two_c3():
    return gen_cycle_pair(3)[0]


@pytest.fixture(scope="session")
def c6_coeffs(c6):
    # diagonal, distance 1, distance 2, distance 3
    orbits = pair_orbits(enumerate_automorphisms(c6), c6)
    return named_coeffs(orbits, {(0, 0): 1, (0, 1): 2, (0, 2): 3, (0, 3): 5})


@pytest.fixture(scope="session")
def two_c3_coeffs(two_c3):
    # diagonal, same triangle, other triangle
    orbits = pair_orbits(enumerate_automorphisms(two_c3), two_c3)
    return named_coeffs(orbits, {(0, 0): 5, (0, 1): 2, (0, 3): 1})


@pytest.fixture(scope="session")
def S1():
    from scipy.linalg import circulant

    return circulant([1, 2, 3, 5, 3, 2]).astype(float)


@pytest.fixture(scope="session")
def S2():
    S = np.ones((6, 6))
    S[:3, :3] = S[3:, 3:] = 2.0
    np.fill_diagonal(S, 5.0)
    return S
