import itertools

import numpy as np
import pytest

from tdlc import gfp


def _brute_solutions(mat, rhs, p):
    n = mat.shape[1]
    return [x for x in itertools.product(range(p), repeat=n)
            if np.array_equal((mat @ np.array(x)) % p, rhs % p)]


def test_rref_pivots_and_rank():
    m = gfp.as_matrix([[1, 1, 0], [0, 1, 1], [1, 0, 1]], 3, 2)
    red, piv = gfp.rref(m, 2)
    assert piv == [0, 1]
    assert gfp.rank(m, 2) == 2
    assert gfp.rank(m, 3) == 3


def test_left_kernel_annihilates():
    m = gfp.as_matrix([[1, 2, 0], [2, 4, 0], [0, 1, 1]], 3, 5)
    ker = gfp.left_kernel(m, 5)
    assert ker.shape[0] == 1
    assert not ((ker @ m) % 5).any()


def test_in_span():
    m = gfp.as_matrix([[1, 0, 1], [0, 1, 1]], 3, 2)
    assert gfp.in_span(np.array([1, 1, 0]), m, 2)
    assert not gfp.in_span(np.array([0, 0, 1]), m, 2)


@pytest.mark.parametrize("seed", range(20))
def test_solve_matches_brute_force(seed):
    rng = np.random.default_rng(seed)
    p = 3
    mat = rng.integers(0, p, size=(3, 4))
    rhs = rng.integers(0, p, size=3)
    got = gfp.solve(mat, rhs, p)
    sols = _brute_solutions(mat, rhs, p)
    if sols:
        assert got is not None
        assert np.array_equal((mat @ got) % p, rhs % p)
    else:
        assert got is None
