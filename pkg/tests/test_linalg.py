import itertools

import numpy as np

from hermod.linalg import rank_mod_p, rref, solve_in_span


def brute_in_span(A, t, p):
    for x in itertools.product(range(p), repeat=A.shape[1]):
        if np.array_equal(A @ np.array(x) % p, t % p):
            return True
    return False


def test_solve_in_span_against_exhaustive_search():
    rng = np.random.default_rng(1)
    p = 5
    for _ in range(60):
        A = rng.integers(0, p, size=(4, 3))
        A[:, 2] = (A[:, 0] + 2 * A[:, 1]) % p if rng.random() < 0.5 else A[:, 2]
        t = rng.integers(0, p, size=4)
        x = solve_in_span(A, t, p)
        assert (x is not None) == brute_in_span(A, t, p)
        if x is not None:
            assert np.array_equal(A @ x % p, t)


def test_rref_is_reduced_and_deterministic():
    M = np.array([[2, 4, 1], [1, 2, 3], [0, 0, 5]])
    R1, piv1 = rref(M, 7)
    R2, piv2 = rref(M, 7)
    assert np.array_equal(R1, R2) and piv1 == piv2
    for i, c in enumerate(piv1):
        col = R1[:, c]
        assert col[i] == 1 and np.count_nonzero(col) == 1
    assert rank_mod_p(M, 7) == 2
    # mod 5 the last row vanishes and row 1 = 2 * row 2
    assert rank_mod_p(M, 5) == 1
