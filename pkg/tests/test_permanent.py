import math

import numpy as np
import pytest

from fockforge.errors import DomainError
from fockforge.permanent import permanent_fast, permanent_naive


@pytest.mark.parametrize("kernel", [permanent_naive, permanent_fast])
def test_small_values(kernel):
    assert kernel([[2]]) == 2
    assert kernel([[1, 1], [1, 1]]) == 2
    assert kernel(np.ones((3, 3))) == pytest.approx(6)
    assert kernel(np.eye(5)) == pytest.approx(1)
    assert kernel(np.zeros((0, 0))) == 1


def test_all_ones_is_factorial():
    for n in range(1, 13):
        assert permanent_fast(np.ones((n, n))) == pytest.approx(math.factorial(n), rel=1e-12)


def test_fast_matches_naive(rng):
    for n in range(1, 9):
        for _ in range(10):
            m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            ref = permanent_naive(m)
            assert abs(permanent_fast(m) - ref) <= 1e-9 * max(1.0, abs(ref))


def test_blocked_path_matches_scalar(rng):
    # n = 9..12 takes the blocked route; compare against naive where affordable
    for n in (9, 10):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        ref = permanent_naive(m)
        assert abs(permanent_fast(m) - ref) <= 1e-9 * abs(ref)


def test_permanent_invariant_under_permutation(rng):
    m = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    p = permanent_fast(m)
    shuffled = m[rng.permutation(12)][:, rng.permutation(12)]
    assert abs(permanent_fast(shuffled) - p) <= 1e-9 * abs(p)
    assert abs(permanent_fast(m.T) - p) <= 1e-9 * abs(p)


def test_list_and_array_agree(rng):
    for n in (1, 2, 3):
        m = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        assert permanent_fast(m.tolist()) == pytest.approx(permanent_fast(m), abs=1e-13)


def test_rejects_non_square():
    with pytest.raises(DomainError):
        permanent_fast(np.ones((2, 3)))
    with pytest.raises(DomainError):
        permanent_naive(np.ones((11, 11)))
