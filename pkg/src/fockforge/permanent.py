"""Matrix permanents.

``permanent_naive`` sums over all n! permutations and is the reference.
``permanent_fast`` is Glynn's formula walked in Gray-code order, so each step
updates the column sums with a single row instead of recomputing them:

    perm(M) = 2^{1-n} * sum_{d in {+-1}^n, d_0 = +1} (prod_k d_k) prod_j sum_k d_k M[k, j]

For n above a small threshold the Gray walk is split into blocks; each block
starts from freshly computed column sums (which bounds rounding drift) and the
steps inside it are a cumulative sum of signed row updates.
"""

from __future__ import annotations

import itertools
from math import prod

import numpy as np

from .errors import DomainError

_SCALAR_LIMIT = 8
_BLOCK = 1 << 12


def _as_square(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DomainError(f"permanent needs a square matrix, got shape {m.shape}")
    return m


def permanent_naive(matrix) -> complex:
    m = _as_square(matrix)
    n = m.shape[0]
    if n > 10:
        raise DomainError(f"naive permanent limited to n <= 10, got {n}")
    rows = m.tolist()
    total = 0j
    for perm in itertools.permutations(range(n)):
        total += prod((rows[i][perm[i]] for i in range(n)), start=1 + 0j)
    return complex(total)


def _glynn_scalar(rows: list[list[complex]]) -> complex:
    n = len(rows)
    sums = [sum(col) for col in zip(*rows)]
    delta = [1] * n
    total = prod(sums, start=1 + 0j)
    sign = 1
    for t in range(1, 1 << (n - 1)):
        k = (t & -t).bit_length()  # flipped row, 1-based since row 0 stays fixed
        row = rows[k]
        if delta[k] > 0:
            sums = [s - 2 * r for s, r in zip(sums, row)]
        else:
            sums = [s + 2 * r for s, r in zip(sums, row)]
        delta[k] = -delta[k]
        sign = -sign
        total += sign * prod(sums, start=1 + 0j)
    return total / (1 << (n - 1))


def _glynn_blocked(m: np.ndarray) -> complex:
    n = m.shape[0]
    steps = 1 << (n - 1)
    block = min(_BLOCK, steps)
    total = 0j
    for t0 in range(0, steps, block):
        t = np.arange(t0, t0 + block, dtype=np.int64)
        gray = t ^ (t >> 1)
        # column sums at the start of the block
        g0 = int(gray[0])
        d0 = np.ones(n)
        for k in range(1, n):
            if (g0 >> (k - 1)) & 1:
                d0[k] = -1.0
        start = d0 @ m
        tt = t[1:]
        low = tt & -tt
        bit = np.log2(low).astype(np.int64)
        now_set = (gray[1:] >> bit) & 1
        # bit set after the flip means that row's sign went + -> -
        coef = np.where(now_set == 1, -2.0, 2.0)
        incr = coef[:, None] * m[bit + 1]
        sums = np.empty((block, n), dtype=complex)
        sums[0] = start
        np.cumsum(incr, axis=0, out=sums[1:])
        sums[1:] += start
        signs = np.where(t & 1, -1.0, 1.0)
        total += complex(np.dot(signs, np.prod(sums, axis=1)))
    return total / steps


def _small_list(rows: list) -> complex | None:
    n = len(rows)
    if any(len(r) != n for r in rows):
        return None
    if n == 1:
        return complex(rows[0][0])
    if n == 2:
        return complex(rows[0][0] * rows[1][1] + rows[0][1] * rows[1][0])
    if n == 3:
        return complex(_glynn_scalar(rows))
    return None


def permanent_fast(matrix) -> complex:
    if isinstance(matrix, list) and matrix and isinstance(matrix[0], list):
        # fast path for the tiny nested-list matrices built during evolution
        value = _small_list(matrix)
        if value is not None:
            return value
    m = _as_square(matrix)
    n = m.shape[0]
    if n > 30:
        raise DomainError(f"fast permanent limited to n <= 30, got {n}")
    if n == 0:
        return 1 + 0j
    if n == 1:
        return complex(m[0, 0])
    if n == 2:
        return complex(m[0, 0] * m[1, 1] + m[0, 1] * m[1, 0])
    if n <= _SCALAR_LIMIT:
        return complex(_glynn_scalar(m.tolist()))
    return _glynn_blocked(m)


permanent = permanent_fast
