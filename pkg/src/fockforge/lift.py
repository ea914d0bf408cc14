"""Lift a mode unitary to the n-photon Fock space.

The transition amplitude between input pattern ``s`` and output pattern ``t``
is ``perm(U[t, s]) / sqrt(prod s_i! * prod t_j!)``, where ``U[t, s]`` repeats
row ``j`` of ``U`` ``t_j`` times and column ``i`` ``s_i`` times.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DomainError
from .fock import FockState, Pattern, enumerate_basis, pattern_factorial
from .permanent import permanent_fast


def _expand(pattern: Sequence[int]) -> list[int]:
    return [k for k, c in enumerate(pattern) for _ in range(c)]


def amplitude_matrix(u: np.ndarray, inp: Sequence[int], out: Sequence[int]) -> np.ndarray:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DomainError(f"mode unitary must be square, got shape {u.shape}")
    m = u.shape[0]
    if len(inp) != m or len(out) != m:
        raise DomainError(f"patterns must have {m} modes")
    if sum(inp) != sum(out):
        raise DomainError(f"photon number mismatch: {sum(inp)} in, {sum(out)} out")
    return u[np.ix_(_expand(out), _expand(inp))]


def fock_amplitude(u: np.ndarray, inp: Sequence[int], out: Sequence[int]) -> complex:
    sub = amplitude_matrix(u, inp, out)
    norm = math.sqrt(pattern_factorial(inp) * pattern_factorial(out))
    return permanent_fast(sub) / norm


def _check_dims(s: FockState, u: np.ndarray) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if u.ndim != 2 or u.shape != (s.mode_count, s.mode_count):
        raise DomainError(
            f"unitary of shape {u.shape} does not act on {s.mode_count} modes"
        )
    return u


@lru_cache(maxsize=None)
def _sector(m: int, n: int) -> tuple[tuple[Pattern, ...], tuple[tuple[int, ...], ...], tuple[float, ...]]:
    basis = tuple(enumerate_basis(m, n))
    rows = tuple(tuple(_expand(q)) for q in basis)
    norms = tuple(math.sqrt(pattern_factorial(q)) for q in basis)
    return basis, rows, norms


def evolve(s: FockState, u: np.ndarray) -> FockState:
    """Apply the Fock-space lift of ``u`` to ``s``.

    Every basis pattern of the output space is visited; amplitudes that come
    out exactly zero are dropped from the sparse map.
    """
    u = _check_dims(s, u)
    n = s.photon_number
    if n == 0:
        return FockState(s.mode_count, 0, dict(s.amplitudes))
    basis, rows, out_norm = _sector(s.mode_count, n)
    amps = [0j] * len(basis)
    small = n <= 3
    if small:
        ul = u.tolist()
    for p, coeff in s.amplitudes.items():
        cols = _expand(p)
        scale = coeff / math.sqrt(pattern_factorial(p))
        for idx, r in enumerate(rows):
            if small:
                perm = permanent_fast([[ul[i][j] for j in cols] for i in r])
            else:
                perm = permanent_fast(u[np.ix_(r, cols)])
            amps[idx] += scale * perm / out_norm[idx]
    return FockState._trusted(
        s.mode_count, n, {q: a for q, a in zip(basis, amps) if a != 0}
    )


def transfer_matrix(u: np.ndarray, n: int) -> np.ndarray:
    """Dense Fock-space matrix of ``u`` on the ``n``-photon sector, basis order."""
    u = np.asarray(u, dtype=complex)
    basis = enumerate_basis(u.shape[0], n)
    return np.array([[fock_amplitude(u, p, q) for p in basis] for q in basis])
