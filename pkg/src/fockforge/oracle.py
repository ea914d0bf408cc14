"""Brute-force evolution by expanding polynomials in creation operators.

Independent of the permanent route in :mod:`fockforge.lift`: a state is a
polynomial in commuting creation operators applied to the vacuum, and a
linear-optics network substitutes ``a_k^dagger -> sum_j U[j, k] b_j^dagger``
into every factor.  Used as a test oracle, so it is deliberately naive.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError
from .fock import FockState

PRUNE_EPS = 1e-14

Monomial = tuple[int, ...]  # sorted mode indices, one per creation factor


@dataclass(frozen=True)
class OperatorPolynomial:
    mode_count: int
    terms: Mapping[Monomial, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        clean: dict[Monomial, complex] = defaultdict(complex)
        for mono, coeff in self.terms.items():
            key = tuple(sorted(mono))
            if any(not 0 <= k < self.mode_count for k in key):
                raise DomainError(f"monomial {mono} addresses a mode outside [0, {self.mode_count})")
            clean[key] += complex(coeff)
        kept = {k: v for k, v in sorted(clean.items()) if abs(v) > PRUNE_EPS}
        object.__setattr__(self, "terms", kept)

    @classmethod
    def monomial(cls, mode_count: int, modes: Sequence[int], coeff: complex = 1.0) -> OperatorPolynomial:
        return cls(mode_count, {tuple(modes): coeff})

    def __add__(self, other: OperatorPolynomial) -> OperatorPolynomial:
        if self.mode_count != other.mode_count:
            raise DomainError("cannot add polynomials over different mode counts")
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0j) + v
        return OperatorPolynomial(self.mode_count, terms)

    def degrees(self) -> set[int]:
        return {len(k) for k in self.terms}


def substitute(p: OperatorPolynomial, u: np.ndarray) -> OperatorPolynomial:
    u = np.asarray(u, dtype=complex)
    if u.shape != (p.mode_count, p.mode_count):
        raise DomainError(f"unitary of shape {u.shape} does not act on {p.mode_count} modes")
    m = p.mode_count
    out: dict[Monomial, complex] = defaultdict(complex)
    for mono, coeff in p.terms.items():
        # expand the product factor by factor
        partial: dict[Monomial, complex] = {(): coeff}
        for k in mono:
            nxt: dict[Monomial, complex] = defaultdict(complex)
            for key, c in partial.items():
                for j in range(m):
                    if u[j, k] != 0:
                        nxt[tuple(sorted(key + (j,)))] += c * u[j, k]
            partial = nxt
        for key, c in partial.items():
            out[key] += c
    return OperatorPolynomial(m, out)


def to_fock_state(p: OperatorPolynomial, photon_number: int | None = None) -> FockState:
    """Apply ``p`` to the vacuum: ``(b_0^dag)^k |0> = sqrt(k!) |k>``.

    An empty polynomial gives the zero state; pass ``photon_number`` to pin
    its sector (defaults to 0).
    """
    degrees = p.degrees()
    if len(degrees) > 1:
        raise DomainError(f"polynomial is not homogeneous (degrees {sorted(degrees)})")
    n = degrees.pop() if degrees else (photon_number or 0)
    if photon_number is not None and n != photon_number:
        raise DomainError(f"polynomial has degree {n}, expected {photon_number}")
    amps: dict[tuple[int, ...], complex] = {}
    for mono, coeff in p.terms.items():
        counts = [0] * p.mode_count
        for k in mono:
            counts[k] += 1
        weight = math.sqrt(math.prod(math.factorial(c) for c in counts))
        amps[tuple(counts)] = coeff * weight
    return FockState(p.mode_count, n, amps)


def from_fock_state(s: FockState) -> OperatorPolynomial:
    """Inverse of :func:`to_fock_state`."""
    terms: dict[Monomial, complex] = {}
    for pattern, amp in s.amplitudes.items():
        mono = tuple(k for k, c in enumerate(pattern) for _ in range(c))
        weight = math.sqrt(math.prod(math.factorial(c) for c in pattern))
        terms[mono] = amp / weight
    return OperatorPolynomial(s.mode_count, terms)


def oracle_evolve(s: FockState, u: np.ndarray) -> FockState:
    return to_fock_state(substitute(from_fock_state(s), u), s.photon_number)
