"""Fock-basis bookkeeping: occupation patterns, sparse state vectors, inner products.

Basis order is lexicographic *descending* on the count tuple, so for two modes
and one photon the order is ``(1, 0), (0, 1)``.  Every serializer in the package
emits patterns in this order, which keeps textual output byte-stable.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import DomainError, NotNormalizable

DEFAULT_EPS = 1e-10

Pattern = tuple[int, ...]


def basis_key(pattern: Sequence[int]) -> tuple[int, ...]:
    """Sort key reproducing the documented basis order."""
    return tuple(-c for c in pattern)


@lru_cache(maxsize=None)
def _basis(m: int, n: int) -> tuple[Pattern, ...]:
    if m == 1:
        return ((n,),)
    out: list[Pattern] = []
    for first in range(n, -1, -1):
        for rest in _basis(m - 1, n - first):
            out.append((first,) + rest)
    return tuple(out)


def enumerate_basis(m: int, n: int) -> list[Pattern]:
    """All occupation patterns of ``n`` photons in ``m`` modes, in basis order.

    The result has ``comb(n + m - 1, m - 1)`` entries.
    """
    if m < 1:
        raise DomainError(f"mode count must be >= 1, got {m}")
    if n < 0:
        raise DomainError(f"photon number must be >= 0, got {n}")
    return list(_basis(m, n))


def basis_size(m: int, n: int) -> int:
    return math.comb(n + m - 1, m - 1)


def pattern_factorial(pattern: Iterable[int]) -> int:
    out = 1
    for c in pattern:
        out *= math.factorial(c)
    return out


@dataclass(frozen=True)
class FockState:
    """Pure state of a fixed number of photons in ``mode_count`` modes.

    ``amplitudes`` is sparse: patterns absent from the map have amplitude 0.
    Treat instances as immutable; every operation returns a new state.
    """

    mode_count: int
    photon_number: int
    amplitudes: Mapping[Pattern, complex] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode_count < 1:
            raise DomainError(f"mode count must be >= 1, got {self.mode_count}")
        if self.photon_number < 0:
            raise DomainError("photon number must be non-negative")
        clean: dict[Pattern, complex] = {}
        for pattern, amp in self.amplitudes.items():
            pattern = tuple(int(c) for c in pattern)
            if len(pattern) != self.mode_count:
                raise DomainError(
                    f"pattern {pattern} has {len(pattern)} modes, expected {self.mode_count}"
                )
            if any(c < 0 for c in pattern):
                raise DomainError(f"negative occupation in {pattern}")
            if sum(pattern) != self.photon_number:
                raise DomainError(
                    f"pattern {pattern} holds {sum(pattern)} photons, expected {self.photon_number}"
                )
            amp = complex(amp)
            if amp != 0:
                clean[pattern] = clean.get(pattern, 0j) + amp
        ordered = {p: clean[p] for p in sorted(clean, key=basis_key)}
        object.__setattr__(self, "amplitudes", ordered)

    @classmethod
    def _trusted(cls, m: int, n: int, amplitudes: dict[Pattern, complex]) -> FockState:
        """Skip validation; ``amplitudes`` must already be clean and in basis order."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "mode_count", m)
        object.__setattr__(obj, "photon_number", n)
        object.__setattr__(obj, "amplitudes", amplitudes)
        return obj

    def __getitem__(self, pattern: Sequence[int]) -> complex:
        return self.amplitudes.get(tuple(pattern), 0j)

    def __len__(self) -> int:
        return len(self.amplitudes)

    @property
    def norm_squared(self) -> float:
        return math.fsum(abs(a) ** 2 for a in self.amplitudes.values())

    @property
    def norm(self) -> float:
        return math.sqrt(self.norm_squared)

    def is_normalized(self, eps: float = DEFAULT_EPS) -> bool:
        return abs(self.norm_squared - 1.0) <= eps

    def scaled(self, factor: complex) -> FockState:
        amps = {p: a * factor for p, a in self.amplitudes.items()}
        return FockState._trusted(
            self.mode_count, self.photon_number, {p: a for p, a in amps.items() if a != 0}
        )

    def allclose(self, other: FockState, eps: float = DEFAULT_EPS) -> bool:
        """Per-amplitude comparison.  Global phase is *not* factored out."""
        if (self.mode_count, self.photon_number) != (other.mode_count, other.photon_number):
            return False
        keys = set(self.amplitudes) | set(other.amplitudes)
        return all(abs(self[p] - other[p]) <= eps for p in keys)

    def to_dict(self) -> dict:
        return {
            "modes": self.mode_count,
            "photons": self.photon_number,
            "amplitudes": [
                {"pattern": list(p), "re": a.real, "im": a.imag}
                for p, a in self.amplitudes.items()
            ],
        }

    def to_json(self) -> str:
        from .serialize import dumps

        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> FockState:
        try:
            amps = {
                tuple(entry["pattern"]): complex(float(entry["re"]), float(entry["im"]))
                for entry in data["amplitudes"]
            }
            return cls(int(data["modes"]), int(data["photons"]), amps)
        except (KeyError, TypeError) as exc:
            raise DomainError(f"malformed FockState document: {exc}") from exc

    @classmethod
    def from_json(cls, text: str) -> FockState:
        return cls.from_dict(json.loads(text))


def basis_state(pattern: Sequence[int]) -> FockState:
    pattern = tuple(pattern)
    return FockState(len(pattern), sum(pattern), {pattern: 1.0})


def state_from_photons(m: int, occupied_modes: Sequence[int]) -> FockState:
    """Unit-norm basis state with one photon added per listed mode.

    Repeated indices stack photons in the same mode; the bosonic factor
    ``1/sqrt(k!)`` is absorbed so the result has amplitude 1.
    """
    if m < 1:
        raise DomainError(f"mode count must be >= 1, got {m}")
    counts = [0] * m
    for k in occupied_modes:
        if not 0 <= k < m:
            raise DomainError(f"mode index {k} out of range for {m} modes")
        counts[k] += 1
    return basis_state(counts)


def _check_compatible(a: FockState, b: FockState) -> None:
    if a.mode_count != b.mode_count:
        raise DomainError(f"mode counts differ: {a.mode_count} vs {b.mode_count}")
    if a.photon_number != b.photon_number:
        raise DomainError(f"photon numbers differ: {a.photon_number} vs {b.photon_number}")


def inner_product(a: FockState, b: FockState) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    _check_compatible(a, b)
    small, large = (a, b) if len(a) <= len(b) else (b, a)
    total = 0j
    for pattern in small.amplitudes:
        if pattern in large.amplitudes:
            total += a[pattern].conjugate() * b[pattern]
    return total


def add(a: FockState, b: FockState) -> FockState:
    _check_compatible(a, b)
    amps = dict(a.amplitudes)
    for p, v in b.amplitudes.items():
        amps[p] = amps.get(p, 0j) + v
    return FockState(a.mode_count, a.photon_number, amps)


def normalize(s: FockState, eps: float = DEFAULT_EPS) -> tuple[FockState, float]:
    """Return ``(s / |s|, |s|)``.  Raises :class:`NotNormalizable` for |s| <= eps."""
    norm = s.norm
    if norm <= eps:
        raise NotNormalizable(f"state norm {norm:.3e} is below tolerance {eps:.1e}")
    return s.scaled(1.0 / norm), norm


def amplitude_vector(s: FockState) -> list[complex]:
    """Dense amplitudes over the full basis of ``s``."""
    return [s[p] for p in enumerate_basis(s.mode_count, s.photon_number)]
