"""Linear-optics circuits and their mode unitaries.

A mode unitary ``U`` follows the creation-operator convention
``a_k^dagger -> sum_j U[j, k] b_j^dagger``: column ``k`` is the image of input
mode ``k``.  Elements are applied in propagation order, so the compiled matrix
is ``U_last @ ... @ U_first``.

Balanced beam splitters use the symmetric convention
``(1/sqrt(2)) [[1, i], [i, 1]]``: the reflected amplitude carries the factor i.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Union

import numpy as np

from .errors import DomainError
from .fock import DEFAULT_EPS

# Mode labels of the four-path interferometer; side A = {0, 1}, side B = {2, 3}.
A1, A2, B1, B2 = 0, 1, 2, 3
SIDE_A = (A1, A2)
SIDE_B = (B1, B2)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class PhaseVar:
    """A named phase left free until the circuit is bound (DSL ``$name``)."""

    name: str

    def __str__(self) -> str:
        return "$" + self.name


Phase = Union[float, PhaseVar]


@dataclass(frozen=True)
class BeamSplitter:
    i: int
    j: int

    @property
    def modes(self) -> tuple[int, ...]:
        return (self.i, self.j)


@dataclass(frozen=True)
class PhaseShift:
    mode: int
    phi: Phase

    @property
    def modes(self) -> tuple[int, ...]:
        return (self.mode,)


@dataclass(frozen=True)
class Swap:
    i: int
    j: int

    @property
    def modes(self) -> tuple[int, ...]:
        return (self.i, self.j)


CircuitElement = Union[BeamSplitter, PhaseShift, Swap]


def validate_element(e: CircuitElement, m: int) -> None:
    for k in e.modes:
        if not 0 <= k < m:
            raise DomainError(f"{e} addresses mode {k}, outside [0, {m})")
    if len(e.modes) == 2 and e.modes[0] == e.modes[1]:
        raise DomainError(f"{e} needs two distinct modes")
    if isinstance(e, PhaseShift) and not isinstance(e.phi, PhaseVar) and not math.isfinite(e.phi):
        raise DomainError(f"{e} has a non-finite phase")


@dataclass(frozen=True)
class Circuit:
    mode_count: int
    elements: tuple[CircuitElement, ...] = ()

    def __post_init__(self) -> None:
        if self.mode_count < 1:
            raise DomainError(f"mode count must be >= 1, got {self.mode_count}")
        object.__setattr__(self, "elements", tuple(self.elements))
        for e in self.elements:
            validate_element(e, self.mode_count)

    def variables(self) -> list[str]:
        """Free phase names in order of first appearance."""
        seen: list[str] = []
        for e in self.elements:
            if isinstance(e, PhaseShift) and isinstance(e.phi, PhaseVar):
                if e.phi.name not in seen:
                    seen.append(e.phi.name)
        return seen

    def bind(self, values: Mapping[str, float]) -> Circuit:
        """Substitute the named phases present in ``values``; others stay free."""
        out = []
        for e in self.elements:
            if isinstance(e, PhaseShift) and isinstance(e.phi, PhaseVar) and e.phi.name in values:
                e = replace(e, phi=float(values[e.phi.name]))
            out.append(e)
        return Circuit(self.mode_count, tuple(out))

    def then(self, *elements: CircuitElement) -> Circuit:
        return Circuit(self.mode_count, self.elements + tuple(elements))


def element_unitary(e: CircuitElement, m: int) -> np.ndarray:
    validate_element(e, m)
    u = np.eye(m, dtype=complex)
    if isinstance(e, BeamSplitter):
        u[e.i, e.i] = u[e.j, e.j] = _INV_SQRT2
        u[e.i, e.j] = u[e.j, e.i] = 1j * _INV_SQRT2
    elif isinstance(e, PhaseShift):
        if isinstance(e.phi, PhaseVar):
            raise DomainError(f"phase variable {e.phi} is unbound")
        u[e.mode, e.mode] = complex(math.cos(e.phi), math.sin(e.phi))
    elif isinstance(e, Swap):
        u[[e.i, e.j]] = u[[e.j, e.i]]
    else:
        raise DomainError(f"unknown circuit element {e!r}")
    return u


def _apply_left(u: np.ndarray, e: CircuitElement) -> None:
    """In-place ``u <- element_unitary(e) @ u``, touching only the element's rows."""
    if isinstance(e, BeamSplitter):
        ri, rj = u[e.i].copy(), u[e.j].copy()
        u[e.i] = _INV_SQRT2 * (ri + 1j * rj)
        u[e.j] = _INV_SQRT2 * (1j * ri + rj)
    elif isinstance(e, PhaseShift):
        if isinstance(e.phi, PhaseVar):
            raise DomainError(f"phase variable {e.phi} is unbound")
        u[e.mode] *= complex(math.cos(e.phi), math.sin(e.phi))
    else:
        u[[e.i, e.j]] = u[[e.j, e.i]]


def _compile_rows(c: Circuit) -> np.ndarray:
    # plain-list row updates; numpy call overhead dominates for a handful of modes
    m = c.mode_count
    rows = [[1.0 + 0j if i == k else 0j for k in range(m)] for i in range(m)]
    s = _INV_SQRT2
    for e in c.elements:
        if isinstance(e, BeamSplitter):
            ri, rj = rows[e.i], rows[e.j]
            rows[e.i] = [s * (x + 1j * y) for x, y in zip(ri, rj)]
            rows[e.j] = [s * (1j * x + y) for x, y in zip(ri, rj)]
        elif isinstance(e, PhaseShift):
            if isinstance(e.phi, PhaseVar):
                raise DomainError(f"phase variable {e.phi} is unbound")
            f = complex(math.cos(e.phi), math.sin(e.phi))
            rows[e.mode] = [f * x for x in rows[e.mode]]
        else:
            rows[e.i], rows[e.j] = rows[e.j], rows[e.i]
    return np.array(rows, dtype=complex)


def compile_circuit(c: Circuit) -> np.ndarray:
    """Mode unitary of the whole circuit (product in propagation order)."""
    if c.mode_count <= 8:
        return _compile_rows(c)
    u = np.eye(c.mode_count, dtype=complex)
    for e in c.elements:
        _apply_left(u, e)
    return u


def unitarity_error(u: np.ndarray) -> float:
    """max |U^dagger U - I| over entries."""
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def is_unitary(u: np.ndarray, eps: float = DEFAULT_EPS) -> bool:
    u = np.asarray(u)
    return u.ndim == 2 and u.shape[0] == u.shape[1] and unitarity_error(u) <= eps


def crossed_beam_splitter(i: int, j: int) -> tuple[CircuitElement, ...]:
    """Balanced splitter whose straight-through path carries the factor i.

    Equals ``Swap(i, j)`` applied after ``BeamSplitter(i, j)``, i.e. the
    matrix ``(1/sqrt(2)) [[i, 1], [1, i]]`` on ``(i, j)``.  A photon entering
    port ``i`` leaves as ``(i b_i + b_j)/sqrt(2)``.
    """
    return (BeamSplitter(i, j), Swap(i, j))


def build_nonlocal_hom(phi_a: Phase = 0.0, phi_b: Phase = 0.0) -> Circuit:
    """Four-path interferometer with a central swap of the inner modes.

    Modes are ordered (A1, A2, B1, B2).  The photons enter A1 and B2.  Each
    local splitter is a crossed splitter, so the photon in A1 leaves the input
    stage as ``(i A1 + A2)/sqrt(2)`` and the photon in B2 as
    ``(B1 + i B2)/sqrt(2)``.  After swapping A2 and B1, the outer modes pick
    up the local phases and the output splitters recombine each side.

    The compiled columns for A1 and B2 are::

        A1: (-e^{i phi_a}, i e^{i phi_a}, i, 1) / 2
        B2: (1, i, i e^{i phi_b}, -e^{i phi_b}) / 2
    """
    elements = (
        *crossed_beam_splitter(A1, A2),
        *crossed_beam_splitter(B1, B2),
        Swap(A2, B1),
        PhaseShift(A1, phi_a),
        PhaseShift(B2, phi_b),
        *crossed_beam_splitter(A1, A2),
        *crossed_beam_splitter(B1, B2),
    )
    return Circuit(4, elements)


def build_classic_hom() -> Circuit:
    return Circuit(2, (BeamSplitter(0, 1),))


def nonlocal_hom_columns(phi_a: float, phi_b: float) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form output images of input modes A1 and B2 (reference values)."""
    ea = complex(math.cos(phi_a), math.sin(phi_a))
    eb = complex(math.cos(phi_b), math.sin(phi_b))
    col_a = np.array([-ea, 1j * ea, 1j, 1.0]) / 2
    col_b = np.array([1.0, 1j, 1j * eb, -eb]) / 2
    return col_a, col_b


def random_unitary(m: int, rng: np.random.Generator) -> np.ndarray:
    """QR-orthonormalized complex Gaussian matrix (generic, not Haar-exact)."""
    z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
