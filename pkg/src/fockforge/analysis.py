"""Post-selection, coincidence statistics, mode matching, entanglement and steering.

Detector D_Xk is a plain photon-number measurement on output mode Xk of the
four-path interferometer (D_A1 -> mode 0, ..., D_B2 -> mode 3); the
interference that defines what each detector "sees" lives in the circuit's
output splitters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .circuit import (
    A1, A2, B1, B2, SIDE_A, SIDE_B,
    Circuit, PhaseShift, Swap,
    build_nonlocal_hom, compile_circuit, crossed_beam_splitter,
)
from .errors import DomainError, PostSelectionEmpty
from .fock import DEFAULT_EPS, FockState, inner_product, state_from_photons
from .lift import evolve

NONLOCAL_INPUT = (A1, B2)
DETECTORS = {"A1": A1, "A2": A2, "B1": B1, "B2": B2}


@dataclass(frozen=True)
class PostSelectionRule:
    name: str
    accepts: Callable[[tuple[int, ...]], bool]

    def __call__(self, pattern: tuple[int, ...]) -> bool:
        return bool(self.accepts(pattern))


def one_per_side(side_a: Sequence[int] = SIDE_A, side_b: Sequence[int] = SIDE_B) -> PostSelectionRule:
    side_a, side_b = tuple(side_a), tuple(side_b)

    def accepts(pattern: tuple[int, ...]) -> bool:
        return sum(pattern[k] for k in side_a) == 1 and sum(pattern[k] for k in side_b) == 1

    return PostSelectionRule("one-per-side", accepts)


ONE_PER_SIDE = one_per_side()
ACCEPT_ALL = PostSelectionRule("none", lambda pattern: True)


def postselect(
    s: FockState, rule: PostSelectionRule, eps: float = DEFAULT_EPS
) -> tuple[FockState, float]:
    """Project onto the accepted patterns and renormalize.

    Returns the renormalized state and the acceptance probability ``p``.
    """
    kept = {q: a for q, a in s.amplitudes.items() if rule(q)}
    projected = FockState(s.mode_count, s.photon_number, kept)
    p = projected.norm_squared
    if p <= eps * eps:
        raise PostSelectionEmpty(f"post-selection '{rule.name}' accepted probability {p:.3e}")
    return projected.scaled(1.0 / math.sqrt(p)), p


class PhaseSettings(NamedTuple):
    phi_a: float
    phi_b: float


@dataclass(frozen=True)
class CoincidenceTable:
    """Joint detection probabilities renormalized to the one-per-side subspace.

    ``probs[i][j]`` is P(D_A(i+1), D_B(j+1)).
    """

    p_select: float
    probs: tuple[tuple[float, float], tuple[float, float]]

    @property
    def p_a1b1(self) -> float:
        return self.probs[0][0]

    @property
    def p_a1b2(self) -> float:
        return self.probs[0][1]

    @property
    def p_a2b1(self) -> float:
        return self.probs[1][0]

    @property
    def p_a2b2(self) -> float:
        return self.probs[1][1]

    @property
    def correlation(self) -> float:
        # anti-diagonal (A1B2, A2B1) are the bunched outcomes at zero phase
        return self.p_a1b2 + self.p_a2b1 - self.p_a1b1 - self.p_a2b2

    def cells(self) -> list[float]:
        """Probabilities in the documented cell order A1B1, A1B2, A2B1, A2B2."""
        return [self.p_a1b1, self.p_a1b2, self.p_a2b1, self.p_a2b2]

    def as_array(self) -> np.ndarray:
        return np.array(self.probs, dtype=float)


def table_from_state(post: FockState, p_select: float) -> CoincidenceTable:
    """Read the 2x2 table off a state already post-selected one-per-side."""
    if post.mode_count != 4 or post.photon_number != 2:
        raise DomainError("coincidence tables need a two-photon four-mode state")
    probs = []
    for a in SIDE_A:
        row = []
        for b in SIDE_B:
            pattern = [0, 0, 0, 0]
            pattern[a] = pattern[b] = 1
            row.append(abs(post[pattern]) ** 2)
        probs.append(tuple(row))
    return CoincidenceTable(float(p_select), tuple(probs))


def run_coincidences(
    circuit: Circuit, photons: Sequence[int] = NONLOCAL_INPUT, eps: float = DEFAULT_EPS
) -> tuple[CoincidenceTable, FockState]:
    """Evolve ``photons`` through a four-mode circuit and post-select one per side."""
    if circuit.mode_count != 4:
        raise DomainError(f"coincidence analysis needs 4 modes, circuit has {circuit.mode_count}")
    out = evolve(state_from_photons(4, photons), compile_circuit(circuit))
    post, p = postselect(out, ONE_PER_SIDE, eps)
    return table_from_state(post, p), post


def coincidences(phi_a: float, phi_b: float, eps: float = DEFAULT_EPS) -> CoincidenceTable:
    table, _ = run_coincidences(build_nonlocal_hom(phi_a, phi_b), NONLOCAL_INPUT, eps)
    return table


def coincidences_closed_form(phi_a: float, phi_b: float) -> CoincidenceTable:
    c = math.cos(phi_a + phi_b)
    lo, hi = 0.25 * (1 - c), 0.25 * (1 + c)
    return CoincidenceTable(0.5, ((lo, hi), (hi, lo)))


def _single_photon(amplitudes: Sequence[complex]) -> FockState:
    m = len(amplitudes)
    return FockState(m, 1, {tuple(int(k == j) for k in range(m)): a for j, a in enumerate(amplitudes)})


def mode_overlap(phi_a: float, phi_b: float) -> tuple[float, float]:
    """Squared single-photon overlaps of the inner and outer non-local modes.

    The inner modes are the (A2, B1) components of the images of input modes
    A1 and B2; the outer modes are their (A1, B2) components.
    """
    u = compile_circuit(build_nonlocal_hom(phi_a, phi_b))
    col_a, col_b = u[:, A1], u[:, B2]
    out = []
    for modes in ((A2, B1), (A1, B2)):
        sa = _single_photon([col_a[k] for k in modes])
        sb = _single_photon([col_b[k] for k in modes])
        sa = sa.scaled(1 / sa.norm)
        sb = sb.scaled(1 / sb.norm)
        out.append(abs(inner_product(sa, sb)) ** 2)
    return out[0], out[1]


def correlation(phi_a: float, phi_b: float) -> float:
    return coincidences(phi_a, phi_b).correlation


def chsh(a: float, a_prime: float, b: float, b_prime: float) -> float:
    return (
        correlation(a, b) + correlation(a, b_prime)
        + correlation(a_prime, b) - correlation(a_prime, b_prime)
    )


def _hermitian2_eigenvalues(rho: np.ndarray) -> tuple[float, float]:
    a, d = rho[0, 0].real, rho[1, 1].real
    off = abs(rho[0, 1])
    mean = 0.5 * (a + d)
    rad = math.sqrt(0.25 * (a - d) ** 2 + off * off)
    return mean + rad, mean - rad


def entanglement_entropy(
    s: FockState,
    side_a: Sequence[int] = SIDE_A,
    side_b: Sequence[int] = SIDE_B,
    eps: float = DEFAULT_EPS,
) -> float:
    """Von Neumann entropy (bits) of side A for one photon on each side."""
    side_a, side_b = tuple(side_a), tuple(side_b)
    if sorted(side_a + side_b) != list(range(s.mode_count)):
        raise DomainError("bipartition must cover every mode exactly once")
    if not s.is_normalized(eps):
        raise DomainError(f"state is not normalized (|s|^2 = {s.norm_squared!r})")
    coeff = np.zeros((len(side_a), len(side_b)), dtype=complex)
    for pattern, amp in s.amplitudes.items():
        na = [pattern[k] for k in side_a]
        nb = [pattern[k] for k in side_b]
        if sum(na) != 1 or sum(nb) != 1:
            if abs(amp) <= eps:
                continue
            raise DomainError(f"pattern {pattern} is outside the one-photon-per-side subspace")
        coeff[na.index(1), nb.index(1)] = amp
    rho = coeff @ coeff.conj().T
    if rho.shape == (2, 2):
        eigs = _hermitian2_eigenvalues(rho)
    else:
        eigs = tuple(np.linalg.eigvalsh(rho))
    total = 0.0
    for lam in eigs:
        lam = min(max(lam, 0.0), 1.0)
        if lam > 0.0:
            total -= lam * math.log2(lam)
    return total


def _detector_mode(detector: str | int) -> int:
    if isinstance(detector, str):
        key = detector.upper().removeprefix("D_").removeprefix("D")
        if key not in ("A1", "A2"):
            raise DomainError(f"steering detector must be D_A1 or D_A2, got {detector!r}")
        return DETECTORS[key]
    if detector not in (A1, A2):
        raise DomainError(f"steering detector must be mode 0 or 1, got {detector!r}")
    return detector


def a_side_circuit(phi_a: float) -> Circuit:
    """Input stage, swap, the A-side phase and the A-side output splitter only."""
    return Circuit(4, (
        *crossed_beam_splitter(A1, A2),
        *crossed_beam_splitter(B1, B2),
        Swap(A2, B1),
        PhaseShift(A1, phi_a),
        *crossed_beam_splitter(A1, A2),
    ))


def steering_state(phi_a: float, detector: str | int = "A1", eps: float = DEFAULT_EPS) -> np.ndarray:
    """Conditional single-photon state of B after A fires ``detector``.

    Returned as normalized amplitudes over B's pre-output modes
    ``(U_B, S_B)`` = (unswapped B2, swapped-in B1).
    """
    det = _detector_mode(detector)
    out = evolve(state_from_photons(4, NONLOCAL_INPUT), compile_circuit(a_side_circuit(phi_a)))
    amp = np.zeros(2, dtype=complex)
    for slot, b_mode in enumerate((B2, B1)):
        pattern = [0, 0, 0, 0]
        pattern[det] = pattern[b_mode] = 1
        amp[slot] = out[pattern]
    norm = float(np.linalg.norm(amp))
    if norm <= eps:
        raise PostSelectionEmpty(f"detector {detector} never fires at phi_a={phi_a}")
    return amp / norm


def steering_closed_form(phi_a: float, detector: str | int = "A1") -> np.ndarray:
    """(e^{i phi_a}, +i)/sqrt(2) for D_A1 and (e^{i phi_a}, -i)/sqrt(2) for D_A2."""
    det = _detector_mode(detector)
    sign = 1.0 if det == A1 else -1.0
    return np.array([complex(math.cos(phi_a), math.sin(phi_a)), sign * 1j]) / math.sqrt(2)


def canonical_phase(v: Sequence[complex], eps: float = DEFAULT_EPS) -> np.ndarray:
    """Rotate ``v`` so its first largest-magnitude entry is real and positive."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    if mags.size == 0 or mags.max() == 0:
        return v.copy()
    idx = int(np.argmax(mags >= mags.max() - eps))
    return v * (abs(v[idx]) / v[idx])


def equal_up_to_phase(a: Sequence[complex], b: Sequence[complex], eps: float = DEFAULT_EPS) -> bool:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    mags = np.abs(a)
    if mags.size == 0:
        return True
    idx = int(np.argmax(mags))
    if mags[idx] == 0:
        return bool(np.max(np.abs(b)) <= eps)
    if abs(b[idx]) == 0:
        return False
    # align b's phase to a on the same reference entry
    phase = (a[idx] / abs(a[idx])) / (b[idx] / abs(b[idx]))
    return bool(np.max(np.abs(a - b * phase)) <= eps)


def sample_counts(probs: Sequence[float], shots: int, seed: int) -> np.ndarray:
    """Multinomial draw by inverse CDF over the given cell order.

    Uniforms come from numpy's PCG64 bit generator seeded with ``seed``
    (``numpy.random.Generator(numpy.random.PCG64(seed)).random(shots)``).
    Cells with zero probability never receive counts.
    """
    if shots < 0:
        raise DomainError(f"shots must be >= 0, got {shots}")
    p = np.clip(np.asarray(probs, dtype=float), 0.0, None)
    counts = np.zeros(p.size, dtype=np.int64)
    if shots == 0:
        return counts
    total = p.sum()
    if total <= 0:
        raise DomainError("cannot sample from an all-zero distribution")
    cdf = np.cumsum(p / total)
    last = int(np.flatnonzero(p > 0)[-1])
    cdf[last:] = 1.0
    u = np.random.Generator(np.random.PCG64(seed)).random(shots)
    idx = np.searchsorted(cdf, u, side="right")
    return np.bincount(idx, minlength=p.size).astype(np.int64)


def sample_shots(table: CoincidenceTable, shots: int, seed: int) -> np.ndarray:
    """2x2 detection counts (rows D_A1, D_A2; columns D_B1, D_B2)."""
    return sample_counts(table.cells(), shots, seed).reshape(2, 2)


def correlation_from_counts(counts: np.ndarray) -> float:
    counts = np.asarray(counts)
    n = counts.sum()
    if n == 0:
        raise DomainError("no shots to estimate a correlation from")
    return float((counts[0, 1] + counts[1, 0] - counts[0, 0] - counts[1, 1]) / n)


def empirical_chsh(
    a: float, a_prime: float, b: float, b_prime: float, shots: int, seed: int
) -> tuple[float, list[float]]:
    """CHSH value estimated from ``shots`` samples per setting pair.

    Setting pair k (in the order ab, ab', a'b, a'b') is sampled with seed ``seed + k``.
    """
    pairs = [(a, b), (a, b_prime), (a_prime, b), (a_prime, b_prime)]
    es = [
        correlation_from_counts(sample_shots(coincidences(x, y), shots, seed + k))
        for k, (x, y) in enumerate(pairs)
    ]
    return es[0] + es[1] + es[2] - es[3], es
