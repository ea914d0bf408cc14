"""Execute an :class:`ExperimentSpec` over its sweep grid and tabulate results.

Two output schemas exist.  Two photons in four modes post-selected one per
side produce the coincidence schema::

    phi_a,phi_b,p_select,p_a1b1,p_a1b2,p_a2b1,p_a2b2,E

where ``phi_a`` (``phi_b``) is the total phase applied on side A (B) modes.
Everything else produces the distribution schema: one column per swept
variable, ``p_select``, then ``p_<pattern>`` for each accepted pattern in basis
order (``p_2_0`` is two photons in mode 0).  With shots, sampled counts follow
as ``n_...`` columns; row ``k`` is sampled with seed ``seed + k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .analysis import (
    ACCEPT_ALL, ONE_PER_SIDE, sample_counts, table_from_state, postselect,
)
from .circuit import SIDE_A, SIDE_B, Circuit, PhaseShift, compile_circuit
from .dsl import ExperimentSpec, SweepAxis
from .errors import DomainError
from .fock import DEFAULT_EPS, enumerate_basis, state_from_photons
from .lift import evolve
from .serialize import csv_lines, dumps

COINCIDENCE_HEADER = ["phi_a", "phi_b", "p_select", "p_a1b1", "p_a1b2", "p_a2b1", "p_a2b2", "E"]
COINCIDENCE_COUNTS = ["n_a1b1", "n_a1b2", "n_a2b1", "n_a2b2"]
DEFAULT_SEED = 20240101


@dataclass
class ResultTable:
    header: list[str]
    rows: list[list[Any]]
    coincidence: bool = False
    swept: bool = False
    meta: dict[str, Any] = field(default_factory=dict)

    def to_csv(self) -> str:
        return "\n".join(csv_lines(self.header, self.rows)) + "\n"

    def records(self) -> list[dict[str, Any]]:
        out = []
        for row in self.rows:
            rec = dict(zip(self.header, row))
            if self.coincidence:
                rec["probs"] = [[rec["p_a1b1"], rec["p_a1b2"]], [rec["p_a2b1"], rec["p_a2b2"]]]
            out.append(rec)
        return out

    def to_json(self) -> str:
        recs = self.records()
        body = recs if self.swept or len(recs) != 1 else recs[0]
        return dumps(body) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise DomainError(f"unknown output format {fmt!r}")


def apply_overrides(
    spec: ExperimentSpec, overrides: Mapping[str, float | SweepAxis]
) -> tuple[Circuit, tuple[SweepAxis, ...]]:
    """Bind fixed values and replace sweep ranges for the named variables."""
    free = spec.circuit.variables()
    for name in overrides:
        if name not in free:
            raise DomainError(f"experiment has no phase variable '{name}' (has: {', '.join(free) or 'none'})")
    fixed = {k: float(v) for k, v in overrides.items() if not isinstance(v, SweepAxis)}
    axes = []
    for axis in spec.sweep:
        if axis.var in fixed:
            continue
        v = overrides.get(axis.var, axis)
        axes.append(v if isinstance(v, SweepAxis) else axis)
    return spec.circuit.bind(fixed), tuple(axes)


def _grid(axes: tuple[SweepAxis, ...]) -> list[dict[str, float]]:
    points: list[dict[str, float]] = [{}]
    for axis in axes:
        points = [{**p, axis.var: v} for p in points for v in axis.values()]
    return points


def side_phase(circuit: Circuit, side: tuple[int, ...]) -> float:
    return sum(float(e.phi) for e in circuit.elements if isinstance(e, PhaseShift) and e.mode in side)


def _pattern_label(pattern: tuple[int, ...]) -> str:
    return "_".join(str(c) for c in pattern)


def run_experiment(
    spec: ExperimentSpec,
    overrides: Mapping[str, float | SweepAxis] | None = None,
    shots: int | None = None,
    seed: int | None = None,
    eps: float = DEFAULT_EPS,
) -> ResultTable:
    circuit, axes = apply_overrides(spec, overrides or {})
    if shots is not None and shots < 0:
        raise DomainError(f"shots must be >= 0, got {shots}")
    if seed is None:
        seed = DEFAULT_SEED
    m = circuit.mode_count
    n = len(spec.input_photons)
    rule = ONE_PER_SIDE if spec.postselect == "one-per-side" else ACCEPT_ALL
    coincidence = spec.postselect == "one-per-side" and m == 4 and n == 2
    var_names = [a.var for a in axes]
    accepted = [q for q in enumerate_basis(m, n) if rule(q)]

    if coincidence:
        header = list(COINCIDENCE_HEADER)
        if shots is not None:
            header += COINCIDENCE_COUNTS
    else:
        header = var_names + ["p_select"] + ["p_" + _pattern_label(q) for q in accepted]
        if shots is not None:
            header += ["n_" + _pattern_label(q) for q in accepted]

    initial = state_from_photons(m, spec.input_photons)
    rows = []
    for k, point in enumerate(_grid(axes)):
        bound = circuit.bind(point)
        out = evolve(initial, compile_circuit(bound))
        post, p = postselect(out, rule, eps)
        if coincidence:
            table = table_from_state(post, p)
            row: list[Any] = [side_phase(bound, SIDE_A), side_phase(bound, SIDE_B), table.p_select,
                              *table.cells(), table.correlation]
            probs = table.cells()
        else:
            probs = [abs(post[q]) ** 2 for q in accepted]
            row = [point[v] for v in var_names] + [p] + probs
        if shots is not None:
            row += [int(c) for c in sample_counts(probs, shots, seed + k)]
        rows.append(row)

    meta = {"shots": shots, "seed": seed if shots is not None else None}
    return ResultTable(header, rows, coincidence=coincidence, swept=bool(axes), meta=meta)
