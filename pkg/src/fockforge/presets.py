"""Built-in experiments.

The texts below are verbatim copies of ``presets/*.fkf`` in the repository, so
the CLI works without any data files installed.
"""

from __future__ import annotations

import math

from .circuit import PhaseVar, build_classic_hom, build_nonlocal_hom
from .dsl import ExperimentSpec, SweepAxis, parse
from .errors import DomainError

CLASSIC_HOM_FKF = """\
# Two photons meeting at one balanced beam splitter.
modes 2
input 0 1
bs 0 1
postselect none
"""

NONLOCAL_HOM_FKF = """\
# Non-local Hong-Ou-Mandel interferometer; modes are (A1, A2, B1, B2).
# Each local splitter is "bs" followed by "swap" on the same pair, i.e. the
# matrix [[i, 1], [1, i]]/sqrt(2): a photon entering A1 leaves as (i A1 + A2)/sqrt(2).
modes 4
input 0 3
bs 0 1
swap 0 1
bs 2 3
swap 2 3
swap 1 2
phase 0 $phiA
phase 3 $phiB
bs 0 1
swap 0 1
bs 2 3
swap 2 3
postselect one-per-side
sweep phiA 0 2pi 16
sweep phiB 0 2pi 16
"""

PRESETS = {
    "classic-hom": CLASSIC_HOM_FKF,
    "nonlocal-hom": NONLOCAL_HOM_FKF,
}


def preset_text(name: str) -> str:
    try:
        return PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r} (choose from {', '.join(PRESETS)})") from None


def load_preset(name: str) -> ExperimentSpec:
    return parse(preset_text(name), source_name=f"<preset {name}>")


def nonlocal_hom_experiment(steps_a: int = 16, steps_b: int = 16) -> ExperimentSpec:
    """The non-local HOM experiment assembled from the circuit builder."""
    circuit = build_nonlocal_hom(PhaseVar("phiA"), PhaseVar("phiB"))
    sweep = (
        SweepAxis("phiA", 0.0, 2 * math.pi, steps_a),
        SweepAxis("phiB", 0.0, 2 * math.pi, steps_b),
    )
    return ExperimentSpec(circuit, (0, 3), "one-per-side", sweep)


def classic_hom_experiment() -> ExperimentSpec:
    return ExperimentSpec(build_classic_hom(), (0, 1), "none", ())
