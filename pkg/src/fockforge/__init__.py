"""Linear-optics multiphoton interference: Fock-space evolution, post-selection,
and the correlation statistics of the non-local Hong-Ou-Mandel interferometer."""

from .analysis import (
    ACCEPT_ALL,
    ONE_PER_SIDE,
    CoincidenceTable,
    PhaseSettings,
    PostSelectionRule,
    chsh,
    coincidences,
    correlation,
    entanglement_entropy,
    mode_overlap,
    postselect,
    sample_shots,
    steering_state,
)
from .circuit import (
    BeamSplitter,
    Circuit,
    PhaseShift,
    PhaseVar,
    Swap,
    build_classic_hom,
    build_nonlocal_hom,
    compile_circuit,
    element_unitary,
)
from .dsl import ExperimentSpec, FkfSyntaxError, ParseError, parse, render
from .errors import DomainError, FockforgeError, NotNormalizable, PostSelectionEmpty
from .fock import FockState, enumerate_basis, inner_product, normalize, state_from_photons
from .lift import evolve, fock_amplitude
from .permanent import permanent_fast, permanent_naive

__version__ = "0.1.0"
