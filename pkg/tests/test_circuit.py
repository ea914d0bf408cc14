import cmath
import math

import numpy as np
import pytest

from fockforge.circuit import (
    A1, B2, BeamSplitter, Circuit, PhaseShift, PhaseVar, Swap, build_classic_hom,
    build_nonlocal_hom, compile_circuit, element_unitary, is_unitary, nonlocal_hom_columns,
    random_unitary, unitarity_error,
)
from fockforge.errors import DomainError
from fockforge.fock import basis_state
from fockforge.lift import evolve

H = 1 / math.sqrt(2)


def test_beam_splitter_single_photon():
    out = evolve(basis_state((1, 0)), element_unitary(BeamSplitter(0, 1), 2))
    assert out[(1, 0)] == pytest.approx(H, abs=1e-15)
    assert out[(0, 1)] == pytest.approx(1j * H, abs=1e-15)
    out = evolve(basis_state((0, 1)), element_unitary(BeamSplitter(0, 1), 2))
    assert out[(1, 0)] == pytest.approx(1j * H, abs=1e-15)
    assert out[(0, 1)] == pytest.approx(H, abs=1e-15)


def test_trivial_elements():
    assert np.array_equal(element_unitary(PhaseShift(0, 0.0), 3), np.eye(3))
    s = element_unitary(Swap(1, 2), 4)
    assert np.array_equal(s @ s, np.eye(4))
    assert np.array_equal(compile_circuit(Circuit(3, ())), np.eye(3))


def test_composition_order():
    bs = element_unitary(BeamSplitter(0, 1), 2)
    ph = element_unitary(PhaseShift(0, 0.3), 2)
    assert np.allclose(compile_circuit(Circuit(2, (BeamSplitter(0, 1),) * 2)), bs @ bs, atol=1e-15)
    # later elements multiply on the left
    assert np.allclose(compile_circuit(Circuit(2, (BeamSplitter(0, 1), PhaseShift(0, 0.3)))), ph @ bs)


def test_element_validation():
    with pytest.raises(DomainError):
        Circuit(4, (BeamSplitter(0, 9),))
    with pytest.raises(DomainError):
        Circuit(4, (Swap(2, 2),))
    with pytest.raises(DomainError):
        Circuit(2, (PhaseShift(0, float("nan")),))
    with pytest.raises(DomainError):
        compile_circuit(Circuit(2, (PhaseShift(0, PhaseVar("t")),)))


def test_classic_hom_unitary():
    u = compile_circuit(build_classic_hom())
    assert np.allclose(u, H * np.array([[1, 1j], [1j, 1]]), atol=1e-15)
    assert is_unitary(u)


def test_nonlocal_columns_at_zero():
    u = compile_circuit(build_nonlocal_hom(0.0, 0.0))
    assert np.allclose(u[:, A1], [-0.5, 0.5j, 0.5j, 0.5], atol=1e-15)
    assert np.allclose(u[:, B2], [0.5, 0.5j, 0.5j, -0.5], atol=1e-15)


def test_nonlocal_columns_quarter_turn():
    u = compile_circuit(build_nonlocal_hom(math.pi / 2, math.pi / 2))
    e = cmath.exp(1j * math.pi / 2)
    assert np.allclose(u[:, A1], [-e / 2, 1j * e / 2, 0.5j, 0.5], atol=1e-15)


@pytest.mark.parametrize("pa,pb", [(0.3, -1.1), (2.0, 0.5), (-math.pi, math.pi / 3)])
def test_nonlocal_columns_closed_form(pa, pb):
    u = compile_circuit(build_nonlocal_hom(pa, pb))
    a1 = np.array([-cmath.exp(1j * pa), 1j * cmath.exp(1j * pa), 1j, 1]) / 2
    b2 = np.array([1, 1j, 1j * cmath.exp(1j * pb), -cmath.exp(1j * pb)]) / 2
    assert np.allclose(u[:, A1], a1, atol=1e-14)
    assert np.allclose(u[:, B2], b2, atol=1e-14)
    ca, cb = nonlocal_hom_columns(pa, pb)
    assert np.allclose(ca, a1, atol=1e-15) and np.allclose(cb, b2, atol=1e-15)


def test_bind_variables():
    c = build_nonlocal_hom(PhaseVar("phiA"), PhaseVar("phiB"))
    assert c.variables() == ["phiA", "phiB"]
    bound = c.bind({"phiA": 0.4, "phiB": 0.1})
    assert np.allclose(compile_circuit(bound), compile_circuit(build_nonlocal_hom(0.4, 0.1)))
    # names that do not occur are ignored, unbound names stay free
    assert c.bind({"phiA": 0.4, "other": 1.0}).variables() == ["phiB"]


def test_random_unitary(rng):
    for m in (1, 2, 5, 8):
        u = random_unitary(m, rng)
        assert unitarity_error(u) < 1e-12
