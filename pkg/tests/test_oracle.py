import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fockforge.circuit import BeamSplitter, build_nonlocal_hom, compile_circuit, element_unitary, random_unitary
from fockforge.errors import DomainError
from fockforge.fock import FockState, enumerate_basis
from fockforge.lift import evolve
from fockforge.oracle import OperatorPolynomial, from_fock_state, oracle_evolve, substitute, to_fock_state

H = 1 / math.sqrt(2)


def test_single_creation_operator():
    p = substitute(OperatorPolynomial.monomial(2, [0]), element_unitary(BeamSplitter(0, 1), 2))
    assert p.terms[(0,)] == pytest.approx(H)
    assert p.terms[(1,)] == pytest.approx(1j * H)


def test_nonlocal_polynomial():
    p = substitute(OperatorPolynomial.monomial(4, [0, 3]), compile_circuit(build_nonlocal_hom(0.0, 0.0)))
    expected = {
        (0, 0): -0.25, (1, 1): -0.25, (2, 2): -0.25, (3, 3): -0.25,
        (1, 2): -0.5, (0, 3): 0.5,
    }
    assert set(p.terms) == set(expected)
    for k, v in expected.items():
        assert p.terms[k] == pytest.approx(v, abs=1e-15)


def test_identity_unchanged():
    p = OperatorPolynomial(3, {(0, 1): 2.0, (2, 2): -1j})
    assert substitute(p, np.eye(3)) == p


def test_vacuum_normalisation():
    s = to_fock_state(OperatorPolynomial.monomial(3, [0, 0]))
    assert s[(2, 0, 0)] == pytest.approx(math.sqrt(2))
    s = to_fock_state(OperatorPolynomial.monomial(4, [0, 3]))
    assert s.amplitudes == {(1, 0, 0, 1): 1}
    empty = to_fock_state(OperatorPolynomial(2, {}), photon_number=1)
    assert empty.amplitudes == {} and empty.photon_number == 1


def test_inhomogeneous_rejected():
    with pytest.raises(DomainError):
        to_fock_state(OperatorPolynomial(2, {(0,): 1, (0, 1): 1}))


def test_round_trip(rng):
    basis = enumerate_basis(3, 3)
    s = FockState(3, 3, dict(zip(basis, rng.normal(size=len(basis)))))
    assert to_fock_state(from_fock_state(s)).allclose(s, 1e-14)


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    m=st.integers(1, 4),
    n=st.integers(0, 3),
)
def test_lift_matches_oracle(seed, m, n):
    rng = np.random.default_rng(seed)
    u = random_unitary(m, rng)
    for p in enumerate_basis(m, n):
        s = FockState(m, n, {p: 1})
        a, b = evolve(s, u), oracle_evolve(s, u)
        for q in enumerate_basis(m, n):
            assert abs(a[q] - b[q]) <= 1e-9
