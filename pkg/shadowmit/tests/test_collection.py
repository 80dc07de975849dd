# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

from pytest import mark
from hypothesis import given, settings, strategies as st
import numpy as np
from numpy.testing import assert_allclose
from shadowmit import collection
from shadowmit.collection import sigx, sigy, sigz
from shadowmit.matrix import equal_up_to_phase, is_hermitian, is_unitary

angles = st.floats(-2 * np.pi, 2 * np.pi, allow_nan=False)


def test_kron():
    assert_allclose(collection.kron([1, 0], [0, 1]), [0, 1, 0, 0])
    assert_allclose(collection.kron([[1, 0], [0, 1]]), [0, 1, 0, 0])
    assert collection.kron(sigx, sigy, sigz).shape == (8, 8)


@given(angles)
def test_rotations_unitary(angle):
    for u in (collection.rx(angle), collection.ry(angle), collection.rz(angle)):
        assert is_unitary(u)


@mark.parametrize(
    "axis, op",
    [([1, 0, 0], sigx), ([0, 1, 0], sigy), ([0, 0, 1], sigz)],
)
def test_rotation_by_pi(axis, op):
    assert equal_up_to_phase(collection.rotation(axis, np.pi), op)


def test_bloch_roundtrip():
    vec = np.array([0.3, -0.4, 0.5])
    op = collection.bloch_operator(vec)
    assert_allclose(collection.bloch_vector(op), vec, atol=1e-12)
    assert_allclose(collection.bloch_vector(sigz), [0, 0, 2])


@settings(deadline=None, max_examples=20)
@given(st.integers(1, 3), st.integers(0, 2**31))
def test_random_density_matrix(num_qubits, seed):
    rho = collection.random_density_matrix(num_qubits, seed)
    assert is_hermitian(rho)
    assert_allclose(np.trace(rho), 1.0)
    assert np.min(np.linalg.eigvalsh(rho)) > -1e-12


def test_random_density_matrix_rank():
    rho = collection.random_density_matrix(2, 1, rank=1)
    assert_allclose(rho @ rho, rho, atol=1e-10)


def test_haar_unitary():
    u = collection.haar_unitary(4, rng=5)
    assert is_unitary(u)
    psi = collection.random_state_vector(8, rng=5)
    assert_allclose(np.linalg.norm(psi), 1.0)


def test_swap_operator():
    swap = collection.swap_operator(2)
    a = np.array([1.0, 2.0])
    b = np.array([3.0, -1.0])
    assert_allclose(swap @ np.kron(a, b), np.kron(b, a))
    assert_allclose(swap @ swap, np.eye(4))


def test_tevo_state():
    ham = np.array([[0.0, 1.0], [1.0, 0.0]])
    psi0 = np.array([1.0, 0.0])
    times = np.linspace(0, 3, 7)
    states = collection.tevo_state(ham, psi0, times)
    assert states.shape == (7, 2)
    assert_allclose(np.abs(states[:, 0]) ** 2, np.cos(times) ** 2, atol=1e-12)
    assert_allclose(collection.tevo_state(ham, psi0, 0.0), psi0, atol=1e-12)


def test_matrix_helpers():
    u = collection.rx(0.3)
    assert equal_up_to_phase(np.exp(0.7j) * u, u)
    assert not equal_up_to_phase(u, collection.ry(0.3))
    assert is_hermitian(sigy)
    assert not is_hermitian(1j * sigy)
