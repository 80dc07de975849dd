# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

import itertools
import pytest
from pytest import mark
from hypothesis import given, settings, strategies as st
import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
from shadowmit import channels
from shadowmit.channels import ClassicalChannel, Mask, QuantumChannel
from shadowmit.collection import random_density_matrix, sigz
from shadowmit.pauli import DensityMatrix, PauliString

probabilities = st.floats(0.0, 1.0, allow_nan=False)


@mark.parametrize(
    "bits, label, indices",
    [("1", "1", (0,)), ("010", "010", (1,)), ([True, False, True], "101", (0, 2))],
)
def test_mask(bits, label, indices):
    mask = Mask(bits)
    assert mask.label == label
    assert mask.indices == indices
    assert mask.weight() == len(indices)
    assert Mask.from_indices(mask.num_qubits, indices) == mask


def test_mask_from_pauli():
    assert Mask.from_pauli(PauliString("XIY")) == Mask("101")
    assert Mask.from_pauli(PauliString("II")).is_identity()
    assert Mask("011").z_string() == PauliString("IZZ")
    with pytest.raises(ValueError):
        Mask("012")


def test_mask_operator():
    assert_array_equal(channels.mask_signs(Mask("11")), [1, -1, -1, 1])
    assert_array_equal(channels.mask_signs(Mask("10")), [1, 1, -1, -1])
    assert_allclose(channels.mask_operator(Mask("1")), sigz)


def test_kraus_validation():
    with pytest.raises(ValueError):
        QuantumChannel([0.5 * np.eye(2)])
    with pytest.raises(ValueError):
        QuantumChannel([np.eye(3)])


@given(probabilities)
def test_bit_flip(p):
    ch = channels.bit_flip(p)
    rho = DensityMatrix.zeros(1)
    out = channels.apply(ch, rho)
    assert_allclose(np.diag(out.entries).real, [1 - p, p], atol=1e-12)


def test_invalid_probability():
    with pytest.raises(ValueError):
        channels.bit_flip(1.5)
    with pytest.raises(ValueError):
        channels.depolarizing(-0.1)


@settings(deadline=None, max_examples=20)
@given(st.integers(1, 2), st.integers(1, 4), st.integers(0, 2**31))
def test_random_channel_trace_preserving(num_qubits, rank, seed):
    ch = channels.random_channel(num_qubits, rank, np.random.default_rng(seed))
    assert ch.rank == rank
    rho = random_density_matrix(num_qubits, seed)
    assert_allclose(np.trace(ch(rho)), 1.0, atol=1e-10)


def test_compose_and_tensor():
    a = channels.bit_flip(0.1)
    b = channels.phase_flip(0.2)
    rho = random_density_matrix(1, 4)
    assert_allclose(a.compose(b)(rho), a(b(rho)), atol=1e-12)
    ab = channels.tensor_channels(a, b)
    assert ab.num_qubits == 2
    sigma_a = random_density_matrix(1, 6)
    sigma_b = random_density_matrix(1, 7)
    out = ab(np.kron(sigma_a, sigma_b))
    assert_allclose(out, np.kron(a(sigma_a), b(sigma_b)), atol=1e-12)


def test_classical_channel():
    t = np.array([[0.9, 0.2], [0.1, 0.8]])
    ch = ClassicalChannel(t)
    rho = random_density_matrix(1, 11)
    out = ch(rho)
    assert_allclose(np.diag(out).real, t @ np.diag(rho).real)
    assert_allclose(out - np.diag(np.diag(out)), 0.0)
    dense = QuantumChannel(ch.kraus)
    assert_allclose(dense(rho), out, atol=1e-12)
    with pytest.raises(ValueError):
        ClassicalChannel([[0.9, 0.2], [0.2, 0.8]])


def test_populations():
    ch = channels.amplitude_damping(0.3)
    vecs = np.array([[[0.0, 1.0]], [[1.0, 0.0]]], dtype=np.complex128)
    probs = ch.populations(vecs, np.array([1.0]))
    assert_allclose(probs, [[0.3, 0.7], [1.0, 0.0]])
    classical = ClassicalChannel([[0.9, 0.2], [0.1, 0.8]])
    pops = classical.populations(vecs, np.array([1.0]))
    assert_allclose(pops, [[0.2, 0.8], [0.9, 0.1]])


def test_ptm_of_pauli_channel():
    diag = [1.0, 0.9, 0.8, 0.7]
    ch = channels.pauli_channel_from_ptm(diag)
    assert_allclose(np.diag(channels.ptm(ch)), diag, atol=1e-12)
    assert_allclose(channels.ptm(ch) - np.diag(diag), 0.0, atol=1e-12)


def test_ptm_depolarizing():
    p = 0.2
    ptm = channels.ptm(channels.depolarizing(p, 2))
    assert_allclose(np.diag(ptm), [1.0] + [1 - p] * 15, atol=1e-12)


@given(probabilities, probabilities)
def test_suppression_bit_flips(p0, p1):
    ch = channels.tensor_channels(channels.bit_flip(p0), channels.bit_flip(p1))
    assert channels.suppression_factor(ch, Mask("10")) == pytest.approx(1 - 2 * p0)
    assert channels.suppression_factor(ch, Mask("01")) == pytest.approx(1 - 2 * p1)
    expected = (1 - 2 * p0) * (1 - 2 * p1)
    value = channels.suppression_factor(ch, Mask("11"))
    assert value == pytest.approx(expected, abs=1e-12)
    single = [channels.bit_flip(p0), channels.bit_flip(p1)]
    value = channels.product_suppression(single, Mask("11"))
    assert value == pytest.approx(expected, abs=1e-12)


def test_suppression_identity_mask():
    ch = channels.random_channel(2, 3, np.random.default_rng(1))
    assert channels.suppression_factor(ch, Mask("00")) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        channels.twirled_suppression(ch, Mask("00"))


def test_suppression_classical_fast_path():
    t = np.array([[0.9, 0.2], [0.1, 0.8]])
    classical = ClassicalChannel(t)
    dense = QuantumChannel(classical.kraus)
    mask = Mask("1")
    assert channels.suppression_factor(classical, mask) == pytest.approx(0.7)
    assert channels.suppression_factor(dense, mask) == pytest.approx(0.7)


def test_twirled_suppression_brute_force():
    ch = channels.random_channel(1, 2, np.random.default_rng(3))
    twirled = channels.twirl(ch)
    mask = Mask("1")
    expected = channels.twirled_suppression(ch, mask)
    value = channels.suppression_factor(twirled, mask)
    assert value == pytest.approx(expected, abs=1e-10)
    # The twirl of any channel is depolarizing
    ptm = channels.ptm(twirled)
    assert_allclose(ptm[1, 1], ptm[2, 2], atol=1e-10)
    assert_allclose(ptm[2, 2], ptm[3, 3], atol=1e-10)


def test_twirl_differs_from_readout():
    ch = ClassicalChannel([[0.9, 0.02], [0.1, 0.98]])
    mask = Mask("1")
    readout = channels.suppression_factor(ch, mask)
    twirled = channels.twirled_suppression(ch, mask)
    assert readout == pytest.approx(0.88)
    assert twirled == pytest.approx(0.88 / 3)
    assert abs(readout - twirled) > 1e-2


@mark.parametrize("p", [0.0, 0.1, 0.5])
def test_twirl_equal_for_depolarizing(p):
    ch = channels.depolarizing(p)
    mask = Mask("1")
    readout = channels.suppression_factor(ch, mask)
    assert channels.twirled_suppression(ch, mask) == pytest.approx(readout, abs=1e-12)


def test_twirled_suppression_two_qubits():
    ch = channels.depolarizing(0.3, 2)
    for bits in itertools.product([False, True], repeat=2):
        mask = Mask(bits)
        if mask.is_identity():
            continue
        assert channels.twirled_suppression(ch, mask) == pytest.approx(0.7)


def test_as_channel():
    ch = channels.bit_flip(0.1)
    assert channels.as_channel(ch, 1) is ch
    with pytest.raises(ValueError):
        channels.as_channel(ch, 2)
