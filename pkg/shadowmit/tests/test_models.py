# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

import pytest
from pytest import mark
from hypothesis import given, strategies as st
import numpy as np
from numpy.testing import assert_allclose
from shadowmit import channels
from shadowmit.channels import ClassicalChannel, Mask
from shadowmit.models import (
    AsymmetricCorrelatedFlip,
    ChannelReadout,
    CoherentRotation,
    ConfusionReadout,
    CorrelatedFlip,
    NoReadoutError,
    TensorFlip,
    readout_model,
)
from shadowmit.models.flip import asymmetric_transition, per_qubit

probabilities = st.floats(0.0, 0.5, allow_nan=False)


def _column_stochastic(t):
    assert np.all(t >= -1e-12)
    assert_allclose(t.sum(axis=0), 1.0, atol=1e-12)


def test_readout_model_from_spec():
    assert isinstance(readout_model(None), NoReadoutError)
    model = readout_model({"type": "tensor_flip", "p": [0.02, 0.05]})
    assert isinstance(model, TensorFlip)
    assert model.p == [0.02, 0.05]
    assert readout_model(model) is model
    assert readout_model(model.spec()) == model


@mark.parametrize(
    "spec",
    [{"type": "unknown"}, {"p": 0.1}, {"type": "tensor_flip", "q": 0.1}],
)
def test_readout_model_invalid(spec):
    with pytest.raises(ValueError):
        readout_model(spec)


def test_per_qubit():
    assert_allclose(per_qubit(0.1, 3), [0.1, 0.1, 0.1])
    with pytest.raises(ValueError):
        per_qubit([0.1, 0.2], 3)
    with pytest.raises(ValueError):
        per_qubit(1.5, 2)


@given(probabilities, probabilities)
def test_tensor_flip_suppression(p0, p1):
    model = TensorFlip([p0, p1])
    _column_stochastic(model.transition_matrix(2))
    ch = model.channel(2)
    expected = (1 - 2 * p0) * (1 - 2 * p1)
    value = channels.suppression_factor(ch, Mask("11"))
    assert value == pytest.approx(expected, abs=1e-12)


def test_tensor_flip_large_register_is_classical():
    model = TensorFlip(0.05)
    ch = model.channel(5)
    assert isinstance(ch, ClassicalChannel)
    assert channels.suppression_factor(ch, Mask("10001")) == pytest.approx(0.9**2)


def test_correlated_flip_transition():
    model = CorrelatedFlip(pair=(0, 2), q=0.1, p01=0.02, p10=0.03)
    t = model.transition_matrix(3)
    _column_stochastic(t)
    # Without local flips the pair moves together
    joint = CorrelatedFlip(pair=(0, 2), q=0.1).transition_matrix(3)
    assert joint[0b101, 0b000] == pytest.approx(0.1)
    assert joint[0b000, 0b000] == pytest.approx(0.9)
    assert joint[0b100, 0b000] == 0.0


def test_correlated_flip_invalid():
    with pytest.raises(ValueError):
        CorrelatedFlip(pair=(1, 1), q=0.1)
    with pytest.raises(ValueError):
        CorrelatedFlip(q=1.5)
    with pytest.raises(ValueError):
        CorrelatedFlip(pair=(0, 3), q=0.1).validate(3)


def test_asymmetric_correlated_flip_transition():
    p, c = 0.2, 0.03
    joint = AsymmetricCorrelatedFlip((0, 2), p=p, c=c).transition_matrix(3)
    _column_stochastic(joint)
    # Equal input bits flip together more often, differing ones less
    assert joint[0b101, 0b000] == pytest.approx(p**2 + c)
    assert joint[0b100, 0b000] == pytest.approx(p * (1 - p) - c)
    assert joint[0b001, 0b100] == pytest.approx(p**2 - c)
    assert joint[0b110, 0b010] == pytest.approx(p * (1 - p) - c)
    assert joint[0b010, 0b000] == 0.0
    model = AsymmetricCorrelatedFlip((0, 2), p=p, c=c, p01=0.02, p10=0.06)
    _column_stochastic(model.transition_matrix(3))


@given(probabilities, st.floats(-1.0, 1.0), probabilities, probabilities)
def test_asymmetric_correlated_flip_factorizes(p, scale, p01, p10):
    c = scale * min(p**2, (1 - p) ** 2, p * (1 - p))
    ch = AsymmetricCorrelatedFlip((0, 1), p, c, p01, p10).channel(2)
    f0 = channels.suppression_factor(ch, Mask("10"))
    f1 = channels.suppression_factor(ch, Mask("01"))
    f01 = channels.suppression_factor(ch, Mask("11"))
    assert f0 == pytest.approx((1 - 2 * p) * (1 - p01 - p10), abs=1e-12)
    assert f01 == pytest.approx(f0 * f1, abs=1e-12)


def test_parity_preserving_flip_does_not_factorize():
    ch = CorrelatedFlip((0, 1), q=0.1).channel(2)
    assert channels.suppression_factor(ch, Mask("11")) == pytest.approx(1.0)
    assert channels.suppression_factor(ch, Mask("10")) == pytest.approx(0.8)


def test_asymmetric_correlated_flip_invalid():
    with pytest.raises(ValueError):
        AsymmetricCorrelatedFlip((1, 1), p=0.1)
    with pytest.raises(ValueError):
        AsymmetricCorrelatedFlip(p=0.1, c=0.02)
    with pytest.raises(ValueError):
        AsymmetricCorrelatedFlip((0, 3), p=0.1).validate(3)
    drifted = AsymmetricCorrelatedFlip((0, 1), 0.1, 0.005).drifted(1.0, 1.0)
    assert drifted.p == pytest.approx(0.2)
    assert drifted.c == pytest.approx(0.02)
    spec = {"type": "asymmetric_correlated_flip", "pair": [0, 1], "p": 0.1, "c": 0.01}
    assert isinstance(readout_model(spec), AsymmetricCorrelatedFlip)


def test_confusion_local_and_full():
    local = asymmetric_transition(0.04, 0.02)
    model = ConfusionReadout(local=local)
    t = model.transition_matrix(2)
    assert_allclose(t, np.kron(local, local))
    full = ConfusionReadout(matrix=t)
    assert_allclose(full.transition_matrix(2), t)
    with pytest.raises(ValueError):
        full.transition_matrix(3)
    rates = ConfusionReadout.from_rates([0.01, 0.02], [0.03, 0.04])
    assert_allclose(rates.local_matrices(2)[1], asymmetric_transition(0.02, 0.04))


@mark.parametrize(
    "kwargs",
    [
        dict(),
        dict(matrix=np.eye(2), local=np.eye(2)),
        dict(local=[[0.9, 0.2], [0.2, 0.8]]),
        dict(local=np.eye(3)),
    ],
)
def test_confusion_invalid(kwargs):
    with pytest.raises(ValueError):
        ConfusionReadout(**kwargs)


def test_coherent_rotation():
    model = CoherentRotation(0.2, axis="y")
    rot = model.rotations(2)
    assert rot.shape == (2, 2, 2)
    t = model.transition_matrix(2)
    _column_stochastic(t)
    flip = np.sin(0.1) ** 2
    assert t[1, 0] == pytest.approx((1 - flip) * flip)
    assert not model.is_classical
    with pytest.raises(ValueError):
        model.apply_bits(np.zeros((3, 2)), np.random.default_rng(0))
    with pytest.raises(ValueError):
        CoherentRotation(0.1, axis="w")


def test_channel_readout():
    p = 0.07
    model = ChannelReadout(channels.bit_flip(p))
    assert_allclose(model.transition_matrix(1), asymmetric_transition(p, p), atol=1e-12)
    with pytest.raises(ValueError):
        model.validate(2)
    with pytest.raises(ValueError):
        model.drifted(0.5, 1.0)


def test_drift():
    model = TensorFlip([0.1, 0.2])
    assert model.drifted(0.3, 0.0) is model
    assert_allclose(model.drifted(1.0, 0.5).p, [0.15, 0.3])
    corr = CorrelatedFlip((0, 1), 0.1, 0.02, 0.04).drifted(0.5, 1.0)
    assert corr.q == pytest.approx(0.15)
    assert corr.p10 == pytest.approx(0.06)
    full = ConfusionReadout(matrix=np.kron(asymmetric_transition(0.1, 0.05), np.eye(2)))
    _column_stochastic(full.drifted(1.0, 1.0).transition_matrix(2))
    assert isinstance(NoReadoutError().drifted(1.0, 2.0), NoReadoutError)


@mark.parametrize(
    "model",
    [
        TensorFlip([0.1, 0.25]),
        CorrelatedFlip((0, 1), q=0.1, p01=0.05, p10=0.02),
        AsymmetricCorrelatedFlip((0, 1), p=0.2, c=0.03, p01=0.05, p10=0.02),
        ConfusionReadout(local=asymmetric_transition(0.15, 0.05)),
        ConfusionReadout(matrix=np.kron(asymmetric_transition(0.2, 0.1), np.eye(2))),
    ],
)
def test_apply_bits_statistics(model):
    rng = np.random.default_rng(42)
    num_shots = 40_000
    t = model.transition_matrix(2)
    for index in range(4):
        bits = np.tile([(index >> 1) & 1, index & 1], (num_shots, 1)).astype(np.uint8)
        out = model.apply_bits(bits, rng)
        freq = np.bincount(out[:, 0] * 2 + out[:, 1], minlength=4) / num_shots
        sigma = np.sqrt(t[:, index] * (1 - t[:, index]) / num_shots)
        assert np.all(np.abs(freq - t[:, index]) <= 5 * sigma + 1e-12)
