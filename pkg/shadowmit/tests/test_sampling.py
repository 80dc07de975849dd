# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

import csv
import pytest
from pytest import mark
from hypothesis import given, settings, strategies as st
import numpy as np
from numpy.testing import assert_allclose, assert_array_equal
from scipy.stats import chisquare
from shadowmit import sampling
from shadowmit.collection import haar_unitary, random_density_matrix, rx
from shadowmit.sampling import (
    FrameSampler,
    Lfsr,
    SamplerKind,
    frames_from_words,
    lfsr_next,
    measurement_direction,
    tetrahedral_group,
)

seeds = st.integers(1, 2**16 - 1)


def _reference_word(state):
    """Bitwise width-16 register with taps 16, 15, 13, 4."""
    for _ in range(16):
        bit = (state ^ (state >> 1) ^ (state >> 3) ^ (state >> 12)) & 1
        state = (state >> 1) | (bit << 15)
    return state


def test_lfsr_first_word():
    g = Lfsr(0xACE1)
    assert g.taps == (16, 15, 13, 4)
    g2, word = lfsr_next(g)
    assert word == _reference_word(0xACE1)
    assert g2.state == word
    assert g.state == 0xACE1


@given(seeds)
def test_lfsr_words_bitwise(seed):
    state = seed
    g = Lfsr(seed)
    for _ in range(4):
        state = _reference_word(state)
        g, word = lfsr_next(g)
        assert word == state


@settings(deadline=None, max_examples=20)
@given(seeds, st.integers(0, 300), st.integers(1, 40), st.sampled_from([16, 24, 32]))
def test_lfsr_words_addressable(seed, start, count, width):
    g = Lfsr(seed, width=width)
    for _ in range(start):
        g, _ = lfsr_next(g)
    expected = list()
    for _ in range(count):
        g, w = lfsr_next(g)
        expected.append(w)
    assert_array_equal(Lfsr(seed, width=width).words(count, start), expected)


def test_lfsr_period():
    assert Lfsr(0xACE1).period() == 2**16 - 1
    assert Lfsr(1).period() == 2**16 - 1
    with pytest.raises(ValueError):
        Lfsr(0xACE1, width=32).period(limit=1000)


@mark.parametrize(
    "kwargs",
    [dict(seed=0), dict(width=8), dict(width=65), dict(taps=[17]), dict(width=20)],
)
def test_lfsr_invalid(kwargs):
    with pytest.raises(ValueError):
        Lfsr(**kwargs)


def test_derive_seeds():
    a = sampling.derive_seeds(7, 5, 32)
    assert a == sampling.derive_seeds(7, 5, 32)
    assert a != sampling.derive_seeds(8, 5, 32)
    assert len(a) == 5
    assert all(0 < s < 2**32 for s in a)


def test_sampler_kind_parse():
    assert SamplerKind.parse("pole_concentrated") is SamplerKind.POLE_CONCENTRATED
    assert SamplerKind.parse("Tetrahedral") is SamplerKind.TETRAHEDRAL
    assert SamplerKind.parse(SamplerKind.DIRECT) is SamplerKind.DIRECT
    assert SamplerKind.TETRAHEDRAL.words_per_shot == 1
    with pytest.raises(ValueError):
        SamplerKind.parse("gaussian")


def test_tetrahedral_group():
    group = tetrahedral_group()
    assert len(group) == 12
    for g in group.unitaries:
        for h in group.unitaries:
            group.index(g @ h)
    # Every coordinate half axis is measured by two elements
    dirs = [tuple(d) for d in group.directions]
    assert len(set(dirs)) == 6
    assert all(dirs.count(d) == 2 for d in set(dirs))
    with pytest.raises(ValueError):
        group.index(rx(0.3))


@settings(deadline=None, max_examples=20)
@given(st.integers(0, 2**31))
def test_tetrahedral_two_design(seed):
    x = random_density_matrix(2, seed)
    group = tetrahedral_group()
    avg = sampling.two_copy_average(group.unitaries, x)
    assert_allclose(avg, sampling.haar_two_copy_average(x), atol=1e-12)


@settings(deadline=None, max_examples=50)
@given(st.integers(0, 2**31))
def test_virtual_z_reconstruction(seed):
    u = haar_unitary(2, seed)
    alpha, beta = sampling.virtual_z_decompose(u)
    v = sampling.virtual_z_unitary(alpha, beta)
    assert_allclose(measurement_direction(v), measurement_direction(u), atol=1e-10)


def test_virtual_z_pole():
    alpha, beta = sampling.virtual_z_decompose(np.eye(2))
    assert alpha == 0.0
    v = sampling.virtual_z_unitary(alpha, beta)
    assert_allclose(measurement_direction(v), [0, 0, 1], atol=1e-12)


@given(st.floats(0, np.pi), st.floats(0, 2 * np.pi))
def test_frame_unitaries(theta, phi):
    u = sampling.frame_unitaries(np.array([theta]), np.array([phi]))[0]
    n = [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    assert_allclose(measurement_direction(u), n, atol=1e-12)


@mark.parametrize("kind", ["spherical", "pole", "tetrahedral", "direct"])
def test_frames_from_words(kind):
    rng = np.random.default_rng(0)
    kind = SamplerKind.parse(kind)
    words = rng.integers(0, 2**16, size=(50, 3, kind.words_per_shot), dtype=np.uint16)
    batch = frames_from_words(kind, words, start=7)
    assert batch.start == 7
    assert len(batch) == 50
    assert batch.num_qubits == 3
    assert_allclose(np.linalg.norm(batch.directions, axis=-1), 1.0)
    dirs = np.array([[measurement_direction(u) for u in f] for f in batch.unitaries()])
    assert_allclose(dirs, batch.directions, atol=1e-10)
    if kind is SamplerKind.POLE_CONCENTRATED:
        assert_allclose(batch.weights, 0.5 * np.pi * np.sin(batch.thetas))
    else:
        assert_allclose(batch.weights, 1.0)
    if kind is SamplerKind.TETRAHEDRAL:
        assert_array_equal(batch.indices, (words[..., 0].astype(np.int64) * 12) >> 16)
    if kind is SamplerKind.DIRECT:
        assert_allclose(batch.directions[..., 2], 1.0)


def test_spherical_word_mapping():
    words = np.array([[[0, 2**15]]], dtype=np.uint16)
    batch = frames_from_words(SamplerKind.SPHERICAL, words)
    u = 0.5 / 2**16
    assert batch.thetas[0, 0] == pytest.approx(np.arccos(1 - 2 * u))
    assert batch.phis[0, 0] == pytest.approx(2 * np.pi * (2**15 + 0.5) / 2**16)


@mark.parametrize("kind", ["spherical", "tetrahedral"])
def test_sample_frame_matches_sampler(kind):
    seeds_ = [0x1234, 0xBEEF, 0x0F0F]
    rngs = [Lfsr(s) for s in seeds_]
    sampler = FrameSampler(kind, seeds_)
    batch = sampler.batch(0, 3)
    for i in range(3):
        frame, rngs = sampling.sample_frame(kind, rngs, 3)
        assert_allclose(frame.directions, batch[i].directions)
        assert_array_equal(frame.indices, batch[i].indices)
    with pytest.raises(ValueError):
        sampling.sample_frame(kind, rngs, 2)


def test_sampler_batches_are_addressable():
    sampler = FrameSampler("pole", [5, 6], width=32)
    full = sampler.batch(0, 20)
    tail = sampler.batch(12, 8)
    assert_allclose(full.thetas[12:], tail.thetas)
    assert_allclose(full.phis[12:], tail.phis)
    with pytest.raises(ValueError):
        FrameSampler("pole", [])


def test_write_frames_csv(tmp_path):
    sampler = FrameSampler("tetrahedral", [3, 4])
    path = tmp_path / "frames.csv"
    sampling.write_frames_csv(path, sampler.batch(10, 5))
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][:4] == ["shot", "qubit", "kind", "index"]
    assert len(rows) == 1 + 5 * 2
    assert rows[1][:3] == ["10", "0", "tetrahedral"]


@mark.slow
def test_spherical_frames_are_uniform():
    sampler = FrameSampler("spherical", [0x1234, 0xBEEF, 0x0F0F], width=32)
    batch = sampler.batch(0, 200_000)
    nz2 = batch.directions[..., 2] ** 2
    assert abs(np.mean(nz2) - 1 / 3) <= 0.002
    assert_allclose(np.mean(batch.directions, axis=(0, 1)), 0.0, atol=0.005)


@mark.slow
def test_pole_weights_have_unit_mean():
    batch = FrameSampler("pole", [0x1234, 0xBEEF], width=32).batch(0, 200_000)
    w = batch.weights.ravel()
    assert abs(np.mean(w) - 1.0) <= 4 * np.std(w, ddof=1) / np.sqrt(w.size)
    assert np.all((w >= 0) & (w <= 0.5 * np.pi + 1e-12))


def test_tetrahedral_indices_are_uniform():
    batch = FrameSampler("tetrahedral", [0x1234, 0xBEEF], width=32).batch(0, 60_000)
    counts = np.bincount(batch.indices.ravel(), minlength=12)
    assert counts.shape == (12,)
    _, pvalue = chisquare(counts)
    assert pvalue > 1e-3
