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
from shadowmit import mitigation, sampling
from shadowmit.channels import Mask
from shadowmit.models import AsymmetricCorrelatedFlip, CorrelatedFlip, TensorFlip
from shadowmit.mitigation import (
    SuppressionTable,
    UnmitigableTermError,
    estimate_noisy_terms,
    estimate_suppression,
    estimate_suppression_tensor,
    mitigate,
    optimal_shot_ratio,
    shot_split,
    total_shots,
)
from shadowmit.pauli import Observable, PauliString, ProductState
from shadowmit.sampling import SamplerKind
from shadowmit.simulator import ExperimentPlan, calibration_plan, interleave, run_plan

SPH = SamplerKind.SPHERICAL


def _split(batches):
    main = [b for b in batches if b.origin == "main"]
    cal = [b for b in batches if b.origin == "calibration"]
    return main, cal


def _plans(
    state, n_main, n_cal, model, sampler="tetrahedral", drift=0.0, batch_size=10_000
):
    seeds = tuple(range(11, 11 + state.num_qubits))
    main = ExperimentPlan(
        state,
        n_main,
        sampler,
        seeds,
        error_model=model,
        batch_size=batch_size,
        drift_rate=drift,
        outcome_seed=21,
    )
    return main, calibration_plan(main, n_cal)


@mark.slow
@mark.parametrize("sampler", ["spherical", "tetrahedral"])
def test_suppression_monte_carlo(sampler):
    model = TensorFlip([0.02, 0.05])
    main, cal = _plans(ProductState.zeros(2), 10_000, 100_000, model, sampler)
    batches = run_plan(cal)
    masks = [Mask("10"), Mask("01"), Mask("11"), Mask("00")]
    table = estimate_suppression(batches, masks)
    assert len(table.keys) == 3
    for mask, exact in zip(masks, [0.96, 0.9, 0.864, 1.0]):
        value, var = table.lookup(mask)
        assert abs(value - exact) <= 4 * np.sqrt(var) + 1e-12
    tensor = estimate_suppression_tensor(batches)
    value, var = tensor.lookup(Mask("11"))
    assert abs(value - 0.864) <= 4 * np.sqrt(var)


def test_identity_mask():
    table = SuppressionTable(
        "per_mask", 2, (Mask("11"),), np.array([0.5]), np.eye(1), 10, SPH
    )
    assert table.lookup(Mask("00")) == (1.0, 0.0)
    with pytest.raises(ValueError):
        table.lookup(Mask("01"))
    with pytest.raises(ValueError):
        table.lookup(Mask("1"))
    with pytest.raises(ValueError):
        SuppressionTable("global", 2, (), np.zeros(0), np.zeros((0, 0)), 10, SPH)


def test_tensor_table_gradient():
    cov = np.diag([0.01, 0.04])
    values = np.array([0.8, 0.5])
    table = SuppressionTable("tensor_product", 2, (0, 1), values, cov, 10, SPH)
    value, grad = table.gradient(Mask("11"))
    assert value == pytest.approx(0.4)
    assert_allclose(grad, [0.5, 0.8])
    _, var = table.lookup(Mask("11"))
    assert var == pytest.approx(0.25 * 0.01 + 0.64 * 0.04)
    assert table.lookup(Mask("01"))[0] == pytest.approx(0.5)


def test_floor_raises():
    values, cov = np.array([0.005]), np.zeros((1, 1))
    table = SuppressionTable("per_mask", 1, (Mask("1"),), values, cov, 10, SPH)
    z = PauliString("Z")
    noisy = mitigation.NoisyTerms((z,), np.array([0.002]), cov, 10, SPH)
    with pytest.raises(UnmitigableTermError) as info:
        mitigate(noisy, table, Observable.from_pauli(z))
    assert info.value.term == z
    assert info.value.floor == mitigation.DEFAULT_FLOOR
    result = mitigate(noisy, table, Observable.from_pauli(z), floor=0.001)
    assert result.value == pytest.approx(0.4)


@mark.slow
@mark.parametrize("mode", ["per_mask", "tensor_product"])
def test_mitigation_unbiased(mode):
    state = ProductState([[0.0, 0.0, 0.9], [0.6, 0.0, 0.7]])
    obs = Observable({"ZZ": 1.0, "XI": 0.0, "IX": -0.5, "II": 0.25})
    exact = 0.9 * 0.7 - 0.5 * 0.6 + 0.25
    model = TensorFlip([0.05, 0.08])
    main, cal = _plans(state, 80_000, 80_000, model)
    batches = interleave(main, cal)
    main_batches, cal_batches = _split(batches)
    noisy = estimate_noisy_terms(main_batches, obs.strings)
    if mode == "per_mask":
        masks = [Mask.from_pauli(p) for p in obs.strings]
        table = estimate_suppression(cal_batches, masks)
    else:
        table = estimate_suppression_tensor(cal_batches)
    result = mitigate(noisy, table, obs)
    assert result.table.mode == mode
    assert abs(result.value - exact) <= 4 * result.stderr
    # The raw estimate is suppressed by the readout error
    assert abs(result.raw_value - exact) > 4 * result.raw_stderr
    summary = result.summary()
    assert summary["n_main"] == 80_000
    assert summary["n_calibration"] == 80_000
    assert summary["b"] == pytest.approx(1.0)
    assert result[PauliString("II")] == (pytest.approx(1.0), pytest.approx(0.0))
    assert len(result.rows()) == 4


@mark.slow
@mark.parametrize("sampler", ["direct", "tetrahedral"])
def test_parity_preserving_errors_need_per_mask(sampler):
    state = ProductState.zeros(2, prep_error=0.1)
    obs = Observable({"ZZ": 1.0})
    model = CorrelatedFlip((0, 1), q=0.1)
    main, cal = _plans(state, 60_000, 60_000, model, sampler)
    main_batches, cal_batches = _split(interleave(main, cal))
    noisy = estimate_noisy_terms(main_batches, obs.strings)
    per_mask = mitigate(noisy, estimate_suppression(cal_batches, [Mask("11")]), obs)
    tensor = mitigate(noisy, estimate_suppression_tensor(cal_batches), obs)
    assert abs(per_mask.value - 0.64) <= 4 * per_mask.stderr
    assert abs(tensor.value - 0.64) > 4 * tensor.stderr


@mark.slow
@mark.parametrize("sampler", ["spherical", "tetrahedral"])
def test_asymmetric_correlations_allow_tensor_product(sampler):
    state = ProductState.zeros(2, prep_error=0.1)
    obs = Observable({"ZZ": 1.0})
    model = AsymmetricCorrelatedFlip((0, 1), p=0.1, c=0.01, p01=0.02, p10=0.06)
    main, cal = _plans(state, 100_000, 200_000, model, sampler)
    main_batches, cal_batches = _split(interleave(main, cal))
    noisy = estimate_noisy_terms(main_batches, obs.strings)
    per_mask = mitigate(noisy, estimate_suppression(cal_batches, [Mask("11")]), obs)
    tensor = mitigate(noisy, estimate_suppression_tensor(cal_batches), obs)
    assert abs(per_mask.value - 0.64) <= 4 * per_mask.stderr
    assert abs(tensor.value - 0.64) <= 4 * tensor.stderr
    joint = np.hypot(per_mask.stderr, tensor.stderr)
    assert abs(per_mask.value - tensor.value) <= 4 * joint


@mark.slow
def test_drift_bias_of_calibration_first():
    state = ProductState.zeros(1)
    obs = Observable({"Z": 1.0})
    model = TensorFlip(0.1)
    main, cal = _plans(
        state, 40_000, 40_000, model, "direct", drift=1.0, batch_size=1000
    )
    values = dict()
    for order in ("interleaved", "calibration_first"):
        main_batches, cal_batches = _split(interleave(main, cal, order))
        noisy = estimate_noisy_terms(main_batches, obs.strings)
        result = mitigate(noisy, estimate_suppression(cal_batches, [Mask("1")]), obs)
        values[order] = result
    inter = values["interleaved"]
    first = values["calibration_first"]
    assert abs(inter.value - 1.0) <= 4 * inter.stderr
    assert first.value < 1.0 - 4 * first.stderr


def test_noisy_terms_errors():
    state = ProductState.zeros(1)
    main, cal = _plans(state, 100, 100, TensorFlip(0.1))
    cal_batches = run_plan(cal)
    with pytest.raises(ValueError):
        estimate_noisy_terms(cal_batches, [PauliString("Z")])
    with pytest.raises(ValueError):
        estimate_noisy_terms(run_plan(main), [PauliString("Z"), PauliString("ZZ")])
    with pytest.raises(ValueError):
        estimate_noisy_terms([], [PauliString("Z")])
    noisy = estimate_noisy_terms(run_plan(main), [PauliString("Z"), PauliString("Z")])
    assert len(noisy) == 1
    with pytest.raises(ValueError):
        noisy[PauliString("X")]


def test_total_shots_reference():
    z = PauliString("Z")
    b = optimal_shot_ratio(z, expected=0.0)
    assert b == 0.0
    assert total_shots(0.01, z, 1.0, b, SamplerKind.SPHERICAL) == 60000
    assert total_shots(0.01, z, 1.0, 1.0, SamplerKind.SPHERICAL) == 120000
    assert total_shots(0.01, z, 0.5, 0.0, SamplerKind.SPHERICAL) == 240000
    with pytest.raises(ValueError):
        total_shots(0.0, z, 1.0)
    with pytest.raises(ValueError):
        total_shots(0.01, z, 0.0)


def test_optimal_shot_ratio():
    assert optimal_shot_ratio(PauliString("Z"), 1.0) == pytest.approx(1.0)
    assert optimal_shot_ratio(PauliString("XX"), 0.5) == pytest.approx(0.25)
    assert optimal_shot_ratio(PauliString("II"), 1.0, minimum=0.1) == 0.1
    assert optimal_shot_ratio(PauliString("X"), 0.0, minimum=0.2) == 0.2
    with pytest.raises(ValueError):
        optimal_shot_ratio(PauliString("Z"), 1.5)


@given(st.integers(1, 10**7), st.floats(0.0, 20.0, allow_nan=False))
def test_shot_split(n_total, b):
    n_main, n_cal = shot_split(n_total, b)
    assert n_main + n_cal == n_total
    assert n_main >= 1
    assert n_cal >= 0
    assert abs(n_cal - b * n_main) <= 1 + b


def test_shot_split_invalid():
    assert shot_split(100, 1.0) == (50, 50)
    with pytest.raises(ValueError):
        shot_split(0, 1.0)
    with pytest.raises(ValueError):
        shot_split(10, -1.0)


def test_ratio_variance():
    var = mitigation.ratio_variance((0.4, 0.01), (0.8, 0.0004))
    assert var == pytest.approx(0.01 / 0.64 + 0.16 * 0.0004 / 0.4096)
    with pytest.raises(ValueError):
        mitigation.ratio_variance((0.4, 0.01), (0.0, 0.1))


def test_ratio_variance_bootstrap():
    state = ProductState.zeros(1, prep_error=0.1)
    main, cal = _plans(state, 4000, 4000, TensorFlip(0.05), "direct")
    main_values = np.concatenate([b.outcomes[:, 0] for b in run_plan(main)])
    cal_values = np.concatenate([b.outcomes[:, 0] for b in run_plan(cal)])
    n = main_values.size
    f_noisy = (np.mean(main_values), np.var(main_values, ddof=1) / n)
    f_supp = (np.mean(cal_values), np.var(cal_values, ddof=1) / cal_values.size)
    predicted = mitigation.ratio_variance(f_noisy, f_supp)

    rng = np.random.default_rng(5)
    ratios = np.empty(1000)
    for i in range(ratios.size):
        a = rng.choice(main_values, size=main_values.size)
        b = rng.choice(cal_values, size=cal_values.size)
        ratios[i] = np.mean(a) / np.mean(b)
    assert np.var(ratios, ddof=1) == pytest.approx(predicted, rel=0.2)


def _mitigated_z(n_main, n_cal, rep):
    """Mitigated ``<Z>`` of ``|0>`` under symmetric flips with ``p = 0.05``."""
    main = ExperimentPlan(
        ProductState.zeros(1),
        n_main,
        SPH,
        sampling.derive_seeds(rep, 1, 32),
        error_model=TensorFlip(0.05),
        outcome_seed=2 * rep,
    )
    cal = calibration_plan(main, n_cal)
    z = PauliString("Z")
    noisy = estimate_noisy_terms(run_plan(main), [z])
    table = estimate_suppression(run_plan(cal), [Mask("1")])
    return mitigate(noisy, table, Observable.from_pauli(z))


@mark.slow
def test_optimal_ratio_minimizes_variance():
    predicted = optimal_shot_ratio(PauliString("Z"), expected=1.0, kind=SPH)
    assert predicted == pytest.approx(1.0)
    grid = [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    variances = list()
    for b in grid:
        n_main, n_cal = shot_split(3000, b)
        values = [_mitigated_z(n_main, n_cal, rep).value for rep in range(200)]
        variances.append(np.var(values, ddof=1))
    best = int(np.argmin(variances))
    assert abs(best - grid.index(predicted)) <= 1


@mark.slow
def test_budget_reaches_target_error():
    epsilon, suppression = 0.02, 0.9
    z = PauliString("Z")
    b = optimal_shot_ratio(z, expected=1.0, kind=SPH)
    n_total = total_shots(epsilon, z, suppression, b, SPH)
    n_main, n_cal = shot_split(n_total, b)
    results = [_mitigated_z(n_main, n_cal, rep) for rep in range(1000, 1020)]
    assert all(r.stderr <= 1.2 * epsilon for r in results)
    rms = np.sqrt(np.mean([(r.value - 1.0) ** 2 for r in results]))
    assert rms <= 1.2 * epsilon
