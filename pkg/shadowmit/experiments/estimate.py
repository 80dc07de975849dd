# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Mitigated estimation of a configured observable."""

import logging
from typing import Optional
from ..channels import Mask
from ..mitigation import (
    MitigationResult,
    estimate_noisy_terms,
    estimate_suppression,
    estimate_suppression_tensor,
    mitigate,
    optimal_shot_ratio,
    total_shots,
)
from ..pauli import ProductState, expectation_exact
from ..simulator import PreparationCircuit, interleave
from .config import ExperimentConfig
from .report import Report, Table

logger = logging.getLogger(__name__)


class EstimateReport(Report):

    experiment = "estimate"

    def __init__(self, result: MitigationResult, exact: float, budget: dict):
        self.result = result
        self.exact = exact
        self.budget = budget

    def tables(self):
        header = ("term", "coeff", "raw", "suppression", "mitigated", "stderr")
        res = self.result
        rows = [
            (t.term.label, t.coeff, t.raw, t.suppression, t.value, t.stderr)
            for t in res.terms
        ]
        rows.append(("total", 1.0, res.raw_value, 1.0, res.value, res.stderr))
        sup = [(r["key"], r["suppression"], r["stderr"]) for r in res.table.rows()]
        return [
            Table("estimate", header, rows),
            Table("suppression", ("key", "suppression", "stderr"), sup),
        ]

    def summary(self):
        out = dict(self.result.summary())
        out["exact"] = self.exact
        out["budget"] = self.budget
        return out


def shot_budget(cfg: ExperimentConfig, obs, table) -> dict:
    """Optimal calibration ratio and shot totals of every term.

    Totals are only computed if the configuration sets a target error.
    """
    kind = cfg.sampler_kind()
    out = dict()
    for p in obs.strings:
        if p.is_identity():
            continue
        b = optimal_shot_ratio(p, float(cfg.expected), kind)
        entry = {"b": b}
        if cfg.epsilon is not None:
            s, _ = table.lookup(Mask.from_pauli(p))
            if s != 0:
                entry["total_shots"] = total_shots(float(cfg.epsilon), p, s, b, kind)
        out[p.label] = entry
    return out


def run_estimate(cfg: ExperimentConfig, state=None, obs=None) -> EstimateReport:
    """Estimates the configured observable with interleaved calibration.

    Parameters
    ----------
    cfg : ExperimentConfig
        The configuration.
    state, obs : optional
        Replace the configured state and observable.
    """
    if cfg.experiment != "estimate":
        raise ValueError(f"Expected an estimate config, got '{cfg.experiment}'")
    state = cfg.build_state() if state is None else state
    obs = cfg.build_observable() if obs is None else obs
    main = cfg.plan("main", state, cfg.shots["main"])
    zeros = ProductState.zeros(cfg.qubits, float(cfg.prep_error))
    n_cal = cfg.shots["calibration"]
    cal = cfg.plan("estimate:calibration", zeros, n_cal, origin="calibration")
    batches = interleave(main, cal, cfg.order, threads=cfg.threads)
    main_batches = (b for b in batches if b.origin == "main")
    noisy = estimate_noisy_terms(main_batches, obs.strings)
    cal_batches = [b for b in batches if b.origin == "calibration"]
    if cfg.mode == "tensor_product":
        table = estimate_suppression_tensor(cal_batches)
    else:
        masks = [Mask.from_pauli(p) for p in obs.strings]
        table = estimate_suppression(cal_batches, masks)
    result = mitigate(noisy, table, obs, float(cfg.floor))
    exact = _exact(state, obs)
    return EstimateReport(result, exact, shot_budget(cfg, obs, table))


def _exact(state, obs) -> Optional[float]:
    if isinstance(state, PreparationCircuit):
        state = state.density_matrix()
    try:
        return float(expectation_exact(state, obs))
    except ValueError:
        logger.warning("No exact reference for the configured state")
        return None
