# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Pairwise readout correlations of the all-zeros state.

Direct readout correlates the raw bits. Randomized methods correlate the
per-qubit single-shot estimates of ``Z``, which reduce to the bits for
unrandomized frames.
"""

import logging
import numpy as np
from dataclasses import dataclass
from multiprocessing.pool import ThreadPool
from typing import Dict, Iterable, Iterator, List, Tuple
from ..estimator import pauli_values
from ..pauli import PauliString, ProductState
from ..sampling import SamplerKind
from ..simulator import stream_plan
from .config import ExperimentConfig, methods_of
from .report import Report, Table

logger = logging.getLogger(__name__)

HIST_BINS = 30


class MomentAccumulator:
    """Streaming first and second moments of the columns of a data stream."""

    def __init__(self, num_columns: int):
        self.count = 0
        self.s1 = np.zeros(num_columns)
        self.s2 = np.zeros((num_columns, num_columns))

    def add(self, x: np.ndarray) -> None:
        x = np.asarray(x, dtype=np.float64)
        self.count += len(x)
        self.s1 += x.sum(axis=0)
        self.s2 += x.T @ x

    def pearson(self) -> np.ndarray:
        return pearson_from_moments(self.s1, self.s2, self.count)


def pearson_from_moments(s1: np.ndarray, s2: np.ndarray, count: int) -> np.ndarray:
    """Pearson matrix from column sums and the sums of products.

    Columns without variance are uncorrelated with every other column.
    """
    if count < 2:
        raise ValueError(f"At least two samples are required, got {count}")
    mean = s1 / count
    cov = s2 / count - np.outer(mean, mean)
    var = np.clip(np.diag(cov), 0.0, None)
    std = np.sqrt(var)
    scale = np.outer(std, std)
    with np.errstate(divide="ignore", invalid="ignore"):
        corr = np.where(scale > 0, cov / scale, 0.0)
    corr = np.clip(0.5 * (corr + corr.T), -1.0, 1.0)
    np.fill_diagonal(corr, 1.0)
    return corr


def pearson_matrix(values: np.ndarray) -> np.ndarray:
    """Pairwise Pearson coefficients of the columns of ``values``."""
    acc = MomentAccumulator(np.shape(values)[1])
    acc.add(values)
    return acc.pearson()


def null_band(num_shots: int) -> float:
    """The ``2σ`` band ``2/√N`` of uncorrelated data."""
    return 2.0 / np.sqrt(num_shots)


def offdiagonal(matrix: np.ndarray) -> np.ndarray:
    """Upper triangle entries, pairs in ``(a, b)`` order with ``a < b``."""
    a, b = np.triu_indices(len(matrix), k=1)
    return matrix[a, b]


@dataclass(frozen=True)
class MethodCorrelations:
    method: SamplerKind
    matrix: np.ndarray
    n_shots: int

    @property
    def band(self) -> float:
        return null_band(self.n_shots)

    def histogram(self, bins: int = HIST_BINS) -> Tuple[np.ndarray, np.ndarray]:
        values = offdiagonal(self.matrix)
        lim = max(np.max(np.abs(values)) if values.size else 0.0, 1.5 * self.band)
        return np.histogram(values, bins=bins, range=(-lim, lim))

    def fraction_inside(self) -> float:
        values = offdiagonal(self.matrix)
        if not values.size:
            return 1.0
        return float(np.mean(np.abs(values) < self.band))

    def pair(self, a: int, b: int) -> float:
        return float(self.matrix[a, b])


class CorrelationReport(Report):

    experiment = "correlations"

    def __init__(self, results: Iterable[MethodCorrelations]):
        self.results: Dict[str, MethodCorrelations] = {
            r.method.value: r for r in results
        }

    def __getitem__(self, method) -> MethodCorrelations:
        return self.results[SamplerKind.parse(method).value]

    def __iter__(self) -> Iterator[MethodCorrelations]:
        return iter(self.results.values())

    def tables(self) -> List[Table]:
        out = list()
        for name, res in self.results.items():
            q = len(res.matrix)
            rows = [(a, b, res.matrix[a, b]) for a in range(q) for b in range(a + 1, q)]
            header = ("qubit_a", "qubit_b", "pearson")
            out.append(Table(f"correlations_{name}", header, rows))
        return out

    def summary(self):
        out = dict()
        for name, res in self.results.items():
            values = offdiagonal(res.matrix)
            counts, edges = res.histogram()
            out[name] = {
                "n_shots": res.n_shots,
                "band": res.band,
                "fraction_inside": res.fraction_inside(),
                "max_abs": float(np.max(np.abs(values))) if values.size else 0.0,
                "histogram": {"counts": counts.tolist(), "edges": edges.tolist()},
            }
        return out

    def figures(self):
        from .plotting import correlation_heatmap, pearson_histogram

        for name, res in self.results.items():
            title = f"{name} (N={res.n_shots})"
            values = offdiagonal(res.matrix)
            yield f"hist_{name}", pearson_histogram(values, res.band, HIST_BINS, title)
            yield f"matrix_{name}", correlation_heatmap(res.matrix, title)


def method_correlations(
    cfg: ExperimentConfig, method: SamplerKind
) -> MethodCorrelations:
    """Runs one readout method on the all-zeros state and correlates its qubits."""
    num_qubits = cfg.qubits
    state = ProductState.zeros(num_qubits, float(cfg.prep_error))
    n_shots = cfg.shots["direct"] if method is SamplerKind.DIRECT else cfg.shots["main"]
    plan = cfg.plan(f"correlations:{method.value}", state, n_shots, sampler=method)
    strings = [PauliString.single(num_qubits, q, "Z") for q in range(num_qubits)]
    acc = MomentAccumulator(num_qubits)
    for batch in stream_plan(plan):
        if method is SamplerKind.DIRECT:
            acc.add(batch.bits)
        else:
            acc.add(pauli_values(batch.frames, batch.outcomes, strings))
    logger.info(
        "Correlated %d %s shots on %d qubits", acc.count, method.value, num_qubits
    )
    return MethodCorrelations(method, acc.pearson(), acc.count)


def run_correlations(cfg: ExperimentConfig) -> CorrelationReport:
    """Pairwise Pearson correlations for every configured readout method."""
    if cfg.experiment != "correlations":
        raise ValueError(f"Expected a correlations config, got '{cfg.experiment}'")
    methods = methods_of(cfg)
    if cfg.threads > 1 and len(methods) > 1:
        with ThreadPool(min(cfg.threads, len(methods))) as pool:
            results = pool.map(lambda m: method_correlations(cfg, m), methods)
    else:
        results = [method_correlations(cfg, m) for m in methods]
    return CorrelationReport(results)
