# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Simulation of the three-wave mixing problem on two qubits.

The cubic boson interaction ``H = i g a1† a2 a3 - i g* a1 a2† a3†`` conserves
``n1 + n2`` and ``n1 + n3``. Starting from ``|3, 0, 0>`` the dynamics stays in
the four states ``|k> = |3-k, k, k>``, which are encoded in binary order on
two qubits.
"""

import logging
import numpy as np
from dataclasses import dataclass
from multiprocessing.pool import ThreadPool
from typing import List, Tuple
from ..collection import kron, tevo_state
from ..estimator import mean_estimate
from ..mitigation import (
    estimate_noisy_terms,
    estimate_suppression,
    estimate_suppression_tensor,
    mitigate,
)
from ..channels import Mask
from ..pauli import DensityMatrix, Observable, ProductState, decompose
from ..sampling import SamplerKind
from ..simulator import interleave, run_plan
from .config import ExperimentConfig
from .report import Report, Table

logger = logging.getLogger(__name__)

NUM_LEVELS = 4
NUM_QUBITS = 2
LABELS = ("00", "01", "10", "11")


def three_wave_hamiltonian(g: complex = 1.0) -> np.ndarray:
    """The Hamiltonian in the sector ``|k> = |3-k, k, k>``, ``k = 0..3``.

    Only the first off-diagonals are non-zero, ``H[k, k+1] = i g (k+1) √(3-k)``.
    """
    ham = np.zeros((NUM_LEVELS, NUM_LEVELS), dtype=np.complex128)
    for k in range(NUM_LEVELS - 1):
        ham[k, k + 1] = 1j * g * (k + 1) * np.sqrt(3 - k)
        ham[k + 1, k] = np.conj(ham[k, k + 1])
    return ham


def annihilation_operator(cutoff: int) -> np.ndarray:
    """Bosonic annihilation operator truncated at ``cutoff`` quanta."""
    return np.diag(np.sqrt(np.arange(1, cutoff + 1)), k=1).astype(np.complex128)


def fock_three_wave_hamiltonian(g: complex = 1.0, cutoff: int = 3) -> np.ndarray:
    """The three-mode Hamiltonian on truncated Fock spaces, projected on the sector.

    Independent construction of :func:`three_wave_hamiltonian` from the mode
    operators.
    """
    if cutoff < 3:
        raise ValueError(f"The sector needs a cutoff of at least 3, got {cutoff}")
    a = annihilation_operator(cutoff)
    eye = np.eye(cutoff + 1)
    a1, a2, a3 = kron(a, eye, eye), kron(eye, a, eye), kron(eye, eye, a)
    ham = 1j * g * a1.conj().T @ a2 @ a3
    ham = ham + ham.conj().T
    size = cutoff + 1
    index = [(3 - k) * size**2 + k * size + k for k in range(NUM_LEVELS)]
    return ham[np.ix_(index, index)]


def evolve(times, g: complex = 1.0) -> np.ndarray:
    """State vectors ``(len(times), 4)`` starting from ``|0>``."""
    psi0 = np.zeros(NUM_LEVELS, dtype=np.complex128)
    psi0[0] = 1
    return tevo_state(three_wave_hamiltonian(g), psi0, np.atleast_1d(times))


def exact_populations(times, g: complex = 1.0) -> np.ndarray:
    """Populations ``(len(times), 4)`` of the sector states."""
    return np.abs(evolve(times, g)) ** 2


def projector_observables() -> List[Observable]:
    """The basis projectors ``|k><k|`` of two qubits as Pauli sums."""
    out = list()
    for k in range(NUM_LEVELS):
        proj = np.zeros((NUM_LEVELS, NUM_LEVELS))
        proj[k, k] = 1.0
        out.append(decompose(proj))
    return out


@dataclass(frozen=True)
class TimePoint:
    t: float
    exact: np.ndarray
    direct: np.ndarray
    mitigated: np.ndarray
    stderr: np.ndarray


class ThreeWaveReport(Report):

    experiment = "threewave"

    def __init__(self, points: List[TimePoint], coupling: float):
        self.points = list(points)
        self.coupling = coupling

    @property
    def times(self) -> np.ndarray:
        return np.array([p.t for p in self.points])

    def _stack(self, name) -> np.ndarray:
        return np.array([getattr(p, name) for p in self.points])

    @property
    def exact(self) -> np.ndarray:
        return self._stack("exact")

    @property
    def direct(self) -> np.ndarray:
        return self._stack("direct")

    @property
    def mitigated(self) -> np.ndarray:
        return self._stack("mitigated")

    @property
    def stderr(self) -> np.ndarray:
        return self._stack("stderr")

    def errors(self) -> Tuple[float, float]:
        """Mean absolute errors of the direct and mitigated populations."""
        exact = self.exact
        return (
            float(np.mean(np.abs(self.direct - exact))),
            float(np.mean(np.abs(self.mitigated - exact))),
        )

    def tables(self):
        rows = list()
        for p in self.points:
            for k, label in enumerate(LABELS):
                values = (p.exact[k], p.direct[k], p.mitigated[k], p.stderr[k])
                rows.append((p.t, label) + values)
        header = ("t", "state", "exact", "direct", "mitigated", "stderr")
        return [Table("threewave", header, rows)]

    def summary(self):
        direct, mitigated = self.errors()
        return {
            "coupling": self.coupling,
            "num_times": len(self.points),
            "mean_abs_error_direct": direct,
            "mean_abs_error_mitigated": mitigated,
        }

    def figures(self):
        from .plotting import threewave_plot

        fig = threewave_plot(
            self.times, self.exact, self.direct, self.mitigated, self.stderr, LABELS
        )
        yield "threewave", fig


def _clip_normalize(values: np.ndarray) -> np.ndarray:
    values = np.clip(values, 0.0, 1.0)
    total = values.sum()
    return values / total if total > 0 else values


def simulate_point(
    cfg: ExperimentConfig, index: int, t: float, psi: np.ndarray
) -> TimePoint:
    """Direct and mitigated populations of the state at one time point."""
    rho = DensityMatrix.from_state_vector(psi)
    projectors = projector_observables()
    exact = np.abs(psi) ** 2

    stream = f"threewave:{index}"
    direct_plan = cfg.plan(
        f"{stream}:direct", rho, cfg.shots["direct"], sampler=SamplerKind.DIRECT
    )
    direct_batches = run_plan(direct_plan)
    direct = np.array([mean_estimate(direct_batches, obs).value for obs in projectors])

    main = cfg.plan(f"{stream}:main", rho, cfg.shots["main"])
    zeros = ProductState.zeros(NUM_QUBITS, float(cfg.prep_error))
    n_cal = cfg.shots["calibration"]
    cal = cfg.plan(f"{stream}:calibration", zeros, n_cal, origin="calibration")
    batches = interleave(main, cal, cfg.order, threads=cfg.threads)
    strings = sorted({p for obs in projectors for p in obs.strings})
    noisy = estimate_noisy_terms((b for b in batches if b.origin == "main"), strings)
    cal_batches = (b for b in batches if b.origin == "calibration")
    if cfg.mode == "tensor_product":
        table = estimate_suppression_tensor(cal_batches)
    else:
        masks = [Mask.from_pauli(p) for p in strings]
        table = estimate_suppression(list(cal_batches), masks)
    results = [mitigate(noisy, table, obs, float(cfg.floor)) for obs in projectors]
    mitigated = np.array([r.value for r in results])
    stderr = np.array([r.stderr for r in results])
    if cfg.clip:
        mitigated = _clip_normalize(mitigated)
    logger.debug("Time point %d (t=%.3f) done", index, t)
    return TimePoint(float(t), exact, direct, mitigated, stderr)


def run_threewave(cfg: ExperimentConfig) -> ThreeWaveReport:
    """Exact, direct and mitigated populations over the configured time grid."""
    if cfg.experiment != "threewave":
        raise ValueError(f"Expected a threewave config, got '{cfg.experiment}'")
    if cfg.qubits != NUM_QUBITS:
        raise ValueError(
            f"The three-wave sector is encoded on {NUM_QUBITS} qubits, "
            f"got {cfg.qubits}"
        )
    times = cfg.time_grid()
    states = evolve(times, float(cfg.coupling))
    jobs = list(enumerate(zip(times, states)))
    logger.info("Simulating %d time points with %d threads", len(jobs), cfg.threads)

    def work(job):
        i, (t, psi) = job
        return simulate_point(cfg, i, t, psi)

    if cfg.threads > 1:
        with ThreadPool(cfg.threads) as pool:
            points = pool.map(work, jobs)
    else:
        points = [work(job) for job in jobs]
    return ThreeWaveReport(points, float(cfg.coupling))
