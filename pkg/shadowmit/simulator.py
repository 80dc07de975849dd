# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Simulation of randomized measurements with readout errors.

Dense states are measured by rotating their pure components with the
per-shot frame unitaries. Product states only need the rotated Bloch
projections, so registers of any size can be simulated as long as the
readout error acts classically on the sampled bits.
"""

import csv
import logging
import numpy as np
from dataclasses import dataclass, field
from multiprocessing.pool import ThreadPool
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union
from .channels import QuantumChannel
from .collection import rx, ry, rz, sigx, sigy, sigz
from .models import AbstractReadoutModel, ChannelReadout, NoReadoutError, readout_model
from .pauli import MAX_DENSE_QUBITS, DensityMatrix, ProductState
from .sampling import (
    FrameBatch,
    FrameSampler,
    MeasurementFrame,
    SamplerKind,
    derive_seeds,
)
from .estimator import ShotRecord
from ._utils import fmt_float

logger = logging.getLogger(__name__)

__all__ = [
    "CHUNK_SIZE",
    "PROBABILITY_TOLERANCE",
    "PreparationCircuit",
    "ExperimentPlan",
    "ShotBatch",
    "ScheduledBatch",
    "state_from_spec",
    "state_to_spec",
    "measure_batch",
    "noisy_measure",
    "schedule",
    "iter_schedule",
    "run_schedule",
    "stream_plan",
    "run_plan",
    "interleave",
    "calibration_plan",
    "write_batches_csv",
]

CHUNK_SIZE = 4096
PROBABILITY_TOLERANCE = 1e-9

MAIN = "main"
CALIBRATION = "calibration"

State = Union[DensityMatrix, ProductState, "PreparationCircuit"]

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_S = np.diag([1, 1j])
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
_CZ = np.diag([1, 1, 1, -1]).astype(np.complex128)

FIXED_GATES = {
    "h": _H,
    "x": sigx,
    "y": sigy,
    "z": sigz,
    "s": _S,
    "cnot": _CNOT,
    "cz": _CZ,
}
ROTATION_GATES = {"rx": rx, "ry": ry, "rz": rz}


# =========================================================================
# States
# =========================================================================


def _apply_local(
    psi: np.ndarray, u: np.ndarray, qubits: Sequence[int], num_qubits: int
) -> np.ndarray:
    """Applies a gate on ``qubits`` to a state vector, qubit 0 most significant."""
    k = len(qubits)
    tensor = psi.reshape([2] * num_qubits)
    tensor = np.moveaxis(tensor, list(qubits), list(range(k)))
    shape = tensor.shape
    tensor = (u @ tensor.reshape(2**k, -1)).reshape(shape)
    tensor = np.moveaxis(tensor, list(range(k)), list(qubits))
    return tensor.reshape(-1)


@dataclass(frozen=True)
class PreparationCircuit:
    """Sequence of one- and two-qubit gates applied to ``|0...0>``.

    Gates are ``(qubits, unitary)`` pairs.
    """

    num_qubits: int
    gates: Tuple[Tuple[Tuple[int, ...], np.ndarray], ...] = ()

    def __post_init__(self):
        if self.num_qubits < 1 or self.num_qubits > MAX_DENSE_QUBITS:
            raise ValueError(
                f"Circuits are limited to 1..{MAX_DENSE_QUBITS} qubits, "
                f"got {self.num_qubits}"
            )
        gates = list()
        for qubits, u in self.gates:
            qubits = tuple(int(q) for q in qubits)
            u = np.asarray(u, dtype=np.complex128)
            if len(set(qubits)) != len(qubits) or not qubits or len(qubits) > 2:
                raise ValueError(
                    f"Gates act on one or two distinct qubits, got {qubits}"
                )
            if min(qubits) < 0 or max(qubits) >= self.num_qubits:
                raise ValueError(f"Gate qubits {qubits} out of range")
            if u.shape != (2 ** len(qubits), 2 ** len(qubits)):
                raise ValueError(f"Gate on {qubits} has wrong shape {u.shape}")
            if not np.allclose(u.conj().T @ u, np.eye(len(u)), atol=1e-10):
                raise ValueError(f"Gate on {qubits} is not unitary")
            gates.append((qubits, u))
        object.__setattr__(self, "gates", tuple(gates))

    def state_vector(self) -> np.ndarray:
        psi = np.zeros(2**self.num_qubits, dtype=np.complex128)
        psi[0] = 1
        for qubits, u in self.gates:
            psi = _apply_local(psi, u, qubits, self.num_qubits)
        return psi

    def density_matrix(self) -> DensityMatrix:
        return DensityMatrix.from_state_vector(self.state_vector())

    @classmethod
    def from_spec(cls, spec: Dict[str, Any]) -> "PreparationCircuit":
        gates = list()
        for g in spec.get("gates", []):
            qubits = g["qubits"]
            name = g.get("gate")
            if name is None:
                u = np.asarray(g["real"]) + 1j * np.asarray(g.get("imag", 0.0))
            elif name in FIXED_GATES:
                u = FIXED_GATES[name]
            elif name in ROTATION_GATES:
                u = ROTATION_GATES[name](float(g["angle"]))
            else:
                raise ValueError(f"Unknown gate '{name}'")
            gates.append((qubits, u))
        return cls(int(spec["num_qubits"]), tuple(gates))

    def to_spec(self) -> Dict[str, Any]:
        gates = [
            {
                "qubits": list(q),
                "real": np.real(u).tolist(),
                "imag": np.imag(u).tolist(),
            }
            for q, u in self.gates
        ]
        return {"type": "circuit", "num_qubits": self.num_qubits, "gates": gates}


def state_from_spec(
    spec: Union[None, Dict[str, Any], State], num_qubits: Optional[int] = None
) -> State:
    """Builds a state from its config description.

    Supported types are ``zeros``, ``plus``, ``basis`` (bit string ``bits``),
    ``product`` (Bloch vectors ``bloch``), ``density`` (``real`` and ``imag``
    parts) and ``circuit``.
    """
    if isinstance(spec, (DensityMatrix, ProductState, PreparationCircuit)):
        return spec
    spec = {"type": "zeros"} if spec is None else dict(spec)
    kind = spec.get("type", "zeros")
    if kind in ("zeros", "plus") and spec.get("num_qubits", num_qubits) is None:
        raise ValueError(f"State type '{kind}' needs the number of qubits")
    if kind == "zeros":
        size = int(spec.get("num_qubits", num_qubits))
        return ProductState.zeros(size, float(spec.get("prep_error", 0.0)))
    if kind == "plus":
        n = int(spec.get("num_qubits", num_qubits))
        return ProductState(np.tile([1.0, 0.0, 0.0], (n, 1)))
    if kind == "basis":
        bits = str(spec["bits"])
        return ProductState([[0.0, 0.0, 1.0 - 2 * int(b)] for b in bits])
    if kind == "product":
        return ProductState(spec["bloch"])
    if kind == "density":
        rho = np.asarray(spec["real"]) + 1j * np.asarray(spec.get("imag", 0.0))
        return DensityMatrix(rho)
    if kind == "circuit":
        spec.setdefault("num_qubits", num_qubits)
        return PreparationCircuit.from_spec(spec)
    raise ValueError(f"Unknown state type '{kind}'")


def state_to_spec(state: State) -> Dict[str, Any]:
    if isinstance(state, ProductState):
        return {"type": "product", "bloch": state.bloch.tolist()}
    if isinstance(state, DensityMatrix):
        rho = state.entries
        return {
            "type": "density",
            "real": np.real(rho).tolist(),
            "imag": np.imag(rho).tolist(),
        }
    return state.to_spec()


def _num_qubits(state: State) -> int:
    return state.num_qubits


# =========================================================================
# Plans and batches
# =========================================================================


@dataclass(frozen=True)
class ExperimentPlan:
    """Everything needed to reproduce a stream of measured shots.

    Parameters
    ----------
    state : DensityMatrix or ProductState or PreparationCircuit
        The measured state.
    n_shots : int
        The number of shots.
    sampler : SamplerKind
        The frame distribution.
    seeds : Sequence of int
        One non-zero frame register seed per qubit.
    error_model : AbstractReadoutModel, optional
        The readout error. Noiseless by default.
    batch_size : int, optional
        Shots per batch. The last batch may be smaller.
    drift_rate : float, optional
        Relative growth of the error parameters over the schedule.
    outcome_seed : int, optional
        Seed of the outcome generator, split per batch.
    lfsr_width : int, optional
        Width of the frame registers.
    origin : {"main", "calibration"}, optional
        Tag of the produced batches.
    """

    state: State
    n_shots: int
    sampler: SamplerKind
    seeds: Tuple[int, ...]
    error_model: AbstractReadoutModel = field(default_factory=NoReadoutError)
    batch_size: int = 50_000
    drift_rate: float = 0.0
    outcome_seed: int = 0
    lfsr_width: int = 32
    origin: str = MAIN

    def __post_init__(self):
        object.__setattr__(self, "sampler", SamplerKind.parse(self.sampler))
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))
        object.__setattr__(self, "error_model", readout_model(self.error_model))
        if isinstance(self.state, PreparationCircuit):
            object.__setattr__(self, "state", self.state.density_matrix())
        if self.n_shots < 1:
            raise ValueError(f"Number of shots must be positive, got {self.n_shots}")
        if self.batch_size < 1:
            raise ValueError(f"Batch size must be positive, got {self.batch_size}")
        if len(self.seeds) != self.num_qubits:
            raise ValueError(f"Expected {self.num_qubits} seeds, got {len(self.seeds)}")
        if any(s == 0 for s in self.seeds):
            raise ValueError("Frame seeds must be non-zero")
        if self.origin not in (MAIN, CALIBRATION):
            raise ValueError(f"Unknown batch origin '{self.origin}'")
        self.error_model.validate(self.num_qubits)

    @property
    def num_qubits(self) -> int:
        return _num_qubits(self.state)

    @property
    def num_batches(self) -> int:
        return -(-self.n_shots // self.batch_size)

    def batch_bounds(self, index: int) -> Tuple[int, int]:
        """First shot and size of the batch ``index``."""
        if not 0 <= index < self.num_batches:
            raise ValueError(f"Batch index {index} out of range")
        start = index * self.batch_size
        return start, min(self.batch_size, self.n_shots - start)

    def frame_sampler(self) -> FrameSampler:
        return FrameSampler(self.sampler, self.seeds, self.lfsr_width)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "state": state_to_spec(self.state),
            "n_shots": self.n_shots,
            "sampler": self.sampler.value,
            "seeds": list(self.seeds),
            "error_model": self.error_model.spec(),
            "batch_size": self.batch_size,
            "drift": {"rate": self.drift_rate},
            "outcome_seed": self.outcome_seed,
            "lfsr_width": self.lfsr_width,
            "origin": self.origin,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentPlan":
        data = dict(data)
        state = state_from_spec(data.pop("state"), len(data.get("seeds", [])) or None)
        drift = data.pop("drift", None) or dict()
        return cls(state=state, drift_rate=float(drift.get("rate", 0.0)), **data)


@dataclass(frozen=True)
class ShotBatch:
    """Frames and ``±1`` outcomes of consecutive shots of one plan."""

    frames: FrameBatch
    outcomes: np.ndarray
    batch_index: int
    origin: str = MAIN
    clock: float = 0.0

    def __post_init__(self):
        if len(self.outcomes) == 0:
            raise ValueError("Shot batches must not be empty")
        if self.outcomes.shape != (self.frames.num_shots, self.frames.num_qubits):
            raise ValueError("Outcomes do not match the frames of the batch")

    def __len__(self) -> int:
        return len(self.outcomes)

    @property
    def num_qubits(self) -> int:
        return self.frames.num_qubits

    @property
    def kind(self) -> SamplerKind:
        return self.frames.kind

    @property
    def bits(self) -> np.ndarray:
        """Outcomes as bits, ``0`` for ``+1``."""
        return ((1 - self.outcomes) // 2).astype(np.uint8)

    @property
    def records(self) -> List[ShotRecord]:
        return [ShotRecord(self.frames[i], self.outcomes[i]) for i in range(len(self))]


@dataclass(frozen=True)
class ScheduledBatch:
    plan: int
    batch_index: int
    start: int
    count: int
    clock: float


# =========================================================================
# Measurement
# =========================================================================


def _rotated_directions(u: np.ndarray) -> np.ndarray:
    """Measured Bloch directions of stacked ``(..., 2, 2)`` unitaries."""
    a, b = u[..., 0, 0], u[..., 0, 1]
    c, d = u[..., 1, 0], u[..., 1, 1]
    off = np.conj(a) * b - np.conj(c) * d
    nz = np.abs(a) ** 2 - np.abs(c) ** 2
    return np.stack([np.real(off), -np.imag(off), nz], axis=-1)


def _checked_probabilities(probs: np.ndarray) -> np.ndarray:
    tol = PROBABILITY_TOLERANCE
    if np.any(probs < -tol) or np.any(probs > 1 + tol):
        raise ValueError("Outcome probabilities outside [0, 1], broken readout channel")
    sums = probs.sum(axis=-1)
    if np.any(np.abs(sums - 1) > tol):
        raise ValueError(
            f"Outcome probabilities sum to {sums.min():.12g}..{sums.max():.12g}"
        )
    probs = np.clip(probs, 0.0, 1.0)
    return probs / probs.sum(axis=-1, keepdims=True)


def _index_bits(index: np.ndarray, num_qubits: int) -> np.ndarray:
    shifts = num_qubits - 1 - np.arange(num_qubits)
    return ((index[:, np.newaxis] >> shifts) & 1).astype(np.uint8)


def _sample_index(probs: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    cdf = np.cumsum(probs, axis=1)
    u = rng.random(len(probs))
    index = np.sum(u[:, np.newaxis] >= cdf, axis=1)
    return np.minimum(index, probs.shape[1] - 1)


def _measure_product(state: ProductState, unitaries: np.ndarray, rng) -> np.ndarray:
    directions = _rotated_directions(unitaries)
    proj = np.einsum("nqk,qk->nq", directions, state.bloch)
    p0 = 0.5 * (1 + proj)
    p0 = _checked_probabilities(np.stack([p0, 1 - p0], axis=-1))[..., 0]
    return (rng.random(p0.shape) >= p0).astype(np.uint8)


def _measure_dense(
    state: DensityMatrix,
    unitaries: np.ndarray,
    channel: Optional[QuantumChannel],
    rng: np.random.Generator,
) -> np.ndarray:
    num_qubits = state.num_qubits
    weights, vectors = state.eigh()
    keep = weights > 1e-12
    weights, vectors = weights[keep], vectors[:, keep].T
    out = list()
    for lo in range(0, len(unitaries), CHUNK_SIZE):
        u = unitaries[lo : lo + CHUNK_SIZE]
        n = len(u)
        psi = np.broadcast_to(vectors, (n,) + vectors.shape)
        psi = psi.reshape((n, len(weights)) + (2,) * num_qubits)
        for q in range(num_qubits):
            psi = np.moveaxis(psi, 2 + q, -1)
            psi = np.einsum("nab,n...b->n...a", u[:, q], psi)
            psi = np.moveaxis(psi, -1, 2 + q)
        psi = psi.reshape(n, len(weights), -1)
        if channel is None:
            probs = np.einsum("r,nrd->nd", weights, np.abs(psi) ** 2)
        else:
            probs = channel.populations(psi, weights)
        probs = _checked_probabilities(np.real(probs))
        out.append(_index_bits(_sample_index(probs, rng), num_qubits))
    return np.concatenate(out)


def measure_batch(
    state: Union[DensityMatrix, ProductState],
    frames: FrameBatch,
    model: AbstractReadoutModel,
    rng: np.random.Generator,
) -> np.ndarray:
    """Samples noisy ``±1`` outcomes of every frame of a batch.

    The frame unitaries act first, then the readout error. Classical errors
    are applied to the sampled bits, local rotations are folded into the
    frame unitaries and other channels act on the rotated dense state.

    Returns
    -------
    outcomes : (n, Q) np.ndarray of np.int8
    """
    num_qubits = frames.num_qubits
    if state.num_qubits != num_qubits:
        raise ValueError(
            f"State on {state.num_qubits} qubits does not match "
            f"frames on {num_qubits} qubits"
        )
    unitaries = frames.unitaries()
    rot = model.rotations(num_qubits)
    if rot is not None:
        unitaries = np.einsum("qab,nqbc->nqac", rot, unitaries)
    channel = None
    if rot is None and not model.is_classical:
        channel = model.channel(num_qubits)
        if isinstance(state, ProductState):
            state = state.to_density_matrix()
    if isinstance(state, ProductState):
        bits = _measure_product(state, unitaries, rng)
    else:
        bits = _measure_dense(state, unitaries, channel, rng)
    if model.is_classical:
        bits = model.apply_bits(bits, rng)
    return (1 - 2 * bits.astype(np.int8)).astype(np.int8)


def _single_batch(frame: MeasurementFrame) -> FrameBatch:
    f = frame
    return FrameBatch(
        f.kind,
        0,
        f.directions[np.newaxis],
        f.thetas[np.newaxis],
        f.phis[np.newaxis],
        f.weights[np.newaxis],
        f.indices[np.newaxis],
        f.alphas[np.newaxis],
        f.betas[np.newaxis],
    )


def noisy_measure(
    rho: Union[DensityMatrix, ProductState],
    frame: MeasurementFrame,
    error: Union[QuantumChannel, AbstractReadoutModel, None],
    rng: np.random.Generator,
) -> np.ndarray:
    """Measures a single frame: rotations, then the readout error, then sampling.

    Parameters
    ----------
    rho : DensityMatrix or ProductState
        The measured state.
    frame : MeasurementFrame
        The measurement frame.
    error : QuantumChannel or AbstractReadoutModel or None
        The readout error channel.
    rng : np.random.Generator
        The outcome generator.

    Returns
    -------
    outcomes : (Q, ) np.ndarray
        ``+1`` for bit 0 and ``-1`` for bit 1.
    """
    if isinstance(error, QuantumChannel):
        error = ChannelReadout(error)
    model = readout_model(error)
    return measure_batch(rho, _single_batch(frame), model, rng)[0]


# =========================================================================
# Execution
# =========================================================================


def schedule(
    plans: Sequence[ExperimentPlan], order: str = "interleaved"
) -> List[ScheduledBatch]:
    """Orders the batches of several plans on a shared drift clock.

    ``"interleaved"`` distributes the batches of every plan evenly over the
    schedule (ties keep the plan order), ``"sequential"`` runs the plans
    one after another. The clock of a batch is the midpoint of its shots
    relative to the total number of scheduled shots.
    """
    if order not in ("interleaved", "sequential"):
        raise ValueError(f"Unknown schedule order '{order}'")
    counts = [p.num_batches for p in plans]
    entries = list()
    for i, plan in enumerate(plans):
        others = int(np.prod([c for j, c in enumerate(counts) if j != i]))
        for k in range(plan.num_batches):
            key = ((k + 1) * others, i) if order == "interleaved" else (i, k)
            entries.append((key, i, k))
    entries.sort()
    total = sum(p.n_shots for p in plans)
    done = 0
    out = list()
    for _, i, k in entries:
        start, count = plans[i].batch_bounds(k)
        out.append(ScheduledBatch(i, k, start, count, (done + 0.5 * count) / total))
        done += count
    return out


def _execute(
    plan: ExperimentPlan, sampler: FrameSampler, entry: ScheduledBatch
) -> ShotBatch:
    model = plan.error_model.drifted(entry.clock, plan.drift_rate)
    frames = sampler.batch(entry.start, entry.count)
    seq = np.random.SeedSequence([plan.outcome_seed, entry.batch_index])
    rng = np.random.default_rng(seq)
    outcomes = measure_batch(plan.state, frames, model, rng)
    logger.debug(
        "Ran %s batch %d (%d shots, clock %.3f)",
        plan.origin,
        entry.batch_index,
        entry.count,
        entry.clock,
    )
    return ShotBatch(frames, outcomes, entry.batch_index, plan.origin, entry.clock)


def iter_schedule(
    plans: Sequence[ExperimentPlan], entries: Sequence[ScheduledBatch], threads: int = 1
) -> Iterator[ShotBatch]:
    """Executes scheduled batches lazily and yields them in schedule order.

    Every batch draws from generators derived from its own index, so the
    result does not depend on the number of threads.
    """
    samplers = [p.frame_sampler() for p in plans]

    def work(entry):
        return _execute(plans[entry.plan], samplers[entry.plan], entry)

    if threads <= 1:
        for e in entries:
            yield work(e)
        return
    with ThreadPool(threads) as pool:
        yield from pool.imap(work, entries)


def run_schedule(
    plans: Sequence[ExperimentPlan], entries: Sequence[ScheduledBatch], threads: int = 1
) -> List[ShotBatch]:
    """Executes scheduled batches, in parallel if ``threads > 1``."""
    return list(iter_schedule(plans, entries, threads))


def stream_plan(plan: ExperimentPlan, threads: int = 1) -> Iterator[ShotBatch]:
    """Yields the batches of a plan one by one."""
    logger.info(
        "Running %d %s shots in %d batches",
        plan.n_shots,
        plan.sampler.value,
        plan.num_batches,
    )
    return iter_schedule([plan], schedule([plan]), threads)


def run_plan(plan: ExperimentPlan, threads: int = 1) -> List[ShotBatch]:
    """Runs all batches of a plan in order."""
    return list(stream_plan(plan, threads))


def interleave(
    main: ExperimentPlan,
    cal: ExperimentPlan,
    order: str = "interleaved",
    threads: int = 1,
) -> List[ShotBatch]:
    """Runs main and calibration batches on a shared drift clock.

    Parameters
    ----------
    main, cal : ExperimentPlan
        The main and the calibration plan.
    order : {"interleaved", "calibration_first"}, optional
        Alternating ratio preserving order, or all calibration batches first.
    threads : int, optional
        Number of worker threads.

    Returns
    -------
    batches : list of ShotBatch
        The batches in schedule order.
    """
    if main.num_qubits != cal.num_qubits:
        raise ValueError(
            f"Plans act on different qubit counts "
            f"{main.num_qubits} and {cal.num_qubits}"
        )
    if main.sampler is not cal.sampler:
        raise ValueError(
            f"Plans use different samplers {main.sampler.value} and {cal.sampler.value}"
        )
    if order == "interleaved":
        entries = schedule([main, cal], "interleaved")
        plans = [main, cal]
    elif order == "calibration_first":
        plans = [cal, main]
        entries = schedule(plans, "sequential")
    else:
        raise ValueError(f"Unknown calibration order '{order}'")
    return run_schedule(plans, entries, threads)


def calibration_plan(
    main: ExperimentPlan,
    n_shots: int,
    seeds: Optional[Sequence[int]] = None,
    prep_error: float = 0.0,
    outcome_seed: Optional[int] = None,
) -> ExperimentPlan:
    """The all-zeros calibration plan matching the sampler and readout of ``main``."""
    num_qubits = main.num_qubits
    if seeds is None:
        seeds = derive_seeds(main.outcome_seed + 0x5EED, num_qubits, main.lfsr_width)
    return ExperimentPlan(
        state=ProductState.zeros(num_qubits, prep_error),
        n_shots=n_shots,
        sampler=main.sampler,
        seeds=tuple(seeds),
        error_model=main.error_model,
        batch_size=main.batch_size,
        drift_rate=main.drift_rate,
        outcome_seed=main.outcome_seed + 1 if outcome_seed is None else outcome_seed,
        lfsr_width=main.lfsr_width,
        origin=CALIBRATION,
    )


def write_batches_csv(path, batches: Sequence[ShotBatch]) -> None:
    """Writes shot batches with frames and outcomes, one row per shot and qubit."""
    header = ["shot", "batch", "origin", "qubit", "kind", "index"]
    header += ["theta", "phi", "weight", "alpha", "beta", "outcome"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for b in batches:
            f = b.frames
            for i in range(len(b)):
                for q in range(b.num_qubits):
                    writer.writerow(
                        [
                            f.start + i,
                            b.batch_index,
                            b.origin,
                            q,
                            f.kind.value,
                            int(f.indices[i, q]),
                            fmt_float(f.thetas[i, q]),
                            fmt_float(f.phis[i, q]),
                            fmt_float(f.weights[i, q]),
                            fmt_float(f.alphas[i, q]),
                            fmt_float(f.betas[i, q]),
                            int(b.outcomes[i, q]),
                        ]
                    )
    logger.info("Wrote %d batches to %s", len(batches), path)
