# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Single-shot estimators, Monte Carlo means, seminorms and moment oracles."""

import logging
import numpy as np
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union
from .pauli import (
    DensityMatrix,
    Observable,
    PauliString,
    ProductState,
    expectation_exact,
)
from .sampling import FrameBatch, MeasurementFrame, SamplerKind, tetrahedral_group

logger = logging.getLogger(__name__)

__all__ = [
    "ShotRecord",
    "EstimateResult",
    "single_shot",
    "shot_values",
    "pauli_values",
    "observable_values",
    "mean_estimate",
    "seminorm_spherical",
    "seminorm_pole",
    "seminorm_direct",
    "variance_bound",
    "POLE_DIAGONAL",
    "POLE_CROSS",
    "second_moment_oracle",
    "spherical_second_moment",
    "pole_second_moment",
    "raw_pole_bound",
    "estimator_variance",
]

PI2 = np.pi**2

# Single-qubit second moments of the weighted estimator for equal labels
POLE_DIAGONAL = np.array([PI2 / 8, 27 * PI2 / 64, 27 * PI2 / 64, 9 * PI2 / 32])
# Identity times a Pauli, in units of Tr[ρσ]
POLE_CROSS = np.array([0.0, 9 * PI2 / 64, 9 * PI2 / 64, 3 * PI2 / 32])

QUADRATURE_NODES = 200

StateLike = Union[DensityMatrix, ProductState]


@dataclass(frozen=True)
class ShotRecord:
    """A measurement frame together with the ``±1`` outcome of every qubit."""

    frame: MeasurementFrame
    outcomes: np.ndarray

    def __post_init__(self):
        outcomes = np.asarray(self.outcomes, dtype=np.int8)
        if outcomes.shape != (self.frame.num_qubits,):
            raise ValueError(
                f"Expected {self.frame.num_qubits} outcomes, got shape {outcomes.shape}"
            )
        if not np.all(np.abs(outcomes) == 1):
            raise ValueError("Outcomes must be +1 or -1")
        object.__setattr__(self, "outcomes", outcomes)

    @property
    def num_qubits(self) -> int:
        return self.frame.num_qubits


@dataclass(frozen=True)
class EstimateResult:
    value: float
    stderr: float
    n_shots: int
    kind: SamplerKind

    def __post_init__(self):
        if self.stderr < 0:
            raise ValueError(f"Standard error must be non-negative, got {self.stderr}")
        if self.n_shots < 1:
            raise ValueError(f"Number of shots must be positive, got {self.n_shots}")


# =========================================================================
# Single-shot estimators
# =========================================================================


def shot_values(
    directions: np.ndarray,
    outcomes: np.ndarray,
    weights: np.ndarray,
    p: PauliString,
    kind: SamplerKind,
) -> np.ndarray:
    """Vectorized single-shot estimates of a Pauli string.

    Parameters
    ----------
    directions : (n, Q, 3) np.ndarray
        The measured Bloch directions.
    outcomes : (n, Q) np.ndarray
        The ``±1`` outcomes.
    weights : (n, Q) np.ndarray
        The pole-concentrated weights, ignored for the other kinds.
    p : PauliString
        The estimated Pauli string.
    kind : SamplerKind
        The sampler the frames were drawn from.

    Returns
    -------
    values : (n, ) np.ndarray
    """
    kind = SamplerKind.parse(kind)
    num_shots, num_qubits = outcomes.shape
    if p.num_qubits != num_qubits:
        raise ValueError(
            f"Pauli string on {p.num_qubits} qubits does not match "
            f"{num_qubits} outcomes"
        )
    values = np.ones(num_shots)
    if kind is SamplerKind.DIRECT:
        for j, i in enumerate(p.labels):
            if i in (1, 2):
                raise ValueError(f"Direct readout cannot estimate {p.label}")
            if i == 3:
                values *= outcomes[:, j]
        return values
    for j, i in enumerate(p.labels):
        if i:
            values *= 3 * outcomes[:, j] * directions[:, j, i - 1]
    if kind is SamplerKind.POLE_CONCENTRATED:
        values *= np.prod(weights, axis=1)
    return values


def single_shot(shot: ShotRecord, p: PauliString, kind: SamplerKind) -> float:
    """The single-shot estimate of ``Tr[ρP]`` from one measurement."""
    f = shot.frame
    value = shot_values(
        f.directions[np.newaxis],
        shot.outcomes[np.newaxis],
        f.weights[np.newaxis],
        p,
        kind,
    )
    return float(value[0])


def pauli_values(
    frames: FrameBatch, outcomes: np.ndarray, strings: Iterable[PauliString]
) -> np.ndarray:
    """Single-shot estimates of several Pauli strings as a ``(n, K)`` array."""
    dirs, weights, kind = frames.directions, frames.weights, frames.kind
    cols = [shot_values(dirs, outcomes, weights, p, kind) for p in strings]
    return np.stack(cols, axis=1) if cols else np.zeros((len(outcomes), 0))


def observable_values(
    frames: FrameBatch, outcomes: np.ndarray, obs: Observable
) -> np.ndarray:
    """Single-shot estimates ``Σ c_i R[P_i]`` of an observable."""
    values = np.zeros(len(outcomes))
    for p, c in obs.items():
        dirs, weights = frames.directions, frames.weights
        values += c * shot_values(dirs, outcomes, weights, p, frames.kind)
    return values


def _stack_shots(shots):
    """Collects directions, outcomes, weights and kind of shots or shot batches."""
    if hasattr(shots, "frames"):
        shots = [shots]
    shots = list(shots)
    if not shots:
        raise ValueError("Cannot estimate from an empty list of shots")
    if hasattr(shots[0], "frames"):
        directions = np.concatenate([b.frames.directions for b in shots])
        weights = np.concatenate([b.frames.weights for b in shots])
        outcomes = np.concatenate([b.outcomes for b in shots])
        kinds = {b.frames.kind for b in shots}
    else:
        directions = np.stack([s.frame.directions for s in shots])
        weights = np.stack([s.frame.weights for s in shots])
        outcomes = np.stack([s.outcomes for s in shots])
        kinds = {s.frame.kind for s in shots}
    return directions, outcomes, weights, kinds


def mean_estimate(shots, obs: Observable, kind=None) -> EstimateResult:
    """Monte Carlo estimate of ``Tr[ρO]`` with its standard error.

    Parameters
    ----------
    shots : Sequence of ShotRecord or ShotBatch
        The measurement records. Shot batches of the simulator are accepted
        directly.
    obs : Observable or PauliString
        The estimated observable.
    kind : SamplerKind, optional
        The sampler kind. Defaults to the kind stored in the frames.

    Returns
    -------
    result : EstimateResult
    """
    if isinstance(obs, PauliString):
        obs = Observable.from_pauli(obs)
    directions, outcomes, weights, kinds = _stack_shots(shots)
    if kind is None:
        if len(kinds) != 1:
            raise ValueError(f"Shots mix sampler kinds {kinds}")
        kind = kinds.pop()
    kind = SamplerKind.parse(kind)
    num_shots = len(outcomes)
    if num_shots < 2:
        raise ValueError(f"At least two shots are required, got {num_shots}")
    values = np.zeros(num_shots)
    for p, c in obs.items():
        values += c * shot_values(directions, outcomes, weights, p, kind)
    value = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / np.sqrt(num_shots))
    logger.debug(
        "Estimate %.6f +- %.2g from %d %s shots", value, stderr, num_shots, kind.value
    )
    return EstimateResult(value, stderr, num_shots, kind)


# =========================================================================
# Seminorms and variance bounds
# =========================================================================


def _label_array(obs: Observable, include_identity: bool):
    items = [(p, c) for p, c in obs.items() if include_identity or not p.is_identity()]
    if not items:
        return np.zeros((0, obs.num_qubits), dtype=np.int64), np.zeros(0)
    labels = np.array([p.labels for p, _ in items], dtype=np.int64)
    coeffs = np.abs([c for _, c in items])
    return labels, coeffs


def seminorm_spherical(obs: Observable) -> float:
    """The seminorm bounding the single-shot variance of uniform sampling.

    Returns ``sqrt(Σ 3^r |c_i||c_k|)`` over all pairs of non-identity terms
    without conflicting Paulis on a shared qubit, where ``r`` counts the
    qubits on which both strings act.
    """
    labels, coeffs = _label_array(obs, include_identity=False)
    if not len(coeffs):
        return 0.0
    a = labels[:, np.newaxis, :]
    b = labels[np.newaxis, :, :]
    both = (a != 0) & (b != 0)
    conflict = np.any(both & (a != b), axis=-1)
    r = np.sum(both, axis=-1)
    total = np.where(conflict, 0.0, 3.0**r) * np.outer(coeffs, coeffs)
    return float(np.sqrt(np.sum(total)))


def _pole_tables():
    """Per-qubit diagonal and cross constants indexed by a pair of labels."""
    diag = np.zeros((4, 4))
    cross = np.zeros((4, 4))
    diag[np.arange(4), np.arange(4)] = POLE_DIAGONAL
    cross[0, :] = POLE_CROSS
    cross[:, 0] = POLE_CROSS
    return diag, cross


def seminorm_pole(obs: Observable, rule: str = "product") -> float:
    """The seminorm bounding the single-shot variance of pole-concentrated sampling.

    Parameters
    ----------
    obs : Observable
        The observable. Identity terms contribute.
    rule : {"product", "two_sum"}, optional
        Combination of the per-qubit constants. ``"product"`` multiplies the
        sum of diagonal and cross constants over the qubits. ``"two_sum"``
        adds the product of the diagonal constants to the product of the
        cross constants.

    Returns
    -------
    norm : float
    """
    if rule not in ("product", "two_sum"):
        raise ValueError(f"Unknown combination rule '{rule}'")
    labels, coeffs = _label_array(obs, include_identity=True)
    if not len(coeffs):
        return 0.0
    diag, cross = _pole_tables()
    a = labels[:, np.newaxis, :]
    b = labels[np.newaxis, :, :]
    if rule == "product":
        delta = np.prod(diag[a, b] + cross[a, b], axis=-1)
    else:
        delta = np.prod(diag[a, b], axis=-1) + np.prod(cross[a, b], axis=-1)
    total = delta * np.outer(coeffs, coeffs)
    return float(np.sqrt(np.sum(total)))


def seminorm_direct(obs: Observable) -> float:
    """Σ|c_i| over the non-identity terms, the bound for unrandomized readout."""
    return float(sum(abs(c) for p, c in obs.items() if not p.is_identity()))


def variance_bound(
    obs: Observable, kind: SamplerKind, num_shots: int, rule: str = "product"
) -> float:
    """State-independent bound on the variance of a mean of ``num_shots`` shots."""
    if num_shots < 1:
        raise ValueError(f"Number of shots must be positive, got {num_shots}")
    kind = SamplerKind.parse(kind)
    if kind is SamplerKind.POLE_CONCENTRATED:
        norm = seminorm_pole(obs, rule)
    elif kind is SamplerKind.DIRECT:
        norm = seminorm_direct(obs)
    else:
        norm = seminorm_spherical(obs)
    return norm**2 / num_shots


# =========================================================================
# Second moments
# =========================================================================


@lru_cache(maxsize=None)
def _angle_grid(kind: SamplerKind):
    """Directions and probability weights of the single-qubit frame measure."""
    if kind in (SamplerKind.TETRAHEDRAL, SamplerKind.DIRECT):
        if kind is SamplerKind.DIRECT:
            dirs = np.array([[0.0, 0.0, 1.0]])
        else:
            dirs = tetrahedral_group().directions
        return dirs, np.full(len(dirs), 1 / len(dirs)), np.ones(len(dirs))
    x, w = np.polynomial.legendre.leggauss(QUADRATURE_NODES)
    theta = 0.5 * np.pi * (x + 1)
    phi = np.pi * (x + 1)
    wt = 0.5 * np.pi * w
    wp = np.pi * w
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    if kind is SamplerKind.SPHERICAL:
        # cos(theta) uniform: density sin(theta) / 2 on [0, pi]
        prob = np.outer(wt * np.sin(theta) / 2, wp / (2 * np.pi))
        weight = np.ones_like(tt)
    else:
        prob = np.outer(wt / np.pi, wp / (2 * np.pi))
        weight = 0.5 * np.pi * np.sin(tt)
    dirs = np.stack(
        [np.sin(tt) * np.cos(pp), np.sin(tt) * np.sin(pp), np.cos(tt)], axis=-1
    ).reshape(-1, 3)
    return dirs, prob.reshape(-1), weight.reshape(-1)


def _label(value) -> int:
    if isinstance(value, str):
        return "IXYZ".index(value.upper())
    return int(value)


def second_moment_oracle(r, s, kind: SamplerKind, expectation: float = 1.0) -> float:
    """Single-qubit second moment ``<R[σ_r] R[σ_s]>`` by quadrature.

    The frame measure is integrated with tensor Gauss-Legendre rules for the
    continuous samplers and summed exactly for the discrete ones.

    Parameters
    ----------
    r, s : str or int
        Pauli labels ``I, X, Y, Z`` or ``0..3``.
    kind : SamplerKind
        The sampler kind.
    expectation : float, optional
        ``Tr[ρσ]`` of the non-identity label when exactly one label is the
        identity. The other moments do not depend on the state.

    Returns
    -------
    moment : float
    """
    kind = SamplerKind.parse(kind)
    r, s = _label(r), _label(s)
    dirs, prob, weight = _angle_grid(kind)
    if kind is SamplerKind.DIRECT:
        if r in (1, 2) or s in (1, 2):
            raise ValueError("Direct readout only estimates I and Z")
        return 1.0 if r == s else float(expectation)
    bloch = np.zeros(3)
    if (r == 0) != (s == 0):
        bloch[max(r, s) - 1] = expectation
    # Σ_m p(m|n) m^k is one for even k and r·n for odd k
    odd = dirs @ bloch
    factor_r = np.ones(len(prob)) if r == 0 else 3 * dirs[:, r - 1]
    factor_s = np.ones(len(prob)) if s == 0 else 3 * dirs[:, s - 1]
    m_moment = odd if (r == 0) != (s == 0) else np.ones(len(prob))
    if kind is not SamplerKind.POLE_CONCENTRATED:
        weight = np.ones(len(prob))
    integrand = weight**2 * factor_r * factor_s * m_moment
    return float(np.sum(prob * integrand))


def _split_support(pi: PauliString, pk: PauliString):
    if pi.num_qubits != pk.num_qubits:
        raise ValueError("Pauli strings act on different numbers of qubits")
    a = np.array(pi.labels)
    b = np.array(pk.labels)
    both = (a != 0) & (b != 0)
    one = (a == 0) != (b == 0)
    conflict = bool(np.any(both & (a != b)))
    cross_string = PauliString(np.where(one, a + b, 0).tolist())
    return a, b, conflict, cross_string


def spherical_second_moment(pi: PauliString, pk: PauliString, rho: StateLike) -> float:
    """Exact ``<R[P_i] R[P_k]>`` for uniform (and 2-design) sampling."""
    a, b, conflict, cross = _split_support(pi, pk)
    if conflict:
        return 0.0
    r = int(np.sum((a != 0) & (b != 0)))
    return 3.0**r * expectation_exact(rho, cross)


def pole_second_moment(pi: PauliString, pk: PauliString, rho: StateLike) -> float:
    """Exact ``<R'[P_i] R'[P_k]>`` of the pole-concentrated estimators."""
    a, b, conflict, cross = _split_support(pi, pk)
    if conflict:
        return 0.0
    diag, table = _pole_tables()
    value = 1.0
    for i, k in zip(a, b):
        value *= table[i, k] if (i == 0) != (k == 0) else diag[i, k]
    return value * expectation_exact(rho, cross)


def raw_pole_bound(obs: Observable, rho: StateLike) -> float:
    """The state-dependent bound ``Σ|c_i||c_k||<R'[P_i] R'[P_k]>|``."""
    items = list(obs.items())
    total = 0.0
    for pi, ci in items:
        for pk, ck in items:
            total += abs(ci) * abs(ck) * abs(pole_second_moment(pi, pk, rho))
    return total


def estimator_variance(obs: Observable, rho: StateLike, kind: SamplerKind) -> float:
    """Exact single-shot variance of the estimator of ``obs`` on ``rho``."""
    kind = SamplerKind.parse(kind)
    items = list(obs.items())
    if kind is SamplerKind.DIRECT:
        second = 0.0
        for pi, ci in items:
            for pk, ck in items:
                _, string = pi.compose(pk)
                second += ci * ck * expectation_exact(rho, string)
    else:
        moment = pole_second_moment if kind.is_weighted else spherical_second_moment
        second = sum(
            ci * ck * moment(pi, pk, rho) for pi, ci in items for pk, ck in items
        )
    return float(second - expectation_exact(rho, obs) ** 2)
