# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Readout error mitigation by calibrated suppression factors.

The protocol has three steps. The Pauli terms of the observable are
estimated from randomized measurements of the state. The suppression factor
of every measured mask is estimated from randomized measurements of the
all-zeros state under the same readout error. Each noisy term is then divided
by the suppression factor of its mask.
"""

import logging
import math
import numpy as np
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple
from .channels import Mask
from .estimator import pauli_values, seminorm_direct, seminorm_pole, seminorm_spherical
from .pauli import Observable, PauliString
from .sampling import SamplerKind

logger = logging.getLogger(__name__)

__all__ = [
    "DEFAULT_FLOOR",
    "UnmitigableTermError",
    "NoisyTerms",
    "estimate_noisy_terms",
    "SuppressionTable",
    "estimate_suppression",
    "estimate_suppression_tensor",
    "MitigatedTerm",
    "MitigationResult",
    "mitigate",
    "ratio_variance",
    "optimal_shot_ratio",
    "total_shots",
    "shot_split",
]

DEFAULT_FLOOR = 0.01

PER_MASK = "per_mask"
TENSOR_PRODUCT = "tensor_product"


class UnmitigableTermError(ValueError):
    """Raised if a suppression estimate is too small to divide by."""

    def __init__(self, term: PauliString, suppression: float, floor: float):
        self.term = term
        self.suppression = suppression
        self.floor = floor
        super().__init__(
            f"Suppression {suppression:.4g} of term {term.label} "
            f"is below the floor {floor:g}"
        )


def _moments(batches, strings: Sequence[PauliString], origin: str):
    """Means and covariance of the means of single-shot Pauli estimates.

    The batches are consumed once, so generators of batches are accepted.
    """
    num = len(strings)
    s1 = np.zeros(num)
    s2 = np.zeros((num, num))
    n = 0
    kind = None
    for b in batches:
        if b.origin != origin:
            raise ValueError(f"Expected {origin} batches, got a {b.origin} batch")
        if kind is None:
            kind = b.kind
        elif b.kind is not kind:
            raise ValueError(
                f"Batches mix sampler kinds {kind.value} and {b.kind.value}"
            )
        x = pauli_values(b.frames, b.outcomes, strings)
        s1 += x.sum(axis=0)
        s2 += x.T @ x
        n += len(x)
    if kind is None:
        raise ValueError("Cannot estimate from an empty list of batches")
    if n < 2:
        raise ValueError(f"At least two shots are required, got {n}")
    mean = s1 / n
    cov = (s2 - n * np.outer(mean, mean)) / (n - 1) / n
    return mean, cov, n, kind


# =========================================================================
# Noisy terms
# =========================================================================


@dataclass(frozen=True)
class NoisyTerms:
    """Noisy estimates of Pauli terms with the covariance of the estimates."""

    strings: Tuple[PauliString, ...]
    values: np.ndarray
    covariance: np.ndarray
    n_shots: int
    kind: SamplerKind

    def index(self, p: PauliString) -> int:
        try:
            return self.strings.index(p)
        except ValueError:
            raise ValueError(f"Term {p.label} was not estimated")

    def __getitem__(self, p: PauliString) -> Tuple[float, float]:
        """Value and standard error of a term."""
        i = self.index(p)
        return float(self.values[i]), float(np.sqrt(max(self.covariance[i, i], 0.0)))

    def __len__(self) -> int:
        return len(self.strings)


def estimate_noisy_terms(batches, terms: Iterable[PauliString]) -> NoisyTerms:
    """Estimates the noisy expectation values of Pauli terms from main batches.

    Parameters
    ----------
    batches : Sequence of ShotBatch
        Main batches of the measured state.
    terms : Iterable of PauliString
        The terms. Duplicates are estimated once.

    Returns
    -------
    terms : NoisyTerms
    """
    strings = tuple(dict.fromkeys(terms))
    sizes = {p.num_qubits for p in strings}
    if len(sizes) > 1:
        raise ValueError(f"Terms act on different qubit counts {sizes}")
    mean, cov, n, kind = _moments(batches, strings, "main")
    logger.debug("Estimated %d noisy terms from %d shots", len(strings), n)
    return NoisyTerms(strings, mean, cov, n, kind)


# =========================================================================
# Suppression factors
# =========================================================================


@dataclass(frozen=True)
class SuppressionTable:
    """Calibrated suppression factors.

    In ``per_mask`` mode the parameters are the suppression factors of the
    stored masks. In ``tensor_product`` mode they are the single-qubit
    factors and the suppression of a mask is their product over the masked
    qubits. The identity mask always has the exact suppression one.
    """

    mode: str
    num_qubits: int
    keys: Tuple
    values: np.ndarray
    covariance: np.ndarray
    n_shots: int
    kind: SamplerKind

    def __post_init__(self):
        if self.mode not in (PER_MASK, TENSOR_PRODUCT):
            raise ValueError(f"Unknown suppression mode '{self.mode}'")
        if self.n_shots < 1:
            raise ValueError("Suppression estimates need at least one shot")

    @property
    def stderr(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.covariance), 0.0, None))

    def gradient(self, mask: Mask) -> Tuple[float, np.ndarray]:
        """Suppression of a mask and its gradient with respect to the parameters."""
        if mask.num_qubits != self.num_qubits:
            raise ValueError(
                f"Mask on {mask.num_qubits} qubits does not match "
                f"table on {self.num_qubits}"
            )
        grad = np.zeros(len(self.keys))
        if mask.is_identity():
            return 1.0, grad
        if self.mode == PER_MASK:
            try:
                i = self.keys.index(mask)
            except ValueError:
                raise ValueError(f"Mask {mask.label} was not calibrated")
            grad[i] = 1.0
            return float(self.values[i]), grad
        positions = list()
        for q in mask.indices:
            if q not in self.keys:
                raise ValueError(f"Qubit {q} was not calibrated")
            positions.append(self.keys.index(q))
        factors = self.values[positions]
        for k, pos in enumerate(positions):
            grad[pos] = np.prod(np.delete(factors, k))
        return float(np.prod(factors)), grad

    def lookup(self, mask: Mask) -> Tuple[float, float]:
        """Suppression of a mask and its variance."""
        value, grad = self.gradient(mask)
        return value, float(grad @ self.covariance @ grad)

    def rows(self) -> List[Dict[str, float]]:
        out = list()
        for key, value, err in zip(self.keys, self.values, self.stderr):
            label = key.label if isinstance(key, Mask) else str(key)
            row = {"key": label, "suppression": float(value), "stderr": float(err)}
            out.append(row)
        return out


def _check_masks(masks: Iterable[Mask]):
    masks = [m for m in dict.fromkeys(masks) if not m.is_identity()]
    sizes = {m.num_qubits for m in masks}
    if len(sizes) > 1:
        raise ValueError(f"Masks act on different qubit counts {sizes}")
    return masks


def estimate_suppression(batches, masks: Iterable[Mask]) -> SuppressionTable:
    """Estimates the suppression factor of every distinct mask.

    The suppression of a mask is the mean of the single-shot estimator of
    its σ_z string on the calibration batches of the all-zeros state.

    Parameters
    ----------
    batches : Sequence of ShotBatch
        Calibration batches.
    masks : Iterable of Mask
        The masks to calibrate. Duplicates and the identity are skipped.

    Returns
    -------
    table : SuppressionTable
    """
    batches = list(batches)
    masks = _check_masks(masks)
    num_qubits = batches[0].num_qubits if batches else 0
    for m in masks:
        if m.num_qubits != num_qubits:
            raise ValueError(
                f"Mask {m.label} does not match {num_qubits} calibrated qubits"
            )
    mean, cov, n, kind = _moments(batches, [m.z_string() for m in masks], "calibration")
    for m, v in zip(masks, mean):
        if v < 0:
            logger.warning("Negative suppression estimate %.4f for mask %s", v, m.label)
    logger.debug("Calibrated %d masks from %d shots", len(masks), n)
    return SuppressionTable(PER_MASK, num_qubits, tuple(masks), mean, cov, n, kind)


def estimate_suppression_tensor(
    batches, qubits: Optional[Iterable[int]] = None
) -> SuppressionTable:
    """Estimates single-qubit suppression factors for tensor-product mitigation.

    Parameters
    ----------
    batches : Sequence of ShotBatch
        Calibration batches.
    qubits : Iterable of int, optional
        The calibrated qubits. Defaults to all qubits.

    Returns
    -------
    table : SuppressionTable
    """
    batches = list(batches)
    num_qubits = batches[0].num_qubits if batches else 0
    if qubits is None:
        qubits = tuple(range(num_qubits))
    else:
        qubits = tuple(dict.fromkeys(int(q) for q in qubits))
    for q in qubits:
        if not 0 <= q < num_qubits:
            raise ValueError(f"Qubit {q} out of range for {num_qubits} qubits")
    strings = [PauliString.single(num_qubits, q, "Z") for q in qubits]
    mean, cov, n, kind = _moments(batches, strings, "calibration")
    return SuppressionTable(TENSOR_PRODUCT, num_qubits, qubits, mean, cov, n, kind)


# =========================================================================
# Mitigation
# =========================================================================


def ratio_variance(f_noisy: Tuple[float, float], f_supp: Tuple[float, float]) -> float:
    """Second order variance of the ratio of two independent estimates.

    Parameters
    ----------
    f_noisy : (float, float)
        Value and variance of the noisy term.
    f_supp : (float, float)
        Value and variance of the suppression factor.

    Returns
    -------
    var : float
    """
    n, var_n = f_noisy
    s, var_s = f_supp
    if s == 0:
        raise ValueError("Suppression factor must be non-zero")
    return var_n / s**2 + n**2 * var_s / s**4


@dataclass(frozen=True)
class MitigatedTerm:
    term: PauliString
    coeff: float
    raw: float
    raw_stderr: float
    suppression: float
    suppression_stderr: float
    value: float
    stderr: float


@dataclass(frozen=True)
class MitigationResult:
    """Mitigated terms and the mitigated observable.

    ``budget`` holds the main shots, the calibration shots and their ratio.
    """

    terms: Tuple[MitigatedTerm, ...]
    value: float
    stderr: float
    raw_value: float
    raw_stderr: float
    table: SuppressionTable
    budget: Tuple[int, int, float]

    def __getitem__(self, p: PauliString) -> Tuple[float, float]:
        for t in self.terms:
            if t.term == p:
                return t.value, t.stderr
        raise KeyError(p)

    def rows(self) -> List[Dict[str, object]]:
        return [
            {
                "term": t.term.label,
                "raw": t.raw,
                "suppression": t.suppression,
                "mitigated": t.value,
                "stderr": t.stderr,
            }
            for t in self.terms
        ]

    def summary(self) -> Dict[str, object]:
        n_main, n_cal, b = self.budget
        return {
            "value": self.value,
            "stderr": self.stderr,
            "raw_value": self.raw_value,
            "raw_stderr": self.raw_stderr,
            "mode": self.table.mode,
            "n_main": n_main,
            "n_calibration": n_cal,
            "b": b,
        }


def mitigate(
    noisy: NoisyTerms,
    table: SuppressionTable,
    obs: Observable,
    floor: float = DEFAULT_FLOOR,
) -> MitigationResult:
    """Divides every noisy term by the suppression factor of its mask.

    The error of the observable is propagated to first order through the
    covariance of the noisy terms and the covariance of the calibrated
    suppression parameters, which are independent of each other.

    Parameters
    ----------
    noisy : NoisyTerms
        The noisy term estimates. Must contain every term of ``obs``.
    table : SuppressionTable
        The calibrated suppression factors.
    obs : Observable
        The observable.
    floor : float, optional
        Minimal magnitude of a suppression factor.

    Raises
    ------
    UnmitigableTermError
        If a suppression factor is smaller than the floor in magnitude.
    """
    if isinstance(obs, PauliString):
        obs = Observable.from_pauli(obs)
    rows = list()
    grad_n = np.zeros(len(noisy))
    grad_s = np.zeros(len(table.keys))
    raw_total = 0.0
    total = 0.0
    for p, c in obs.items():
        i = noisy.index(p)
        n = float(noisy.values[i])
        var_n = float(noisy.covariance[i, i])
        s, ds = table.gradient(Mask.from_pauli(p))
        var_s = float(ds @ table.covariance @ ds)
        if abs(s) < floor:
            raise UnmitigableTermError(p, s, floor)
        if s < 0:
            logger.warning("Dividing term %s by negative suppression %.4f", p.label, s)
        value = n / s
        stderr = math.sqrt(max(ratio_variance((n, var_n), (s, var_s)), 0.0))
        err_n = math.sqrt(max(var_n, 0.0))
        err_s = math.sqrt(max(var_s, 0.0))
        rows.append(MitigatedTerm(p, c, n, err_n, s, err_s, value, stderr))
        total += c * value
        raw_total += c * n
        grad_n[i] += c / s
        grad_s -= c * n / s**2 * ds
    raw_grad = np.zeros(len(noisy))
    for p, c in obs.items():
        raw_grad[noisy.index(p)] += c
    var = grad_n @ noisy.covariance @ grad_n + grad_s @ table.covariance @ grad_s
    raw_var = raw_grad @ noisy.covariance @ raw_grad
    budget = (noisy.n_shots, table.n_shots, table.n_shots / noisy.n_shots)
    logger.info("Mitigated %d terms: %.6f (raw %.6f)", len(rows), total, raw_total)
    return MitigationResult(
        tuple(rows),
        float(total),
        math.sqrt(max(float(var), 0.0)),
        float(raw_total),
        math.sqrt(max(float(raw_var), 0.0)),
        table,
        budget,
    )


# =========================================================================
# Shot budget
# =========================================================================


def _seminorm(obs: Observable, kind: SamplerKind) -> float:
    kind = SamplerKind.parse(kind)
    if kind is SamplerKind.POLE_CONCENTRATED:
        return seminorm_pole(obs)
    if kind is SamplerKind.DIRECT:
        return seminorm_direct(obs)
    return seminorm_spherical(obs)


def optimal_shot_ratio(
    p: PauliString,
    expected: float = 1.0,
    kind: SamplerKind = SamplerKind.SPHERICAL,
    minimum: float = 0.0,
) -> float:
    """Ratio ``b = N_c / N_ρ`` minimizing the total shots of a term.

    ``b = expected² ‖M‖² / ‖P‖²`` with the seminorm of the sampler kind,
    where ``M`` is the σ_z string of the mask of ``p``. The result is
    clamped from below at ``minimum``.
    """
    if abs(expected) > 1:
        raise ValueError(f"Expected value must be in [-1, 1], got {expected}")
    norm_p = _seminorm(Observable.from_pauli(p), kind)
    if norm_p == 0:
        return float(minimum)
    norm_m = _seminorm(Observable.from_pauli(Mask.from_pauli(p).z_string()), kind)
    return max(expected**2 * norm_m**2 / norm_p**2, float(minimum))


def total_shots(
    epsilon: float,
    p: PauliString,
    suppression: float,
    b: float = 0.0,
    kind: SamplerKind = SamplerKind.SPHERICAL,
) -> int:
    """Total shots ``N_ρ + N_c`` reaching the standard error ``epsilon``.

    ``N = 2 ‖P‖² (1 + b) / (ε² s²)``, rounded up.
    """
    if epsilon <= 0:
        raise ValueError(f"Target error must be positive, got {epsilon}")
    if suppression == 0:
        raise ValueError("Suppression factor must be non-zero")
    norm_sq = _seminorm(Observable.from_pauli(p), kind) ** 2
    n = 2 * norm_sq * (1 + b) / (epsilon**2 * suppression**2)
    # Guards against floating point noise right above an integer
    return int(math.ceil(n * (1 - 1e-12)))


def shot_split(n_total: int, b: float) -> Tuple[int, int]:
    """Splits a shot budget into ``(N_ρ, N_c)`` with ``N_c ≈ b N_ρ``."""
    if n_total < 1:
        raise ValueError(f"Shot budget must be positive, got {n_total}")
    if b < 0:
        raise ValueError(f"Shot ratio must be non-negative, got {b}")
    n_main = int(math.ceil(n_total / (1 + b)))
    return n_main, n_total - n_main
