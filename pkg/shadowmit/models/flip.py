# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Classical bit-flip readout error models."""

import logging
import numpy as np
from typing import Sequence, Tuple, Union
from ..collection import kron
from ..channels import (
    MAX_CLASSICAL_KRAUS_QUBITS,
    ClassicalChannel,
    QuantumChannel,
    bit_flip,
    identity_channel,
    tensor_channels,
)
from .abc import AbstractReadoutModel

logger = logging.getLogger(__name__)

Rates = Union[float, Sequence[float]]


def per_qubit(values: Rates, num_qubits: int, name: str = "p") -> np.ndarray:
    """Broadcasts a scalar or checks a per-qubit list of probabilities."""
    arr = np.atleast_1d(np.asarray(values, dtype=np.float64))
    if arr.size == 1:
        arr = np.full(num_qubits, arr[0])
    if arr.shape != (num_qubits,):
        raise ValueError(f"Expected {num_qubits} values of {name}, got {arr.size}")
    if np.any(arr < 0) or np.any(arr > 1):
        raise ValueError(f"Probabilities {name} must be in [0, 1], got {arr.tolist()}")
    return arr


def _scale(values: Rates, factor: float):
    if np.ndim(values) == 0:
        return float(values) * factor
    return [float(v) * factor for v in values]


def asymmetric_flips(
    bits: np.ndarray, p01: np.ndarray, p10: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Flips ``0 -> 1`` with ``p01`` and ``1 -> 0`` with ``p10`` per qubit."""
    prob = np.where(bits == 0, p01[np.newaxis, :], p10[np.newaxis, :])
    flips = rng.random(bits.shape) < prob
    return (bits ^ flips).astype(np.uint8)


def asymmetric_transition(p01: float, p10: float) -> np.ndarray:
    return np.array([[1 - p01, p10], [p01, 1 - p10]])


class NoReadoutError(AbstractReadoutModel):
    """Noiseless readout."""

    name = "none"

    def __init__(self):
        super().__init__()

    def validate(self, num_qubits: int) -> None:
        pass

    def transition_matrix(self, num_qubits: int) -> np.ndarray:
        return np.eye(2**num_qubits)

    def channel(self, num_qubits: int) -> QuantumChannel:
        return identity_channel(num_qubits)

    def apply_bits(self, bits, rng):
        return np.asarray(bits, dtype=np.uint8)

    def drifted(self, t, rate):
        return self


class TensorFlip(AbstractReadoutModel):
    """Independent symmetric bit flips with probability ``p_j`` on qubit ``j``.

    Parameters
    ----------
    p : float or Sequence of float
        The flip probability of all qubits or one probability per qubit.
    """

    name = "tensor_flip"

    def __init__(self, p: Rates = 0.0):
        super().__init__(p=p)

    def probabilities(self, num_qubits: int) -> np.ndarray:
        return per_qubit(self.p, num_qubits, "p")

    def validate(self, num_qubits: int) -> None:
        self.probabilities(num_qubits)

    def transition_matrix(self, num_qubits: int) -> np.ndarray:
        probs = self.probabilities(num_qubits)
        return kron([asymmetric_transition(p, p) for p in probs])

    def channel(self, num_qubits: int) -> QuantumChannel:
        probs = self.probabilities(num_qubits)
        if num_qubits > MAX_CLASSICAL_KRAUS_QUBITS - 1:
            # Identical readout statistics without the 2^Q Kraus operators
            logger.debug("Using classical channel for %d flip qubits", num_qubits)
            return ClassicalChannel(self.transition_matrix(num_qubits))
        return tensor_channels(*[bit_flip(p) for p in probs])

    def apply_bits(self, bits, rng):
        bits = np.asarray(bits, dtype=np.uint8)
        probs = self.probabilities(bits.shape[1])
        return asymmetric_flips(bits, probs, probs, rng)

    def _scaled(self, factor):
        return TensorFlip(_scale(self.p, factor))


class CorrelatedFlip(AbstractReadoutModel):
    """Joint flip of a qubit pair followed by asymmetric single-qubit flips.

    With probability ``q`` both bits of ``pair`` are flipped together, then
    every qubit flips ``0 -> 1`` with ``p01`` and ``1 -> 0`` with ``p10``.
    The model is a classical stochastic map and therefore CPTP.

    Parameters
    ----------
    pair : (int, int)
        The correlated qubits.
    q : float
        The joint flip probability.
    p01 : float or Sequence of float, optional
        Probability of reading ``1`` for a ``0``.
    p10 : float or Sequence of float, optional
        Probability of reading ``0`` for a ``1``.
    """

    name = "correlated_flip"

    def __init__(
        self, pair: Tuple[int, int] = (0, 1), q: float = 0.0, p01=0.0, p10=0.0
    ):
        pair = [int(pair[0]), int(pair[1])]
        if pair[0] == pair[1]:
            raise ValueError(f"Correlated pair needs two distinct qubits, got {pair}")
        if not 0 <= q <= 1:
            raise ValueError(f"Joint flip probability must be in [0, 1], got {q}")
        super().__init__(pair=pair, q=float(q), p01=p01, p10=p10)

    def _check_pair(self, num_qubits: int) -> None:
        if max(self.pair) >= num_qubits or min(self.pair) < 0:
            raise ValueError(f"Pair {self.pair} out of range for {num_qubits} qubits")

    def validate(self, num_qubits: int) -> None:
        self._check_pair(num_qubits)
        per_qubit(self.p01, num_qubits, "p01")
        per_qubit(self.p10, num_qubits, "p10")

    def transition_matrix(self, num_qubits: int) -> np.ndarray:
        self._check_pair(num_qubits)
        p01 = per_qubit(self.p01, num_qubits, "p01")
        p10 = per_qubit(self.p10, num_qubits, "p10")
        local = kron([asymmetric_transition(a, b) for a, b in zip(p01, p10)])
        dim = 2**num_qubits
        j, k = self.pair
        flip = (1 << (num_qubits - 1 - j)) | (1 << (num_qubits - 1 - k))
        idx = np.arange(dim)
        joint = (1 - self.q) * np.eye(dim)
        joint[idx ^ flip, idx] += self.q
        return local @ joint

    def apply_bits(self, bits, rng):
        bits = np.array(bits, dtype=np.uint8)
        num_shots, num_qubits = bits.shape
        self._check_pair(num_qubits)
        joint = rng.random(num_shots) < self.q
        j, k = self.pair
        bits[:, j] ^= joint.astype(np.uint8)
        bits[:, k] ^= joint.astype(np.uint8)
        p01 = per_qubit(self.p01, num_qubits, "p01")
        p10 = per_qubit(self.p10, num_qubits, "p10")
        return asymmetric_flips(bits, p01, p10, rng)

    def _scaled(self, factor):
        return CorrelatedFlip(
            self.pair,
            self.q * factor,
            _scale(self.p01, factor),
            _scale(self.p10, factor),
        )


class AsymmetricCorrelatedFlip(AbstractReadoutModel):
    """Correlated pair flips whose correlation depends on the read bits.

    Both qubits of ``pair`` flip with probability ``p``. The covariance of the
    two flips is ``+c`` if the error free bits of the pair agree and ``-c``
    if they differ, so the joint error probabilities are ::

        P(11) = p² + σc,  P(00) = (1-p)² + σc,  P(01) = P(10) = p(1-p) - σc

    with ``σ = (-1)^(x_j + x_k)``. Reading ``|0...0>`` directly gives
    correlated bits, but the flip statistics averaged over all inputs are a
    product and the suppression factors factorize over the qubits. Asymmetric
    single-qubit flips ``p01``/``p10`` follow on every qubit.

    Parameters
    ----------
    pair : (int, int)
        The correlated qubits.
    p : float
        The flip probability of each qubit of the pair.
    c : float
        The flip covariance, ``|c| <= min(p², (1-p)², p(1-p))``.
    p01 : float or Sequence of float, optional
        Probability of reading ``1`` for a ``0``.
    p10 : float or Sequence of float, optional
        Probability of reading ``0`` for a ``1``.
    """

    name = "asymmetric_correlated_flip"

    def __init__(
        self,
        pair: Tuple[int, int] = (0, 1),
        p: float = 0.0,
        c: float = 0.0,
        p01=0.0,
        p10=0.0,
    ):
        pair = [int(pair[0]), int(pair[1])]
        if pair[0] == pair[1]:
            raise ValueError(f"Correlated pair needs two distinct qubits, got {pair}")
        if not 0 <= p <= 1:
            raise ValueError(f"Flip probability must be in [0, 1], got {p}")
        limit = min(p**2, (1 - p) ** 2, p * (1 - p))
        if abs(c) > limit + 1e-15:
            raise ValueError(f"Flip covariance {c} exceeds the limit {limit} of p={p}")
        super().__init__(pair=pair, p=float(p), c=float(c), p01=p01, p10=p10)

    def _check_pair(self, num_qubits: int) -> None:
        if max(self.pair) >= num_qubits or min(self.pair) < 0:
            raise ValueError(f"Pair {self.pair} out of range for {num_qubits} qubits")

    def validate(self, num_qubits: int) -> None:
        self._check_pair(num_qubits)
        per_qubit(self.p01, num_qubits, "p01")
        per_qubit(self.p10, num_qubits, "p10")

    def pair_errors(self, sign) -> np.ndarray:
        """Probabilities of the pair errors ``00, 01, 10, 11`` for input sign σ."""
        p, c = self.p, self.c
        sign = np.asarray(sign, dtype=np.float64)[..., np.newaxis]
        base = np.array([(1 - p) ** 2, p * (1 - p), p * (1 - p), p**2])
        return base + sign * c * np.array([1.0, -1.0, -1.0, 1.0])

    def transition_matrix(self, num_qubits: int) -> np.ndarray:
        self._check_pair(num_qubits)
        p01 = per_qubit(self.p01, num_qubits, "p01")
        p10 = per_qubit(self.p10, num_qubits, "p10")
        local = kron([asymmetric_transition(a, b) for a, b in zip(p01, p10)])
        dim = 2**num_qubits
        j, k = self.pair
        shift_j, shift_k = num_qubits - 1 - j, num_qubits - 1 - k
        idx = np.arange(dim)
        sign = 1 - 2 * (((idx >> shift_j) ^ (idx >> shift_k)) & 1)
        probs = self.pair_errors(sign)
        joint = np.zeros((dim, dim))
        for e in range(4):
            flip = ((e >> 1) << shift_j) | ((e & 1) << shift_k)
            joint[idx ^ flip, idx] += probs[:, e]
        return local @ joint

    def apply_bits(self, bits, rng):
        bits = np.array(bits, dtype=np.uint8)
        num_shots, num_qubits = bits.shape
        self._check_pair(num_qubits)
        j, k = self.pair
        sign = 1 - 2 * (bits[:, j] ^ bits[:, k]).astype(np.int64)
        cdf = np.cumsum(self.pair_errors(sign), axis=1)
        u = rng.random(num_shots)
        e = np.minimum(np.sum(u[:, np.newaxis] >= cdf, axis=1), 3)
        bits[:, j] ^= (e >> 1).astype(np.uint8)
        bits[:, k] ^= (e & 1).astype(np.uint8)
        p01 = per_qubit(self.p01, num_qubits, "p01")
        p10 = per_qubit(self.p10, num_qubits, "p10")
        return asymmetric_flips(bits, p01, p10, rng)

    def _scaled(self, factor):
        return AsymmetricCorrelatedFlip(
            self.pair,
            self.p * factor,
            self.c * factor**2,
            _scale(self.p01, factor),
            _scale(self.p10, factor),
        )
