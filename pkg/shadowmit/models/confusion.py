# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Confusion (transition) matrix readout model."""

import numpy as np
from ..collection import kron
from .abc import AbstractReadoutModel
from .flip import asymmetric_flips, asymmetric_transition


def _check_stochastic(t: np.ndarray, atol: float = 1e-9) -> np.ndarray:
    if np.any(t < -atol) or np.any(t > 1 + atol):
        raise ValueError("Confusion matrix entries must be in [0, 1]")
    if not np.allclose(t.sum(axis=0), 1.0, rtol=0.0, atol=atol):
        raise ValueError("Confusion matrix columns must sum to one")
    return t


class ConfusionReadout(AbstractReadoutModel):
    """Readout described by a column stochastic confusion matrix.

    Either a full ``2^Q x 2^Q`` matrix or local ``2 x 2`` matrices are given.
    ``T[b', b]`` is the probability of reading ``b'`` for the true outcome
    ``b``. Local matrices act independently on every qubit.

    Parameters
    ----------
    matrix : (2^Q, 2^Q) array_like, optional
        The full transition matrix.
    local : (2, 2) or (Q, 2, 2) array_like, optional
        One matrix for all qubits or one matrix per qubit.
    """

    name = "confusion"

    def __init__(self, matrix=None, local=None):
        if (matrix is None) == (local is None):
            raise ValueError("Give exactly one of a full or local confusion matrix")
        if matrix is not None:
            matrix = _check_stochastic(np.asarray(matrix, dtype=np.float64)).tolist()
            super().__init__(matrix=matrix)
        else:
            arr = np.asarray(local, dtype=np.float64)
            if arr.shape[-2:] != (2, 2) or arr.ndim not in (2, 3):
                raise ValueError(
                    f"Local confusion matrices must be 2x2, got {arr.shape}"
                )
            for t in arr.reshape(-1, 2, 2):
                _check_stochastic(t)
            super().__init__(local=arr.tolist())

    @classmethod
    def from_rates(cls, p01, p10) -> "ConfusionReadout":
        """Local model with ``T = [[1 - p01, p10], [p01, 1 - p10]]`` per qubit."""
        p01 = np.atleast_1d(p01).astype(np.float64)
        p10 = np.atleast_1d(p10).astype(np.float64)
        p01, p10 = np.broadcast_arrays(p01, p10)
        local = [asymmetric_transition(a, b) for a, b in zip(p01, p10)]
        return cls(local=local[0] if len(local) == 1 else local)

    def local_matrices(self, num_qubits: int) -> np.ndarray:
        arr = np.asarray(self.local, dtype=np.float64)
        if arr.ndim == 2:
            return np.broadcast_to(arr, (num_qubits, 2, 2))
        if arr.shape[0] != num_qubits:
            raise ValueError(
                f"Expected {num_qubits} local confusion matrices, got {arr.shape[0]}"
            )
        return arr

    def validate(self, num_qubits: int) -> None:
        if "matrix" in self:
            self.transition_matrix(num_qubits)
        else:
            self.local_matrices(num_qubits)

    def transition_matrix(self, num_qubits: int) -> np.ndarray:
        if "matrix" in self:
            t = np.asarray(self.matrix, dtype=np.float64)
            if t.shape != (2**num_qubits, 2**num_qubits):
                raise ValueError(
                    f"Confusion matrix of shape {t.shape} does not fit "
                    f"{num_qubits} qubits"
                )
            return t
        return kron(list(self.local_matrices(num_qubits)))

    def apply_bits(self, bits, rng):
        if "matrix" in self:
            return super().apply_bits(bits, rng)
        bits = np.asarray(bits, dtype=np.uint8)
        local = self.local_matrices(bits.shape[1])
        return asymmetric_flips(bits, local[:, 1, 0], local[:, 0, 1], rng)

    def _scaled(self, factor):
        if "matrix" in self:
            t = np.asarray(self.matrix, dtype=np.float64)
            off = t * factor
            np.fill_diagonal(off, 0.0)
            out = off + np.diag(1 - off.sum(axis=0))
            return ConfusionReadout(matrix=out)
        local = np.asarray(self.local, dtype=np.float64)
        p01 = local[..., 1, 0] * factor
        p10 = local[..., 0, 1] * factor
        if local.ndim == 2:
            return ConfusionReadout(local=asymmetric_transition(p01, p10))
        return ConfusionReadout.from_rates(p01, p10)
