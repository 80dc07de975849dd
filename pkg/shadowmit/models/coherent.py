# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Readout models that are not classical maps on the measured bits."""

import numpy as np
from typing import Optional
from ..collection import kron, rotation
from ..channels import QuantumChannel, unitary_channel
from .abc import AbstractReadoutModel
from .flip import _scale

_AXES = {"x": (1, 0, 0), "y": (0, 1, 0), "z": (0, 0, 1)}


class CoherentRotation(AbstractReadoutModel):
    """Unwanted single-qubit rotation right before the measurement.

    Parameters
    ----------
    angles : float or Sequence of float
        The rotation angle of all qubits or one angle per qubit.
    axis : {"x", "y", "z"}, optional
        The rotation axis. The default is ``"x"``.
    """

    name = "coherent"
    is_classical = False

    def __init__(self, angles=0.0, axis: str = "x"):
        if axis not in _AXES:
            raise ValueError(
                f"Rotation axis must be one of {list(_AXES)}, got '{axis}'"
            )
        super().__init__(angles=angles, axis=axis)

    def angle_array(self, num_qubits: int) -> np.ndarray:
        arr = np.atleast_1d(np.asarray(self.angles, dtype=np.float64))
        if arr.size == 1:
            arr = np.full(num_qubits, arr[0])
        if arr.shape != (num_qubits,):
            raise ValueError(f"Expected {num_qubits} rotation angles, got {arr.size}")
        return arr

    def rotations(self, num_qubits: int) -> Optional[np.ndarray]:
        axis = _AXES[self.axis]
        return np.array([rotation(axis, a) for a in self.angle_array(num_qubits)])

    def validate(self, num_qubits: int) -> None:
        self.angle_array(num_qubits)

    def transition_matrix(self, num_qubits: int) -> np.ndarray:
        return kron([np.abs(r) ** 2 for r in self.rotations(num_qubits)])

    def channel(self, num_qubits: int) -> QuantumChannel:
        return unitary_channel(kron(list(self.rotations(num_qubits))))

    def apply_bits(self, bits, rng):
        raise ValueError("Coherent readout errors cannot act on sampled bits")

    def _scaled(self, factor):
        return CoherentRotation(_scale(self.angles, factor), self.axis)


class ChannelReadout(AbstractReadoutModel):
    """Readout error given by an arbitrary quantum channel.

    Parameters
    ----------
    channel : QuantumChannel
        The channel acting on the full measured register.
    """

    name = "channel"
    is_classical = False

    def __init__(self, channel: QuantumChannel):
        super().__init__(num_qubits=channel.num_qubits)
        self._channel = channel

    def _check(self, num_qubits: int) -> None:
        if num_qubits != self._channel.num_qubits:
            raise ValueError(
                f"Channel on {self._channel.num_qubits} qubits does not fit "
                f"{num_qubits} qubits"
            )

    def validate(self, num_qubits: int) -> None:
        self._check(num_qubits)

    def transition_matrix(self, num_qubits: int) -> np.ndarray:
        self._check(num_qubits)
        dim = 2**num_qubits
        basis = np.zeros((dim, dim, dim), dtype=np.complex128)
        basis[np.arange(dim), np.arange(dim), np.arange(dim)] = 1
        images = self._channel(basis)
        return np.real(np.diagonal(images, axis1=1, axis2=2)).T

    def channel(self, num_qubits: int) -> QuantumChannel:
        self._check(num_qubits)
        return self._channel

    def apply_bits(self, bits, rng):
        raise ValueError("Channel readout errors cannot act on sampled bits")
