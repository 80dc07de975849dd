# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Base objects for readout error models."""

import json
import numpy as np
from abc import ABC, abstractmethod
from collections import OrderedDict
from collections.abc import MutableMapping
from typing import Any, Dict, Iterator, Optional
from ..channels import ClassicalChannel, QuantumChannel


class Parameters(MutableMapping):
    """Mapping of named parameters with attribute access.

    Base of the readout models and the experiment configuration. Only keys
    present at construction are routed to the mapping by attribute access.
    """

    def __init__(self, **params):
        MutableMapping.__init__(self)
        self.__params__ = OrderedDict(params)

    @property
    def params(self) -> Dict[str, Any]:
        """dict: The underlying parameter dictionary."""
        return self.__params__

    def __len__(self) -> int:
        return len(self.__params__)

    def __getitem__(self, key: str) -> Any:
        return self.__params__[key]

    def __setitem__(self, key: str, value: Any) -> None:
        self.__params__[key] = value

    def __delitem__(self, key: str) -> None:
        del self.__params__[key]

    def __iter__(self) -> Iterator[str]:
        return iter(self.__params__)

    def __getattr__(self, key: str) -> Any:
        key = str(key)
        if not key.startswith("__") and key in self.__params__.keys():
            return self.__params__[key]
        else:
            return super().__getattribute__(key)

    def __setattr__(self, key: str, value: Any) -> None:
        key = str(key)
        if not key.startswith("__") and key in self.__params__.keys():
            self.__params__[key] = value
        else:
            super().__setattr__(key, value)

    def json(self, **kwargs) -> str:
        return json.dumps(self.__params__, **kwargs)

    def pformat(self) -> str:
        return ", ".join([f"{k}={v}" for k, v in self.__params__.items()])

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({str(dict(self.__params__))})"

    def __str__(self) -> str:
        return self.pformat()


class AbstractReadoutModel(Parameters, ABC):
    """Abstract base class for readout error models.

    A readout model describes the error process acting on the measured
    register after the pre-measurement rotations. Classical models act on the
    sampled bits and are described by a column stochastic transition matrix
    ``T[b', b]``.
    """

    name = "abstract"
    is_classical = True

    def __init__(self, **params):
        Parameters.__init__(self, **params)
        ABC.__init__(self)

    def __str__(self) -> str:
        return f"{self.__class__.__name__}({Parameters.__str__(self)})"

    def spec(self) -> Dict[str, Any]:
        """The config-file description ``{"type": name, **params}`` of the model."""
        spec = {"type": self.name}
        spec.update(_plain(self.params))
        return spec

    def validate(self, num_qubits: int) -> None:
        """Raises a ``ValueError`` if the model does not fit ``num_qubits``."""
        self.transition_matrix(num_qubits)

    @abstractmethod
    def transition_matrix(self, num_qubits: int) -> np.ndarray:
        """The ``2^Q x 2^Q`` column stochastic matrix of the readout populations."""
        pass

    def channel(self, num_qubits: int) -> QuantumChannel:
        """The model as a quantum channel on the measured register."""
        return ClassicalChannel(self.transition_matrix(num_qubits))

    def rotations(self, num_qubits: int) -> Optional[np.ndarray]:
        """Per-qubit ``(Q, 2, 2)`` unitaries if the error is a local rotation."""
        return None

    def apply_bits(self, bits: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        """Applies the classical error process to sampled bits.

        The default implementation samples from the columns of the full
        transition matrix.

        Parameters
        ----------
        bits : (n, Q) np.ndarray
            Error free bits, qubit 0 first.
        rng : np.random.Generator
            Generator used for the error draws.

        Returns
        -------
        bits : (n, Q) np.ndarray of np.uint8
        """
        bits = np.asarray(bits, dtype=np.uint8)
        num_shots, num_qubits = bits.shape
        t = self.transition_matrix(num_qubits)
        cdf = np.cumsum(t, axis=0)
        weights = 1 << np.arange(num_qubits - 1, -1, -1)
        index = bits.astype(np.int64) @ weights
        u = rng.random(num_shots)
        out = np.sum(u[:, np.newaxis] >= cdf[:, index].T, axis=1)
        out = np.minimum(out, 2**num_qubits - 1)
        shifts = num_qubits - 1 - np.arange(num_qubits)
        return ((out[:, np.newaxis] >> shifts) & 1).astype(np.uint8)

    def drifted(self, t: float, rate: float) -> "AbstractReadoutModel":
        """Returns a copy with error probabilities scaled by ``1 + rate * t``."""
        if rate == 0:
            return self
        return self._scaled(1 + rate * t)

    def _scaled(self, factor: float) -> "AbstractReadoutModel":
        raise ValueError(f"Model '{self.name}' does not support drift")


def _plain(value):
    """Converts numpy containers into JSON serializable objects."""
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return value
