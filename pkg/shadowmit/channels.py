# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Quantum channels, measurement masks and readout suppression factors."""

import itertools
import logging
import numpy as np
from typing import Iterable, Optional, Sequence, Tuple
from .collection import PAULI_STACK, haar_unitary, kron, sigi, sigx, sigy, sigz
from .pauli import DensityMatrix, PauliString, pauli_coefficients, pauli_matrix

__all__ = [
    "MAX_PTM_QUBITS",
    "Mask",
    "QuantumChannel",
    "ClassicalChannel",
    "identity_channel",
    "bit_flip",
    "phase_flip",
    "depolarizing",
    "amplitude_damping",
    "pauli_channel",
    "pauli_channel_from_ptm",
    "unitary_channel",
    "random_channel",
    "tensor_channels",
    "twirl",
    "apply",
    "ptm",
    "ptm_element",
    "mask_signs",
    "mask_operator",
    "suppression_factor",
    "twirled_suppression",
    "product_suppression",
    "as_channel",
]

logger = logging.getLogger(__name__)

MAX_PTM_QUBITS = 6
MAX_CLASSICAL_KRAUS_QUBITS = 5


def _check_probability(p: float, name: str = "p") -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Probability {name} must be in [0, 1], got {p}")
    return p


# =========================================================================
# Masks
# =========================================================================


class Mask:
    """Positions of the non-identity factors of a Pauli string.

    The mask defines the diagonal observable ``M = ⊗ (I or σ_z)`` that is
    physically measured for the string in the absence of readout errors.

    Parameters
    ----------
    bits : Sequence of bool or str
        One flag per qubit, or a string of ``0``/``1`` characters.
    """

    __slots__ = ("_bits",)

    def __init__(self, bits):
        if isinstance(bits, str):
            if set(bits) - {"0", "1"}:
                raise ValueError(f"Invalid mask string '{bits}'")
            bits = [c == "1" for c in bits]
        bits = tuple(bool(b) for b in bits)
        if len(bits) < 1:
            raise ValueError("A mask needs at least one qubit")
        self._bits = bits

    @classmethod
    def from_pauli(cls, p: PauliString) -> "Mask":
        return cls([i != 0 for i in p.labels])

    @classmethod
    def from_indices(cls, num_qubits: int, indices: Iterable[int]) -> "Mask":
        bits = [False] * num_qubits
        for j in indices:
            bits[j] = True
        return cls(bits)

    @property
    def bits(self) -> Tuple[bool, ...]:
        return self._bits

    @property
    def num_qubits(self) -> int:
        return len(self._bits)

    @property
    def indices(self) -> Tuple[int, ...]:
        return tuple(j for j, b in enumerate(self._bits) if b)

    @property
    def label(self) -> str:
        return "".join("1" if b else "0" for b in self._bits)

    def weight(self) -> int:
        return sum(self._bits)

    def is_identity(self) -> bool:
        return not any(self._bits)

    def z_string(self) -> PauliString:
        """The Pauli string with σ_z on every masked qubit."""
        return PauliString.z_on(self._bits)

    def __eq__(self, other) -> bool:
        if isinstance(other, Mask):
            return self._bits == other._bits
        return NotImplemented

    def __lt__(self, other: "Mask") -> bool:
        return self._bits < other._bits

    def __hash__(self) -> int:
        return hash(("mask", self._bits))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}('{self.label}')"


def mask_signs(mask: Mask) -> np.ndarray:
    """The diagonal ``±1`` entries of the mask operator."""
    num_qubits = mask.num_qubits
    idx = np.arange(2**num_qubits)
    parity = np.zeros_like(idx)
    for j in mask.indices:
        parity ^= (idx >> (num_qubits - 1 - j)) & 1
    return (1 - 2 * parity).astype(np.float64)


def mask_operator(mask: Mask) -> np.ndarray:
    """Returns the diagonal operator ``⊗_j (I if not mask_j else σ_z)``.

    Examples
    --------
    >>> mask_operator(Mask([True, True])).real
    array([[ 1.,  0.,  0.,  0.],
           [ 0., -1.,  0.,  0.],
           [ 0.,  0., -1.,  0.],
           [ 0.,  0.,  0.,  1.]])
    """
    return np.diag(mask_signs(mask)).astype(np.complex128)


# =========================================================================
# Channels
# =========================================================================


class QuantumChannel:
    """Completely positive, trace preserving map in Kraus form.

    Parameters
    ----------
    kraus_ops : Sequence of (2^q, 2^q) array_like
        The Kraus operators ``K_k`` with ``Σ K_k† K_k = I``.
    atol : float, optional
        Tolerance of the trace preservation check.
    """

    def __init__(self, kraus_ops, atol: float = 1e-9):
        kraus = np.array([np.asarray(k, dtype=np.complex128) for k in kraus_ops])
        if kraus.ndim != 3 or kraus.shape[0] < 1 or kraus.shape[1] != kraus.shape[2]:
            raise ValueError("Expected square Kraus operators of equal size")
        dim = kraus.shape[1]
        num_qubits = int(round(np.log2(dim)))
        if 2**num_qubits != dim:
            raise ValueError(f"Kraus dimension {dim} is not a power of two")
        total = np.einsum("kji,kjl->il", kraus.conj(), kraus)
        if not np.allclose(total, np.eye(dim), rtol=0.0, atol=atol):
            raise ValueError("Kraus operators are not trace preserving")
        kraus.setflags(write=False)
        self._kraus = kraus
        self._num_qubits = num_qubits

    @property
    def kraus(self) -> np.ndarray:
        """The stacked ``(rank, 2^q, 2^q)`` Kraus operators."""
        return self._kraus

    @property
    def kraus_ops(self) -> Tuple[np.ndarray, ...]:
        return tuple(self.kraus)

    @property
    def num_qubits(self) -> int:
        return self._num_qubits

    @property
    def dim(self) -> int:
        return 2**self._num_qubits

    @property
    def rank(self) -> int:
        return self.kraus.shape[0]

    def __call__(self, op: np.ndarray) -> np.ndarray:
        """Applies the channel to one operator or a stack of ``(n, d, d)`` operators."""
        op = np.asarray(op, dtype=np.complex128)
        k = self.kraus
        if op.ndim == 2:
            return np.einsum("kij,jl,kml->im", k, op, k.conj())
        return np.einsum("kij,njl,kml->nim", k, op, k.conj())

    def populations(self, vectors: np.ndarray, weights: np.ndarray) -> np.ndarray:
        """Diagonal of ``E(Σ_r w_r |v_r><v_r|)`` for stacks of vectors.

        Parameters
        ----------
        vectors : (n, r, d) np.ndarray
            ``r`` pure components of ``n`` states.
        weights : (r, ) np.ndarray
            Mixing weights of the components.

        Returns
        -------
        probs : (n, d) np.ndarray
        """
        amps = np.einsum("kbd,nrd->nkrb", self.kraus, vectors)
        return np.einsum("r,nkrb->nb", weights, np.abs(amps) ** 2)

    def compose(self, other: "QuantumChannel") -> "QuantumChannel":
        """The channel ``self ∘ other``."""
        if other.dim != self.dim:
            raise ValueError("Channels act on different dimensions")
        ops = [a @ b for a in self.kraus for b in other.kraus]
        return QuantumChannel(ops)

    def tensor(self, other: "QuantumChannel") -> "QuantumChannel":
        """The channel ``self ⊗ other`` with ``self`` on the leading qubits."""
        ops = [np.kron(a, b) for a in self.kraus for b in other.kraus]
        return QuantumChannel(ops)

    def __repr__(self) -> str:
        name = self.__class__.__name__
        return f"{name}(num_qubits={self.num_qubits}, rank={self.rank})"


class ClassicalChannel(QuantumChannel):
    """Dephasing in the computational basis followed by a stochastic map.

    The channel maps ``ρ`` to ``Σ_{b'b} T[b', b] <b|ρ|b> |b'><b'|``. Its Kraus
    operators ``sqrt(T[b', b]) |b'><b|`` are only built on request.

    Parameters
    ----------
    transition : (2^q, 2^q) array_like
        Column stochastic matrix, ``T[b', b]`` is the probability to read
        ``b'`` when the register is in ``b``.
    """

    def __init__(self, transition, atol: float = 1e-9):
        t = np.array(transition, dtype=np.float64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError(f"Transition matrix must be square, got shape {t.shape}")
        dim = t.shape[0]
        num_qubits = int(round(np.log2(dim)))
        if num_qubits < 1 or 2**num_qubits != dim:
            raise ValueError(f"Transition dimension {dim} is not a power of two")
        if np.any(t < -atol) or np.any(t > 1 + atol):
            raise ValueError("Transition matrix entries must be in [0, 1]")
        if not np.allclose(t.sum(axis=0), 1.0, rtol=0.0, atol=atol):
            raise ValueError("Transition matrix columns must sum to one")
        t = np.clip(t, 0.0, 1.0)
        t.setflags(write=False)
        self._transition = t
        self._num_qubits = num_qubits
        self._kraus = None

    @property
    def transition(self) -> np.ndarray:
        return self._transition

    @property
    def kraus(self) -> np.ndarray:
        if self._kraus is None:
            if self._num_qubits > MAX_CLASSICAL_KRAUS_QUBITS:
                raise ValueError(
                    f"Kraus form of a classical channel is limited to "
                    f"{MAX_CLASSICAL_KRAUS_QUBITS} qubits"
                )
            dim = self.dim
            ops = list()
            for bp, b in zip(*np.nonzero(self._transition)):
                k = np.zeros((dim, dim), dtype=np.complex128)
                k[bp, b] = np.sqrt(self._transition[bp, b])
                ops.append(k)
            kraus = np.array(ops)
            kraus.setflags(write=False)
            self._kraus = kraus
        return self._kraus

    def __call__(self, op: np.ndarray) -> np.ndarray:
        op = np.asarray(op, dtype=np.complex128)
        diag = np.diagonal(op, axis1=-2, axis2=-1)
        out = diag @ self._transition.T
        if op.ndim == 2:
            return np.diag(out)
        return np.einsum("ni,ij->nij", out, np.eye(self.dim))

    def populations(self, vectors: np.ndarray, weights: np.ndarray) -> np.ndarray:
        probs = np.einsum("r,nrd->nd", weights, np.abs(vectors) ** 2)
        return probs @ self._transition.T

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(num_qubits={self.num_qubits})"


# =========================================================================
# Channel constructors
# =========================================================================


def identity_channel(num_qubits: int = 1) -> QuantumChannel:
    return QuantumChannel([np.eye(2**num_qubits)])


def bit_flip(p: float) -> QuantumChannel:
    """Single-qubit bit flip with probability ``p``."""
    p = _check_probability(p)
    return QuantumChannel([np.sqrt(1 - p) * sigi, np.sqrt(p) * sigx])


def phase_flip(p: float) -> QuantumChannel:
    """Single-qubit phase flip with probability ``p``."""
    p = _check_probability(p)
    return QuantumChannel([np.sqrt(1 - p) * sigi, np.sqrt(p) * sigz])


def depolarizing(p: float, num_qubits: int = 1) -> QuantumChannel:
    """Depolarizing channel ``ρ -> (1 - p) ρ + p I / 2^q``.

    Parameters
    ----------
    p : float
        Depolarizing probability in ``[0, 1]``.
    num_qubits : int, optional
        Number of qubits q the channel acts on.
    """
    p = _check_probability(p)
    n = 4**num_qubits
    ops = list()
    for labels in itertools.product(range(4), repeat=num_qubits):
        weight = 1 - p + p / n if not any(labels) else p / n
        if weight > 0:
            ops.append(np.sqrt(weight) * kron([PAULI_STACK[i] for i in labels]))
    return QuantumChannel(ops)


def amplitude_damping(gamma: float) -> QuantumChannel:
    """Single-qubit energy relaxation ``|1> -> |0>`` with probability ``gamma``."""
    gamma = _check_probability(gamma, "gamma")
    k0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]])
    k1 = np.array([[0, np.sqrt(gamma)], [0, 0]])
    return QuantumChannel([k0, k1])


def pauli_channel(probs: Sequence[float]) -> QuantumChannel:
    """Pauli channel ``ρ -> Σ_i p_i P_i ρ P_i``.

    Parameters
    ----------
    probs : (4^q, ) array_like
        Probabilities of the Pauli strings in lexicographic label order.
    """
    probs = np.asarray(probs, dtype=np.float64)
    num_qubits = int(round(np.log(len(probs)) / np.log(4)))
    if 4**num_qubits != len(probs) or num_qubits < 1:
        raise ValueError(f"Expected 4^q probabilities, got {len(probs)}")
    if np.any(probs < -1e-12) or abs(np.sum(probs) - 1) > 1e-9:
        raise ValueError("Pauli channel probabilities must form a distribution")
    ops = list()
    for p, labels in zip(probs, itertools.product(range(4), repeat=num_qubits)):
        if p > 1e-15:
            ops.append(np.sqrt(p) * kron([PAULI_STACK[i] for i in labels]))
    return QuantumChannel(ops)


def _commutation_signs(num_qubits: int) -> np.ndarray:
    single = np.array(
        [[1, 1, 1, 1], [1, 1, -1, -1], [1, -1, 1, -1], [1, -1, -1, 1]], dtype=np.float64
    )
    return kron([single] * num_qubits)


def pauli_channel_from_ptm(diagonal: Sequence[float]) -> QuantumChannel:
    """Pauli channel with a prescribed diagonal Pauli transfer matrix.

    Parameters
    ----------
    diagonal : (4^q, ) array_like
        The PTM diagonal, starting with the identity element ``1``.

    Examples
    --------
    >>> ch = pauli_channel_from_ptm([1, 0.9, 0.8, 0.7])
    >>> round(ptm_element(ch, PauliString("X"), PauliString("X")), 12)
    0.9
    """
    lam = np.asarray(diagonal, dtype=np.float64)
    num_qubits = int(round(np.log(len(lam)) / np.log(4)))
    if 4**num_qubits != len(lam):
        raise ValueError(f"Expected 4^q diagonal entries, got {len(lam)}")
    signs = _commutation_signs(num_qubits)
    probs = signs @ lam / 4**num_qubits
    if np.any(probs < -1e-12):
        raise ValueError("PTM diagonal does not belong to a Pauli channel")
    return pauli_channel(np.clip(probs, 0, None))


def unitary_channel(u: np.ndarray) -> QuantumChannel:
    return QuantumChannel([u])


def random_channel(
    num_qubits: int = 1, rank: int = 2, rng: Optional[np.random.Generator] = None
) -> QuantumChannel:
    """Random channel from a Haar random isometry.

    Parameters
    ----------
    num_qubits : int, optional
        Number of qubits q.
    rank : int, optional
        Number of Kraus operators.
    rng : int or np.random.Generator, optional
        Seed or generator.
    """
    dim = 2**num_qubits
    v = haar_unitary(dim * rank, rng)[:, :dim]
    return QuantumChannel([v[k * dim : (k + 1) * dim, :] for k in range(rank)])


def tensor_channels(*channels: QuantumChannel) -> QuantumChannel:
    """Tensor product of channels, the first acting on qubit 0."""
    if len(channels) == 1 and not isinstance(channels[0], QuantumChannel):
        channels = tuple(channels[0])
    out = channels[0]
    for ch in channels[1:]:
        out = out.tensor(ch)
    return out


def twirl(
    channel: QuantumChannel, group: Optional[Sequence[np.ndarray]] = None
) -> QuantumChannel:
    """Twirls a channel over a local single-qubit group.

    The twirled channel is ``(1/|G|) Σ_g g† E(g ρ g†) g`` with ``g`` running
    over all products of single-qubit group elements.

    Parameters
    ----------
    channel : QuantumChannel
        The channel to twirl, at most three qubits.
    group : Sequence of (2, 2) np.ndarray, optional
        Single-qubit unitaries of the group. The default is the tetrahedral
        group.
    """
    if channel.num_qubits > 3:
        raise ValueError("Twirling is limited to three qubits")
    if group is None:
        from .sampling import tetrahedral_group

        group = tetrahedral_group().unitaries
    group = [np.asarray(g) for g in group]
    norm = 1 / np.sqrt(len(group) ** channel.num_qubits)
    ops = list()
    for elements in itertools.product(group, repeat=channel.num_qubits):
        g = kron(elements)
        gh = g.conj().T
        for k in channel.kraus:
            ops.append(norm * gh @ k @ g)
    return QuantumChannel(ops)


# =========================================================================
# Channel quantities
# =========================================================================


def _check_dims(channel: QuantumChannel, num_qubits: int) -> None:
    if channel.num_qubits != num_qubits:
        raise ValueError(
            f"Channel on {channel.num_qubits} qubits does not match object "
            f"on {num_qubits} qubits"
        )


def apply(channel: QuantumChannel, rho: DensityMatrix) -> DensityMatrix:
    """Applies a channel to a density matrix.

    Examples
    --------
    >>> out = apply(bit_flip(0.5), DensityMatrix.zeros(1))
    >>> out.entries.real
    array([[0.5, 0. ],
           [0. , 0.5]])
    """
    _check_dims(channel, rho.num_qubits)
    out = channel(rho.entries)
    return DensityMatrix(0.5 * (out + out.conj().T), atol=1e-9)


def ptm_element(channel: QuantumChannel, row: PauliString, col: PauliString) -> float:
    """Element ``[E]_ij = Tr[P_i E(P_j)] / 2^q`` of the Pauli transfer matrix."""
    _check_dims(channel, row.num_qubits)
    _check_dims(channel, col.num_qubits)
    out = channel(pauli_matrix(col))
    value = np.sum(pauli_matrix(row).T * out) / channel.dim
    return float(np.real(value))


def ptm(channel: QuantumChannel) -> np.ndarray:
    """The full ``4^q x 4^q`` Pauli transfer matrix in lexicographic label order."""
    if channel.num_qubits > MAX_PTM_QUBITS:
        raise ValueError(f"PTM is limited to {MAX_PTM_QUBITS} qubits")
    n = 4**channel.num_qubits
    out = np.zeros((n, n))
    for j, labels in enumerate(itertools.product(range(4), repeat=channel.num_qubits)):
        image = channel(pauli_matrix(PauliString(labels)))
        out[:, j] = np.real(pauli_coefficients(image).reshape(-1))
    return out


def suppression_factor(channel: QuantumChannel, mask: Mask) -> float:
    """The readout suppression factor ``Tr[M E(M)] / 2^Q`` of a mask.

    Examples
    --------
    >>> suppression_factor(bit_flip(0.1), Mask([True]))
    0.8
    """
    _check_dims(channel, mask.num_qubits)
    signs = mask_signs(mask)
    if isinstance(channel, ClassicalChannel):
        value = signs @ (channel.transition @ signs)
    else:
        image = channel(np.diag(signs).astype(np.complex128))
        value = np.real(np.sum(signs * np.diagonal(image)))
    return float(value / channel.dim)


def twirled_suppression(channel: QuantumChannel, mask: Mask) -> float:
    """Average PTM diagonal over the ``3^{Q_P}`` strings sharing a mask."""
    _check_dims(channel, mask.num_qubits)
    if mask.is_identity():
        raise ValueError("The twirled suppression of the identity mask is trivial")
    indices = mask.indices
    total, count = 0.0, 0
    for paulis in itertools.product((1, 2, 3), repeat=len(indices)):
        labels = [0] * mask.num_qubits
        for j, i in zip(indices, paulis):
            labels[j] = i
        p = PauliString(labels)
        total += ptm_element(channel, p, p)
        count += 1
    return total / count


def product_suppression(channels: Sequence[QuantumChannel], mask: Mask) -> float:
    """Suppression of a tensor-product channel from its single-qubit factors."""
    if len(channels) != mask.num_qubits:
        raise ValueError("Expected one single-qubit channel per mask position")
    value = 1.0
    for j in mask.indices:
        value *= suppression_factor(channels[j], Mask([True]))
    return value


def as_channel(model, num_qubits: int) -> QuantumChannel:
    """Returns the channel of a readout error model on ``num_qubits`` qubits."""
    if isinstance(model, QuantumChannel):
        _check_dims(model, num_qubits)
        return model
    channel = model.channel(num_qubits)
    _check_dims(channel, num_qubits)
    return channel
