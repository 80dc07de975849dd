# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Pauli strings, observables and exact dense states.

Qubit 0 is the leftmost tensor factor everywhere, i.e. the most significant
bit of a computational basis index.
"""

import math
import itertools
import numpy as np
from collections.abc import Mapping
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple, Union
from .collection import PAULI_STACK, bloch_operator, density_matrix, kron
from .matrix import is_hermitian

__all__ = [
    "MAX_DENSE_QUBITS",
    "PAULI_LABELS",
    "PauliString",
    "Observable",
    "DensityMatrix",
    "ProductState",
    "pauli_matrix",
    "pauli_coefficients",
    "decompose",
    "reconstruct",
    "expectation_exact",
    "product_expectations",
    "all_pauli_strings",
]

MAX_DENSE_QUBITS = 12
PAULI_LABELS = "IXYZ"

# Single qubit products σ_a σ_b = phase * σ_c
_PRODUCT_TABLE = {
    (1, 2): (1j, 3),
    (2, 1): (-1j, 3),
    (2, 3): (1j, 1),
    (3, 2): (-1j, 1),
    (3, 1): (1j, 2),
    (1, 3): (-1j, 2),
}


def _check_dense(num_qubits: int) -> None:
    if num_qubits > MAX_DENSE_QUBITS:
        raise ValueError(
            f"Dense objects are limited to {MAX_DENSE_QUBITS} qubits, "
            f"got {num_qubits}"
        )


def _num_qubits_of_dim(dim: int) -> int:
    num_qubits = int(round(math.log2(dim))) if dim > 0 else 0
    if num_qubits < 1 or 2**num_qubits != dim:
        raise ValueError(f"Dimension {dim} is not a power of two")
    return num_qubits


# =========================================================================
# Pauli strings
# =========================================================================


class PauliString:
    """Tensor product of single-qubit Pauli operators.

    Parameters
    ----------
    labels : Sequence of int or str
        The labels in ``{0, 1, 2, 3}`` meaning ``{I, X, Y, Z}`` or a string like
        ``"XIZ"``.

    Examples
    --------
    >>> p = PauliString("XIZ")
    >>> p.labels
    (1, 0, 3)
    >>> p.weight()
    2
    """

    __slots__ = ("_labels",)

    def __init__(self, labels: Union[str, Sequence[int]]):
        if isinstance(labels, str):
            try:
                labels = [PAULI_LABELS.index(c) for c in labels.upper()]
            except ValueError:
                raise ValueError(f"Invalid Pauli label string '{labels}'") from None
        labels = tuple(int(i) for i in labels)
        if len(labels) < 1:
            raise ValueError("A Pauli string needs at least one qubit")
        if any(i not in (0, 1, 2, 3) for i in labels):
            raise ValueError(f"Pauli labels must be in 0..3, got {labels}")
        self._labels = labels

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        return cls(label)

    @classmethod
    def identity(cls, num_qubits: int) -> "PauliString":
        return cls([0] * num_qubits)

    @classmethod
    def single(
        cls, num_qubits: int, qubit: int, label: Union[int, str]
    ) -> "PauliString":
        """Returns the string with one non-identity Pauli on ``qubit``."""
        if isinstance(label, str):
            label = PAULI_LABELS.index(label.upper())
        labels = [0] * num_qubits
        labels[qubit] = label
        return cls(labels)

    @classmethod
    def z_on(cls, bits: Sequence[bool]) -> "PauliString":
        """Returns the string with σ_z where ``bits`` is true and identity else."""
        return cls([3 if b else 0 for b in bits])

    @property
    def labels(self) -> Tuple[int, ...]:
        return self._labels

    @property
    def num_qubits(self) -> int:
        return len(self._labels)

    @property
    def label(self) -> str:
        return "".join(PAULI_LABELS[i] for i in self._labels)

    @property
    def support(self) -> Tuple[int, ...]:
        """The qubit indices carrying a non-identity Pauli."""
        return tuple(j for j, i in enumerate(self._labels) if i)

    def weight(self) -> int:
        """The number of non-identity factors."""
        return sum(1 for i in self._labels if i)

    def is_identity(self) -> bool:
        return not any(self._labels)

    def conflicts(self, other: "PauliString") -> bool:
        """True if some qubit carries two different non-identity Paulis."""
        return any(a and b and a != b for a, b in zip(self._labels, other._labels))

    def compose(self, other: "PauliString") -> Tuple[complex, "PauliString"]:
        """Returns the phase and string of the operator product ``self @ other``."""
        if other.num_qubits != self.num_qubits:
            raise ValueError("Pauli strings act on different numbers of qubits")
        phase = 1 + 0j
        labels = list()
        for a, b in zip(self._labels, other._labels):
            if a == 0 or b == 0:
                labels.append(a or b)
            elif a == b:
                labels.append(0)
            else:
                f, c = _PRODUCT_TABLE[(a, b)]
                phase *= f
                labels.append(c)
        return phase, PauliString(labels)

    def matrix(self) -> np.ndarray:
        return pauli_matrix(self)

    def __len__(self) -> int:
        return len(self._labels)

    def __iter__(self) -> Iterator[int]:
        return iter(self._labels)

    def __getitem__(self, item):
        return self._labels[item]

    def __eq__(self, other) -> bool:
        if isinstance(other, PauliString):
            return self._labels == other._labels
        return NotImplemented

    def __lt__(self, other: "PauliString") -> bool:
        return self._labels < other._labels

    def __hash__(self) -> int:
        return hash(self._labels)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}('{self.label}')"

    def __str__(self) -> str:
        return self.label


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Returns the dense matrix ⊗_j σ_{i_j} of a Pauli string.

    Examples
    --------
    >>> pauli_matrix(PauliString("Z"))
    array([[ 1.+0.j,  0.+0.j],
           [ 0.+0.j, -1.+0.j]])
    """
    _check_dense(p.num_qubits)
    return kron([PAULI_STACK[i] for i in p.labels])


def all_pauli_strings(num_qubits: int) -> Iterator[PauliString]:
    """Iterates over all ``4^Q`` Pauli strings in lexicographic label order."""
    for labels in itertools.product(range(4), repeat=num_qubits):
        yield PauliString(labels)


# =========================================================================
# Observables
# =========================================================================


class Observable(Mapping):
    """Real linear combination of Pauli strings ``O = Σ c_i P_i``.

    Parameters
    ----------
    terms : Mapping or Iterable of (PauliString or str, float), optional
        The terms of the observable. Strings are parsed as Pauli labels.
        Duplicated strings are rejected.
    num_qubits : int, optional
        The number of qubits. Only required for an observable without terms.
    """

    def __init__(self, terms=None, num_qubits: Optional[int] = None):
        super().__init__()
        if terms is None:
            terms = dict()
        items = terms.items() if isinstance(terms, Mapping) else terms
        data: Dict[PauliString, float] = dict()
        for key, coeff in items:
            p = key if isinstance(key, PauliString) else PauliString(key)
            if p in data:
                raise ValueError(f"Duplicate Pauli string {p.label} in observable")
            if np.iscomplexobj(coeff):
                if abs(np.imag(coeff)) > 1e-12:
                    raise ValueError(f"Coefficient of {p.label} is not real: {coeff}")
                coeff = np.real(coeff)
            coeff = float(coeff)
            if not math.isfinite(coeff):
                raise ValueError(f"Coefficient of {p.label} is not finite")
            data[p] = coeff
        sizes = {p.num_qubits for p in data}
        if num_qubits is not None:
            sizes.add(int(num_qubits))
        if len(sizes) > 1:
            raise ValueError(f"Pauli strings act on different qubit counts: {sizes}")
        if not sizes:
            raise ValueError("Number of qubits of an empty observable is undefined")
        self._terms = data
        self._num_qubits = sizes.pop()

    @classmethod
    def from_pauli(cls, p: PauliString, coeff: float = 1.0) -> "Observable":
        return cls({p: coeff})

    @property
    def num_qubits(self) -> int:
        return self._num_qubits

    @property
    def strings(self) -> Tuple[PauliString, ...]:
        return tuple(self._terms.keys())

    @property
    def coeffs(self) -> np.ndarray:
        return np.array(list(self._terms.values()), dtype=np.float64)

    def l1_norm(self) -> float:
        """Σ|c_i|, a bound on the magnitude of every expectation value."""
        return float(np.sum(np.abs(self.coeffs)))

    def matrix(self) -> np.ndarray:
        return reconstruct(self)

    def __getitem__(self, key) -> float:
        if not isinstance(key, PauliString):
            key = PauliString(key)
        return self._terms[key]

    def __iter__(self) -> Iterator[PauliString]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __add__(self, other: "Observable") -> "Observable":
        if not isinstance(other, Observable):
            return NotImplemented
        if other.num_qubits != self.num_qubits:
            raise ValueError("Observables act on different numbers of qubits")
        data = dict(self._terms)
        for p, c in other.items():
            data[p] = data.get(p, 0.0) + c
        return Observable(data, self.num_qubits)

    def __mul__(self, scalar: float) -> "Observable":
        scalar = float(scalar)
        data = {p: scalar * c for p, c in self._terms.items()}
        return Observable(data, self.num_qubits)

    __rmul__ = __mul__

    def __neg__(self) -> "Observable":
        return self * -1.0

    def __sub__(self, other: "Observable") -> "Observable":
        return self + (-other)

    def __repr__(self) -> str:
        terms = ", ".join(f"{p.label}: {c:g}" for p, c in self._terms.items())
        return f"{self.__class__.__name__}({{{terms}}})"


def pauli_coefficients(mat: np.ndarray) -> np.ndarray:
    """Computes all coefficients ``Tr[P_i O] / 2^Q`` of a square matrix.

    The Pauli transform is applied qubit by qubit on the reshaped tensor.

    Parameters
    ----------
    mat : (2^Q, 2^Q) array_like
        The input matrix.

    Returns
    -------
    coeffs : (4, ..., 4) np.ndarray
        Complex coefficients indexed by the labels of each qubit.
    """
    mat = np.asarray(mat, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {mat.shape}")
    num_qubits = _num_qubits_of_dim(mat.shape[0])
    _check_dense(num_qubits)
    # Reorder axes to (a_0, b_0, a_1, b_1, ...) and merge each pair into one
    t = mat.reshape((2,) * (2 * num_qubits))
    order = [ax for j in range(num_qubits) for ax in (j, num_qubits + j)]
    t = t.transpose(order).reshape((4,) * num_qubits)
    # S[i, 2a + b] = σ_i[b, a], so that Σ_ab S[i, 2a+b] O[a, b] = Tr[σ_i O]
    s = PAULI_STACK.transpose(0, 2, 1).reshape(4, 4)
    for j in range(num_qubits):
        t = np.moveaxis(np.tensordot(s, t, axes=([1], [j])), 0, j)
    return t / 2**num_qubits


def decompose(mat: np.ndarray, atol: float = 1e-9, cutoff: float = 1e-14) -> Observable:
    """Decomposes a Hermitian matrix into a sum of Pauli strings.

    Parameters
    ----------
    mat : (2^Q, 2^Q) array_like
        The Hermitian input matrix.
    atol : float, optional
        Tolerance of the Hermiticity check.
    cutoff : float, optional
        Coefficients with a smaller magnitude are dropped.

    Returns
    -------
    observable : Observable
        The terms ``c_i = Tr[P_i O] / 2^Q``.

    Examples
    --------
    >>> decompose(np.diag([1, -1]))
    Observable({Z: 1})
    >>> decompose(np.diag([1, 0]))
    Observable({I: 0.5, Z: 0.5})
    """
    mat = np.asarray(mat, dtype=np.complex128)
    if not is_hermitian(mat, atol=atol):
        raise ValueError("Only Hermitian matrices can be decomposed into real terms")
    coeffs = pauli_coefficients(mat)
    num_qubits = coeffs.ndim
    terms = dict()
    for labels in zip(*np.nonzero(np.abs(coeffs) > cutoff)):
        terms[PauliString(labels)] = float(np.real(coeffs[labels]))
    return Observable(terms, num_qubits)


def reconstruct(observable: Observable) -> np.ndarray:
    """Builds the dense matrix ``Σ c_i P_i`` of an observable."""
    _check_dense(observable.num_qubits)
    dim = 2**observable.num_qubits
    mat = np.zeros((dim, dim), dtype=np.complex128)
    for p, c in observable.items():
        mat += c * pauli_matrix(p)
    return mat


# =========================================================================
# States
# =========================================================================


class DensityMatrix:
    """Validated, read-only density matrix of ``Q <= 12`` qubits.

    Parameters
    ----------
    entries : (2^Q, 2^Q) array_like
        Hermitian, unit trace and positive semidefinite matrix.
    atol : float, optional
        Tolerance of the Hermiticity and trace checks.
    """

    def __init__(self, entries, atol: float = 1e-10):
        entries = np.array(entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError(f"Expected a square matrix, got shape {entries.shape}")
        num_qubits = _num_qubits_of_dim(entries.shape[0])
        _check_dense(num_qubits)
        if not is_hermitian(entries, atol=atol):
            raise ValueError("Density matrix is not Hermitian")
        trace = np.trace(entries)
        if abs(trace - 1) > atol:
            raise ValueError(f"Density matrix has trace {trace.real:.3g}, expected 1")
        eigvals = np.linalg.eigvalsh(entries)
        if eigvals[0] < -1e-9:
            raise ValueError(f"Density matrix has negative eigenvalue {eigvals[0]:.3g}")
        entries.setflags(write=False)
        self._entries = entries
        self._num_qubits = num_qubits

    @classmethod
    def from_state_vector(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise ValueError("Cannot build a state from the zero vector")
        return cls(density_matrix(psi / norm))

    @classmethod
    def zeros(cls, num_qubits: int) -> "DensityMatrix":
        """The computational basis state |0...0>."""
        psi = np.zeros(2**num_qubits)
        psi[0] = 1
        return cls.from_state_vector(psi)

    @classmethod
    def maximally_mixed(cls, num_qubits: int) -> "DensityMatrix":
        dim = 2**num_qubits
        return cls(np.eye(dim) / dim)

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def num_qubits(self) -> int:
        return self._num_qubits

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    def eigh(self) -> Tuple[np.ndarray, np.ndarray]:
        """Eigenvalues (clipped at zero) and eigenvectors of the state."""
        eigvals, eigvecs = np.linalg.eigh(self._entries)
        return np.clip(eigvals, 0, None), eigvecs

    def __array__(self, dtype=None):
        return np.asarray(self._entries, dtype=dtype)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(num_qubits={self._num_qubits})"


class ProductState:
    """Product of single-qubit states given by their Bloch vectors.

    Product states never build ``2^Q`` matrices, so they are the state type of
    the large-register estimation path.

    Parameters
    ----------
    bloch : (Q, 3) array_like
        One Bloch vector with norm at most one per qubit.
    """

    def __init__(self, bloch):
        bloch = np.array(bloch, dtype=np.float64)
        if bloch.ndim == 1:
            bloch = bloch[np.newaxis, :]
        if bloch.ndim != 2 or bloch.shape[1] != 3 or bloch.shape[0] < 1:
            raise ValueError(f"Expected (Q, 3) Bloch vectors, got shape {bloch.shape}")
        norms = np.linalg.norm(bloch, axis=1)
        if np.any(norms > 1 + 1e-10):
            raise ValueError("Bloch vectors must have a norm of at most one")
        bloch.setflags(write=False)
        self._bloch = bloch

    @classmethod
    def zeros(cls, num_qubits: int, prep_error: float = 0.0) -> "ProductState":
        """The state |0...0>, optionally mixed with |1> at rate ``prep_error``."""
        if not 0 <= prep_error <= 1:
            raise ValueError(f"Preparation error must be in [0, 1], got {prep_error}")
        bloch = np.zeros((num_qubits, 3))
        bloch[:, 2] = 1 - 2 * prep_error
        return cls(bloch)

    @property
    def bloch(self) -> np.ndarray:
        return self._bloch

    @property
    def num_qubits(self) -> int:
        return self._bloch.shape[0]

    def expectation(self, p: PauliString) -> float:
        """Exact ``Tr[ρ P]`` as the product of Bloch components."""
        if p.num_qubits != self.num_qubits:
            raise ValueError(
                f"Pauli string on {p.num_qubits} qubits does not match state "
                f"on {self.num_qubits} qubits"
            )
        value = 1.0
        for j, i in enumerate(p.labels):
            if i:
                value *= self._bloch[j, i - 1]
        return float(value)

    def to_density_matrix(self) -> DensityMatrix:
        _check_dense(self.num_qubits)
        return DensityMatrix(kron([bloch_operator(r) for r in self._bloch]))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(num_qubits={self.num_qubits})"


def expectation_exact(
    rho: Union[DensityMatrix, ProductState], obs: Observable
) -> float:
    """Computes the exact expectation value ``Tr[ρ O]``.

    Parameters
    ----------
    rho : DensityMatrix or ProductState
        The state.
    obs : Observable or PauliString
        The observable.

    Returns
    -------
    value : float

    Examples
    --------
    >>> expectation_exact(DensityMatrix.zeros(1), Observable({"Z": 1.0}))
    1.0
    """
    if isinstance(obs, PauliString):
        obs = Observable.from_pauli(obs)
    if rho.num_qubits != obs.num_qubits:
        raise ValueError(
            f"Observable on {obs.num_qubits} qubits does not match state "
            f"on {rho.num_qubits} qubits"
        )
    if isinstance(rho, ProductState):
        return float(sum(c * rho.expectation(p) for p, c in obs.items()))
    entries = rho.entries
    value = 0j
    for p, c in obs.items():
        # Tr[ρP] = Σ_ab ρ_ab P_ba
        value += c * np.sum(entries * pauli_matrix(p).T)
    if abs(value.imag) > 1e-9:
        raise ValueError(f"Expectation value has imaginary part {value.imag:.3g}")
    return float(value.real)


def product_expectations(
    rho: Union[DensityMatrix, ProductState], strings: Iterable[PauliString]
) -> np.ndarray:
    """Exact expectation values of several Pauli strings."""
    return np.array([expectation_exact(rho, Observable.from_pauli(p)) for p in strings])
