# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Single-qubit operators, rotations and small dense-state helpers."""

import numpy as np
from scipy.stats import unitary_group
from typing import Optional, Sequence, Union

__all__ = [
    "sigi",
    "sigx",
    "sigy",
    "sigz",
    "pauli",
    "PAULI_STACK",
    "kron",
    "density_matrix",
    "rotation",
    "rx",
    "ry",
    "rz",
    "bloch_vector",
    "bloch_operator",
    "haar_unitary",
    "random_state_vector",
    "random_density_matrix",
    "swap_operator",
    "tevo_state_eig",
    "tevo_state",
]

sigi = np.eye(2, dtype=np.complex128)
sigx = np.array([[0, 1], [1, 0]], dtype=np.complex128)
sigy = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
sigz = np.array([[1, 0], [0, -1]], dtype=np.complex128)

pauli = sigi, sigx, sigy, sigz

# (4, 2, 2) stack indexed by the labels 0..3 = I, X, Y, Z
PAULI_STACK = np.array(pauli)
PAULI_STACK.setflags(write=False)


def kron(*args) -> np.ndarray:
    """Computes the Kronecker product of two or more arrays.

    Parameters
    ----------
    *args : list of array_like or array_like
        Input arrays.

    Returns
    -------
    out : np.ndarray
        The Kronecker product of the input arrays.

    Examples
    --------
    >>> kron([1, 0], [1, 0])
    array([1, 0, 0, 0])
    >>> kron([[1, 0], [1, 0]])
    array([1, 0, 0, 0])
    >>> kron([1, 0], [1, 0], [1, 0])
    array([1, 0, 0, 0, 0, 0, 0, 0])
    """
    if len(args) == 1:
        args = args[0]
    x = 1
    for arg in args:
        x = np.kron(x, arg)
    return x


def density_matrix(psi: np.ndarray) -> np.ndarray:
    r"""Computes the density matrix ρ of a given state-vector |ψ>.

    .. math::
        ρ = |ψ><ψ|

    Parameters
    ----------
    psi: (N) np.ndarray
        The input state-vector ψ.

    Returns
    -------
    rho : (N, N) np.ndarray
        The density matrix ρ.

    Examples
    --------
    >>> density_matrix(np.array([1, 0]))
    array([[1, 0],
           [0, 0]])
    >>> density_matrix(np.array([1j, 0]))
    array([[1.+0.j, 0.+0.j],
           [0.+0.j, 0.+0.j]])
    """
    psiv = np.atleast_2d(psi).T
    return np.dot(psiv, np.conj(psiv.T))


# =========================================================================
# Rotations
# =========================================================================


def rotation(axis: Sequence[float], angle: float) -> np.ndarray:
    r"""Single-qubit rotation about a Bloch-sphere axis.

    .. math::
        R_n(θ) = \cos(θ/2) I - i \sin(θ/2) n·σ

    Parameters
    ----------
    axis : (3, ) array_like
        The rotation axis. It is normalized before use.
    angle : float
        The rotation angle θ.

    Returns
    -------
    u : (2, 2) np.ndarray
    """
    axis = np.asarray(axis, dtype=np.float64)
    norm = np.linalg.norm(axis)
    if norm == 0:
        raise ValueError("Rotation axis must be non-zero")
    nx, ny, nz = axis / norm
    nsig = nx * sigx + ny * sigy + nz * sigz
    return np.cos(angle / 2) * sigi - 1j * np.sin(angle / 2) * nsig


def rx(angle: float) -> np.ndarray:
    return rotation([1, 0, 0], angle)


def ry(angle: float) -> np.ndarray:
    return rotation([0, 1, 0], angle)


def rz(angle: float) -> np.ndarray:
    return rotation([0, 0, 1], angle)


def bloch_vector(op: np.ndarray) -> np.ndarray:
    """Returns the real vector (Tr[Xa], Tr[Ya], Tr[Za]) of a 2x2 operator.

    For a single-qubit density matrix this is its Bloch vector, for a
    traceless Hermitian operator σ·n it is the direction n.
    """
    op = np.asarray(op)
    return np.real([np.trace(sigx @ op), np.trace(sigy @ op), np.trace(sigz @ op)])


def bloch_operator(vec: Sequence[float]) -> np.ndarray:
    """Returns the single-qubit density matrix (I + r·σ)/2 of a Bloch vector."""
    x, y, z = vec
    return 0.5 * (sigi + x * sigx + y * sigy + z * sigz)


# =========================================================================
# Random objects
# =========================================================================

RandomLike = Union[None, int, np.random.Generator]


def haar_unitary(dim: int, rng: RandomLike = None) -> np.ndarray:
    """Draws a Haar-random unitary matrix."""
    rng = np.random.default_rng(rng)
    return unitary_group.rvs(dim, random_state=rng)


def random_state_vector(dim: int, rng: RandomLike = None) -> np.ndarray:
    """Draws a Haar-random normalized state vector."""
    rng = np.random.default_rng(rng)
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def random_density_matrix(
    num_qubits: int, rng: RandomLike = None, rank: Optional[int] = None
) -> np.ndarray:
    """Draws a random density matrix from the induced (Ginibre) measure.

    Parameters
    ----------
    num_qubits : int
        The number of qubits Q of the ``2^Q x 2^Q`` matrix.
    rng : int or np.random.Generator, optional
        Seed or generator.
    rank : int, optional
        The rank of the resulting matrix. The default is full rank.

    Returns
    -------
    rho : (2^Q, 2^Q) np.ndarray
    """
    rng = np.random.default_rng(rng)
    dim = 2**num_qubits
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.real(np.trace(rho))


def swap_operator(dim: int) -> np.ndarray:
    """The operator exchanging the two factors of a ``dim x dim`` product space."""
    swap = np.zeros((dim * dim, dim * dim), dtype=np.complex128)
    for i in range(dim):
        for j in range(dim):
            swap[i * dim + j, j * dim + i] = 1
    return swap


# =========================================================================
# Time evolution
# =========================================================================


def tevo_state_eig(eigvals, eigvecs, state, times):
    """Evolve a state under the given hamiltonian.

    Parameters
    ----------
    eigvals : (N) np.ndarray
    eigvecs : (N, N) np.ndarray
    state : (N, ) np.ndarray
    times : float or (M, ) array_like

    Returns
    -------
    states : (M, N) np.nd_array or (N, ) np.ndarray
    """
    scalar = not hasattr(times, "__len__")
    times = np.atleast_1d(np.asarray(times, dtype=np.float64))

    # Project initial state into eigenbasis
    proj = np.dot(eigvecs.conj().T, state)
    # Evolve projected states
    proj_t = proj[np.newaxis, :] * np.exp(-1j * eigvals * times[:, np.newaxis])
    # Reconstruct the new state in the original basis
    states = np.dot(proj_t, eigvecs.T)

    return states[0] if scalar else states


def tevo_state(ham, state, times):
    """Evolve a state under the given hamiltonian.

    Parameters
    ----------
    ham : (N, N) np.ndarray
    state : (N, ) np.ndarray
    times : float or (M, ) array_like

    Returns
    -------
    states : (M, N) np.nd_array or (N, ) np.ndarray
    """
    eigvals, eigvecs = np.linalg.eigh(ham)
    return tevo_state_eig(eigvals, eigvecs, state, times)
