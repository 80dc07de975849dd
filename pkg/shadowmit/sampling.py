# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Pseudo-random measurement frames.

Frames are drawn from per-qubit XOR linear feedback shift registers (LFSR).
Every shot consumes a fixed number of 16 bit words of each qubit stream, so
the frame of any global shot index can be generated directly from the stream
position without replaying the preceding shots.
"""

import csv
import enum
import logging
import numpy as np
from dataclasses import dataclass
from functools import lru_cache, reduce
from operator import xor
from typing import List, Optional, Sequence, Tuple, Union
from .collection import bloch_vector, rotation, rx, rz, sigz, swap_operator
from ._utils import fmt_float

logger = logging.getLogger(__name__)

__all__ = [
    "WORD_BITS",
    "MAXIMAL_TAPS",
    "maximal_taps",
    "Lfsr",
    "lfsr_next",
    "derive_seeds",
    "SamplerKind",
    "TetrahedralGroup",
    "tetrahedral_group",
    "measurement_direction",
    "virtual_z_unitary",
    "virtual_z_decompose",
    "frame_unitaries",
    "MeasurementFrame",
    "FrameBatch",
    "frames_from_words",
    "sample_frame",
    "FrameSampler",
    "two_copy_average",
    "haar_two_copy_average",
    "write_frames_csv",
]

WORD_BITS = 16
WORD_SCALE = float(1 << WORD_BITS)

# Fibonacci taps of maximal length registers (primitive feedback polynomials)
MAXIMAL_TAPS = {
    16: (16, 15, 13, 4),
    24: (24, 23, 22, 17),
    32: (32, 22, 2, 1),
    48: (48, 47, 21, 20),
    64: (64, 63, 61, 60),
}

_WORD_WEIGHTS = 2.0 ** np.arange(WORD_BITS)


def maximal_taps(width: int) -> Tuple[int, ...]:
    """Returns the maximal-length tap set of a register width."""
    try:
        return MAXIMAL_TAPS[width]
    except KeyError:
        raise ValueError(
            f"No maximal taps known for width {width}, "
            f"choose one of {sorted(MAXIMAL_TAPS)}"
        )


# =========================================================================
# Linear feedback shift register
# =========================================================================


@lru_cache(maxsize=None)
def _shift_matrix(width: int, taps: Tuple[int, ...]) -> np.ndarray:
    """GF(2) matrix of a single shift acting on the state bits (LSB first)."""
    a = np.zeros((width, width))
    a[np.arange(width - 1), np.arange(1, width)] = 1
    for p in taps:
        a[width - 1, width - p] = 1
    a.setflags(write=False)
    return a


@lru_cache(maxsize=None)
def _word_square(width: int, taps: Tuple[int, ...], k: int) -> np.ndarray:
    """The GF(2) matrix advancing the register by ``2^k`` words."""
    if k == 0:
        a = _shift_matrix(width, taps)
        out = np.eye(width)
        for _ in range(WORD_BITS):
            out = np.mod(a @ out, 2)
    else:
        prev = _word_square(width, taps, k - 1)
        out = np.mod(prev @ prev, 2)
    out.setflags(write=False)
    return out


def _word_power(width: int, taps: Tuple[int, ...], n: int) -> np.ndarray:
    out = np.eye(width)
    k = 0
    while n:
        if n & 1:
            out = np.mod(_word_square(width, taps, k) @ out, 2)
        n >>= 1
        k += 1
    return out


class Lfsr:
    """Immutable Fibonacci XOR linear feedback shift register.

    A shift computes the feedback bit as the XOR of the state bits at
    positions ``width - p`` for every tap ``p``, shifts the state right by one
    and inserts the feedback bit at the top. An output word is the top 16 bits
    of the state after 16 shifts.

    Parameters
    ----------
    seed : int, optional
        The initial (non-zero) state. The default is ``0xACE1``.
    taps : Sequence of int, optional
        The tap positions ``1..width``. Defaults to the maximal-length taps of
        the register width.
    width : int, optional
        The register width ``W >= 16``. The default is 16.
    """

    __slots__ = ("_state", "_taps", "_width")

    def __init__(
        self, seed: int = 0xACE1, taps: Optional[Sequence[int]] = None, width: int = 16
    ):
        width = int(width)
        if width < WORD_BITS or width > 64:
            raise ValueError(
                f"Register width must be in [{WORD_BITS}, 64], got {width}"
            )
        if taps is None:
            taps = maximal_taps(width)
        else:
            taps = tuple(sorted(set(int(p) for p in taps), reverse=True))
        if not taps or min(taps) < 1 or max(taps) > width:
            raise ValueError(f"Taps must lie in [1, {width}], got {taps}")
        state = int(seed) & ((1 << width) - 1)
        if state == 0:
            raise ValueError("LFSR state must be non-zero")
        self._state = state
        self._taps = taps
        self._width = width

    @property
    def state(self) -> int:
        return self._state

    @property
    def taps(self) -> Tuple[int, ...]:
        return self._taps

    @property
    def width(self) -> int:
        return self._width

    def _shifted(self, state: int) -> int:
        bit = 1 & reduce(xor, [state >> (self._width - p) for p in self._taps])
        return (state >> 1) | (bit << (self._width - 1))

    def shift(self) -> "Lfsr":
        """Returns the register advanced by a single shift."""
        return Lfsr(self._shifted(self._state), self._taps, self._width)

    def words(self, count: int, start: int = 0) -> np.ndarray:
        """Output words ``start, ..., start + count - 1`` of the stream.

        The words are computed with GF(2) matrix powers, which makes every
        stream position directly addressable.

        Parameters
        ----------
        count : int
            The number of words.
        start : int, optional
            The index of the first word. Word ``k`` is produced by the
            ``k + 1``-th call of :func:`lfsr_next` on this register.

        Returns
        -------
        words : (count, ) np.ndarray of np.uint16
        """
        if count < 0 or start < 0:
            raise ValueError(f"Invalid word range start={start}, count={count}")
        if count == 0:
            return np.zeros(0, dtype=np.uint16)
        w = self._width
        s0 = np.array([(self._state >> i) & 1 for i in range(w)], dtype=np.float64)
        x = np.mod(_word_power(w, self._taps, start + 1) @ s0, 2)[:, np.newaxis]
        k = 0
        while x.shape[1] < count:
            x = np.hstack([x, np.mod(_word_square(w, self._taps, k) @ x, 2)])
            k += 1
        return (_WORD_WEIGHTS @ x[w - WORD_BITS :, :count]).astype(np.uint16)

    def period(self, limit: Optional[int] = None) -> int:
        """Number of shifts until the state repeats, found by stepping the register."""
        limit = (1 << self._width) if limit is None else int(limit)
        state = self._shifted(self._state)
        n = 1
        while state != self._state:
            if n >= limit:
                raise ValueError(f"No period found within {limit} shifts")
            state = self._shifted(state)
            n += 1
        return n

    def __eq__(self, other) -> bool:
        if not isinstance(other, Lfsr):
            return NotImplemented
        this = (self._state, self._taps, self._width)
        return this == (other._state, other._taps, other._width)

    def __hash__(self) -> int:
        return hash((self._state, self._taps, self._width))

    def __repr__(self) -> str:
        name = self.__class__.__name__
        return f"{name}(0x{self._state:X}, taps={self._taps}, width={self._width})"


def lfsr_next(g: Lfsr) -> Tuple[Lfsr, int]:
    """Advances the register by one word and returns it with the output word."""
    state = g.state
    for _ in range(WORD_BITS):
        state = g._shifted(state)
    return Lfsr(state, g.taps, g.width), state >> (g.width - WORD_BITS)


def derive_seeds(base: int, num_qubits: int, width: int = 16) -> List[int]:
    """Deterministic non-zero per-qubit register seeds from a single integer."""
    seq = np.random.SeedSequence(int(base))
    words = seq.generate_state(num_qubits, dtype=np.uint64)
    mask = (1 << width) - 1
    return [int(w) & mask or 1 for w in words]


# =========================================================================
# Sampler kinds and the tetrahedral group
# =========================================================================


class SamplerKind(enum.Enum):
    """Distribution of the random measurement frames."""

    SPHERICAL = "spherical"
    POLE_CONCENTRATED = "pole"
    TETRAHEDRAL = "tetrahedral"
    DIRECT = "direct"

    @property
    def words_per_shot(self) -> int:
        """Number of LFSR words consumed per qubit and shot."""
        return {"spherical": 2, "pole": 2, "tetrahedral": 1, "direct": 0}[self.value]

    @property
    def is_weighted(self) -> bool:
        return self is SamplerKind.POLE_CONCENTRATED

    @classmethod
    def parse(cls, value: Union[str, "SamplerKind"]) -> "SamplerKind":
        if isinstance(value, cls):
            return value
        key = str(value).lower()
        if key == "pole_concentrated":
            key = "pole"
        try:
            return cls(key)
        except ValueError:
            raise ValueError(
                f"Unknown sampler '{value}', valid kinds: {[k.value for k in cls]}"
            )


def measurement_direction(v: np.ndarray) -> np.ndarray:
    """The Bloch direction measured by a Z-basis readout after the unitary ``v``."""
    v = np.asarray(v)
    return bloch_vector(v.conj().T @ sigz @ v) / 2


@dataclass(frozen=True)
class TetrahedralGroup:
    """The 12 rotations of the proper tetrahedral group as SU(2) matrices."""

    unitaries: np.ndarray
    directions: np.ndarray
    phases: np.ndarray

    def __len__(self) -> int:
        return len(self.unitaries)

    def index(self, u: np.ndarray, atol: float = 1e-10) -> int:
        """Index of the element equal to ``u`` up to a global phase."""
        for i, g in enumerate(self.unitaries):
            if abs(abs(np.trace(g.conj().T @ u)) - 2) < atol:
                return i
        raise ValueError("Matrix is not an element of the tetrahedral group")


@lru_cache(maxsize=1)
def tetrahedral_group() -> TetrahedralGroup:
    """Returns the tetrahedral group with its measurement directions and phases.

    The elements are the identity, the rotations by +-2pi/3 about the four
    cube diagonals and the rotations by pi about the coordinate axes.
    """
    elements = [np.eye(2, dtype=np.complex128)]
    for diag in [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]:
        for angle in (2 * np.pi / 3, -2 * np.pi / 3):
            elements.append(rotation(diag, angle))
    for axis in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
        elements.append(rotation(axis, np.pi))
    unitaries = np.array(elements)
    directions = np.array([measurement_direction(u) for u in unitaries])
    # The induced directions are exact coordinate axes
    directions = np.round(directions)
    phases = np.array([virtual_z_decompose(u) for u in unitaries])
    for arr in (unitaries, directions, phases):
        arr.setflags(write=False)
    return TetrahedralGroup(unitaries, directions, phases)


# =========================================================================
# Virtual-Z decomposition
# =========================================================================


def virtual_z_unitary(alpha: float, beta: float) -> np.ndarray:
    """The pulse sequence R_X(pi/2) R_Z(beta) R_X(pi/2) R_Z(alpha)."""
    return rx(np.pi / 2) @ rz(beta) @ rx(np.pi / 2) @ rz(alpha)


def _phases(theta, phi):
    alpha = np.mod(-phi, 2 * np.pi)
    beta = np.pi - theta
    return alpha, beta


def virtual_z_decompose(v: np.ndarray, atol: float = 1e-12) -> Tuple[float, float]:
    """Decomposes a pre-measurement unitary into two virtual Z phases.

    The returned phases reproduce the Z-basis statistics of ``v``: the
    circuit ``virtual_z_unitary(alpha, beta)`` equals ``v`` up to a final
    Z-rotation and a global phase, which is dropped.

    Parameters
    ----------
    v : (2, 2) array_like
        The single-qubit unitary applied before the Z readout.
    atol : float, optional
        Tolerance below which the measured direction counts as a pole. The
        azimuth is then set to zero.

    Returns
    -------
    alpha, beta : float
    """
    nx, ny, nz = measurement_direction(v)
    theta = float(np.arccos(np.clip(nz, -1.0, 1.0)))
    phi = 0.0 if np.hypot(nx, ny) < atol else float(np.arctan2(ny, nx))
    alpha, beta = _phases(theta, phi)
    return float(alpha), float(beta)


def frame_unitaries(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Vectorized pre-measurement unitaries ``R_y(-theta) R_z(-phi)``."""
    thetas = np.asarray(thetas, dtype=np.float64)
    phis = np.asarray(phis, dtype=np.float64)
    c = np.cos(thetas / 2)
    s = np.sin(thetas / 2)
    ep = np.exp(0.5j * phis)
    em = np.conj(ep)
    out = np.empty(thetas.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c * ep
    out[..., 0, 1] = s * em
    out[..., 1, 0] = -s * ep
    out[..., 1, 1] = c * em
    return out


# =========================================================================
# Frames
# =========================================================================


@dataclass(frozen=True)
class MeasurementFrame:
    """Per-qubit measurement settings of a single shot.

    ``indices`` holds the tetrahedral group element of every qubit and is
    ``-1`` for the other sampler kinds. ``weights`` is ``(pi/2) sin(theta)``
    for pole-concentrated frames and one otherwise.
    """

    kind: SamplerKind
    directions: np.ndarray
    thetas: np.ndarray
    phis: np.ndarray
    weights: np.ndarray
    indices: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray

    @property
    def num_qubits(self) -> int:
        return len(self.directions)

    def unitaries(self) -> np.ndarray:
        """The (Q, 2, 2) pre-measurement unitaries."""
        if self.kind is SamplerKind.TETRAHEDRAL:
            return tetrahedral_group().unitaries[self.indices]
        return frame_unitaries(self.thetas, self.phis)

    def pulse_unitaries(self) -> np.ndarray:
        """The (Q, 2, 2) virtual-Z circuits reconstructed from the phases."""
        pairs = zip(self.alphas, self.betas)
        return np.array([virtual_z_unitary(a, b) for a, b in pairs])


@dataclass(frozen=True)
class FrameBatch:
    """Frames of the consecutive shots ``start, ..., start + n - 1``.

    All arrays have the shot index as first and the qubit as second axis.
    """

    kind: SamplerKind
    start: int
    directions: np.ndarray
    thetas: np.ndarray
    phis: np.ndarray
    weights: np.ndarray
    indices: np.ndarray
    alphas: np.ndarray
    betas: np.ndarray

    @property
    def num_shots(self) -> int:
        return self.directions.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.directions.shape[1]

    def __len__(self) -> int:
        return self.num_shots

    def __getitem__(self, i: int) -> MeasurementFrame:
        return MeasurementFrame(
            self.kind,
            self.directions[i],
            self.thetas[i],
            self.phis[i],
            self.weights[i],
            self.indices[i],
            self.alphas[i],
            self.betas[i],
        )

    def unitaries(self) -> np.ndarray:
        """The (n, Q, 2, 2) pre-measurement unitaries."""
        if self.kind is SamplerKind.TETRAHEDRAL:
            return tetrahedral_group().unitaries[self.indices]
        return frame_unitaries(self.thetas, self.phis)


def frames_from_words(
    kind: SamplerKind, words: np.ndarray, start: int = 0
) -> FrameBatch:
    """Maps LFSR output words to measurement frames.

    Parameters
    ----------
    kind : SamplerKind
        The sampler kind.
    words : (n, Q, k) array_like
        The ``k = kind.words_per_shot`` words of each shot and qubit.
    start : int, optional
        The global index of the first shot.

    Returns
    -------
    batch : FrameBatch
    """
    kind = SamplerKind.parse(kind)
    words = np.asarray(words)
    num_shots, num_qubits = words.shape[:2]
    shape = (num_shots, num_qubits)
    u = (words.astype(np.float64) + 0.5) / WORD_SCALE
    weights = np.ones(shape)
    indices = np.full(shape, -1, dtype=np.int64)
    if kind is SamplerKind.SPHERICAL:
        thetas = np.arccos(1 - 2 * u[..., 0])
        phis = 2 * np.pi * u[..., 1]
    elif kind is SamplerKind.POLE_CONCENTRATED:
        thetas = np.pi * u[..., 0]
        phis = 2 * np.pi * u[..., 1]
        weights = 0.5 * np.pi * np.sin(thetas)
    elif kind is SamplerKind.TETRAHEDRAL:
        group = tetrahedral_group()
        indices = (words[..., 0].astype(np.int64) * len(group)) >> WORD_BITS
        directions = group.directions[indices]
        alphas = group.phases[indices, 0]
        betas = group.phases[indices, 1]
        thetas = np.arccos(directions[..., 2])
        phis = np.arctan2(directions[..., 1], directions[..., 0])
        return FrameBatch(
            kind, start, directions, thetas, phis, weights, indices, alphas, betas
        )
    else:
        thetas = np.zeros(shape)
        phis = np.zeros(shape)

    sin_t = np.sin(thetas)
    directions = np.stack(
        [sin_t * np.cos(phis), sin_t * np.sin(phis), np.cos(thetas)], axis=-1
    )
    alphas, betas = _phases(thetas, phis)
    return FrameBatch(
        kind, start, directions, thetas, phis, weights, indices, alphas, betas
    )


def sample_frame(
    kind: Union[str, SamplerKind], rngs: Sequence[Lfsr], num_qubits: int
) -> Tuple[MeasurementFrame, List[Lfsr]]:
    """Draws a single frame from one register per qubit.

    Returns
    -------
    frame : MeasurementFrame
    rngs : list of Lfsr
        The advanced registers.
    """
    kind = SamplerKind.parse(kind)
    if num_qubits < 1:
        raise ValueError(f"Number of qubits must be positive, got {num_qubits}")
    if len(rngs) != num_qubits:
        raise ValueError(f"Expected {num_qubits} registers, got {len(rngs)}")
    words = np.zeros((1, num_qubits, kind.words_per_shot), dtype=np.uint16)
    advanced = list()
    for q, g in enumerate(rngs):
        for k in range(kind.words_per_shot):
            g, words[0, q, k] = lfsr_next(g)
        advanced.append(g)
    return frames_from_words(kind, words)[0], advanced


class FrameSampler:
    """Addressable frame stream with one register per qubit.

    Parameters
    ----------
    kind : str or SamplerKind
        The sampler kind.
    seeds : Sequence of int
        One non-zero register seed per qubit.
    width : int, optional
        The register width.
    taps : Sequence of int, optional
        Register taps. Defaults to the maximal taps of ``width``.
    """

    def __init__(
        self,
        kind: Union[str, SamplerKind],
        seeds: Sequence[int],
        width: int = 16,
        taps: Optional[Sequence[int]] = None,
    ):
        self.kind = SamplerKind.parse(kind)
        if len(seeds) < 1:
            raise ValueError("At least one register seed is required")
        self.streams = [Lfsr(s, taps, width) for s in seeds]

    @property
    def num_qubits(self) -> int:
        return len(self.streams)

    def batch(self, start: int, count: int) -> FrameBatch:
        """Frames of the shots ``start, ..., start + count - 1``."""
        k = self.kind.words_per_shot
        words = np.zeros((count, self.num_qubits, k), dtype=np.uint16)
        if k:
            for q, g in enumerate(self.streams):
                words[:, q, :] = g.words(count * k, start * k).reshape(count, k)
        logger.debug("Sampled %d %s frames from shot %d", count, self.kind.value, start)
        return frames_from_words(self.kind, words, start)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.kind.value}, qubits={self.num_qubits})"


# =========================================================================
# Two-copy averages
# =========================================================================


def two_copy_average(unitaries: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Uniform average of ``U⊗U x U†⊗U†`` over the given unitaries."""
    out = np.zeros_like(x, dtype=np.complex128)
    for u in unitaries:
        uu = np.kron(u, u)
        out += uu @ x @ uu.conj().T
    return out / len(unitaries)


def haar_two_copy_average(x: np.ndarray, dim: int = 2) -> np.ndarray:
    """Exact Haar average of ``U⊗U x U†⊗U†`` on two copies of ``dim`` levels."""
    swap = swap_operator(dim)
    t = np.trace(x)
    s = np.trace(x @ swap)
    d2 = dim * dim - 1
    eye = np.eye(dim * dim)
    return (t - s / dim) / d2 * eye + (s - t / dim) / d2 * swap


def write_frames_csv(path, batch: FrameBatch, limit: Optional[int] = None) -> None:
    """Writes the frames of a batch as CSV rows, one row per shot and qubit."""
    num = batch.num_shots if limit is None else min(limit, batch.num_shots)
    header = ["shot", "qubit", "kind", "index", "theta", "phi", "weight"]
    header += ["nx", "ny", "nz", "alpha", "beta"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for i in range(num):
            for q in range(batch.num_qubits):
                row = [batch.start + i, q, batch.kind.value, int(batch.indices[i, q])]
                row += [fmt_float(batch.thetas[i, q]), fmt_float(batch.phis[i, q])]
                row += [fmt_float(batch.weights[i, q])]
                row += [fmt_float(v) for v in batch.directions[i, q]]
                row += [fmt_float(batch.alphas[i, q]), fmt_float(batch.betas[i, q])]
                writer.writerow(row)
    logger.info("Wrote %d frames to %s", num, path)
