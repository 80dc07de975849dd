# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Checks and plots for small dense matrices."""

import numpy as np
from matplotlib import colors
import colorcet as cc

__all__ = [
    "matshow",
    "hermitian",
    "is_hermitian",
    "is_unitary",
    "equal_up_to_phase",
]


# =============================================================================
# Plotting
# =============================================================================


def matshow(mat, cmap=None, colorbar=False, ticklabels=None, center=0.0, ax=None):
    """Plots a real matrix with a diverging colormap.

    Parameters
    ----------
    mat : (N, M) array_like
        The matrix to plot.
    cmap : optional
        The colormap, defaults to colorcet's coolwarm.
    colorbar : bool, optional
        Adds a colorbar if True.
    ticklabels : list, optional
        Labels of both axes, only used for small matrices.
    center : float or None, optional
        Value mapped to the middle of the colormap. If `None` the colors
        span the value range of the matrix.
    ax : plt.Axes, optional
        Axes to draw into.

    Returns
    -------
    ax : plt.Axes
    """
    import matplotlib.pyplot as plt

    mat = np.real(np.asarray(mat))
    if ax is None:
        fig, ax = plt.subplots()
    else:
        fig = ax.get_figure()
    if center is None:
        norm = colors.Normalize(vmin=np.min(mat), vmax=np.max(mat))
    else:
        halfrange = float(np.max(np.abs(mat - center))) or 1.0
        norm = colors.CenteredNorm(vcenter=center, halfrange=halfrange)
    im = ax.matshow(mat, cmap=cmap or cc.m_coolwarm, norm=norm)
    if colorbar:
        fig.colorbar(im, ax=ax)
    if max(mat.shape) < 20:
        ax.set_xticks(np.arange(mat.shape[1]))
        ax.set_yticks(np.arange(mat.shape[0]))
        if ticklabels is not None:
            ax.set_xticklabels(ticklabels, rotation=45, ha="left")
            ax.set_yticklabels(ticklabels)
    fig.tight_layout()
    return ax


# =============================================================================
# Methods
# =============================================================================


def hermitian(a):
    """Conjugate transpose over the last two axes, stacks are supported."""
    return np.conj(np.swapaxes(a, -2, -1))


def is_hermitian(a, rtol=0.0, atol=1e-10):
    """Checks if a square array (or stack) equals its conjugate transpose."""
    a = np.asarray(a)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        return False
    return np.allclose(a, hermitian(a), rtol, atol)


def is_unitary(a, atol=1e-10):
    """Checks if a square array is unitary within an absolute tolerance."""
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return np.allclose(hermitian(a) @ a, np.eye(a.shape[0]), rtol=0.0, atol=atol)


def equal_up_to_phase(a, b, atol=1e-10):
    """Checks if two matrices agree up to a global phase factor.

    Parameters
    ----------
    a, b : array_like
        The matrices to compare.
    atol : float, optional
        Absolute tolerance of the entrywise comparison.

    Returns
    -------
    equal : bool
    """
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        return False
    # Align phases at the largest entry of a
    idx = np.unravel_index(np.argmax(np.abs(a)), a.shape)
    if abs(b[idx]) < atol:
        return bool(np.allclose(a, b, rtol=0.0, atol=atol))
    phase = a[idx] / b[idx]
    phase /= abs(phase)
    return bool(np.allclose(a, phase * b, rtol=0.0, atol=atol))
