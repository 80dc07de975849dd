# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

import numpy as np
import colorcet as cc
from .._utils import setup_plot
from ..matrix import matshow


def pearson_histogram(values, band: float, bins: int = 30, title: str = "", ax=None):
    """Histogram of pairwise correlations with dashed red ``±2σ`` null bands."""
    import matplotlib.pyplot as plt

    values = np.asarray(values, dtype=np.float64)
    if ax is None:
        fig, ax = plt.subplots()
    else:
        fig = ax.get_figure()
    lim = max(np.max(np.abs(values)) if values.size else 0.0, 1.5 * band)
    ax.hist(values, bins=bins, range=(-lim, lim), color=cc.glasbey_category10[0])
    ax.axvline(-band, color="r", ls="--")
    ax.axvline(+band, color="r", ls="--")
    setup_plot(
        fig, ax, xlabel="Pearson coefficient", ylabel="Pairs", title=title, tight=True
    )
    return fig


def correlation_heatmap(matrix, title: str = ""):
    ax = matshow(matrix, colorbar=True, center=0.0)
    ax.set_title(title)
    return ax.get_figure()


def threewave_plot(times, exact, direct, mitigated, stderr, labels):
    """Populations over time: exact lines, direct and mitigated markers."""
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots()
    colors = cc.glasbey_category10
    for k, label in enumerate(labels):
        c = colors[k % len(colors)]
        ax.plot(times, exact[:, k], color=c, label=f"|{label}>")
        ax.plot(times, direct[:, k], color=c, ls="", marker="x", ms=4)
        ax.errorbar(
            times, mitigated[:, k], yerr=stderr[:, k], color=c, ls="", marker="o", ms=3
        )
    setup_plot(
        fig, ax, xlabel="t", ylabel="Probability", grid=True, legend=True, tight=True
    )
    return fig
