# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

import logging
from pathlib import Path

# =========================================================================
# LOGGING
# =========================================================================

# Configure package logger
logger = logging.getLogger("shadowmit")

_stream_handler = logging.StreamHandler()
_stream_handler.setLevel(logging.DEBUG)

_frmt_str = "[%(asctime)s] %(name)s:%(levelname)-8s - %(message)s"
_formatter = logging.Formatter(_frmt_str, datefmt="%H:%M:%S")

_stream_handler.setFormatter(_formatter)  # Add formatter to stream handler
logger.addHandler(_stream_handler)  # Add stream handler to package logger

logger.setLevel(logging.WARNING)  # Set initial logging level


def set_verbosity(level: int) -> None:
    """Sets the level of the package logger from a ``-v`` count.

    Parameters
    ----------
    level : int
        ``0`` keeps warnings only, ``1`` enables info and ``2`` or more debug
        messages.
    """
    if level >= 2:
        logger.setLevel(logging.DEBUG)
    elif level == 1:
        logger.setLevel(logging.INFO)
    else:
        logger.setLevel(logging.WARNING)


# =========================================================================
# FORMATTING
# =========================================================================


def fmt_float(x) -> str:
    """Ten significant digits, the format of every CSV number."""
    return f"{float(x):.10g}"


# =========================================================================
# PLOTTING
# =========================================================================


def save_figure(fig, path, dpi=150, rasterized=True) -> Path:
    """Saves a figure, the format follows the suffix of ``path``."""
    path = Path(path)
    if rasterized:
        for ax in fig.get_axes():
            ax.set_rasterized(True)
    fig.savefig(path, dpi=dpi)
    logger.info("Figure saved: %s", path.name)
    return path


def setup_plot(
    fig,
    ax,
    xlabel=None,
    ylabel=None,
    title=None,
    xlim=None,
    ylim=None,
    grid=False,
    legend=False,
    tight=False,
):
    """Labels, limits, grid and legend of a single axes plot."""
    if xlabel is not None:
        ax.set_xlabel(xlabel)
    if ylabel is not None:
        ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if xlim is not None:
        ax.set_xlim(*xlim)
    if ylim is not None:
        ax.set_ylim(*ylim)
    if grid:
        ax.grid(axis=grid if isinstance(grid, str) else "both")
    if legend:
        ax.legend()
    if tight:
        fig.tight_layout()
