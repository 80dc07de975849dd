# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Report tables and their serialization."""

import csv
import json
import logging
import numpy as np
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple
from .._utils import fmt_float, save_figure
from ..models.abc import _plain

logger = logging.getLogger(__name__)

HASH_LENGTH = 10


@dataclass(frozen=True)
class Table:
    """A named CSV table."""

    name: str
    header: Tuple[str, ...]
    rows: List[Sequence[Any]] = field(default_factory=list)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError(
                    f"Row {row} does not match the header of table '{self.name}'"
                )

    @property
    def filename(self) -> str:
        return f"{self.name}.csv"


class Report(ABC):
    """Result of an experiment."""

    experiment = "abstract"

    @abstractmethod
    def tables(self) -> List[Table]:
        pass

    def summary(self) -> Dict[str, Any]:
        return dict()

    def figures(self) -> Iterator[Tuple[str, Any]]:
        """Yields ``(name, figure)`` pairs of the optional plots."""
        return iter(())


def _cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return fmt_float(value)
    return str(value)


def write_table(path, table: Table) -> Path:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(table.header)
        for row in table.rows:
            writer.writerow([_cell(v) for v in row])
    logger.debug("Wrote %d rows to %s", len(table.rows), path)
    return path


def _write_json(path, data) -> None:
    with open(path, "w") as fh:
        json.dump(_plain(data), fh, indent=2, sort_keys=True)
        fh.write("\n")


def report_folder(cfg, outdir=None) -> Path:
    """``<outdir>/<experiment>-<hash>``, deterministic for a configuration."""
    root = Path(cfg.outdir if outdir is None else outdir)
    return root / f"{cfg.experiment}-{cfg.hash()[:HASH_LENGTH]}"


def emit_report(report: Report, cfg, outdir=None, plots: bool = False) -> Path:
    """Writes the tables, the summary and the configuration of a report.

    Parameters
    ----------
    report : Report
        The experiment result.
    cfg : ExperimentConfig
        The configuration the report was produced with.
    outdir : str or Path, optional
        Root of the output. Defaults to ``cfg.outdir``.
    plots : bool, optional
        Also save the figures of the report as png images.

    Returns
    -------
    folder : Path
        The folder containing the files.

    Raises
    ------
    OSError
        If a file cannot be written. The message names the path.
    """
    folder = report_folder(cfg, outdir)
    path = folder
    try:
        folder.mkdir(parents=True, exist_ok=True)
        for table in report.tables():
            path = folder / table.filename
            write_table(path, table)
        path = folder / "summary.json"
        _write_json(path, report.summary())
        path = folder / "config.json"
        _write_json(path, cfg.to_dict())
        if plots:
            import matplotlib.pyplot as plt

            for name, fig in report.figures():
                path = folder / f"{name}.png"
                save_figure(fig, path)
                plt.close(fig)
    except OSError as e:
        message = f"Cannot write report file {path}: {e.strerror or e}"
        raise OSError(e.errno, message, str(path)) from e
    logger.info("Report written to %s", folder)
    return folder
