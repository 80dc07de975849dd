# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

from .config import (
    DEFAULTS,
    EXPERIMENTS,
    SCHEMA_VERSION,
    ConfigError,
    ExperimentConfig,
    config_hash,
    load_config,
)
from .report import Report, Table, emit_report, report_folder
from .correlations import (
    CorrelationReport,
    MethodCorrelations,
    null_band,
    pearson_matrix,
    run_correlations,
)
from .threewave import (
    ThreeWaveReport,
    exact_populations,
    fock_three_wave_hamiltonian,
    projector_observables,
    run_threewave,
    three_wave_hamiltonian,
)
from .estimate import EstimateReport, run_estimate
from .audit import AuditReport, AuditRow, run_audit

RUNNERS = {
    "correlations": run_correlations,
    "threewave": run_threewave,
    "estimate": run_estimate,
    "audit": run_audit,
}


def run_experiment(cfg: ExperimentConfig) -> Report:
    """Runs the experiment named in the configuration."""
    return RUNNERS[cfg.experiment](cfg)
