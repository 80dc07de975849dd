# coding: utf-8
#
# This code is part of shadowmit.
#
# Copyright (c) 2022, Dylan Jones

"""Oracle checks of the estimator constants, the samplers and the protocol.

Every check produces a report row. Failed checks do not abort the audit.
"""

import logging
import numpy as np
from dataclasses import dataclass
from typing import Callable, List, Tuple
from ..channels import (
    ClassicalChannel,
    Mask,
    depolarizing,
    suppression_factor,
    twirl,
    twirled_suppression,
)
from ..collection import haar_unitary, random_density_matrix
from ..estimator import raw_pole_bound, second_moment_oracle, seminorm_pole
from ..mitigation import estimate_suppression, optimal_shot_ratio, total_shots
from ..models import TensorFlip
from ..models.flip import asymmetric_transition
from ..pauli import DensityMatrix, Observable, PauliString, ProductState
from ..sampling import (
    Lfsr,
    SamplerKind,
    derive_seeds,
    haar_two_copy_average,
    lfsr_next,
    measurement_direction,
    tetrahedral_group,
    two_copy_average,
    virtual_z_decompose,
    virtual_z_unitary,
)
from ..simulator import ExperimentPlan, run_plan
from .config import ExperimentConfig
from .report import Report, Table

logger = logging.getLogger(__name__)

PI2 = np.pi**2
ORACLE_TOLERANCE = 1e-6
EXACT_TOLERANCE = 1e-9
MC_SIGMAS = 4.0
MC_MAX_SHOTS = 200_000

COMPARATORS = {
    "abs": lambda x, ref, tol: abs(x - ref) <= tol,
    "gt": lambda x, ref, tol: x > ref + tol,
    "le": lambda x, ref, tol: x <= ref + tol,
}


@dataclass(frozen=True)
class AuditRow:
    check: str
    computed: float
    reference: float
    tolerance: float
    comparator: str = "abs"

    @property
    def passed(self) -> bool:
        compare = COMPARATORS[self.comparator]
        return bool(compare(self.computed, self.reference, self.tolerance))

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


class AuditReport(Report):

    experiment = "audit"

    def __init__(self, rows: List[AuditRow]):
        self.rows = list(rows)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def failures(self) -> List[AuditRow]:
        return [r for r in self.rows if not r.passed]

    def __getitem__(self, check: str) -> AuditRow:
        for r in self.rows:
            if r.check == check:
                return r
        raise KeyError(check)

    def tables(self):
        header = (
            "check",
            "computed",
            "reference",
            "tolerance",
            "comparator",
            "verdict",
        )
        rows = [
            (r.check, r.computed, r.reference, r.tolerance, r.comparator, r.verdict)
            for r in self.rows
        ]
        return [Table("audit", header, rows)]

    def summary(self):
        return {
            "passed": self.passed,
            "num_checks": len(self.rows),
            "failures": [r.check for r in self.failures()],
        }


# =========================================================================
# Checks
# =========================================================================


def second_moment_rows() -> List[AuditRow]:
    sph, tet = SamplerKind.SPHERICAL, SamplerKind.TETRAHEDRAL
    pole = SamplerKind.POLE_CONCENTRATED
    cases = [
        ("spherical_XX", sph, "X", "X", 1.0, 3.0),
        ("spherical_XY", sph, "X", "Y", 1.0, 0.0),
        ("spherical_ZZ", sph, "Z", "Z", 1.0, 3.0),
        ("pole_ZZ", pole, "Z", "Z", 1.0, 9 * PI2 / 32),
        ("pole_XX", pole, "X", "X", 1.0, 27 * PI2 / 64),
        ("pole_YY", pole, "Y", "Y", 1.0, 27 * PI2 / 64),
        ("pole_II", pole, "I", "I", 1.0, PI2 / 8),
        ("pole_IZ_zeros", pole, "I", "Z", 1.0, 3 * PI2 / 32),
        ("pole_IX_plus", pole, "I", "X", 1.0, 9 * PI2 / 64),
        ("tetrahedral_XX", tet, "X", "X", 1.0, 3.0),
        ("tetrahedral_XZ", tet, "X", "Z", 1.0, 0.0),
    ]
    rows = list()
    for name, kind, r, s, ev, ref in cases:
        value = second_moment_oracle(r, s, kind, ev)
        rows.append(AuditRow(f"second_moment_{name}", value, ref, ORACLE_TOLERANCE))
    var_identity = second_moment_oracle("I", "I", pole) - 1.0
    rows.append(
        AuditRow("pole_identity_variance", var_identity, PI2 / 8 - 1, ORACLE_TOLERANCE)
    )
    return rows


def design_rows(rng: np.random.Generator, num_samples: int = 20) -> List[AuditRow]:
    group = tetrahedral_group()
    deviation = 0.0
    for _ in range(num_samples):
        x = random_density_matrix(2, rng)
        diff = two_copy_average(group.unitaries, x) - haar_two_copy_average(x)
        deviation = max(deviation, float(np.max(np.abs(diff))))
    missing = 0
    for g in group.unitaries:
        for h in group.unitaries:
            try:
                group.index(g @ h)
            except ValueError:
                missing += 1
    return [
        AuditRow("tetrahedral_two_design", deviation, 0.0, EXACT_TOLERANCE),
        AuditRow("tetrahedral_closure", float(missing), 0.0, 0.0),
        AuditRow("tetrahedral_size", float(len(group)), 12.0, 0.0),
    ]


def twirl_rows() -> List[AuditRow]:
    z = Mask([True])
    confusion = ClassicalChannel(asymmetric_transition(0.1, 0.02))
    readout = suppression_factor(confusion, z)
    twirled = twirled_suppression(confusion, z)
    brute = suppression_factor(twirl(confusion), z)
    depol = depolarizing(0.1)
    return [
        AuditRow(
            "twirl_differs_asymmetric_confusion",
            abs(readout - twirled),
            1e-2,
            0.0,
            "gt",
        ),
        AuditRow("twirl_brute_force", brute, twirled, EXACT_TOLERANCE),
        AuditRow(
            "twirl_equal_depolarizing",
            abs(suppression_factor(depol, z) - twirled_suppression(depol, z)),
            0.0,
            EXACT_TOLERANCE,
        ),
    ]


def suppression_row(cfg: ExperimentConfig) -> AuditRow:
    """Monte Carlo calibration of a tensor bit flip against the exact factor."""
    probs = [0.02, 0.05]
    exact = float(np.prod([1 - 2 * p for p in probs]))
    n_shots = min(int(cfg.shots["calibration"]), MC_MAX_SHOTS)
    stream = "audit:suppression"
    plan = ExperimentPlan(
        state=ProductState.zeros(2),
        n_shots=n_shots,
        sampler=SamplerKind.TETRAHEDRAL,
        seeds=tuple(derive_seeds(cfg.stream_seed(stream), 2, cfg.lfsr_width)),
        error_model=TensorFlip(p=probs),
        batch_size=int(cfg.batch_size),
        outcome_seed=cfg.stream_seed("outcome:" + stream),
        lfsr_width=int(cfg.lfsr_width),
        origin="calibration",
    )
    mask = Mask("11")
    table = estimate_suppression(run_plan(plan), [mask])
    value, var = table.lookup(mask)
    tolerance = MC_SIGMAS * float(np.sqrt(var))
    return AuditRow("suppression_tensor_flip_11", value, exact, tolerance)


def bound_rows(rng: np.random.Generator, num_samples: int = 20) -> List[AuditRow]:
    worst = 0.0
    labels = ["II", "IZ", "ZI", "XX", "YZ", "ZZ", "XI", "IY"]
    for _ in range(num_samples):
        coeffs = rng.normal(size=len(labels))
        obs = Observable(dict(zip(labels, coeffs)))
        rho = DensityMatrix(random_density_matrix(2, rng))
        worst = max(worst, raw_pole_bound(obs, rho) / seminorm_pole(obs) ** 2)
    return [
        AuditRow("pole_raw_bound_below_seminorm", worst, 1.0, EXACT_TOLERANCE, "le")
    ]


def lfsr_rows() -> List[AuditRow]:
    g = Lfsr()
    _, word = lfsr_next(g)
    words = g.words(3)
    steps = list()
    for _ in range(3):
        g, w = lfsr_next(g)
        steps.append(w)
    mismatch = int(np.sum(words != np.array(steps, dtype=np.uint16)))
    return [
        AuditRow("lfsr_first_word", float(Lfsr().words(1)[0]), float(word), 0.0),
        AuditRow("lfsr_vectorized_words", float(mismatch), 0.0, 0.0),
        AuditRow("lfsr_period_16", float(Lfsr().period()), 65535.0, 0.0),
    ]


def virtual_z_row(rng: np.random.Generator, num_samples: int = 100) -> AuditRow:
    deviation = 0.0
    for _ in range(num_samples):
        u = haar_unitary(2, rng)
        alpha, beta = virtual_z_decompose(u)
        v = virtual_z_unitary(alpha, beta)
        diff = measurement_direction(v) - measurement_direction(u)
        deviation = max(deviation, float(np.max(np.abs(diff))))
    return AuditRow("virtual_z_reconstruction", deviation, 0.0, EXACT_TOLERANCE)


def budget_row() -> AuditRow:
    z = PauliString("Z")
    b = optimal_shot_ratio(z, expected=0.0, kind=SamplerKind.SPHERICAL)
    n = total_shots(0.01, z, 1.0, b, SamplerKind.SPHERICAL)
    return AuditRow("total_shots_reference", float(n), 60000.0, 0.0)


CHECKS: Tuple[Tuple[str, Callable], ...] = (
    ("second moments", lambda cfg, rng: second_moment_rows()),
    ("two-design", lambda cfg, rng: design_rows(rng)),
    ("twirl", lambda cfg, rng: twirl_rows()),
    ("suppression", lambda cfg, rng: [suppression_row(cfg)]),
    ("variance bound", lambda cfg, rng: bound_rows(rng)),
    ("lfsr", lambda cfg, rng: lfsr_rows()),
    ("virtual z", lambda cfg, rng: [virtual_z_row(rng)]),
    ("shot budget", lambda cfg, rng: [budget_row()]),
)


def run_audit(cfg: ExperimentConfig) -> AuditReport:
    """Runs all oracle checks."""
    rng = np.random.default_rng(cfg.stream_seed("audit"))
    rows = list()
    for name, check in CHECKS:
        logger.info("Audit: %s", name)
        rows.extend(check(cfg, rng))
    report = AuditReport(rows)
    for r in report.failures():
        logger.warning(
            "Audit check %s failed: %.6g vs %.6g", r.check, r.computed, r.reference
        )
    return report
