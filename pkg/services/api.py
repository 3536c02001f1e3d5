"""
Command execution layer.
All CLI subcommands go through execute_run().

Numbers are computed by the library modules ONLY. This layer checks the
operand count, calls the library, and packs results, residuals and warnings
into a Report. A mathematical rejection becomes a REJECTED report, never an
exception.
"""

import logging
from collections.abc import Callable, Iterator
from contextlib import contextmanager
from typing import Any

import numpy as np

from models.config import GenConfig, ToleranceConfig, DEFAULT_TOLERANCES
from models.errors import (
    HypothesisError,
    InvalidInputError,
    MatrixFileError,
    NumericalFailureError,
)
from models.report import Report, ReportStatus
from models.results import SimDiagResult
from services import apps, instancegen, psdnf, simdiag, williamson
from services.matcore import symplectic_residual
from services.matrix_io import matrices_payload

logger = logging.getLogger(__name__)

Handler = Callable[[list[np.ndarray], dict[str, Any], ToleranceConfig], tuple[dict, dict]]


# =============================================================================
# Warning capture
# =============================================================================

class _WarningCollector(logging.Handler):
    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.messages: list[str] = []

    def emit(self, record: logging.LogRecord) -> None:
        self.messages.append(record.getMessage())


@contextmanager
def collect_warnings() -> Iterator[list[str]]:
    """Copy WARNING records from every service module into a list."""
    collector = _WarningCollector()
    root = logging.getLogger("services")
    root.addHandler(collector)
    try:
        yield collector.messages
    finally:
        root.removeHandler(collector)


# =============================================================================
# Command handlers
# =============================================================================

def _require_count(matrices: list[np.ndarray], expected: int | None = None, minimum: int = 1) -> None:
    if expected is not None and len(matrices) != expected:
        raise InvalidInputError(f"expected {expected} matrices, got {len(matrices)}")
    if len(matrices) < minimum:
        raise InvalidInputError(f"expected at least {minimum} matrices, got {len(matrices)}")


def _execute_williamson_run(matrices, params, cfg):
    _require_count(matrices, 1)
    A = matrices[0]
    res = williamson.williamson(A, cfg)
    check = williamson.check_williamson(A, res, cfg)
    oracle = williamson.symplectic_eigenvalues(A, cfg)
    ortho = williamson.is_orthosymplectic_diagonalizable(A, cfg)
    result = res.to_dict()
    result["orthosymplectic_diagonalizable"] = ortho.holds
    residuals = dict(check.residuals)
    residuals["spectrum_oracle"] = float(np.max(np.abs(res.d - oracle) / np.maximum(1.0, oracle)))
    residuals["orthosymplectic_commutator"] = ortho.residual
    return result, residuals


def _execute_symplectic_eigs_run(matrices, params, cfg):
    _require_count(matrices, 1)
    d = williamson.symplectic_eigenvalues(matrices[0], cfg)
    return {"spectra": [d.tolist()]}, {}


def _execute_check_commute_run(matrices, params, cfg):
    _require_count(matrices, 2)
    A, B = matrices
    check = simdiag.symplectically_commutes(A, B, cfg)
    result = {
        "commutes": check.holds,
        "residual": check.residual,
        "threshold": check.threshold,
        "classically_commutes": simdiag.classically_commutes(A, B, cfg).holds,
    }
    residuals = {"symplectic_commutator": check.residual}
    if params.get("power") is not None:
        powers = simdiag.powers_commute_check(A, B, params["power"], cfg, t=params.get("power_b"))
        result["powers"] = powers.to_dict()
        residuals["powers_commutator"] = powers.residual
    return result, residuals


def _execute_bracket_run(matrices, params, cfg):
    _require_count(matrices, 2)
    A, B = matrices
    C = simdiag.poisson_bracket_gram(A, B, cfg)
    check = simdiag.symplectically_commutes(A, B, cfg)
    return (
        {"bracket_gram": C.tolist(), "vanishes": check.holds},
        {"bracket_norm": float(np.linalg.norm(C, "fro"))},
    )


def _execute_simdiag_run(matrices, params, cfg):
    _require_count(matrices, minimum=1)
    if len(matrices) == 2:
        res = simdiag.simdiag_pd_pair(matrices[0], matrices[1], cfg)
    else:
        res = simdiag.simdiag_pd_family(matrices, cfg)
    check = simdiag.check_simdiag(matrices, res, cfg)
    return res.to_dict(), dict(check.residuals)


def _execute_normal_form_run(matrices, params, cfg):
    _require_count(matrices, minimum=1)
    nf = psdnf.psd_normal_form_family(matrices, cfg)
    residuals = dict(psdnf.check_normal_form(matrices, nf, cfg).residuals)
    for i, A in enumerate(matrices):
        action = psdnf.hamilton_action_check(A, nf, i, cfg)
        residuals[f"hamilton_action[{i}]"] = action.residuals["hamilton_action"]
    return nf.to_dict(), residuals


def _execute_gaussian_modes_run(matrices, params, cfg):
    _require_count(matrices, 2)
    res = apps.gaussian_normal_modes(matrices[0], matrices[1], cfg)
    check = simdiag.check_simdiag(matrices, SimDiagResult(S=res.S, spectra=[res.nu1, res.nu2]), cfg)
    return res.to_dict(), dict(check.residuals)


def _execute_partition_run(matrices, params, cfg):
    _require_count(matrices, minimum=1)
    N = params.get("N")
    if N is None:
        N = len(matrices)
    if N < 1:
        raise InvalidInputError(f"N must be a positive integer, got {N}")
    d = params.get("d")
    if d is None:
        dim = matrices[0].shape[0]
        if dim % (2 * N):
            raise InvalidInputError(f"dimension {dim} is not a multiple of 2N = {2 * N}; pass --d")
        d = dim // (2 * N)
    res = apps.partition_function(
        matrices,
        beta=params.get("beta", 1.0),
        h=params.get("h", 1.0),
        d=d,
        N=N,
        cfg=cfg,
    )
    logger.warning(apps.PREFACTOR_NOTE)
    return res.to_dict(), {"determinant_identity": apps.determinant_identity_residual(res)}


def _execute_gen_run(matrices, params, cfg):
    g = GenConfig(seed=int(params.get("seed", 0)), n=int(params.get("n", 1)),
                  spread=float(params.get("spread", 1.0)))
    kind = params.get("kind", "family")
    if kind == "symplectic":
        mats = [instancegen.random_symplectic(g)]
        residuals = {"symplectic": symplectic_residual(mats[0])}
    elif kind == "orthosymplectic":
        mats = [instancegen.random_orthosymplectic(g)]
        O = mats[0]
        residuals = {
            "symplectic": symplectic_residual(O),
            "orthogonal": float(np.linalg.norm(O.T @ O - np.eye(O.shape[0]))),
        }
    elif kind == "family":
        spectra = params.get("spectra") or [list(range(1, g.n + 1))]
        mats = instancegen.random_commuting_family(g, spectra, orthosymplectic=bool(params.get("orthosymplectic")))
        pair = simdiag.first_noncommuting_pair(mats, cfg)
        worst = max(
            (simdiag.symplectically_commutes(a, b, cfg).residual
             for i, a in enumerate(mats) for b in mats[i + 1:]),
            default=0.0,
        )
        residuals = {"max_symplectic_commutator": worst}
        if pair is not None:
            logger.warning("generated pair %s fails the commutation check", pair[:2])
    else:
        raise InvalidInputError(f"unknown generator kind {kind!r}")
    result = {"kind": kind, "generator": g.to_dict(), **matrices_payload(mats)}
    return result, residuals


COMMANDS: dict[str, Handler] = {
    "williamson": _execute_williamson_run,
    "symplectic-eigs": _execute_symplectic_eigs_run,
    "check-commute": _execute_check_commute_run,
    "bracket": _execute_bracket_run,
    "simdiag": _execute_simdiag_run,
    "normal-form": _execute_normal_form_run,
    "gaussian-modes": _execute_gaussian_modes_run,
    "partition": _execute_partition_run,
    "gen": _execute_gen_run,
}


def get_commands() -> list[str]:
    """All available subcommands."""
    return list(COMMANDS)


# =============================================================================
# Run execution
# =============================================================================

def execute_run(
    command: str,
    matrices: list[np.ndarray] | None = None,
    params: dict[str, Any] | None = None,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
    inputs: dict[str, Any] | None = None,
) -> Report:
    """
    Execute one command and return its Report.

    Args:
        command: one of COMMANDS
        matrices: operands, already parsed
        params: scalar parameters (beta, h, d, N, seed, n, spectra, power, ...)
        cfg: tolerances
        inputs: description of the inputs to echo into the report

    Returns:
        Report with status COMPLETED, REJECTED (hypothesis violated) or FAILED
    """
    if command not in COMMANDS:
        raise InvalidInputError(f"unknown command {command!r}")
    matrices = matrices or []
    params = params or {}
    report = Report(
        command=command,
        inputs={**(inputs or {}), "params": params},
        tolerances=cfg.to_dict(),
    )

    with collect_warnings() as warnings:
        try:
            report.result, report.residuals = COMMANDS[command](matrices, params, cfg)
            report.status = ReportStatus.COMPLETED
        except HypothesisError as e:
            report.status = ReportStatus.REJECTED
            report.error = e.to_dict()
            if e.residual is not None:
                report.residuals = {"violation": e.residual}
        except NumericalFailureError as e:
            report.status = ReportStatus.FAILED
            report.error = {"type": type(e).__name__, "violated_hypothesis": None,
                            "message": str(e), "residual": None, "details": e.diagnostics}
            report.residuals = {k: v for k, v in e.diagnostics.items() if isinstance(v, float)}
        except (InvalidInputError, MatrixFileError) as e:
            report.status = ReportStatus.FAILED
            report.error = {"type": type(e).__name__, "violated_hypothesis": None,
                            "message": str(e), "residual": None}
    report.warnings = list(warnings)
    logger.debug("execute_run: %s", report.display_name)
    return report
