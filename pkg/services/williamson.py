"""
Williamson decomposition of a single positive definite matrix.

williamson() is the B = I case of the simultaneous construction: with
Y = A^{1/2} J A^{1/2} brought to canonical form by an orthogonal U,
S = A^{-1/2} U (D^{1/2} ⊗ I₂) satisfies SᵀJS = J and SᵀAS = D ⊗ I₂.
"""

import logging

import numpy as np
from numpy.typing import ArrayLike

from models.config import ToleranceConfig, DEFAULT_TOLERANCES
from models.errors import InvalidInputError, NumericalFailureError
from models.linalg import CommutationCheck, ResidualReport
from models.results import WilliamsonResult
from services.matcore import (
    as_square,
    diagonalization_residual,
    j_for,
    require_positive_definite,
    require_positive_semidefinite,
    skew_canonical,
    sym_power,
    symplectic_residual,
)

logger = logging.getLogger(__name__)


def symplectic_eigenvalues(A: ArrayLike, cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> np.ndarray:
    """
    Symplectic spectrum of a PSD matrix: the nonnegative imaginary parts of the
    eigenvalues of JᵀA, one per conjugate pair, sorted nondecreasing.

    Computed independently of williamson() so each can check the other.
    """
    A = require_positive_semidefinite(A, cfg, "A")
    J = j_for(A)
    ev = np.linalg.eigvals(J.T @ A)
    mags = np.sort(np.abs(ev.imag))
    return 0.5 * (mags[0::2] + mags[1::2])


def williamson(A: ArrayLike, cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> WilliamsonResult:
    """
    Williamson decomposition SᵀAS = diag(d) ⊗ I₂ of a PD matrix.

    Args:
        A: symmetric positive definite 2n x 2n matrix
        cfg: tolerances

    Returns:
        WilliamsonResult with symplectic S and nondecreasing d

    Raises:
        NotPositiveDefiniteError: A is not PD (PSD input belongs to psdnf)
        NumericalFailureError: the residual contract fails after construction
    """
    A = require_positive_definite(A, cfg, "A")
    J = j_for(A)
    root = sym_power(A, 0.5, cfg)
    inv_root = sym_power(A, -0.5, cfg)

    canon = skew_canonical(root @ J @ root, cfg)
    if canon.zero_dim:
        raise NumericalFailureError(
            f"A^(1/2) J A^(1/2) lost rank ({canon.zero_dim} zero directions)",
            diagnostics={"zero_dim": canon.zero_dim},
        )
    d = canon.deltas
    S = inv_root @ canon.Q @ np.kron(np.diag(np.sqrt(d)), np.eye(2))
    result = WilliamsonResult(S=S, d=d)

    report = check_williamson(A, result, cfg)
    logger.debug("williamson: n=%d residuals=%s", len(d), report.residuals)
    if not report.passed:
        raise NumericalFailureError(
            f"Williamson residual {report.worst:.3e} exceeds {cfg.tol_residual:.1e}",
            diagnostics=report.residuals,
        )
    return result


def is_orthosymplectic_diagonalizable(
    A: ArrayLike,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> CommutationCheck:
    """A PD matrix is diagonalizable by an orthosymplectic S iff JA = AJ."""
    A = require_positive_definite(A, cfg, "A")
    J = j_for(A)
    residual = float(np.linalg.norm(J @ A - A @ J, "fro"))
    threshold = cfg.tol_commute * float(np.linalg.norm(A, "fro"))
    return CommutationCheck(holds=residual <= threshold, residual=residual, threshold=threshold)


def check_williamson(
    A: ArrayLike,
    res: WilliamsonResult,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> ResidualReport:
    """Symplecticity of S and diagonalization of A, against tol_residual."""
    A = as_square(A, "A")
    S = as_square(res.S, "S")
    if S.shape != A.shape or 2 * len(res.d) != A.shape[0]:
        raise InvalidInputError(
            f"shape mismatch: A {A.shape}, S {S.shape}, {len(res.d)} symplectic eigenvalues"
        )
    return ResidualReport(
        residuals={
            "symplectic": symplectic_residual(S),
            "diagonalization": diagonalization_residual(A, S, res.d),
        },
        tolerance=cfg.tol_residual,
    )
