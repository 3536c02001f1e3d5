"""
Symplectic commutativity and simultaneous symplectic diagonalization.

Conventions:
- ω(x, y) = xᵀJy, quadratic form Q_M(u) = uᵀMu, Hamilton map H_M = JᵀM.
- Poisson-bracket Gram matrix C = 2(AJB - BJA), so that
  uᵀCu = (∇Q_A)ᵀ J (∇Q_B) with ∇Q_M(u) = 2Mu.

A family of PD matrices shares one symplectic S with SᵀAᵢS = diag(dᵢ) ⊗ I₂
exactly when every pair satisfies AJB = BJA.
"""

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike

from models.config import ToleranceConfig, DEFAULT_TOLERANCES
from models.errors import InvalidInputError, NotCommutingError, NumericalFailureError
from models.linalg import CommutationCheck, Matrix, ResidualReport
from models.results import SimDiagResult
from services.matcore import (
    check_same_dim,
    common_eigenspace_partition,
    commutator_residual,
    j_for,
    rel_residual,
    require_positive_definite,
    skew_canonical,
    sym_power,
    symplectic_residual,
    validate_symmetric,
)

logger = logging.getLogger(__name__)


# =============================================================================
# Hamilton maps and brackets
# =============================================================================

def hamilton_map(A: ArrayLike, cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> Matrix:
    """H = JᵀA, the matrix with uᵀAv = uᵀJHv for all u, v."""
    A = validate_symmetric(A, cfg, "A")
    return j_for(A).T @ A


def poisson_bracket_gram(
    A: ArrayLike,
    B: ArrayLike,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> Matrix:
    """
    Gram matrix C = 2(AJB - BJA) of the quadratic form {Q_A, Q_B}.

    C is symmetric and vanishes exactly when A and B symplectically commute.
    """
    A = validate_symmetric(A, cfg, "A")
    B = validate_symmetric(B, cfg, "B")
    check_same_dim(A, B)
    J = j_for(A)
    C = 2.0 * (A @ J @ B - B @ J @ A)
    return 0.5 * (C + C.T)


def _symplectic_commutator(A: Matrix, B: Matrix, cfg: ToleranceConfig) -> CommutationCheck:
    J = j_for(A)
    residual = float(np.linalg.norm(A @ J @ B - B @ J @ A, "fro"))
    threshold = cfg.tol_commute * float(np.linalg.norm(A, "fro") * np.linalg.norm(B, "fro"))
    return CommutationCheck(holds=residual <= threshold, residual=residual, threshold=threshold)


def symplectically_commutes(
    A: ArrayLike,
    B: ArrayLike,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> CommutationCheck:
    """AJB = BJA within tol_commute·‖A‖_F·‖B‖_F."""
    A = validate_symmetric(A, cfg, "A")
    B = validate_symmetric(B, cfg, "B")
    check_same_dim(A, B)
    return _symplectic_commutator(A, B, cfg)


def classically_commutes(
    A: ArrayLike,
    B: ArrayLike,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> CommutationCheck:
    """AB = BA within tol_commute·‖A‖_F·‖B‖_F."""
    A = validate_symmetric(A, cfg, "A", require_even=False)
    B = validate_symmetric(B, cfg, "B", require_even=False)
    check_same_dim(A, B)
    residual, scale = commutator_residual(A, B)
    threshold = cfg.tol_commute * scale
    return CommutationCheck(holds=residual <= threshold, residual=residual, threshold=threshold)


def powers_commute_check(
    A: ArrayLike,
    B: ArrayLike,
    s: float,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
    t: float | None = None,
) -> CommutationCheck:
    """
    Does A^s J B^t = B^t J A^s hold? (t defaults to s.)

    When A and B commute both symplectically and classically, every equal
    power pair commutes symplectically; `extra` records whether those two
    hypotheses hold for the given A, B.
    """
    A = require_positive_definite(A, cfg, "A")
    B = require_positive_definite(B, cfg, "B")
    check_same_dim(A, B)
    t = s if t is None else t
    check = _symplectic_commutator(sym_power(A, s, cfg), sym_power(B, t, cfg), cfg)
    hypotheses = {
        "symplectic_commute": _symplectic_commutator(A, B, cfg).holds,
        "classical_commute": classically_commutes(A, B, cfg).holds,
    }
    return CommutationCheck(
        holds=check.holds,
        residual=check.residual,
        threshold=check.threshold,
        extra={"s": float(s), "t": float(t), "hypotheses": hypotheses},
    )


def first_noncommuting_pair(
    mats: Sequence[Matrix],
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> tuple[int, int, CommutationCheck] | None:
    """The first (i, j) with AᵢJAⱼ ≠ AⱼJAᵢ, in lexicographic order, or None."""
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            check = _symplectic_commutator(mats[i], mats[j], cfg)
            if not check.holds:
                return i, j, check
    return None


def require_commuting_family(
    mats: Sequence[Matrix],
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
    error: type[NotCommutingError] = NotCommutingError,
) -> None:
    """Raise on the first pair that does not symplectically commute."""
    offending = first_noncommuting_pair(mats, cfg)
    if offending is None:
        return
    i, j, check = offending
    raise error(
        f"matrices {i} and {j} do not symplectically commute: "
        f"‖AJB - BJA‖_F = {check.residual:.3e} > {check.threshold:.3e}",
        residual=check.residual,
        details={
            "pair": [i, j],
            "bracket_gram": poisson_bracket_gram(mats[i], mats[j], cfg).tolist(),
        },
    )


# =============================================================================
# Simultaneous diagonalization
# =============================================================================

def simultaneous_congruence(
    metric: Matrix,
    members: Sequence[Matrix],
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> tuple[Matrix, np.ndarray, list[np.ndarray]]:
    """
    Common symplectic congruence for a PD metric and PSD members.

    X_i = M^{-1/2} A_i M^{-1/2} and Y = M^{1/2} J M^{1/2} commute; the joint
    eigenspaces of the X_i are Y-invariant, so canonicalizing Y block by block
    yields one orthogonal U for all of them. S = M^{-1/2} U (D^{1/2} ⊗ I₂).

    Args:
        metric: PD matrix M whose symplectic spectrum fixes the pair order
        members: PSD matrices commuting symplectically with M and each other

    Returns:
        (S, d, spectra) with d the metric spectrum (nondecreasing) and
        spectra[i] the spectrum of members[i] in the same pair order
    """
    dim = metric.shape[0]
    J = j_for(metric)
    root = sym_power(metric, 0.5, cfg)
    inv_root = sym_power(metric, -0.5, cfg)

    Y = root @ J @ root
    Y = 0.5 * (Y - Y.T)
    Xs = []
    for i, M in enumerate(members):
        X = inv_root @ M @ inv_root
        X = 0.5 * (X + X.T)
        residual, scale = commutator_residual(X, Y)
        if residual > cfg.tol_commute * scale:
            raise NotCommutingError(
                f"member {i}: transformed pair does not commute numerically "
                f"(‖XY - YX‖_F = {residual:.3e})",
                residual=residual,
                details={"member": i},
            )
        Xs.append(X)

    blocks = common_eigenspace_partition(Xs, cfg, dim=dim)

    pairs: list[Matrix] = []
    deltas: list[float] = []
    for k, block in enumerate(blocks):
        B = block.cols
        canon = skew_canonical(B.T @ Y @ B, cfg)
        if canon.zero_dim:
            raise NumericalFailureError(
                f"joint eigenspace {k} (dim {block.dim}) is not a union of mode planes; "
                "eigenvalue clustering split a degenerate pair",
                diagnostics={"block": k, "block_dim": block.dim, "zero_dim": canon.zero_dim},
            )
        U_k = B @ canon.Q
        for j, delta in enumerate(canon.deltas):
            pairs.append(U_k[:, 2 * j:2 * j + 2])
            deltas.append(float(delta))

    order = np.argsort(np.asarray(deltas), kind="stable")
    U = np.hstack([pairs[o] for o in order])
    d = np.asarray(deltas)[order]
    S = inv_root @ U @ np.kron(np.diag(np.sqrt(d)), np.eye(2))

    spectra = []
    for X in Xs:
        rayleigh = np.einsum("ij,ij->j", U, X @ U)
        spectra.append(d * 0.5 * (rayleigh[0::2] + rayleigh[1::2]))
    logger.debug("simultaneous_congruence: %d blocks, %d modes", len(blocks), len(d))
    return S, d, spectra


def check_simdiag(
    As: Sequence[ArrayLike],
    res: SimDiagResult,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> ResidualReport:
    """Symplecticity of S and the diagonalization residual of every member."""
    if len(As) != len(res.spectra):
        raise InvalidInputError(f"{len(As)} matrices but {len(res.spectra)} spectra")
    residuals = {"symplectic": symplectic_residual(res.S)}
    for i, A in enumerate(As):
        A = np.asarray(A, dtype=float)
        if A.shape != res.S.shape:
            raise InvalidInputError(f"matrix {i} has shape {A.shape}, S has {res.S.shape}")
        residuals[f"diagonalization[{i}]"] = rel_residual(
            res.S.T @ A @ res.S, res.diagonal(i), float(np.linalg.norm(A, "fro"))
        )
    return ResidualReport(residuals=residuals, tolerance=cfg.tol_residual)


def simdiag_pd_family(
    As: Sequence[ArrayLike],
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> SimDiagResult:
    """
    One symplectic S diagonalizing every PD member in the sense of Williamson.

    As[0] is the reference: its spectrum comes back nondecreasing and fixes
    the mode order of the others.

    Raises:
        InvalidInputError: empty family or mismatched dimensions
        NotPositiveDefiniteError: a member is not PD
        NotCommutingError: the first offending pair, with its residual
        NumericalFailureError: final residuals exceed tol_residual
    """
    if len(As) == 0:
        raise InvalidInputError("family is empty")
    mats = [require_positive_definite(A, cfg, f"matrix {i}") for i, A in enumerate(As)]
    check_same_dim(*mats)
    require_commuting_family(mats, cfg)

    S, d, spectra = simultaneous_congruence(mats[0], mats[1:], cfg)
    result = SimDiagResult(S=S, spectra=[d, *spectra])

    report = check_simdiag(mats, result, cfg)
    logger.debug("simdiag: %d members, residuals=%s", len(mats), report.residuals)
    if not report.passed:
        raise NumericalFailureError(
            f"simultaneous diagonalization residual {report.worst:.3e} "
            f"exceeds {cfg.tol_residual:.1e}",
            diagnostics=report.residuals,
        )
    return result


def simdiag_pd_pair(
    A: ArrayLike,
    B: ArrayLike,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> SimDiagResult:
    """Common symplectic diagonalization of two PD matrices with AJB = BJA."""
    return simdiag_pd_family([A, B], cfg)
