"""
Subspace geometry and simultaneous normal forms of PSD families.

A PSD family reduces to normal form Σ μᵢ(xᵢ² + yᵢ²) in one symplectic basis
when every kernel is a symplectic subspace, the joint kernel is symplectic and
all pairwise Poisson brackets vanish. Only that case is handled here: forms
whose kernel is not symplectic (which would need extra Σ xᵢ² terms) are rejected.
"""

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import null_space

from models.config import ToleranceConfig, DEFAULT_TOLERANCES
from models.errors import (
    InvalidInputError,
    KernelNotSymplecticError,
    NotSymplecticSubspaceError,
    NumericalFailureError,
)
from models.linalg import Definiteness, Matrix, ResidualReport, SubspaceBasis
from models.results import PsdNormalForm
from services.matcore import (
    as_square,
    check_same_dim,
    classify_definiteness,
    j_for,
    kernel_basis,
    rel_residual,
    require_positive_semidefinite,
    standard_j,
    symplectic_residual,
)
from services.simdiag import require_commuting_family, simultaneous_congruence

logger = logging.getLogger(__name__)


# =============================================================================
# Subspace operations
# =============================================================================

def symplectic_gram(W: SubspaceBasis) -> Matrix:
    """G = WᵀJW, the matrix of ω restricted to the columns of W."""
    if W.is_empty:
        return np.zeros((0, 0))
    J = j_for(W.cols)
    return W.cols.T @ J @ W.cols


def is_symplectic_subspace(W: SubspaceBasis, cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> bool:
    """ω restricted to span(W) is non-degenerate. The zero subspace qualifies."""
    if W.is_empty:
        return True
    if W.dim % 2:
        return False
    sv = np.linalg.svd(symplectic_gram(W), compute_uv=False)
    return bool(sv[-1] > cfg.tol_rank * sv[0])


def symplectic_complement(W: SubspaceBasis) -> SubspaceBasis:
    """
    Orthonormal basis of {v : ω(v, w) = 0 for all w in W}.

    That set is the Euclidean orthogonal complement of span(JW), so its
    dimension is 2n - dim(W) for independent columns.
    """
    if W.is_empty:
        return SubspaceBasis.full(W.ambient_dim)
    J = j_for(W.cols)
    return SubspaceBasis(null_space((J @ W.cols).T))


def darboux_basis(W: SubspaceBasis, cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> Matrix:
    """
    Symplectic Gram-Schmidt: columns p₁, q₁, ..., p_m, q_m spanning W with PᵀJP = J_m.

    Each step takes the first remaining vector as p, pivots on the partner u
    with the largest |ω(p, u)|, sets q = u / ω(p, u) and removes the p, q
    components from the rest.

    Raises:
        NotSymplecticSubspaceError: a pivot falls below tol_rank
    """
    if W.is_empty:
        return np.zeros((W.ambient_dim, 0))
    J = j_for(W.cols)
    remaining = [W.cols[:, i].copy() for i in range(W.dim)]
    columns: list[np.ndarray] = []

    while remaining:
        p = remaining.pop(0)
        if not remaining:
            raise NotSymplecticSubspaceError(
                f"odd-dimensional remainder after {len(columns) // 2} Darboux pair(s)",
                residual=0.0,
            )
        omegas = np.array([p @ J @ u for u in remaining])
        k = int(np.argmax(np.abs(omegas)))
        scale = float(np.linalg.norm(p) * max(np.linalg.norm(u) for u in remaining))
        if abs(omegas[k]) <= cfg.tol_rank * scale:
            raise NotSymplecticSubspaceError(
                f"ω degenerates on the subspace: pivot {abs(omegas[k]):.3e} "
                f"after {len(columns) // 2} Darboux pair(s)",
                residual=float(abs(omegas[k])),
            )
        q = remaining.pop(k) / omegas[k]
        remaining = [w - (w @ J @ q) * p + (w @ J @ p) * q for w in remaining]
        columns.extend([p, q])

    return np.column_stack(columns)


# =============================================================================
# Simultaneous normal form
# =============================================================================

def _snap_zeros(spectrum: np.ndarray, cfg: ToleranceConfig) -> np.ndarray:
    top = float(np.max(np.abs(spectrum))) if spectrum.size else 0.0
    out = spectrum.copy()
    out[np.abs(out) <= cfg.tol_rank * top] = 0.0
    return np.clip(out, 0.0, None)


def psd_normal_form_family(
    As: Sequence[ArrayLike],
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> PsdNormalForm:
    """
    Common symplectic normal form of a PSD family with symplectic kernels.

    Steps: pairwise commutation; per-matrix kernels symplectic; joint kernel
    N = ker(ΣAᵢ) symplectic; Darboux bases of N and of W = N^⊥s; restrict the
    family to W, where it is jointly diagonalized; assemble [P_W S_W | P_N].

    Raises:
        NotPositiveSemidefiniteError: a member is indefinite
        NotCommutingError: a pair has a non-vanishing Poisson bracket
        KernelNotSymplecticError: names the matrix, or the joint kernel
    """
    if len(As) == 0:
        raise InvalidInputError("family is empty")
    mats = [require_positive_semidefinite(A, cfg, f"matrix {i}") for i, A in enumerate(As)]
    check_same_dim(*mats)
    require_commuting_family(mats, cfg)
    dim = mats[0].shape[0]
    n = dim // 2

    for i, A in enumerate(mats):
        K = kernel_basis(A, cfg)
        if not is_symplectic_subspace(K, cfg):
            raise KernelNotSymplecticError(
                f"kernel of matrix {i} (dim {K.dim}) is not a symplectic subspace",
                residual=_gram_floor(K),
                details={"matrix": i, "kernel_dim": K.dim},
            )

    N = kernel_basis(sum(mats), cfg)
    if not is_symplectic_subspace(N, cfg):
        raise KernelNotSymplecticError(
            f"joint kernel (dim {N.dim}) is not a symplectic subspace",
            residual=_gram_floor(N),
            details={"matrix": "joint", "kernel_dim": N.dim},
        )

    W = symplectic_complement(N)
    P_W = darboux_basis(W, cfg)
    P_N = darboux_basis(N, cfg)
    k = W.dim // 2

    if k:
        restricted = [P_W.T @ A @ P_W for A in mats]
        restricted = [0.5 * (R + R.T) for R in restricted]
        if classify_definiteness(restricted[0], cfg) is Definiteness.POSITIVE_DEFINITE:
            metric = restricted[0]
        else:
            metric = sum(restricted)
        S_W, _, active = simultaneous_congruence(metric, restricted, cfg)
        S = np.hstack([P_W @ S_W, P_N])
    else:
        active = [np.zeros(0) for _ in mats]
        S = P_N

    padding = np.zeros(n - k)
    spectra = [np.concatenate([_snap_zeros(a, cfg), padding]) for a in active]
    nf = PsdNormalForm(S=S, spectra=spectra, k=k, kernel_dim=2 * (n - k))

    report = check_normal_form(mats, nf, cfg)
    logger.debug("psd_normal_form_family: k=%d residuals=%s", k, report.residuals)
    if not report.passed:
        raise NumericalFailureError(
            f"normal form residual {report.worst:.3e} exceeds {cfg.tol_residual:.1e}",
            diagnostics=report.residuals,
        )
    return nf


def _gram_floor(K: SubspaceBasis) -> float:
    """Smallest singular value of the symplectic Gram matrix (0 for odd dimension)."""
    if K.is_empty or K.dim % 2:
        return 0.0
    return float(np.linalg.svd(symplectic_gram(K), compute_uv=False)[-1])


def check_normal_form(
    As: Sequence[ArrayLike],
    nf: PsdNormalForm,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> ResidualReport:
    """Symplecticity of S and the diagonalization residual of every member."""
    residuals = {"symplectic": symplectic_residual(nf.S)}
    for i, A in enumerate(As):
        A = np.asarray(A, dtype=float)
        residuals[f"diagonalization[{i}]"] = rel_residual(
            nf.S.T @ A @ nf.S, nf.diagonal(i), float(np.linalg.norm(A, "fro"))
        )
    return ResidualReport(residuals=residuals, tolerance=cfg.tol_residual)


def hamilton_action_check(
    A: ArrayLike,
    nf: PsdNormalForm,
    index: int,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
) -> ResidualReport:
    """
    Verify H_A pᵢ = μᵢ qᵢ and H_A qᵢ = -μᵢ pᵢ for the columns p₁, q₁, ... of nf.S.

    Args:
        A: a member of the family nf was computed for
        nf: the normal form
        index: position of A in the family, selecting its spectrum in nf

    Returns:
        ResidualReport with one "hamilton_action" residual, scaled by ‖A‖_F
    """
    A = as_square(A, "A")
    if A.shape != nf.S.shape:
        raise InvalidInputError(f"A has shape {A.shape}, S has {nf.S.shape}")
    H = standard_j(A.shape[0] // 2).J.T @ A
    HS = H @ nf.S
    scale = float(np.linalg.norm(A, "fro"))

    if not 0 <= index < len(nf.spectra):
        raise InvalidInputError(f"index {index} out of range for {len(nf.spectra)} spectra")
    mu = np.asarray(nf.spectra[index])
    expected = np.empty_like(nf.S)
    expected[:, 0::2] = nf.S[:, 1::2] * mu
    expected[:, 1::2] = -nf.S[:, 0::2] * mu
    residual = rel_residual(HS, expected, scale)
    return ResidualReport(residuals={"hamilton_action": residual}, tolerance=cfg.tol_residual)
