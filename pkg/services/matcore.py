"""
Dense real matrix kernels.

The standard symplectic form, validation, spectral functional calculus,
skew-symmetric canonical form, joint eigenspace refinement for commuting
symmetric families, and residual utilities.

All functions are pure: no shared state, deterministic for fixed input and
ToleranceConfig.
"""

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import schur

from models.config import ToleranceConfig, DEFAULT_TOLERANCES
from models.errors import (
    InvalidInputError,
    NotCommutingError,
    NotPositiveDefiniteError,
    NotPositiveSemidefiniteError,
    NotSkewSymmetricError,
    NotSymmetricError,
    NumericalFailureError,
)
from models.linalg import (
    Definiteness,
    Matrix,
    SkewCanonical,
    StandardForm,
    SubspaceBasis,
    SymMatrix,
)

logger = logging.getLogger(__name__)

# κ above which A^{±1/2} is flagged
CONDITION_WARNING = 1e12

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


# =============================================================================
# Standard form and validation
# =============================================================================

def standard_j(n: int) -> StandardForm:
    """
    The standard form J = I_n ⊗ [[0, 1], [-1, 0]] on R^{2n}.

    JᵀJ = I and J² = -I hold exactly: every entry is 0 or ±1 and each row has a
    single nonzero.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise InvalidInputError(f"number of modes must be a positive integer, got {n!r}")
    n = int(n)
    return StandardForm(n=n, J=np.kron(np.eye(n), _J2))


def j_for(A: ArrayLike) -> Matrix:
    """J matching the dimension of a square 2n x 2n array."""
    dim = np.shape(A)[0]
    if dim % 2:
        raise InvalidInputError(f"dimension must be even, got {dim}")
    return standard_j(dim // 2).J


def mode_diagonal(d: ArrayLike) -> Matrix:
    """diag(d) ⊗ I₂."""
    return np.kron(np.diag(np.asarray(d, dtype=float)), np.eye(2))


def as_square(A: ArrayLike, name: str = "matrix", require_even: bool = True) -> Matrix:
    """Convert to a finite float64 square array, checking shape only."""
    arr = np.array(A, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise InvalidInputError(f"{name} is empty")
    if require_even and arr.shape[0] % 2:
        raise InvalidInputError(f"{name} must have even dimension, got {arr.shape[0]}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


def validate_symmetric(
    A: ArrayLike,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
    name: str = "matrix",
    require_even: bool = True,
) -> SymMatrix:
    """
    Check the SymMatrix invariants and return the symmetrized float copy.

    Raises:
        InvalidInputError: not square, odd dimension, non-finite entries
        NotSymmetricError: max|A - Aᵀ| > tol_sym * max(1, max|A|)
    """
    arr = as_square(A, name, require_even)
    asym = float(np.max(np.abs(arr - arr.T)))
    scale = max(1.0, float(np.max(np.abs(arr))))
    if asym > cfg.tol_sym * scale:
        raise NotSymmetricError(
            f"{name} is not symmetric: max|A - Aᵀ| = {asym:.3e}",
            residual=asym,
        )
    return 0.5 * (arr + arr.T)


def check_same_dim(*mats: Matrix) -> None:
    dims = {m.shape for m in mats}
    if len(dims) > 1:
        raise InvalidInputError(f"dimension mismatch: {sorted(dims)}")


# =============================================================================
# Symmetric eigendecomposition and functional calculus
# =============================================================================

def _spectral_scale(w: np.ndarray) -> float:
    return float(np.max(np.abs(w))) if w.size else 0.0


def classify_definiteness(A: ArrayLike, cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> Definiteness:
    """
    Classify a symmetric matrix from its eigenvalues.

    PD iff λ_min > tol_pd·s, PSD iff λ_min >= -tol_pd·s, with s = max|λ|
    (so the zero matrix is PSD).
    """
    A = validate_symmetric(A, cfg, require_even=False)
    w = np.linalg.eigvalsh(A)
    scale = _spectral_scale(w)
    if w[0] > cfg.tol_pd * scale:
        return Definiteness.POSITIVE_DEFINITE
    if w[0] >= -cfg.tol_pd * scale:
        return Definiteness.POSITIVE_SEMIDEFINITE
    return Definiteness.INDEFINITE


def require_positive_definite(
    A: ArrayLike,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
    name: str = "matrix",
) -> SymMatrix:
    """Validate a SymMatrix and reject anything that is not PD."""
    A = validate_symmetric(A, cfg, name)
    w = np.linalg.eigvalsh(A)
    if not w[0] > cfg.tol_pd * _spectral_scale(w):
        raise NotPositiveDefiniteError(
            f"{name} is not positive definite: λ_min = {w[0]:.3e}",
            residual=float(-w[0]) if w[0] < 0 else 0.0,
            details={"lambda_min": float(w[0]), "lambda_max": float(w[-1])},
        )
    return A


def require_positive_semidefinite(
    A: ArrayLike,
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
    name: str = "matrix",
) -> SymMatrix:
    """Validate a SymMatrix and reject indefinite input."""
    A = validate_symmetric(A, cfg, name)
    w = np.linalg.eigvalsh(A)
    if w[0] < -cfg.tol_pd * _spectral_scale(w):
        raise NotPositiveSemidefiniteError(
            f"{name} is indefinite: λ_min = {w[0]:.3e}",
            residual=float(-w[0]),
            details={"lambda_min": float(w[0]), "lambda_max": float(w[-1])},
        )
    return A


def sym_power(A: ArrayLike, s: float, cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> SymMatrix:
    """
    A^s by spectral functional calculus: same eigenvectors, eigenvalues to the power s.

    Integer s >= 0 accepts any symmetric A; s >= 1 accepts PSD A; every other s
    needs PD A.

    Args:
        A: symmetric matrix
        s: real exponent
        cfg: tolerances (tol_pd decides definiteness)

    Returns:
        The symmetric matrix A^s
    """
    A = validate_symmetric(A, cfg, require_even=False)
    s = float(s)
    w, V = np.linalg.eigh(A)
    scale = _spectral_scale(w)

    if s.is_integer() and s >= 0:
        vals = w ** int(s)
    elif s >= 1:
        if w[0] < -cfg.tol_pd * scale:
            raise NotPositiveSemidefiniteError(
                f"A^{s:g} needs a positive semi-definite A: λ_min = {w[0]:.3e}",
                residual=float(-w[0]),
            )
        vals = np.clip(w, 0.0, None) ** s
    else:
        if not w[0] > cfg.tol_pd * scale:
            raise NotPositiveDefiniteError(
                f"A^{s:g} needs a positive definite A: λ_min = {w[0]:.3e}",
                residual=float(-w[0]) if w[0] < 0 else 0.0,
            )
        cond = w[-1] / w[0]
        if cond > CONDITION_WARNING:
            logger.warning("condition number %.3e exceeds %.0e; A^%g loses about %.1f digits",
                           cond, CONDITION_WARNING, s, 0.5 * np.log10(cond))
        vals = w ** s

    out = (V * vals) @ V.T
    return 0.5 * (out + out.T)


def kernel_basis(A: ArrayLike, cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> SubspaceBasis:
    """
    Orthonormal basis of the numerical kernel of a symmetric PSD matrix.

    Eigenvectors whose eigenvalue is at most tol_rank·max|λ| span the kernel;
    a zero matrix returns the whole space.
    """
    A = validate_symmetric(A, cfg, require_even=False)
    w, V = np.linalg.eigh(A)
    scale = _spectral_scale(w)
    if scale == 0.0:
        return SubspaceBasis.full(A.shape[0])

    threshold = cfg.tol_rank * scale
    mask = np.abs(w) <= threshold
    borderline = (np.abs(w) > threshold) & (np.abs(w) <= 10.0 * threshold)
    if np.any(borderline):
        logger.warning("%d eigenvalue(s) within a factor 10 of the rank threshold %.3e; "
                       "kernel dimension may be unstable", int(borderline.sum()), threshold)
    return SubspaceBasis(V[:, mask])


# =============================================================================
# Skew-symmetric canonical form
# =============================================================================

def skew_canonical(Y: ArrayLike, cfg: ToleranceConfig = DEFAULT_TOLERANCES) -> SkewCanonical:
    """
    Orthogonal Q with QᵀYQ = ⊕ [[0, δ_j], [-δ_j, 0]] ⊕ 0 for skew-symmetric Y.

    Built from the real Schur form, which for a normal matrix is block diagonal.
    Each 2x2 block is oriented so its upper entry is +δ; blocks with δ at or
    below tol_rank·max δ join the zero part. Deltas come back nondecreasing.
    """
    Y = as_square(Y, "Y", require_even=False)
    norm = float(np.linalg.norm(Y, "fro"))
    sym_part = float(np.linalg.norm(Y + Y.T, "fro"))
    if sym_part > cfg.tol_sym * norm:
        raise NotSkewSymmetricError(
            f"matrix is not skew-symmetric: ‖Y + Yᵀ‖_F = {sym_part:.3e}",
            residual=sym_part,
        )
    Y = 0.5 * (Y - Y.T)
    m = Y.shape[0]

    T, Z = schur(Y, output="real")
    pairs: list[tuple[float, int, int]] = []
    singles: list[int] = []
    i = 0
    while i < m:
        if i + 1 < m and T[i + 1, i] != 0.0:
            b, c = T[i, i + 1], T[i + 1, i]
            delta = 0.5 * (abs(b) + abs(c))
            pairs.append((delta, i, i + 1) if b > 0 else (delta, i + 1, i))
            i += 2
        else:
            singles.append(i)
            i += 1

    top = max((p[0] for p in pairs), default=0.0)
    cutoff = cfg.tol_rank * top
    kept = [p for p in pairs if p[0] > cutoff]
    for p in pairs:
        if p[0] <= cutoff:
            singles.extend([p[1], p[2]])
    kept.sort(key=lambda p: p[0])

    order = [idx for _, u, v in kept for idx in (u, v)] + sorted(singles)
    Q = Z[:, order]
    deltas = np.array([p[0] for p in kept], dtype=float)
    result = SkewCanonical(Q=Q, deltas=deltas, zero_dim=m - 2 * len(kept))

    residual = rel_residual(Q.T @ Y @ Q, result.canonical(), norm)
    logger.debug("skew_canonical: m=%d rank=%d residual=%.3e", m, result.rank, residual)
    if residual > cfg.tol_residual:
        raise NumericalFailureError(
            f"skew canonical form residual {residual:.3e} exceeds {cfg.tol_residual:.1e}",
            diagnostics={"canonical_residual": residual},
        )
    return result


# =============================================================================
# Joint eigenspaces of commuting symmetric families
# =============================================================================

def commutator_residual(X: Matrix, Y: Matrix) -> tuple[float, float]:
    """(‖XY - YX‖_F, ‖X‖_F·‖Y‖_F)."""
    res = float(np.linalg.norm(X @ Y - Y @ X, "fro"))
    return res, float(np.linalg.norm(X, "fro") * np.linalg.norm(Y, "fro"))


def _cluster(w: np.ndarray, gap: float) -> list[np.ndarray]:
    """Split sorted eigenvalues wherever consecutive ones differ by more than gap."""
    cuts = np.nonzero(np.diff(w) > gap)[0] + 1
    return np.split(np.arange(len(w)), cuts)


def common_eigenspace_partition(
    Xs: Sequence[ArrayLike],
    cfg: ToleranceConfig = DEFAULT_TOLERANCES,
    dim: int | None = None,
) -> list[SubspaceBasis]:
    """
    Orthonormal bases of the joint eigenspaces of pairwise commuting symmetric matrices.

    Recursive refinement: eigendecompose X₁ and cluster its eigenvalues by the
    gap tol_cluster·(spectral spread); restrict X₂ to each cluster and split
    again; and so on. Blocks come back ordered by (λ(X₁), λ(X₂), ...).

    Args:
        Xs: commuting symmetric matrices of equal size
        cfg: tolerances
        dim: ambient dimension, required only when Xs is empty

    Returns:
        Mutually orthogonal blocks spanning the whole space
    """
    mats = [validate_symmetric(X, cfg, f"X[{i}]", require_even=False) for i, X in enumerate(Xs)]
    if not mats:
        if dim is None:
            raise InvalidInputError("empty family needs an explicit dimension")
        return [SubspaceBasis.full(dim)]
    check_same_dim(*mats)

    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            res, scale = commutator_residual(mats[i], mats[j])
            if res > cfg.tol_commute * scale:
                raise NotCommutingError(
                    f"X[{i}] and X[{j}] do not commute: ‖XᵢXⱼ - XⱼXᵢ‖_F = {res:.3e}",
                    residual=res,
                    details={"pair": [i, j]},
                )

    blocks = [np.eye(mats[0].shape[0])]
    for X in mats:
        w_all = np.linalg.eigvalsh(X)
        spread = max(float(w_all[-1] - w_all[0]), _spectral_scale(w_all))
        gap = cfg.tol_cluster * spread
        refined = []
        for B in blocks:
            R = B.T @ X @ B
            w, V = np.linalg.eigh(0.5 * (R + R.T))
            for group in _cluster(w, gap):
                refined.append(B @ V[:, group])
        blocks = refined

    for k, B in enumerate(blocks):
        for i, X in enumerate(mats):
            R = B.T @ X @ B
            c = np.trace(R) / R.shape[0]
            off = rel_residual(R, c * np.eye(R.shape[0]), float(np.linalg.norm(X, "fro")))
            if off > cfg.tol_residual:
                logger.warning("X[%d] is not scalar on block %d (residual %.3e)", i, k, off)
    logger.debug("common_eigenspace_partition: block dims %s", [B.shape[1] for B in blocks])
    return [SubspaceBasis(B) for B in blocks]


# =============================================================================
# Residuals
# =============================================================================

def rel_residual(lhs: ArrayLike, rhs: ArrayLike, scale: float = 1.0) -> float:
    """‖lhs - rhs‖_F / max(1, scale)."""
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    if lhs.shape != rhs.shape:
        raise InvalidInputError(f"shape mismatch: {lhs.shape} vs {rhs.shape}")
    if scale < 0:
        raise InvalidInputError(f"scale must be nonnegative, got {scale}")
    return float(np.linalg.norm(lhs - rhs)) / max(1.0, float(scale))


def symplectic_residual(S: ArrayLike) -> float:
    """‖SᵀJS - J‖_F."""
    S = as_square(S, "S")
    J = j_for(S)
    return rel_residual(S.T @ J @ S, J, 1.0)


def diagonalization_residual(A: Matrix, S: Matrix, d: ArrayLike) -> float:
    """‖SᵀAS - diag(d)⊗I₂‖_F / max(1, ‖A‖_F)."""
    return rel_residual(S.T @ A @ S, mode_diagonal(d), float(np.linalg.norm(A, "fro")))
