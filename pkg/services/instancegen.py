"""
Seeded random instances: symplectic and orthosymplectic matrices, PD/PSD
matrices with planted symplectic spectra, and symplectically commuting families.

Every generator builds its own numpy Generator from GenConfig.seed
(numpy.random.default_rng, i.e. PCG64), so identical configs give
bitwise-identical output and there is no global PRNG state.
"""

import logging
from collections.abc import Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy.linalg import expm

from models.config import GenConfig
from models.errors import InvalidInputError, NumericalFailureError
from models.linalg import Matrix, SymMatrix
from services.matcore import as_square, j_for, mode_diagonal, standard_j

logger = logging.getLogger(__name__)

MAX_CONDITION = 1e8
MAX_REDRAWS = 16

_J2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_from_hamiltonian(H: ArrayLike) -> Matrix:
    """exp(JH) for symmetric H. JH is Hamiltonian, so its exponential is symplectic."""
    H = as_square(H, "H")
    H = 0.5 * (H + H.T)
    return expm(j_for(H) @ H)


def random_symplectic(g: GenConfig) -> Matrix:
    """
    S = exp(JH) with H = (R + Rᵀ)/2, R uniform in ±spread/√(2n).

    The 1/√(2n) factor keeps ‖H‖₂ near spread for every n, so κ(S) stays
    moderate; draws with κ(S) > 1e8 are rejected and redrawn.
    """
    rng = np.random.default_rng(g.seed)
    dim = 2 * g.n
    bound = g.spread / np.sqrt(dim)
    for attempt in range(MAX_REDRAWS):
        R = rng.uniform(-bound, bound, size=(dim, dim))
        S = symplectic_from_hamiltonian(0.5 * (R + R.T))
        cond = np.linalg.cond(S)
        if cond <= MAX_CONDITION:
            return S
        logger.warning("seed %d draw %d: κ(S) = %.3e > %.0e, redrawing", g.seed, attempt, cond, MAX_CONDITION)
    raise NumericalFailureError(
        f"no symplectic draw with κ <= {MAX_CONDITION:.0e} after {MAX_REDRAWS} attempts; lower spread",
        diagnostics={"seed": g.seed, "n": g.n, "spread": g.spread},
    )


def realify(U: ArrayLike) -> Matrix:
    """Entrywise a + ib -> [[a, b], [-b, a]] in the interleaved layout."""
    U = np.asarray(U, dtype=complex)
    return np.kron(U.real, np.eye(2)) + np.kron(U.imag, _J2)


def random_orthosymplectic(g: GenConfig) -> Matrix:
    """Realification of a random unitary (QR of a complex Gaussian matrix)."""
    rng = np.random.default_rng(g.seed)
    Z = (rng.standard_normal((g.n, g.n)) + 1j * rng.standard_normal((g.n, g.n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    diag = np.diag(R)
    phases = diag / np.where(np.abs(diag) > 0, np.abs(diag), 1.0)
    return realify(Q * phases)


def planted(S: ArrayLike, d: ArrayLike) -> SymMatrix:
    """S⁻ᵀ (diag(d) ⊗ I₂) S⁻¹ for symplectic S, using S⁻¹ = -J Sᵀ J."""
    S = as_square(S, "S")
    J = standard_j(S.shape[0] // 2).J
    S_inv = -J @ S.T @ J
    A = S_inv.T @ mode_diagonal(d) @ S_inv
    return 0.5 * (A + A.T)


def _check_spectrum(d: ArrayLike, n: int, allow_zero: bool) -> np.ndarray:
    d = np.asarray(d, dtype=float).ravel()
    if d.size != n:
        raise InvalidInputError(f"spectrum has {d.size} entries, expected n = {n}")
    if allow_zero and np.any(d < 0):
        raise InvalidInputError(f"spectrum entries must be nonnegative: {d.tolist()}")
    if not allow_zero and np.any(d <= 0):
        raise InvalidInputError(f"spectrum entries must be positive: {d.tolist()}")
    return d


def random_pd_with_spectrum(g: GenConfig, d: ArrayLike) -> SymMatrix:
    """PD matrix whose symplectic eigenvalues are d (as a multiset)."""
    return planted(random_symplectic(g), _check_spectrum(d, g.n, allow_zero=False))


def random_psd_with_spectrum(g: GenConfig, d: ArrayLike) -> SymMatrix:
    """PSD matrix with symplectic spectrum d; zero entries give a symplectic kernel."""
    return planted(random_symplectic(g), _check_spectrum(d, g.n, allow_zero=True))


def random_commuting_family(
    g: GenConfig,
    spectra: Sequence[ArrayLike],
    orthosymplectic: bool = False,
) -> list[SymMatrix]:
    """
    Aᵢ = S⁻ᵀ(diag(spectraᵢ) ⊗ I₂)S⁻¹ for one shared S.

    Every pair satisfies AJB = BJA. With orthosymplectic=True, S is also
    orthogonal and the members additionally commute in the ordinary sense.
    """
    if len(spectra) == 0:
        raise InvalidInputError("at least one spectrum is required")
    checked = [_check_spectrum(d, g.n, allow_zero=True) for d in spectra]
    S = random_orthosymplectic(g) if orthosymplectic else random_symplectic(g)
    return [planted(S, d) for d in checked]
