"""
Matrix-level data structures shared by the numerical services.

Matrices are plain numpy float64 arrays. SymMatrix is a documentation alias: a
square array of even dimension 2n that passed the symmetry check in
services.matcore.validate_symmetric.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from numpy.typing import NDArray


SymMatrix = NDArray[np.float64]
Matrix = NDArray[np.float64]


class Definiteness(Enum):
    """Definiteness class of a symmetric matrix."""
    POSITIVE_DEFINITE = "positive_definite"
    POSITIVE_SEMIDEFINITE = "positive_semidefinite"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class StandardForm:
    """
    The standard symplectic form J = I_n ⊗ [[0, 1], [-1, 0]].

    Coordinates are interleaved: p1, q1, p2, q2, ...
    """
    n: int
    J: Matrix

    @property
    def dim(self) -> int:
        return 2 * self.n

    def omega(self, x: NDArray, y: NDArray) -> float:
        """ω(x, y) = xᵀJy."""
        return float(x @ self.J @ y)


@dataclass(frozen=True)
class SkewCanonical:
    """
    Orthogonal canonical form of a skew-symmetric Y.

    QᵀYQ = ⊕_j [[0, δ_j], [-δ_j, 0]] ⊕ 0_{zero_dim}, with the δ_j positive and
    nondecreasing. Columns 2j, 2j+1 of Q hold the j-th block.
    """
    Q: Matrix
    deltas: NDArray[np.float64]
    zero_dim: int

    @property
    def rank(self) -> int:
        return 2 * len(self.deltas)

    def canonical(self) -> Matrix:
        """The block-diagonal matrix QᵀYQ should equal."""
        m = self.Q.shape[0]
        out = np.zeros((m, m))
        for j, delta in enumerate(self.deltas):
            out[2 * j, 2 * j + 1] = delta
            out[2 * j + 1, 2 * j] = -delta
        return out


@dataclass(frozen=True)
class SubspaceBasis:
    """Columns spanning a subspace of R^{2n}. Zero columns encode the zero subspace."""
    cols: Matrix

    def __post_init__(self):
        cols = np.asarray(self.cols, dtype=float)
        if cols.ndim == 1:
            cols = cols.reshape(-1, 1)
        object.__setattr__(self, "cols", cols)

    @property
    def ambient_dim(self) -> int:
        return self.cols.shape[0]

    @property
    def dim(self) -> int:
        return self.cols.shape[1]

    @property
    def is_empty(self) -> bool:
        return self.dim == 0

    @classmethod
    def empty(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(np.zeros((ambient_dim, 0)))

    @classmethod
    def full(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls(np.eye(ambient_dim))

    def projector(self) -> Matrix:
        """Orthogonal projector onto the column span."""
        if self.is_empty:
            return np.zeros((self.ambient_dim, self.ambient_dim))
        q, _ = np.linalg.qr(self.cols)
        return q @ q.T


@dataclass(frozen=True)
class CommutationCheck:
    """Outcome of a commutation-type test: verdict, residual, and the threshold used."""
    holds: bool
    residual: float
    threshold: float
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        # numpy scalars are not JSON-serializable
        object.__setattr__(self, "holds", bool(self.holds))
        object.__setattr__(self, "residual", float(self.residual))
        object.__setattr__(self, "threshold", float(self.threshold))

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "residual": self.residual,
            "threshold": self.threshold,
            **self.extra,
        }


@dataclass(frozen=True)
class ResidualReport:
    """Named residuals of a decomposition and the verdict against tol_residual."""
    residuals: dict[str, float]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(r <= self.tolerance for r in self.residuals.values())

    @property
    def worst(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def to_dict(self) -> dict:
        return {
            "residuals": dict(self.residuals),
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
