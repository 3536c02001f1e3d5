"""
Result records returned by the decomposition services.

Each record carries the congruence S and its spectra. to_dict() produces the
JSON-ready shape used in Report["result"].
"""

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import NDArray

from models.linalg import Matrix


def _spectra_lists(spectra: list[NDArray]) -> list[list[float]]:
    return [np.asarray(s, dtype=float).tolist() for s in spectra]


@dataclass(frozen=True)
class WilliamsonResult:
    """SᵀAS = diag(d) ⊗ I₂ with S symplectic; d nondecreasing."""
    S: Matrix
    d: NDArray[np.float64]

    @property
    def n(self) -> int:
        return len(self.d)

    def diagonal(self) -> Matrix:
        return np.kron(np.diag(self.d), np.eye(2))

    def to_dict(self) -> dict:
        return {"S": self.S.tolist(), "spectra": [np.asarray(self.d).tolist()]}


@dataclass(frozen=True)
class SimDiagResult:
    """
    One symplectic S diagonalizing every member of a family.

    spectra[i] is the symplectic spectrum of the i-th input in the shared block
    order; spectra[0] is nondecreasing.
    """
    S: Matrix
    spectra: list[NDArray[np.float64]]

    def diagonal(self, i: int) -> Matrix:
        return np.kron(np.diag(self.spectra[i]), np.eye(2))

    def to_dict(self) -> dict:
        return {"S": self.S.tolist(), "spectra": _spectra_lists(self.spectra)}


@dataclass(frozen=True)
class PsdNormalForm:
    """
    Simultaneous normal form of a PSD family whose kernels are symplectic.

    The first k mode pairs are active; the last n - k pairs span the joint
    kernel and carry exact zeros in every spectrum.
    """
    S: Matrix
    spectra: list[NDArray[np.float64]]
    k: int
    kernel_dim: int

    @property
    def n(self) -> int:
        return self.S.shape[0] // 2

    def diagonal(self, i: int) -> Matrix:
        return np.kron(np.diag(self.spectra[i]), np.eye(2))

    def to_dict(self) -> dict:
        return {
            "S": self.S.tolist(),
            "spectra": _spectra_lists(self.spectra),
            "k": self.k,
            "kernel_dim": self.kernel_dim,
        }


@dataclass(frozen=True)
class GaussianModesResult:
    """Common normal-mode congruence of two covariance matrices."""
    S: Matrix
    nu1: NDArray[np.float64]
    nu2: NDArray[np.float64]

    def to_dict(self) -> dict:
        return {
            "S": self.S.tolist(),
            "spectra": _spectra_lists([self.nu1, self.nu2]),
        }


@dataclass(frozen=True)
class PartitionResult:
    """
    Closed-form partition function of a quadratic Hamiltonian.

    log_z is authoritative; z saturates to +inf when exp(log_z) overflows.
    log_z_pi_convention is the same quantity with a π prefactor per mode instead
    of 2π.
    """
    log_z: float
    z: float
    mode_sums: NDArray[np.float64]
    beta: float
    h: float
    d: int
    N: int
    log_det_check: float
    spectra: list[NDArray[np.float64]] = field(default_factory=list)

    @property
    def log_z_pi_convention(self) -> float:
        return self.log_z - self.d * self.N * math.log(2.0)

    @property
    def z_overflowed(self) -> bool:
        return math.isinf(self.z)

    def to_dict(self) -> dict:
        return {
            "logZ": self.log_z,
            "Z": None if self.z_overflowed else self.z,
            "Z_overflow": self.z_overflowed,
            "logZ_pi_convention": self.log_z_pi_convention,
            "modeSums": np.asarray(self.mode_sums).tolist(),
            "spectra": _spectra_lists(self.spectra),
            "params": {"beta": self.beta, "h": self.h, "d": self.d, "N": self.N},
        }
