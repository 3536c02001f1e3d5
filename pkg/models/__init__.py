"""
Models package for the symplectic toolkit.
Contains configuration records, matrix-level types, result records, the
exception hierarchy and the CLI report model.
"""

from models.config import ToleranceConfig, GenConfig, DEFAULT_TOLERANCES
from models.errors import (
    SymplecticError,
    InvalidInputError,
    MatrixFileError,
    NumericalFailureError,
    HypothesisError,
    NotSymmetricError,
    NotSkewSymmetricError,
    NotPositiveDefiniteError,
    NotPositiveSemidefiniteError,
    NotCommutingError,
    StatesNotJointlyReducibleError,
    KernelNotSymplecticError,
    NotSymplecticSubspaceError,
)
from models.linalg import (
    SymMatrix,
    Matrix,
    Definiteness,
    StandardForm,
    SkewCanonical,
    SubspaceBasis,
    CommutationCheck,
    ResidualReport,
)
from models.results import (
    WilliamsonResult,
    SimDiagResult,
    PsdNormalForm,
    GaussianModesResult,
    PartitionResult,
)
from models.report import Report, ReportStatus, REPORT_VERSION

__version__ = REPORT_VERSION

__all__ = [
    "ToleranceConfig",
    "GenConfig",
    "DEFAULT_TOLERANCES",
    "SymplecticError",
    "InvalidInputError",
    "MatrixFileError",
    "NumericalFailureError",
    "HypothesisError",
    "NotSymmetricError",
    "NotSkewSymmetricError",
    "NotPositiveDefiniteError",
    "NotPositiveSemidefiniteError",
    "NotCommutingError",
    "StatesNotJointlyReducibleError",
    "KernelNotSymplecticError",
    "NotSymplecticSubspaceError",
    "SymMatrix",
    "Matrix",
    "Definiteness",
    "StandardForm",
    "SkewCanonical",
    "SubspaceBasis",
    "CommutationCheck",
    "ResidualReport",
    "WilliamsonResult",
    "SimDiagResult",
    "PsdNormalForm",
    "GaussianModesResult",
    "PartitionResult",
    "Report",
    "ReportStatus",
    "REPORT_VERSION",
    "__version__",
]
