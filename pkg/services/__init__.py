"""
Services package for the symplectic toolkit.
Numerical modules, matrix file I/O and the command layer.
"""

from services import matcore
from services import williamson
from services import simdiag
from services import psdnf
from services import apps
from services import instancegen
from services import matrix_io
from services import api

__all__ = [
    "matcore",
    "williamson",
    "simdiag",
    "psdnf",
    "apps",
    "instancegen",
    "matrix_io",
    "api",
]
