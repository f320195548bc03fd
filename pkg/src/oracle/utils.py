"""
Shared constants and helpers for the numeric oracle
"""
from __future__ import annotations

import numpy as np

# Residuals of theta transformation and lattice laws
LAW_TOLERANCE = 1e-9
# Agreement between N and 2N trapezoid samples
CONVERGENCE_TOLERANCE = 1e-9

DEFAULT_SAMPLES = 64
MAX_SAMPLES = 1024
DEFAULT_GAUSS_POINTS = 64

PRODUCT_EPS = 1e-16
PRODUCT_PADDING = 8


def relative_error(exact: complex, numeric: complex) -> float:
    """Absolute error when the exact value is 0, relative otherwise"""
    if exact == 0:
        return float(abs(numeric))
    return float(abs(numeric - exact) / abs(exact))


def relative_residual(lhs, rhs) -> np.ndarray:
    lhs = np.asarray(lhs, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    scale = np.maximum(np.maximum(np.abs(lhs), np.abs(rhs)), np.finfo(float).tiny)
    return np.abs(lhs - rhs) / scale
