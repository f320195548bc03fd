"""
Numeric Jacobi theta functions from truncated products.

With q = e^{pi i tau} and w = e^{2 pi i v}:

    theta (v)  = 2 q^{1/4} sin(pi v) prod_j (1 - q^{2j})(1 - w q^{2j})(1 - w^{-1} q^{2j})
    theta1(v)  = 2 q^{1/4} cos(pi v) prod_j (1 - q^{2j})(1 + w q^{2j})(1 + w^{-1} q^{2j})
    theta2(v)  = prod_j (1 - q^{2j})(1 - w q^{2j-1})(1 - w^{-1} q^{2j-1})
    theta3(v)  = prod_j (1 - q^{2j})(1 + w q^{2j-1})(1 + w^{-1} q^{2j-1})

Every function takes numpy arrays for v.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from src.core.errors import PreconditionError
from src.oracle.utils import LAW_TOLERANCE, PRODUCT_EPS, PRODUCT_PADDING, relative_residual

LOGGER = logging.getLogger(__name__)

THETA_FUNCTIONS = ("theta", "theta1", "theta2", "theta3")

# (sign on the q^{2j} or q^{2j-1} factors, odd q powers, prefactor)
_PRODUCTS = {
    "theta": (-1, False, np.sin),
    "theta1": (1, False, np.cos),
    "theta2": (-1, True, None),
    "theta3": (1, True, None),
}

# sign of the lattice factor as a function of (m, n)
_LATTICE_SIGNS: Dict[str, Callable[[int, int], int]] = {
    "theta": lambda m, n: (-1) ** ((m + n) % 2),
    "theta1": lambda m, n: (-1) ** (m % 2),
    "theta2": lambda m, n: (-1) ** (n % 2),
    "theta3": lambda m, n: 1,
}


def _product_terms(q_abs: float, padding: int) -> int:
    if q_abs == 0:
        return 0
    return math.ceil(math.log(PRODUCT_EPS) / (2 * math.log(q_abs))) + padding


@dataclass(frozen=True)
class NumericThetaParams:
    """tau in the upper half plane (None stands for q = 0) and J product terms"""

    tau: Optional[complex]
    product_terms: int

    def __post_init__(self):
        if self.tau is not None and complex(self.tau).imag <= 0:
            raise PreconditionError(f"tau must lie in the upper half plane, got {self.tau}")
        if self.product_terms < 0:
            raise PreconditionError("product_terms must be >= 0")

    @classmethod
    def from_tau(cls, tau: complex, padding: int = PRODUCT_PADDING) -> "NumericThetaParams":
        tau = complex(tau)
        if tau.imag <= 0:
            raise PreconditionError(f"tau must lie in the upper half plane, got {tau}")
        q_abs = math.exp(-math.pi * tau.imag)
        return cls(tau, _product_terms(q_abs, padding))

    @classmethod
    def from_q(cls, q: complex, padding: int = PRODUCT_PADDING) -> "NumericThetaParams":
        """q = e^{pi i tau} with 0 <= |q| < 1; the principal logarithm picks tau"""
        q = complex(q)
        if abs(q) >= 1:
            raise PreconditionError(f"|q| must be < 1, got {abs(q)}")
        if q == 0:
            return cls(None, 0)
        return cls.from_tau(cmath.log(q) / (1j * math.pi), padding)

    @property
    def q(self) -> complex:
        if self.tau is None:
            return 0j
        return cmath.exp(1j * math.pi * self.tau)

    @property
    def quarter_q(self) -> complex:
        """q^{1/4} on the branch e^{pi i tau / 4}"""
        if self.tau is None:
            return 0j
        return cmath.exp(1j * math.pi * self.tau / 4)

    def require_tau(self, what: str) -> complex:
        if self.tau is None:
            raise PreconditionError(f"{what} needs q != 0")
        return self.tau


def _product(which: str, v: np.ndarray, params: NumericThetaParams) -> np.ndarray:
    sign, odd, _ = _PRODUCTS[which]
    w = np.exp(2j * np.pi * v)
    q = params.q
    out = np.ones_like(v, dtype=complex)
    for j in range(1, params.product_terms + 1):
        q_even = q ** (2 * j)
        q_shift = q ** (2 * j - 1) if odd else q_even
        out = out * (1 - q_even) * (1 + sign * w * q_shift) * (1 + sign * q_shift / w)
    return out


def theta_eval(which: str, v, params: NumericThetaParams):
    if which not in THETA_FUNCTIONS:
        raise ValueError(f"unknown theta function {which!r}")
    v = np.asarray(v, dtype=complex)
    out = _product(which, v, params)
    prefactor = _PRODUCTS[which][2]
    if prefactor is not None:
        out = 2 * params.quarter_q * prefactor(np.pi * v) * out
    return out if out.ndim else complex(out)


def theta_prime_zero(params: NumericThetaParams) -> complex:
    """theta'(0, tau) = 2 pi q^{1/4} prod_j (1 - q^{2j})^3"""
    q = params.q
    out = 2 * math.pi * params.quarter_q
    for j in range(1, params.product_terms + 1):
        out *= (1 - q ** (2 * j)) ** 3
    return out


def theta_ratio(v, params: NumericThetaParams):
    """theta(v, tau) / theta'(0, tau) with q^{1/4} cancelled; at q = 0 it is sin(pi v)/pi"""
    v = np.asarray(v, dtype=complex)
    w = np.exp(2j * np.pi * v)
    q = params.q
    out = np.sin(np.pi * v) / np.pi
    for j in range(1, params.product_terms + 1):
        q_even = q ** (2 * j)
        out = out * (1 - w * q_even) * (1 - q_even / w) / (1 - q_even) ** 2
    return out if out.ndim else complex(out)


def lattice_factor(which: str, v, m: int, n: int, params: NumericThetaParams):
    """theta_*(v + m + n tau) / theta_*(v) = sign * e^{-2 pi i n v - pi i n^2 tau}"""
    tau = params.require_tau("lattice laws")
    v = np.asarray(v, dtype=complex)
    return _LATTICE_SIGNS[which](m, n) * np.exp(-2j * np.pi * n * v - 1j * np.pi * n * n * tau)


def law_residual(which: str, v, m: int, n: int, params: NumericThetaParams) -> np.ndarray:
    tau = params.require_tau("lattice laws")
    v = np.asarray(v, dtype=complex)
    lhs = theta_eval(which, v + m + n * tau, params)
    rhs = lattice_factor(which, v, m, n, params) * theta_eval(which, v, params)
    return relative_residual(lhs, rhs)


@dataclass
class LawReport:
    trials: int
    max_residual: float
    per_function: Dict[str, float]
    tolerance: float = LAW_TOLERANCE

    @property
    def ok(self) -> bool:
        return self.max_residual < self.tolerance


def check_lattice_laws(params: NumericThetaParams, trials: int, seed: int = 0,
                       shift_range: int = 2) -> LawReport:
    """Max relative residual of all lattice laws at random v in the unit cell.

    Every trial checks the four shifts (1, 0), (0, 1) plus one random (m, n).
    """
    if trials < 1:
        raise PreconditionError("trials must be >= 1")
    tau = params.require_tau("lattice laws")
    rng = np.random.default_rng(seed)
    a, b = rng.random(trials), rng.random(trials)
    v = a + b * tau
    shifts = rng.integers(-shift_range, shift_range + 1, size=(trials, 2))
    per_function: Dict[str, float] = {}
    for which in THETA_FUNCTIONS:
        worst = max(float(np.max(law_residual(which, v, 1, 0, params))),
                    float(np.max(law_residual(which, v, 0, 1, params))))
        for value, (m, n) in zip(v, shifts):
            worst = max(worst, float(law_residual(which, value, int(m), int(n), params)))
        per_function[which] = worst
    report = LawReport(trials=trials, max_residual=max(per_function.values()), per_function=per_function)
    LOGGER.debug("lattice laws at tau=%s: max residual %.3e", tau, report.max_residual)
    return report
