"""
Genus values as residues, computed numerically.

In the honest Chern root y = 2 pi i v the exact path expands

    F(y) = prod_q Q(y_q)^{n_q+1} * prod_p G(l_p(y)) / Q(0)^s,   G(y) = y / Q(y)

and reads off the coefficient of y_1^{n_1} ... y_s^{n_s}. Here the same coefficient is
a Cauchy integral over a product of circles, evaluated with the trapezoid rule,
which converges geometrically for integrands analytic on a larger polydisc.
For the Witten genus G(y) = 2 pi i theta(v)/theta'(0) is entire and Q has poles
only at the nonzero lattice points.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np

from src.core.errors import ConvergenceError, PreconditionError
from src.core.geometry import CompleteIntersection, is_string
from src.core.series import QSeries
from src.oracle.theta import NumericThetaParams, theta_ratio
from src.oracle.utils import (
    CONVERGENCE_TOLERANCE,
    DEFAULT_GAUSS_POINTS,
    DEFAULT_SAMPLES,
    MAX_SAMPLES,
)

LOGGER = logging.getLogger(__name__)

TWO_PI_I = 2j * math.pi

ORACLE_KINDS = ("witten", "ahat", "lgenus", "ahat_twisted", "lgenus_twisted", "euler")


@dataclass(frozen=True)
class NumericCharacteristic:
    """Q and G = y/Q as numpy callables, with the radii where they stop being analytic.

    `q_radius` bounds |y| for Q, `g_radius` bounds |l(y)| for G (inf when G is entire).
    """

    kind: str
    Q: Callable[[np.ndarray], np.ndarray]
    G: Callable[[np.ndarray], np.ndarray]
    q_radius: float
    g_radius: float
    q_at_zero: float = 1.0
    twisted: bool = False


def shortest_lattice_vector(tau: complex, span: int = 3) -> float:
    """Length of the shortest nonzero m + n tau"""
    return min(abs(m + n * tau) for m in range(-span, span + 1) for n in range(-span, span + 1)
               if (m, n) != (0, 0))


def numeric_characteristic(kind: str, params: NumericThetaParams) -> NumericCharacteristic:
    if kind not in ORACLE_KINDS:
        raise PreconditionError(f"the oracle has no characteristic series for {kind!r}")
    twisted = kind.endswith("_twisted")
    base = kind.replace("_twisted", "")
    if base == "witten":
        def G(y):
            return TWO_PI_I * theta_ratio(y / TWO_PI_I, params)
        limit = 1.0 if params.tau is None else shortest_lattice_vector(params.tau)
        return NumericCharacteristic(kind, lambda y: y / G(y), G, 2 * math.pi * limit, math.inf)
    if base == "ahat":
        G = lambda y: 2 * np.sinh(y / 2)
        return NumericCharacteristic(kind, lambda y: y / G(y), G, 2 * math.pi, math.inf, twisted=twisted)
    if base == "lgenus" and not twisted:
        return NumericCharacteristic(kind, lambda y: y / np.tanh(y), np.tanh, math.pi, math.pi / 2)
    if base == "lgenus":
        # twisted signature uses y / tanh(y/2)
        G = lambda y: np.tanh(y / 2)
        return NumericCharacteristic(kind, lambda y: y / G(y), G, 2 * math.pi, math.pi,
                                     q_at_zero=2.0, twisted=True)
    return NumericCharacteristic(kind, lambda y: 1 + y, lambda y: y / (1 + y), math.inf, 1.0)


@dataclass(frozen=True)
class ContourSpec:
    """Radius in the v = y / (2 pi i) coordinate (one per variable) and samples per circle"""

    radii: Sequence[float]
    samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        if any(r <= 0 for r in self.radii):
            raise PreconditionError("contour radii must be > 0")
        if self.samples < 2 or self.samples & (self.samples - 1):
            raise PreconditionError(f"samples must be a power of two, got {self.samples}")


def _row_weight(ci: CompleteIntersection) -> int:
    return max((sum(abs(d) for d in row) for row in ci.D), default=0)


def analytic_radius(ci: CompleteIntersection, char: NumericCharacteristic) -> float:
    """Largest v-radius keeping every factor of the integrand analytic on the polydisc"""
    limit = char.q_radius
    weight = _row_weight(ci)
    if weight and math.isfinite(char.g_radius):
        limit = min(limit, char.g_radius / weight)
    if not math.isfinite(limit):
        # polynomial integrand: any radius works
        return 1.0
    return limit / (2 * math.pi)


def default_contour(ci: CompleteIntersection, char: NumericCharacteristic,
                    samples: int = DEFAULT_SAMPLES, radius: Optional[float] = None) -> ContourSpec:
    r = analytic_radius(ci, char) / 4 if radius is None else radius
    return ContourSpec(radii=[r] * ci.s, samples=samples)


def _ch_tangent(ci: CompleteIntersection, ys: List[np.ndarray], forms: List[np.ndarray]) -> np.ndarray:
    out = -2.0 * ci.s + 0j
    for n_q, y in zip(ci.n, ys):
        out = out + (n_q + 1) * 2 * np.cosh(y)
    for l in forms:
        out = out - 2 * np.cosh(l)
    return out


def integrand(ci: CompleteIntersection, char: NumericCharacteristic, ys: List[np.ndarray]) -> np.ndarray:
    """F(y) evaluated on a grid, one array per variable"""
    out = np.ones_like(ys[0], dtype=complex)
    for n_q, y in zip(ci.n, ys):
        out = out * char.Q(y) ** (n_q + 1)
    forms = [sum(d * y for d, y in zip(row, ys)) for row in ci.D]
    for l in forms:
        out = out * char.G(l)
    if char.twisted:
        out = out * _ch_tangent(ci, ys, forms)
    return out / char.q_at_zero ** ci.s


def _trapezoid(ci: CompleteIntersection, char: NumericCharacteristic, rho: Sequence[float], samples: int) -> complex:
    phi = 2 * math.pi * np.arange(samples) / samples
    grids = np.meshgrid(*([phi] * ci.s), indexing="ij")
    ys = [r * np.exp(1j * g) for r, g in zip(rho, grids)]
    phase = np.exp(-1j * sum(n_q * g for n_q, g in zip(ci.n, grids)))
    scale = float(np.prod([r ** -n_q for r, n_q in zip(rho, ci.n)]))
    return complex(np.mean(integrand(ci, char, ys) * phase)) * scale


@dataclass(frozen=True)
class ResidueResult:
    value: complex
    samples: int
    change: float


def residue_genus(ci: CompleteIntersection, contour: ContourSpec, kind: str = "witten",
                  params: Optional[NumericThetaParams] = None,
                  tolerance: float = CONVERGENCE_TOLERANCE) -> ResidueResult:
    """Coefficient of y^n in F by the trapezoid rule, doubling samples until N and 2N agree"""
    params = params or NumericThetaParams.from_q(0)
    char = numeric_characteristic(kind, params)
    if len(contour.radii) != ci.s:
        raise PreconditionError(f"contour has {len(contour.radii)} radii, instance has s={ci.s}")
    limit = analytic_radius(ci, char)
    if max(contour.radii) >= limit / 2:
        raise ConvergenceError(
            f"contour radius {max(contour.radii):.4g} leaves the analytic region (must be < {limit / 2:.4g})")
    rho = [2 * math.pi * r for r in contour.radii]
    samples = contour.samples
    coarse = _trapezoid(ci, char, rho, samples)
    while samples <= MAX_SAMPLES:
        fine = _trapezoid(ci, char, rho, 2 * samples)
        change = abs(fine - coarse)
        if change <= tolerance * max(abs(fine), 1.0):
            LOGGER.debug("residue of %s converged with %d samples (change %.2e)", ci, 2 * samples, change)
            return ResidueResult(fine, 2 * samples, change)
        coarse, samples = fine, 2 * samples
    raise ConvergenceError(
        f"trapezoid sums for {ci} did not converge up to {MAX_SAMPLES} samples per circle")


def evaluate_qseries(value: QSeries, q: complex) -> complex:
    """sum_n c_n q^{2n} in floating point"""
    return value.evaluate(q)


def _require_string(ci: CompleteIntersection, what: str, need_lefschetz: bool, force: bool):
    if force:
        return
    certificate = is_string(ci)
    if not certificate.matrix_criterion_ok:
        raise PreconditionError(f"{what} needs D^t D = diag(n_q + 1); {ci} fails it")
    if need_lefschetz and not certificate.lefschetz_ok:
        raise PreconditionError(f"{what} needs m_q + 2 <= n_q; {ci} fails it")


def periodic_quotient(ci: CompleteIntersection, params: NumericThetaParams, xs: Sequence[np.ndarray]) -> np.ndarray:
    """prod_p theta(l_p(x)) / prod_q theta(x_q)^{n_q+1}, theta'(0) normalized"""
    out = np.ones_like(np.asarray(xs[0], dtype=complex))
    for row in ci.D:
        out = out * theta_ratio(sum(d * x for d, x in zip(row, xs)), params)
    for n_q, x in zip(ci.n, xs):
        out = out / theta_ratio(x, params) ** (n_q + 1)
    return out


def shift_residual(ci: CompleteIntersection, params: NumericThetaParams, xs: Sequence[np.ndarray],
                   index: int, delta: complex) -> np.ndarray:
    base = periodic_quotient(ci, params, xs)
    moved = [x + delta if i == index else x for i, x in enumerate(xs)]
    shifted = periodic_quotient(ci, params, moved)
    return np.abs(shifted - base) / np.abs(base)


@dataclass
class PeriodicityReport:
    trials: int
    max_residual: float
    per_shift: dict


def check_integrand_periodicity(ci: CompleteIntersection, params: NumericThetaParams, trials: int,
                                seed: int = 0, force: bool = False) -> PeriodicityReport:
    """Invariance of the quotient under x_q -> x_q + 1 and x_q -> x_q + tau"""
    _require_string(ci, "integrand periodicity", need_lefschetz=False, force=force)
    tau = params.require_tau("integrand periodicity")
    rng = np.random.default_rng(seed)
    # keep the points away from the lattice, where the quotient is singular
    xs = [0.1 + 0.8 * rng.random(trials) + (0.1 + 0.8 * rng.random(trials)) * tau for _ in range(ci.s)]
    per_shift = {}
    for index in range(ci.s):
        for name, delta in (("1", 1.0), ("tau", tau)):
            per_shift[f"x{index + 1}+{name}"] = float(np.max(shift_residual(ci, params, xs, index, delta)))
    return PeriodicityReport(trials=trials, max_residual=max(per_shift.values()), per_shift=per_shift)


@dataclass
class ResidueSumReport:
    boundary_integral: complex
    origin_residue: complex
    edge_cancellation: float

    @property
    def abs_residue(self) -> float:
        return abs(self.origin_residue)


def residue_sum_check(ci: CompleteIntersection, params: NumericThetaParams,
                      samples: int = DEFAULT_SAMPLES, gauss_points: int = DEFAULT_GAUSS_POINTS,
                      radius: Optional[float] = None, force: bool = False) -> ResidueSumReport:
    """Residue theorem on the torus for the last variable.

    x_1..x_{s-1} run over small circles and x_s over the boundary of the
    fundamental parallelogram centred at 0, whose only lattice point is 0. Opposite
    edges cancel exactly when the quotient is doubly periodic, so the boundary
    integral and the residue at the origin both vanish for string data.
    Values are rescaled by (2 pi i)^{-dim} to the normalization of the exact genus.
    """
    _require_string(ci, "residue sum check", need_lefschetz=True, force=force)
    tau = params.require_tau("residue sum check")
    r = radius if radius is not None else min(1.0, abs(tau), shortest_lattice_vector(tau)) / 8
    phi = 2 * math.pi * np.arange(samples) / samples
    circle = r * np.exp(1j * phi)

    def cauchy(values: np.ndarray, points: Sequence[np.ndarray]) -> np.ndarray:
        # (1/2 pi i) contour integral over the leading circle variables
        for x in points:
            values = values * x
        axes = tuple(range(len(points)))
        return np.mean(values, axis=axes) if axes else values

    grids = np.meshgrid(*([circle] * ci.s), indexing="ij")
    origin = complex(cauchy(periodic_quotient(ci, params, grids), grids))

    nodes, weights = np.polynomial.legendre.leggauss(gauss_points)
    corner = -(1 + tau) / 2
    corners = [corner, corner + 1, corner + 1 + tau, corner + tau]
    edges = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        z = a + (b - a) * (nodes + 1) / 2
        lead = np.meshgrid(*([circle] * (ci.s - 1) + [z]), indexing="ij")
        values = periodic_quotient(ci, params, lead)
        inner = cauchy(values, lead[:-1])
        edges.append(complex(np.sum(inner * weights) * (b - a) / 2) / TWO_PI_I)

    normalization = TWO_PI_I ** (-ci.complex_dim)
    boundary = sum(edges) * normalization
    cancellation = (abs(edges[0] + edges[2]) + abs(edges[1] + edges[3])) * abs(normalization)
    LOGGER.info("residue sum for %s: boundary %.3e, origin %.3e", ci, abs(boundary), abs(origin * normalization))
    return ResidueSumReport(boundary_integral=boundary, origin_residue=origin * normalization,
                            edge_cancellation=cancellation)
