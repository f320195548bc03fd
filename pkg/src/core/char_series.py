"""
Characteristic series of multiplicative genera with q-series coefficients.

All series use the honest Chern root y. In this normalization the Witten series is

    Q_W(y) = (y/2)/sinh(y/2) * prod_{j>=1} (1 - q^{2j})^2 / ((1 - q^{2j} e^y)(1 - q^{2j} e^{-y}))

whose q^0 part is the A-hat series. It equals v theta'(0,tau)/theta(v,tau) at
v = y/(2 pi i); the Chern root convention "2 pi i x_j" differs from this one by
an overall power of 2 pi i, which does not affect vanishing.
"""
from __future__ import annotations

import cmath
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Optional, Sequence, Tuple

from src.core.errors import InsufficientOrderError, NonInvertibleError
from src.core.series import QSeries, Scalar

LOGGER = logging.getLogger(__name__)

SERIES_NAMES = ("witten", "ahat", "lgenus", "lhat", "exp", "custom")


@dataclass(frozen=True)
class CharSeries:
    """Univariate series sum_k coeffs[k] y^k with QSeries coefficients"""

    name: str
    coeffs: Tuple[QSeries, ...]

    def __post_init__(self):
        if self.name not in SERIES_NAMES:
            raise ValueError(f"unknown series name {self.name!r}")
        if not self.coeffs:
            raise ValueError("a CharSeries keeps at least the constant coefficient")
        orders = {c.trunc_order for c in self.coeffs}
        if len(orders) != 1:
            raise ValueError(f"coefficients disagree on the q truncation: {sorted(orders)}")

    @property
    def y_order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def trunc_order(self) -> int:
        return self.coeffs[0].trunc_order

    @classmethod
    def from_rationals(cls, name: str, values: Iterable[Scalar], y_order: int, trunc_order: int = 0) -> "CharSeries":
        """q-independent series from rational Taylor coefficients, padded with zeros"""
        values = list(values)[: y_order + 1]
        values += [0] * (y_order + 1 - len(values))
        return cls(name, tuple(QSeries.constant(v, trunc_order) for v in values))

    @classmethod
    def one(cls, y_order: int, trunc_order: int = 0, name: str = "custom") -> "CharSeries":
        return cls.from_rationals(name, [1], y_order, trunc_order)

    def __getitem__(self, k: int) -> QSeries:
        if k < 0 or k > self.y_order:
            raise InsufficientOrderError(f"{self.name} series is known to y^{self.y_order}, asked for y^{k}")
        return self.coeffs[k]

    def with_name(self, name: str) -> "CharSeries":
        return CharSeries(name, self.coeffs)

    def truncate(self, y_order: int, trunc_order: Optional[int] = None) -> "CharSeries":
        if y_order > self.y_order:
            raise InsufficientOrderError(f"cannot extend a y^{self.y_order} series to y^{y_order}")
        k = self.trunc_order if trunc_order is None else trunc_order
        return CharSeries(self.name, tuple(c.truncate(k) for c in self.coeffs[: y_order + 1]))

    def add(self, other: "CharSeries", name: str = "custom") -> "CharSeries":
        order = min(self.y_order, other.y_order)
        return CharSeries(name, tuple(self.coeffs[k] + other.coeffs[k] for k in range(order + 1)))

    def scale(self, factor, name: str = "custom") -> "CharSeries":
        """Multiply every coefficient by a rational or by a QSeries"""
        return CharSeries(name, tuple(c * factor for c in self.coeffs))

    def multiply(self, other: "CharSeries", name: str = "custom") -> "CharSeries":
        order = min(self.y_order, other.y_order)
        k = min(self.trunc_order, other.trunc_order)
        out = [QSeries.zero(k) for _ in range(order + 1)]
        for i in range(order + 1):
            a = self.coeffs[i]
            if a.is_zero():
                continue
            for j in range(order + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return CharSeries(name, tuple(out))

    def inverse(self, name: str = "custom") -> "CharSeries":
        c0 = self.coeffs[0]
        if c0.coeffs[0] == 0:
            raise NonInvertibleError(f"{self.name} series has a non-invertible constant term")
        inv0 = c0.inverse()
        out = [inv0]
        for n in range(1, self.y_order + 1):
            acc = QSeries.zero(self.trunc_order)
            for i in range(1, n + 1):
                if not self.coeffs[i].is_zero():
                    acc = acc + self.coeffs[i] * out[n - i]
            out.append(-(inv0 * acc))
        return CharSeries(name, tuple(out))

    def power(self, exponent: int, name: str = "custom") -> "CharSeries":
        if exponent < 0:
            return self.inverse().power(-exponent, name)
        result = CharSeries.one(self.y_order, self.trunc_order, name)
        base = self
        while exponent:
            if exponent & 1:
                result = result.multiply(base, name)
            exponent >>= 1
            if exponent:
                base = base.multiply(base)
        return result

    def times_y(self, name: str = "custom") -> "CharSeries":
        """y * F(y); the y-order grows by one"""
        return CharSeries(name, (QSeries.zero(self.trunc_order),) + self.coeffs)

    def q_zero_part(self) -> "CharSeries":
        """Drop every positive power of q"""
        return CharSeries(self.name, tuple(QSeries.constant(c[0], self.trunc_order) for c in self.coeffs))

    def is_even(self) -> bool:
        return all(self.coeffs[k].is_zero() for k in range(1, self.y_order + 1, 2))

    def rational_coefficients(self, q_power: int = 0) -> Tuple[Fraction, ...]:
        return tuple(c[q_power] for c in self.coeffs)


def _taylor(values_at: Dict[int, Fraction], y_order: int) -> list:
    return [values_at.get(k, Fraction(0)) for k in range(y_order + 1)]


def _exp_coeffs(y_order: int, rate: Fraction = Fraction(1)) -> list:
    """Taylor coefficients of e^{rate y} by the recurrence c_k = c_{k-1} rate / k"""
    out = [Fraction(1)]
    for k in range(1, y_order + 1):
        out.append(out[-1] * rate / k)
    return out


def _sinhc_coeffs(y_order: int, rate: Fraction) -> list:
    """Taylor coefficients of sinh(rate y)/(rate y)"""
    values = {}
    term = Fraction(1)
    for m in range(0, y_order // 2 + 1):
        if m:
            term = term * rate * rate / ((2 * m) * (2 * m + 1))
        values[2 * m] = term
    return _taylor(values, y_order)


def _cosh_coeffs(y_order: int, rate: Fraction) -> list:
    values = {}
    term = Fraction(1)
    for m in range(0, y_order // 2 + 1):
        if m:
            term = term * rate * rate / ((2 * m - 1) * (2 * m))
        values[2 * m] = term
    return _taylor(values, y_order)


def exp_series(y_order: int, trunc_order: int = 0, sign: int = 1) -> CharSeries:
    """e^{sign y}"""
    return CharSeries.from_rationals("exp", _exp_coeffs(y_order, Fraction(sign)), y_order, trunc_order)


def chern_character_series(y_order: int, trunc_order: int = 0) -> CharSeries:
    """e^y + e^{-y}: Chern character of L + conj(L) for a line bundle L with c_1 = y"""
    plus = exp_series(y_order, trunc_order, 1)
    minus = exp_series(y_order, trunc_order, -1)
    return plus.add(minus)


def ahat_series(y_order: int, trunc_order: int = 0) -> CharSeries:
    """(y/2)/sinh(y/2)"""
    sinhc = CharSeries.from_rationals("custom", _sinhc_coeffs(y_order, Fraction(1, 2)), y_order, trunc_order)
    return sinhc.inverse("ahat")


def lgenus_series(y_order: int, trunc_order: int = 0) -> CharSeries:
    """y/tanh(y), the signature series"""
    sinhc = CharSeries.from_rationals("custom", _sinhc_coeffs(y_order, Fraction(1)), y_order, trunc_order)
    cosh = CharSeries.from_rationals("custom", _cosh_coeffs(y_order, Fraction(1)), y_order, trunc_order)
    return cosh.multiply(sinhc.inverse(), "lgenus")


def lhat_series(y_order: int, trunc_order: int = 0) -> CharSeries:
    """y/tanh(y/2), the characteristic series of the signature operator.

    Untwisted top-degree numbers agree with lgenus_series; twisted by a bundle E
    it gives the index of the signature operator with coefficients in E.
    """
    half = Fraction(1, 2)
    sinhc = CharSeries.from_rationals("custom", _sinhc_coeffs(y_order, half), y_order, trunc_order)
    cosh = CharSeries.from_rationals("custom", _cosh_coeffs(y_order, half), y_order, trunc_order)
    return cosh.multiply(sinhc.inverse()).scale(2, "lhat")


@lru_cache(maxsize=64)
def witten_series(y_order: int, trunc_order: int) -> CharSeries:
    """Q_W(y) to y^{y_order} and q^{2 trunc_order}.

    Each factor of the product is 1 / (1 - u_j c(y)) with
    u_j = q^{2j}/(1 - q^{2j})^2 and c(y) = e^y + e^{-y} - 2.
    """
    if y_order < 0 or trunc_order < 0:
        raise ValueError("y_order and trunc_order must be >= 0")
    k = trunc_order
    result = ahat_series(y_order, k)
    c = chern_character_series(y_order, k).add(CharSeries.from_rationals("custom", [-2], y_order, k))
    one = CharSeries.one(y_order, k)
    for j in range(1, k + 1):
        qj = QSeries.monomial(j, k)
        u = qj * ((QSeries.one(k) - qj) * (QSeries.one(k) - qj)).inverse()
        factor = one.add(c.scale(-u)).inverse()
        result = result.multiply(factor)
    LOGGER.debug("witten series built to y^%d, q^%d", y_order, 2 * k)
    return result.with_name("witten")


def symmetric_power_witten(y_order: int, trunc_order: int) -> CharSeries:
    """Q_W(y) rebuilt from the Chern characters of the symmetric powers.

    Per root pair, ch S_t(L + conj(L) - 2) = (1 - t)^2 sum_{a,b>=0} t^{a+b} e^{(a-b) y}
    with t = q^{2j}; the double sum is expanded term by term.
    """
    k = trunc_order
    result = ahat_series(y_order, k)
    for j in range(1, k + 1):
        grid = [[Fraction(0)] * (k + 1) for _ in range(y_order + 1)]
        for total in range(0, k // j + 1):
            for a in range(total + 1):
                b = total - a
                for power, value in enumerate(_exp_coeffs(y_order, Fraction(a - b))):
                    grid[power][j * total] += value
        sym = CharSeries("custom", tuple(QSeries.from_coeffs(row, k) for row in grid))
        trivial = QSeries.one(k) - QSeries.monomial(j, k)
        result = result.multiply(sym.scale(trivial * trivial))
    return result.with_name("witten")


THETA_FUNCTIONS = ("theta", "theta1", "theta2", "theta3")


@dataclass(frozen=True)
class ThetaExpansion:
    """Exact expansion of a truncated theta product in w = e^{2 pi i v} and q.

    `terms` maps (w exponent, q exponent) to an integer coefficient. For theta and
    theta1 the factor 2 q^{1/4} sin(pi v) (resp. cos) is not expanded: it is
    recorded by `prefactor` and `quarter_power`, since every quotient the genus
    uses cancels it.
    """

    which: str
    prefactor: Optional[str]
    quarter_power: bool
    terms: Tuple[Tuple[Tuple[int, int], int], ...]

    @property
    def vanishes_at_origin(self) -> bool:
        return self.prefactor == "sin"

    def coefficient(self, w_exp: int, q_exp: int) -> int:
        return dict(self.terms).get((w_exp, q_exp), 0)

    def product_at_w_one(self) -> Dict[int, int]:
        """The product part at v = 0, as {q exponent: coefficient}"""
        out: Dict[int, int] = {}
        for (_, q_exp), c in self.terms:
            out[q_exp] = out.get(q_exp, 0) + c
        return {e: c for e, c in sorted(out.items()) if c != 0}

    def evaluate(self, v: complex, tau: complex) -> complex:
        """Numeric value of the truncated expansion, prefactor included"""
        w = cmath.exp(2j * cmath.pi * v)
        q = cmath.exp(1j * cmath.pi * tau)
        total = sum(c * w ** we * q ** qe for (we, qe), c in self.terms)
        if self.prefactor == "sin":
            total *= 2 * cmath.exp(1j * cmath.pi * tau / 4) * cmath.sin(cmath.pi * v)
        elif self.prefactor == "cos":
            total *= 2 * cmath.exp(1j * cmath.pi * tau / 4) * cmath.cos(cmath.pi * v)
        return total


def _poly_mul(left: Dict[Tuple[int, int], int], factor: Sequence[Tuple[int, int, int]],
              q_cap: int, w_cap: Optional[int]) -> Dict[Tuple[int, int], int]:
    out: Dict[Tuple[int, int], int] = {}
    for (we, qe), c in left.items():
        for fw, fq, fc in factor:
            key = (we + fw, qe + fq)
            if key[1] > q_cap or (w_cap is not None and abs(key[0]) > w_cap):
                continue
            out[key] = out.get(key, 0) + c * fc
    return {key: c for key, c in out.items() if c != 0}


def theta_qexp(which: str, z_order: Optional[int], trunc_order: int) -> ThetaExpansion:
    """Expand the product of theta, theta1, theta2 or theta3 for j <= trunc_order.

    q exponents above 2 trunc_order are dropped, and so are w exponents beyond
    z_order in absolute value when z_order is given.
    """
    if which not in THETA_FUNCTIONS:
        raise ValueError(f"unknown theta function {which!r}")
    if trunc_order < 0 or (z_order is not None and z_order < 0):
        raise ValueError("z_order and trunc_order must be >= 0")
    sign = -1 if which in ("theta", "theta2") else 1
    odd = which in ("theta2", "theta3")
    q_cap = 2 * trunc_order
    poly: Dict[Tuple[int, int], int] = {(0, 0): 1}
    for j in range(1, trunc_order + 1):
        shift = 2 * j - 1 if odd else 2 * j
        poly = _poly_mul(poly, [(0, 0, 1), (0, 2 * j, -1)], q_cap, z_order)
        poly = _poly_mul(poly, [(0, 0, 1), (1, shift, sign)], q_cap, z_order)
        poly = _poly_mul(poly, [(0, 0, 1), (-1, shift, sign)], q_cap, z_order)
    prefactor = {"theta": "sin", "theta1": "cos"}.get(which)
    return ThetaExpansion(
        which=which,
        prefactor=prefactor,
        quarter_power=prefactor is not None,
        terms=tuple(sorted(poly.items())),
    )

