"""
Exact truncated power series.

QSeries holds a power series in q^2 (index n is the coefficient of q^{2n}).
MSeries holds a polynomial in x_1..x_s reduced modulo (x_1^{n_1+1}, ..., x_s^{n_s+1})
whose coefficients are QSeries; it models the rational cohomology ring of
CP^{n_1} x ... x CP^{n_s} with q-series coefficients.

Storage is dense: an MSeries keeps a numpy object array of Fractions with shape
(n_1+1, ..., n_s+1, K+1), the last axis being the q^2 exponent.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np

from src.core.errors import InsufficientOrderError, NonInvertibleError, SeriesShapeError

LOGGER = logging.getLogger(__name__)

DEFAULT_Q_ORDER = 8

ZERO = Fraction(0)
ONE = Fraction(1)

Scalar = Union[int, Fraction]


def _as_fraction(value: Scalar) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"exact arithmetic only accepts int or Fraction, got {type(value).__name__}")


@dataclass(frozen=True)
class QSeries:
    """Truncated power series in q^2 with exact rational coefficients"""

    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("a QSeries keeps at least the constant coefficient")

    @property
    def trunc_order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def from_coeffs(cls, values: Iterable[Scalar], trunc_order: int) -> "QSeries":
        """Build a series from leading coefficients, padding with zeros or cutting at trunc_order"""
        if trunc_order < 0:
            raise ValueError(f"trunc_order must be >= 0, got {trunc_order}")
        coeffs = [_as_fraction(v) for v in values][: trunc_order + 1]
        coeffs += [ZERO] * (trunc_order + 1 - len(coeffs))
        return cls(tuple(coeffs))

    @classmethod
    def constant(cls, value: Scalar, trunc_order: int) -> "QSeries":
        return cls.from_coeffs([value], trunc_order)

    @classmethod
    def zero(cls, trunc_order: int) -> "QSeries":
        return cls.from_coeffs([], trunc_order)

    @classmethod
    def one(cls, trunc_order: int) -> "QSeries":
        return cls.constant(1, trunc_order)

    @classmethod
    def monomial(cls, power: int, trunc_order: int, coeff: Scalar = 1) -> "QSeries":
        """coeff * q^{2 power}, or zero when the power is past the truncation"""
        values = [0] * (power + 1)
        values[power] = coeff
        return cls.from_coeffs(values, trunc_order)

    def __getitem__(self, n: int) -> Fraction:
        return self.coeffs[n]

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def truncate(self, trunc_order: int) -> "QSeries":
        if trunc_order > self.trunc_order:
            raise ValueError("truncation cannot extend a series")
        return QSeries(self.coeffs[: trunc_order + 1])

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def is_constant(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __add__(self, other):
        if isinstance(other, QSeries):
            return q_add(self, other)
        return q_add(self, QSeries.constant(other, self.trunc_order))

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return q_mul(self, other)
        factor = _as_fraction(other)
        return QSeries(tuple(c * factor for c in self.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        return q_inverse(self)

    def evaluate(self, q: complex) -> complex:
        """Sum the truncated series at a numeric q (powers q^{2n})"""
        q2 = complex(q) ** 2
        total = 0j
        for c in reversed(self.coeffs):
            total = total * q2 + float(c)
        return total

    def __str__(self):
        terms = []
        for n, c in enumerate(self.coeffs):
            if c == 0:
                continue
            terms.append(str(c) if n == 0 else f"({c})q^{2 * n}")
        return " + ".join(terms) if terms else "0"


def q_add(a: QSeries, b: QSeries) -> QSeries:
    k = min(a.trunc_order, b.trunc_order)
    return QSeries(tuple(a.coeffs[i] + b.coeffs[i] for i in range(k + 1)))


def q_mul(a: QSeries, b: QSeries) -> QSeries:
    k = min(a.trunc_order, b.trunc_order)
    out = [ZERO] * (k + 1)
    for i in range(k + 1):
        ai = a.coeffs[i]
        if ai == 0:
            continue
        for j in range(k + 1 - i):
            out[i + j] += ai * b.coeffs[j]
    return QSeries(tuple(out))


def q_inverse(a: QSeries) -> QSeries:
    """Multiplicative inverse; a * result = 1 + O(q^{2(K+1)})"""
    a0 = a.coeffs[0]
    if a0 == 0:
        raise NonInvertibleError("q-series with zero constant term is not invertible")
    inv0 = 1 / a0
    out = [inv0]
    for n in range(1, a.trunc_order + 1):
        acc = sum((a.coeffs[i] * out[n - i] for i in range(1, n + 1)), ZERO)
        out.append(-inv0 * acc)
    return QSeries(tuple(out))


@dataclass(frozen=True)
class LinearForm:
    """Integer linear form c_1 x_1 + ... + c_s x_s"""

    coefficients: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(int(c) for c in self.coefficients))

    @classmethod
    def unit(cls, index: int, size: int) -> "LinearForm":
        return cls(tuple(1 if q == index else 0 for q in range(size)))

    def __len__(self):
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple(-c for c in self.coefficients))


def _zeros(shape: Sequence[int], trunc_order: int) -> np.ndarray:
    return np.full(tuple(shape) + (trunc_order + 1,), ZERO, dtype=object)


def _freeze(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


class MSeries:
    """Element of Q[[q^2]][x_1..x_s] / (x_q^{n_q+1}) stored densely"""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: np.ndarray):
        if coeffs.ndim < 2:
            raise SeriesShapeError("an MSeries array needs at least one x axis and the q axis")
        self._coeffs = _freeze(coeffs)

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(self._coeffs.shape[:-1])

    @property
    def trunc_order(self) -> int:
        return self._coeffs.shape[-1] - 1

    @property
    def degree_budget(self) -> int:
        """Largest total x-degree that survives the truncation"""
        return sum(n - 1 for n in self.shape)

    @classmethod
    def zero(cls, shape: Sequence[int], trunc_order: int) -> "MSeries":
        return cls(_zeros(shape, trunc_order))

    @classmethod
    def constant(cls, value: Union[QSeries, Scalar], shape: Sequence[int], trunc_order: Optional[int] = None) -> "MSeries":
        if not isinstance(value, QSeries):
            value = QSeries.constant(value, DEFAULT_Q_ORDER if trunc_order is None else trunc_order)
        k = value.trunc_order if trunc_order is None else min(trunc_order, value.trunc_order)
        out = _zeros(shape, k)
        out[(0,) * len(shape)] = np.array(value.coeffs[: k + 1], dtype=object)
        return cls(out)

    @classmethod
    def one(cls, shape: Sequence[int], trunc_order: int) -> "MSeries":
        return cls.constant(1, shape, trunc_order)

    @classmethod
    def monomial(cls, exponents: Sequence[int], shape: Sequence[int], trunc_order: int,
                 coeff: Union[QSeries, Scalar] = 1) -> "MSeries":
        """coeff * x^exponents, zero when an exponent overflows the shape"""
        _check_rank(exponents, shape)
        if not isinstance(coeff, QSeries):
            coeff = QSeries.constant(coeff, trunc_order)
        out = _zeros(shape, trunc_order)
        if all(0 <= e < n for e, n in zip(exponents, shape)):
            out[tuple(exponents)] = np.array(coeff.truncate(trunc_order).coeffs, dtype=object)
        return cls(out)

    @classmethod
    def from_linear_form(cls, form: LinearForm, shape: Sequence[int], trunc_order: int) -> "MSeries":
        _check_rank(form.coefficients, shape)
        return MSeries.one(shape, trunc_order).multiply_linear(form)

    def coefficient_at(self, exponents: Sequence[int]) -> QSeries:
        return coefficient_at(self, exponents)

    def constant_term(self) -> QSeries:
        return QSeries(tuple(self._coeffs[(0,) * len(self.shape)]))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self._coeffs.flat)

    def nonzero_count(self) -> int:
        """Number of x-monomials carrying a nonzero q-series"""
        flat = self._coeffs.reshape(-1, self.trunc_order + 1)
        return sum(1 for row in flat if any(c != 0 for c in row))

    def multiply_linear(self, form: LinearForm) -> "MSeries":
        """Product with a linear form, computed as a sum of shifted copies"""
        _check_rank(form.coefficients, self.shape)
        out = _zeros(self.shape, self.trunc_order)
        for axis, c in enumerate(form.coefficients):
            if c == 0 or self.shape[axis] < 2:
                continue
            src = [slice(None)] * (len(self.shape) + 1)
            dst = [slice(None)] * (len(self.shape) + 1)
            src[axis] = slice(0, self.shape[axis] - 1)
            dst[axis] = slice(1, None)
            out[tuple(dst)] += c * self._coeffs[tuple(src)]
        return MSeries(out)

    def scale(self, factor: Union[QSeries, Scalar]) -> "MSeries":
        if not isinstance(factor, QSeries):
            return MSeries(self._coeffs * _as_fraction(factor))
        k = min(self.trunc_order, factor.trunc_order)
        out = _zeros(self.shape, k)
        src = self._coeffs[..., : k + 1]
        for i, c in enumerate(factor.coeffs[: k + 1]):
            if c != 0:
                out[..., i:] += c * src[..., : k + 1 - i]
        return MSeries(out)

    def __add__(self, other):
        if isinstance(other, MSeries):
            return m_add(self, other)
        return m_add(self, MSeries.constant(other, self.shape, self.trunc_order))

    __radd__ = __add__

    def __neg__(self) -> "MSeries":
        return MSeries(-self._coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, MSeries):
            return m_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, MSeries):
            return NotImplemented
        return self._coeffs.shape == other._coeffs.shape and bool(np.all(self._coeffs == other._coeffs))

    def __hash__(self):
        return hash((self._coeffs.shape, tuple(self._coeffs.flat)))

    def __repr__(self):
        return f"MSeries(shape={self.shape}, trunc_order={self.trunc_order})"


def _check_rank(exponents: Sequence[int], shape: Sequence[int]):
    if len(exponents) != len(shape):
        raise SeriesShapeError(f"expected {len(shape)} variables, got {len(exponents)}")


def _check_same_shape(a: MSeries, b: MSeries):
    if a.shape != b.shape:
        raise SeriesShapeError(f"shape mismatch: {a.shape} vs {b.shape}")


def m_add(a: MSeries, b: MSeries) -> MSeries:
    _check_same_shape(a, b)
    k = min(a.trunc_order, b.trunc_order)
    return MSeries(a.coeffs[..., : k + 1] + b.coeffs[..., : k + 1])


def m_mul(a: MSeries, b: MSeries) -> MSeries:
    """Truncated product; overflowing exponents in x and q are discarded"""
    _check_same_shape(a, b)
    if a.nonzero_count() > b.nonzero_count():
        a, b = b, a
    k = min(a.trunc_order, b.trunc_order)
    A = a.coeffs[..., : k + 1]
    B = b.coeffs[..., : k + 1]
    out = _zeros(a.shape, k)
    for index in np.ndindex(*a.shape):
        a_vec = A[index]
        powers = [i for i in range(k + 1) if a_vec[i] != 0]
        if not powers:
            continue
        window = tuple(slice(0, n - e) for n, e in zip(a.shape, index))
        target = tuple(slice(e, None) for e in index)
        block = B[window]
        for i in powers:
            out[target + (slice(i, None),)] += a_vec[i] * block[..., : k + 1 - i]
    return MSeries(out)


def m_inverse(a: MSeries) -> MSeries:
    """Inverse in the truncated ring by the geometric series in the augmentation part.

    With a = c (1 + N), N nilpotent, the inverse is c^{-1} (1 - N + N^2 - ...),
    and N^{d+1} = 0 for d the degree budget of the shape.
    """
    c = a.constant_term()
    if c.coeffs[0] == 0:
        raise NonInvertibleError("multivariate series with non-invertible constant term")
    c_inv = q_inverse(c)
    one = MSeries.one(a.shape, a.trunc_order)
    nilpotent = a.scale(c_inv) - one
    result = one
    for _ in range(a.degree_budget):
        result = one - m_mul(nilpotent, result)
    return result.scale(c_inv)


def coefficient_at(a: MSeries, exponents: Sequence[int]) -> QSeries:
    _check_rank(exponents, a.shape)
    if any(e < 0 or e >= n for e, n in zip(exponents, a.shape)):
        raise SeriesShapeError(f"exponent {tuple(exponents)} outside shape {a.shape}")
    return QSeries(tuple(a.coeffs[tuple(exponents)]))


def product_coefficient(a: MSeries, b: MSeries, exponents: Sequence[int]) -> QSeries:
    """coefficient_at(a * b, exponents) without forming the full product"""
    _check_same_shape(a, b)
    _check_rank(exponents, a.shape)
    if any(e < 0 or e >= n for e, n in zip(exponents, a.shape)):
        raise SeriesShapeError(f"exponent {tuple(exponents)} outside shape {a.shape}")
    k = min(a.trunc_order, b.trunc_order)
    window = tuple(slice(0, e + 1) for e in exponents)
    A = a.coeffs[window][..., : k + 1]
    flip = tuple(slice(None, None, -1) for _ in exponents)
    B = b.coeffs[window][flip][..., : k + 1]
    out = [ZERO] * (k + 1)
    for i in range(k + 1):
        left = A[..., i]
        for j in range(k + 1 - i):
            out[i + j] += np.sum(left * B[..., j], dtype=object) if left.size else ZERO
    return QSeries(tuple(Fraction(c) for c in out))


def substitute_linear(series, form: LinearForm, shape: Sequence[int]) -> MSeries:
    """Evaluate a univariate series F(y) at y = form(x) in the truncated ring (Horner).

    `series` is any object exposing `y_order`, `trunc_order` and indexing by the
    y power (a CharSeries).
    """
    _check_rank(form.coefficients, shape)
    budget = sum(n - 1 for n in shape)
    if series.y_order < budget:
        raise InsufficientOrderError(
            f"series known to y^{series.y_order}, substitution needs y^{budget}")
    k = series.trunc_order
    origin = (0,) * len(shape)
    result = MSeries.constant(series[budget], shape, k)
    for power in range(budget - 1, -1, -1):
        coeffs = result.multiply_linear(form).coeffs.copy()
        coeffs[origin] = coeffs[origin] + np.array(series[power].coeffs[: k + 1], dtype=object)
        result = MSeries(coeffs)
    return result
