"""
Complete intersections in products of projective spaces.

V is cut out of CP^{n_1} x ... x CP^{n_s} by t divisors with classes
l_p = sum_q d_pq x_q. Its stable tangent bundle is

    T V + s * C  =  i^* ( sum_q (n_q + 1) O(x_q) - sum_p O(l_p) )

so a multiplicative genus with characteristic series Q is

    <prod_q Q(x_q)^{n_q+1} / prod_p Q(l_p) * prod_p l_p , [ambient]> / Q(0)^s

which is computed here as the coefficient of x_1^{n_1} ... x_s^{n_s}, with every
factor l_p / Q(l_p) obtained by substituting y / Q(y) into l_p.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.core.char_series import (
    CharSeries,
    ahat_series,
    chern_character_series,
    lgenus_series,
    lhat_series,
    witten_series,
)
from src.core.errors import InstanceError, InsufficientOrderError, PreconditionError
from src.core.series import (
    DEFAULT_Q_ORDER,
    LinearForm,
    MSeries,
    QSeries,
    m_inverse,
    m_mul,
    product_coefficient,
    q_inverse,
    substitute_linear,
)

LOGGER = logging.getLogger(__name__)

GENUS_KINDS = ("witten", "ahat", "lgenus", "ahat_twisted", "lgenus_twisted", "euler")


@dataclass(frozen=True)
class CompleteIntersection:
    """Ambient dimensions n and the t x s degree matrix D"""

    n: Tuple[int, ...]
    D: Tuple[Tuple[int, ...], ...] = ()
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "n", tuple(self.n))
        object.__setattr__(self, "D", tuple(tuple(row) for row in self.D))
        if len(self.n) == 0:
            raise InstanceError("at least one projective factor is required (s >= 1)")
        for q, value in enumerate(self.n, start=1):
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise InstanceError(f"ambient dimension n_{q} must be an integer, got {value!r}")
            if value < 0:
                raise InstanceError(f"ambient dimension n_{q} must be >= 0, got {value}")
        for p, row in enumerate(self.D, start=1):
            if len(row) != len(self.n):
                raise InstanceError(f"ragged degree matrix: row p={p} has {len(row)} entries, expected {len(self.n)}")
            if any(not isinstance(d, (int, np.integer)) or isinstance(d, bool) for d in row):
                raise InstanceError(f"degree matrix row p={p} holds a non-integer entry")
            if all(d == 0 for d in row):
                raise InstanceError(f"degenerate divisor: zero row p={p}")
        if self.complex_dim < 0:
            raise InstanceError(
                f"negative complex dimension: sum(n)={sum(self.n)} < t={self.t}")

    @property
    def s(self) -> int:
        return len(self.n)

    @property
    def t(self) -> int:
        return len(self.D)

    @property
    def complex_dim(self) -> int:
        return sum(self.n) - self.t

    @property
    def real_dim(self) -> int:
        return 2 * self.complex_dim

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(v + 1 for v in self.n)

    @property
    def m(self) -> Tuple[int, ...]:
        """Number of nonzero entries per column"""
        return tuple(sum(1 for row in self.D if row[q] != 0) for q in range(self.s))

    @property
    def divisors(self) -> List[LinearForm]:
        return [LinearForm(row) for row in self.D]

    def gram(self) -> np.ndarray:
        return gram_matrix(self.D, self.s)

    def to_dict(self) -> Dict:
        out = {"n": list(self.n), "D": [list(row) for row in self.D]}
        if self.label:
            out["label"] = self.label
        return out

    def __str__(self):
        rows = "/".join(",".join(str(d) for d in row) for row in self.D)
        return f"n={','.join(str(v) for v in self.n)};D={rows}"


@dataclass(frozen=True)
class StringCertificate:
    is_string: bool
    lefschetz_ok: bool
    matrix_criterion_ok: bool
    pushforward_p1_zero: bool
    w2_zero_mod2: bool

    @property
    def decided(self) -> bool:
        """The matrix criterion decides string-ness only under m_q + 2 <= n_q"""
        return self.lefschetz_ok

    @property
    def caveat(self) -> Optional[str]:
        if self.lefschetz_ok:
            return None
        return "m_q + 2 <= n_q fails; the matrix criterion is reported without a string verdict"

    def to_dict(self) -> Dict:
        return {
            "is_string": self.is_string,
            "lefschetz_ok": self.lefschetz_ok,
            "matrix_criterion_ok": self.matrix_criterion_ok,
            "pushforward_p1_zero": self.pushforward_p1_zero,
            "w2_zero_mod2": self.w2_zero_mod2,
            "decided": self.decided,
        }


@dataclass(frozen=True)
class GenusReport:
    genus_kind: str
    value: QSeries
    complex_dim: int
    real_dim: int
    string: StringCertificate
    label: str = ""
    elapsed: float = field(default=0.0, compare=False)

    def is_zero(self) -> bool:
        return self.value.is_zero()


@dataclass(frozen=True)
class CorollaryReport:
    real_dim: int
    identity: str
    lhs: Fraction
    rhs: Fraction
    terms: Dict[str, Fraction]

    @property
    def difference(self) -> Fraction:
        return self.lhs - self.rhs

    @property
    def holds(self) -> bool:
        return self.difference == 0


def gram_matrix(D: Sequence[Sequence[int]], s: int) -> np.ndarray:
    """D^t D as an object array of Python ints"""
    return np.array(
        [[sum(int(row[a]) * int(row[b]) for row in D) for b in range(s)] for a in range(s)],
        dtype=object,
    ).reshape(s, s)


def stiefel_whitney_low(ci: CompleteIntersection) -> Tuple[int, Tuple[int, ...]]:
    """(w1, w2) with w2 as its mod-2 coefficient vector over the x_q"""
    w2 = tuple((ci.n[q] + 1 - sum(row[q] for row in ci.D)) % 2 for q in range(ci.s))
    return 0, w2


def _ring_one(ci: CompleteIntersection, trunc_order: int) -> MSeries:
    return MSeries.one(ci.shape, trunc_order)


def p1_ambient(ci: CompleteIntersection, trunc_order: int = 0) -> MSeries:
    """sum_q (n_q + 1) x_q^2 - sum_p l_p^2"""
    out = MSeries.zero(ci.shape, trunc_order)
    for q in range(ci.s):
        exponents = [0] * ci.s
        exponents[q] = 2
        out = out + MSeries.monomial(exponents, ci.shape, trunc_order, ci.n[q] + 1)
    for form in ci.divisors:
        out = out - MSeries.from_linear_form(form, ci.shape, trunc_order).multiply_linear(form)
    return out


def pontryagin_total(ci: CompleteIntersection, trunc_order: int = 0) -> MSeries:
    """prod_q (1 + x_q^2)^{n_q+1} * prod_p (1 + l_p^2)^{-1}"""
    budget = sum(ci.n)
    quadric = CharSeries.from_rationals("custom", [1, 0, 1], budget, trunc_order)
    out = _ring_one(ci, trunc_order)
    for q in range(ci.s):
        factor = substitute_linear(quadric.power(ci.n[q] + 1), LinearForm.unit(q, ci.s), ci.shape)
        out = m_mul(out, factor)
    for form in ci.divisors:
        out = m_mul(out, m_inverse(substitute_linear(quadric, form, ci.shape)))
    return out


def _dual_class(ci: CompleteIntersection, trunc_order: int) -> MSeries:
    out = _ring_one(ci, trunc_order)
    for form in ci.divisors:
        out = out.multiply_linear(form)
    return out


def is_string(ci: CompleteIntersection) -> StringCertificate:
    lefschetz_ok = all(m_q + 2 <= n_q for m_q, n_q in zip(ci.m, ci.n))
    gram = ci.gram()
    target = [[ci.n[a] + 1 if a == b else 0 for b in range(ci.s)] for a in range(ci.s)]
    matrix_criterion_ok = gram.tolist() == target
    pushforward = m_mul(_dual_class(ci, 0), p1_ambient(ci, 0)).is_zero()
    _, w2 = stiefel_whitney_low(ci)
    # d^2 = d mod 2, so the diagonal of D^t D carries w2
    for q in range(ci.s):
        if (ci.n[q] + 1 - gram[q, q]) % 2 != w2[q]:
            raise PreconditionError(f"parity check failed in column q={q + 1} of {ci}")
    return StringCertificate(
        is_string=matrix_criterion_ok,
        lefschetz_ok=lefschetz_ok,
        matrix_criterion_ok=matrix_criterion_ok,
        pushforward_p1_zero=pushforward,
        w2_zero_mod2=all(v == 0 for v in w2),
    )


def _check_series(ci: CompleteIntersection, Q: CharSeries):
    if Q.y_order < sum(ci.n):
        raise InsufficientOrderError(
            f"{Q.name} series known to y^{Q.y_order}, the instance needs y^{sum(ci.n)}")


def _ambient_factor(ci: CompleteIntersection, Q: CharSeries) -> MSeries:
    out = _ring_one(ci, Q.trunc_order)
    for q in range(ci.s):
        factor = substitute_linear(Q.power(ci.n[q] + 1), LinearForm.unit(q, ci.s), ci.shape)
        out = m_mul(out, factor)
    return out


def _divisor_factor(ci: CompleteIntersection, Q: CharSeries) -> MSeries:
    """prod_p l_p / Q(l_p), substituting the series y / Q(y)"""
    quotient = Q.inverse().times_y()
    out = _ring_one(ci, Q.trunc_order)
    for form in ci.divisors:
        out = m_mul(out, substitute_linear(quotient, form, ci.shape))
    return out


def _normalize(value: QSeries, ci: CompleteIntersection, Q: CharSeries) -> QSeries:
    """Remove Q(0)^s contributed by the s trivial summands of the stable tangent bundle"""
    c0 = Q[0]
    if c0.is_constant() and c0[0] == 1:
        return value
    inv = q_inverse(c0)
    for _ in range(ci.s):
        value = value * inv
    return value


def _pair(ci: CompleteIntersection, Q: CharSeries, twist: Optional[MSeries] = None) -> QSeries:
    _check_series(ci, Q)
    ambient = _ambient_factor(ci, Q)
    if twist is not None:
        ambient = m_mul(ambient, twist)
    value = product_coefficient(ambient, _divisor_factor(ci, Q), ci.n)
    return _normalize(value, ci, Q)


def chern_character_tangent(ci: CompleteIntersection, trunc_order: int = 0) -> MSeries:
    """ch(T V (x) C) = sum_q (n_q+1)(e^{x_q} + e^{-x_q}) - 2s - sum_p (e^{l_p} + e^{-l_p})"""
    ch = chern_character_series(sum(ci.n), trunc_order)
    out = MSeries.constant(-2 * ci.s, ci.shape, trunc_order)
    for q in range(ci.s):
        out = out + substitute_linear(ch, LinearForm.unit(q, ci.s), ci.shape).scale(ci.n[q] + 1)
    for form in ci.divisors:
        out = out - substitute_linear(ch, form, ci.shape)
    return out


def _report(ci: CompleteIntersection, kind: str, value: QSeries, started: float) -> GenusReport:
    elapsed = time.perf_counter() - started
    LOGGER.info("%s genus of %s computed in %.3fs", kind, ci, elapsed)
    return GenusReport(
        genus_kind=kind,
        value=value,
        complex_dim=ci.complex_dim,
        real_dim=ci.real_dim,
        string=is_string(ci),
        label=ci.label,
        elapsed=elapsed,
    )


def genus(ci: CompleteIntersection, Q: CharSeries, kind: Optional[str] = None) -> GenusReport:
    started = time.perf_counter()
    value = _pair(ci, Q)
    return _report(ci, kind or Q.name, value, started)


def twisted_genus(ci: CompleteIntersection, Q: CharSeries, kind: Optional[str] = None) -> GenusReport:
    """Genus twisted by the complexified tangent bundle"""
    started = time.perf_counter()
    twist = chern_character_tangent(ci, Q.trunc_order)
    value = _pair(ci, Q, twist)
    return _report(ci, kind or f"{Q.name}_twisted", value, started)


def euler_series(y_order: int) -> CharSeries:
    return CharSeries.from_rationals("custom", [1, 1], y_order)


def euler_characteristic(ci: CompleteIntersection) -> int:
    budget = sum(ci.n)
    Q = euler_series(budget)
    ambient = _ambient_factor(ci, Q)
    divisor = _ring_one(ci, 0)
    for form in ci.divisors:
        divisor = m_mul(divisor, m_inverse(substitute_linear(Q, form, ci.shape)).multiply_linear(form))
    value = product_coefficient(ambient, divisor, ci.n)[0]
    if value.denominator != 1:
        raise AssertionError(f"Euler characteristic of {ci} is not an integer: {value}")
    return int(value)


def evaluate_genus(ci: CompleteIntersection, kind: str, trunc_order: int = DEFAULT_Q_ORDER,
                   y_order: Optional[int] = None) -> GenusReport:
    """Dispatch on the GenusReport kind; only the Witten genus depends on trunc_order"""
    if kind not in GENUS_KINDS:
        raise PreconditionError(f"unknown genus kind {kind!r}; expected one of {', '.join(GENUS_KINDS)}")
    order = sum(ci.n) if y_order is None else y_order
    if kind == "witten":
        return genus(ci, witten_series(order, trunc_order))
    if kind == "ahat":
        return genus(ci, ahat_series(order))
    if kind == "lgenus":
        return genus(ci, lgenus_series(order))
    if kind == "ahat_twisted":
        return twisted_genus(ci, ahat_series(order))
    if kind == "lgenus_twisted":
        return twisted_genus(ci, lhat_series(order), kind="lgenus_twisted")
    started = time.perf_counter()
    return _report(ci, "euler", QSeries.constant(euler_characteristic(ci), 0), started)


def _number(report: GenusReport) -> Fraction:
    return report.value[0]


def corollary_identities(ci: CompleteIntersection) -> CorollaryReport:
    """Relations between the signature and twisted A-hat numbers in real dimensions 12 and 16"""
    if ci.real_dim not in (12, 16):
        raise PreconditionError(
            f"corollary identities need real dimension 12 or 16, got {ci.real_dim}")
    order = sum(ci.n)
    ahat = _number(genus(ci, ahat_series(order)))
    ahat_ch = _number(twisted_genus(ci, ahat_series(order)))
    if ci.real_dim == 12:
        signature = _number(genus(ci, lgenus_series(order)))
        return CorollaryReport(
            real_dim=12,
            identity="L = 8 Ahat ch(T) - 32 Ahat",
            lhs=signature,
            rhs=8 * ahat_ch - 32 * ahat,
            terms={"signature": signature, "ahat": ahat, "ahat_twisted": ahat_ch},
        )
    signature_twisted = _number(twisted_genus(ci, lhat_series(order)))
    return CorollaryReport(
        real_dim=16,
        identity="L ch(T) = -2048 (Ahat ch(T) - 48 Ahat)",
        lhs=signature_twisted,
        rhs=-2048 * (ahat_ch - 48 * ahat),
        terms={"signature_twisted": signature_twisted, "ahat": ahat, "ahat_twisted": ahat_ch},
    )


def landweber_stong(ci: CompleteIntersection) -> bool:
    """Complete intersections in a single projective space"""
    return ci.s == 1


def product_instance(first: CompleteIntersection, second: CompleteIntersection) -> CompleteIntersection:
    """Cartesian product: concatenated n and block-diagonal D"""
    left = [tuple(row) + (0,) * second.s for row in first.D]
    right = [(0,) * first.s + tuple(row) for row in second.D]
    return CompleteIntersection(first.n + second.n, tuple(left + right))


def hyperplane_section(ci: CompleteIntersection, q: int) -> CompleteIntersection:
    """Append the degree-1 divisor x_q (q is 0-based)"""
    if not 0 <= q < ci.s:
        raise PreconditionError(f"factor index {q} outside 0..{ci.s - 1}")
    if ci.n[q] < 1 or ci.complex_dim < 1:
        raise PreconditionError("a hyperplane section needs n_q >= 1 and positive dimension")
    row = tuple(1 if i == q else 0 for i in range(ci.s))
    return CompleteIntersection(ci.n, ci.D + (row,))


def reduce_dimension(ci: CompleteIntersection, q: int) -> CompleteIntersection:
    """CP^{n_q - 1} in place of CP^{n_q}, the ambient of a hyperplane section"""
    n = list(ci.n)
    n[q] -= 1
    return CompleteIntersection(tuple(n), ci.D)


def flip_row(ci: CompleteIntersection, p: int) -> CompleteIntersection:
    rows = [tuple(row) for row in ci.D]
    rows[p] = tuple(-d for d in rows[p])
    return CompleteIntersection(ci.n, tuple(rows))


def permute_factors(ci: CompleteIntersection, order: Sequence[int]) -> CompleteIntersection:
    n = tuple(ci.n[i] for i in order)
    D = tuple(tuple(row[i] for i in order) for row in ci.D)
    return CompleteIntersection(n, D)
