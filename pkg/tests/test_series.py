import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from src.core.char_series import CharSeries, exp_series
from src.core.errors import InsufficientOrderError, NonInvertibleError, SeriesShapeError
from src.core.series import (
    LinearForm,
    MSeries,
    QSeries,
    coefficient_at,
    m_add,
    m_inverse,
    m_mul,
    product_coefficient,
    q_inverse,
    q_mul,
    substitute_linear,
)


def q(values, k):
    return QSeries.from_coeffs(values, k)


def mono(exponents, shape, coeff=1, k=0):
    return MSeries.monomial(exponents, shape, k, coeff)


def random_qseries(rng, k):
    return QSeries.from_coeffs([Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(k + 1)], k)


def random_mseries(rng, shape, k, invertible=False):
    out = np.empty(tuple(shape) + (k + 1,), dtype=object)
    for index in np.ndindex(*out.shape):
        out[index] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    if invertible:
        out[(0,) * len(shape) + (0,)] = Fraction(rng.choice([-2, -1, 1, 2, 3]))
    return MSeries(out)


def test_q_mul_difference_of_squares():
    assert q_mul(q([1, 1], 3), q([1, -1], 3)) == q([1, 0, -1], 3)


def test_q_inverse_identity_and_geometric_series():
    assert q_inverse(QSeries.one(4)) == QSeries.one(4)
    assert q_inverse(q([1, -1], 5)).coeffs == (Fraction(1),) * 6


def test_q_inverse_rejects_zero_constant_term():
    with pytest.raises(NonInvertibleError):
        q_inverse(q([0, 1], 3))


def test_q_arithmetic_takes_min_truncation():
    assert (q([1, 2, 3], 2) + q([1], 5)).trunc_order == 2
    assert (q([1, 2, 3], 2) * q([1], 1)).trunc_order == 1


def test_qseries_evaluate_uses_even_powers():
    assert q([1, 2], 1).evaluate(0.5) == pytest.approx(1 + 2 * 0.25)


@pytest.mark.parametrize("seed", range(100))
def test_q_ring_axioms(seed):
    rng = random.Random(seed)
    k = rng.randint(0, 5)
    a, b, c = (random_qseries(rng, k) for _ in range(3))
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    if a[0] != 0:
        assert a * a.inverse() == QSeries.one(k)


def test_m_mul_truncates_per_shape():
    one_plus_x = MSeries.one((2,), 0) + mono((1,), (2,))
    assert m_mul(one_plus_x, one_plus_x) == MSeries.one((2,), 0) + mono((1,), (2,), 2)
    one_plus_x = MSeries.one((3,), 0) + mono((1,), (3,))
    expected = MSeries.one((3,), 0) + mono((1,), (3,), 2) + mono((2,), (3,))
    assert m_mul(one_plus_x, one_plus_x) == expected


def test_m_mul_identity_and_mixed_monomial():
    a = mono((1, 0), (2, 2)) + mono((0, 1), (2, 2), 3)
    assert m_mul(a, MSeries.one((2, 2), 0)) == a
    assert m_mul(mono((1, 0), (2, 2)), mono((0, 1), (2, 2))) == mono((1, 1), (2, 2))


def test_shape_mismatch_is_rejected():
    with pytest.raises(SeriesShapeError):
        m_mul(MSeries.one((2,), 0), MSeries.one((3,), 0))
    with pytest.raises(SeriesShapeError):
        m_add(MSeries.one((2, 2), 0), MSeries.one((2,), 0))


def test_m_inverse_examples():
    assert m_inverse(MSeries.one((3,), 2)) == MSeries.one((3,), 2)
    x = MSeries.one((3,), 0) + mono((1,), (3,))
    assert m_inverse(x) == MSeries.one((3,), 0) - mono((1,), (3,)) + mono((2,), (3,))
    shape = (2, 2)
    a = MSeries.one(shape, 0) + mono((1, 0), shape) + mono((0, 1), shape)
    expected = MSeries.one(shape, 0) - mono((1, 0), shape) - mono((0, 1), shape) + mono((1, 1), shape, 2)
    assert m_inverse(a) == expected


def test_m_inverse_rejects_zero_constant():
    with pytest.raises(NonInvertibleError):
        m_inverse(mono((1,), (3,)))


@pytest.mark.parametrize("seed", range(100))
def test_m_ring_axioms_and_inverse(seed):
    rng = random.Random(seed)
    shape = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 3)))
    k = rng.randint(0, 2)
    a, b, c = (random_mseries(rng, shape, k) for _ in range(3))
    assert m_mul(m_mul(a, b), c) == m_mul(a, m_mul(b, c))
    assert m_mul(a, b) == m_mul(b, a)
    assert m_mul(a, m_add(b, c)) == m_add(m_mul(a, b), m_mul(a, c))
    inv = random_mseries(rng, shape, k, invertible=True)
    assert m_mul(inv, m_inverse(inv)) == MSeries.one(shape, k)


@pytest.mark.parametrize("seed", range(30))
def test_m_mul_matches_naive_convolution(seed):
    rng = random.Random(seed)
    shape = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 2)))
    k = rng.randint(0, 2)
    a, b = random_mseries(rng, shape, k), random_mseries(rng, shape, k)
    product = m_mul(a, b)
    for e in itertools.product(*(range(n) for n in shape)):
        naive = QSeries.zero(k)
        for i in itertools.product(*(range(v + 1) for v in e)):
            j = tuple(v - w for v, w in zip(e, i))
            naive = naive + coefficient_at(a, i) * coefficient_at(b, j)
        assert coefficient_at(product, e) == naive
        assert product_coefficient(a, b, e) == naive


def test_substitute_linear_examples():
    square = CharSeries.from_rationals("custom", [1, 0, 1], 2)
    expected = MSeries.one((2, 2), 0) + mono((1, 1), (2, 2), 2)
    assert substitute_linear(square, LinearForm((1, 1)), (2, 2)) == expected

    one = CharSeries.one(3)
    assert substitute_linear(one, LinearForm((3, -1)), (2, 3)) == MSeries.one((2, 3), 0)

    result = substitute_linear(exp_series(3), LinearForm((2,)), (4,))
    assert [coefficient_at(result, (e,))[0] for e in range(4)] == [1, 2, 2, Fraction(4, 3)]


def test_substitute_linear_needs_enough_order():
    with pytest.raises(InsufficientOrderError):
        substitute_linear(exp_series(1), LinearForm((1, 1)), (2, 2))


@pytest.mark.parametrize("seed", range(100))
def test_substitute_linear_is_multiplicative(seed):
    rng = random.Random(seed)
    shape = tuple(rng.randint(1, 3) for _ in range(rng.randint(1, 2)))
    order = sum(n - 1 for n in shape)
    k = rng.randint(0, 2)
    f = CharSeries("custom", tuple(random_qseries(rng, k) for _ in range(order + 1)))
    g = CharSeries("custom", tuple(random_qseries(rng, k) for _ in range(order + 1)))
    form = LinearForm(tuple(rng.randint(-3, 3) for _ in shape))
    lhs = substitute_linear(f.multiply(g), form, shape)
    rhs = m_mul(substitute_linear(f, form, shape), substitute_linear(g, form, shape))
    assert lhs == rhs


def test_coefficient_at_examples():
    a = MSeries.one((2,), 0) + mono((1,), (2,), 2)
    assert coefficient_at(a, (1,)) == QSeries.constant(2, 0)
    assert coefficient_at(mono((1, 1), (2, 2)), (1, 1)) == QSeries.constant(1, 0)
    x = MSeries.one((4,), 0) + mono((1,), (4,))
    cube = m_mul(m_mul(x, x), x)
    assert coefficient_at(cube, (2,)) == QSeries.constant(3, 0)


def test_coefficient_at_out_of_range():
    with pytest.raises(SeriesShapeError):
        coefficient_at(MSeries.one((2,), 0), (2,))
    with pytest.raises(SeriesShapeError):
        coefficient_at(MSeries.one((2,), 0), (0, 0))


def test_mseries_is_immutable():
    a = MSeries.one((2,), 0)
    with pytest.raises(ValueError):
        a.coeffs[0, 0] = Fraction(5)
