import random
from fractions import Fraction

import pytest

from src.core.char_series import ahat_series, lgenus_series
from src.core.errors import InstanceError, InsufficientOrderError, PreconditionError
from src.core.geometry import (
    CompleteIntersection,
    chern_character_tangent,
    corollary_identities,
    euler_characteristic,
    evaluate_genus,
    flip_row,
    genus,
    hyperplane_section,
    is_string,
    landweber_stong,
    p1_ambient,
    permute_factors,
    pontryagin_total,
    product_instance,
    reduce_dimension,
    stiefel_whitney_low,
    twisted_genus,
)
from src.core.series import MSeries, QSeries, coefficient_at

POINT = CompleteIntersection((0,))
CP1 = CompleteIntersection((1,))
CP2 = CompleteIntersection((2,))
QUINTIC = CompleteIntersection((4,), ((5,),))
K3 = CompleteIntersection((3,), ((4,),))
STRING_SURFACE = CompleteIntersection((5,), ((2,), (1,), (1,)))
STRING_TWELVE = CompleteIntersection((7, 4), ((2, 1), (1, -2), (1, 0), (1, 0), (1, 0)))
STRING_SIXTEEN = CompleteIntersection((12,), ((2,), (2,), (2,), (1,)))


def number(report):
    return report.value[0]


def random_instance(rng, max_n=3, max_s=2, max_t=2, max_degree=2):
    s = rng.randint(1, max_s)
    n = tuple(rng.randint(1, max_n) for _ in range(s))
    t = rng.randint(0, min(max_t, sum(n)))
    rows = []
    while len(rows) < t:
        row = tuple(rng.randint(-max_degree, max_degree) for _ in range(s))
        if any(row):
            rows.append(row)
    return CompleteIntersection(n, tuple(rows))


def test_instance_validation():
    with pytest.raises(InstanceError, match="degenerate divisor: zero row p=2"):
        CompleteIntersection((3,), ((1,), (0,)))
    with pytest.raises(InstanceError, match="ragged"):
        CompleteIntersection((3, 2), ((1,),))
    with pytest.raises(InstanceError, match="negative complex dimension"):
        CompleteIntersection((1,), ((1,), (1,)))
    with pytest.raises(InstanceError):
        CompleteIntersection((-1,))
    with pytest.raises(InstanceError):
        CompleteIntersection(())


def test_derived_quantities():
    assert STRING_TWELVE.complex_dim == 6
    assert STRING_TWELVE.real_dim == 12
    assert STRING_TWELVE.m == (5, 2)
    assert STRING_TWELVE.shape == (8, 5)


def test_stiefel_whitney_examples():
    assert stiefel_whitney_low(QUINTIC) == (0, (0,))
    assert stiefel_whitney_low(CompleteIntersection((3,), ((1,),))) == (0, (1,))
    assert stiefel_whitney_low(CP2) == (0, (1,))


def test_p1_ambient_examples():
    assert p1_ambient(STRING_SURFACE).is_zero()
    assert p1_ambient(STRING_TWELVE).is_zero()
    assert p1_ambient(CP2) == MSeries.monomial((2,), (3,), 0, 3)
    assert coefficient_at(p1_ambient(QUINTIC), (2,))[0] == 5 - 25


def test_p1_is_degree_two_part_of_total_pontryagin():
    for ci in (QUINTIC, CompleteIntersection((3, 2), ((1, 1),)), STRING_SURFACE):
        total = pontryagin_total(ci)
        p1 = p1_ambient(ci)
        degree_two = [(2,)] if ci.s == 1 else [(2, 0), (1, 1), (0, 2)]
        for exponents in degree_two:
            assert coefficient_at(total, exponents) == coefficient_at(p1, exponents)


def test_is_string_examples():
    cert = is_string(STRING_SURFACE)
    assert cert.is_string and cert.lefschetz_ok and cert.pushforward_p1_zero and cert.w2_zero_mod2
    assert cert.caveat is None
    assert not is_string(QUINTIC).is_string
    assert not is_string(CP2).is_string
    assert not is_string(CP2).w2_zero_mod2
    assert is_string(CompleteIntersection((3,), ((2,),))).is_string
    assert is_string(STRING_TWELVE).is_string


def test_is_string_reports_caveat_outside_lefschetz_range():
    cert = is_string(CompleteIntersection((2,), ((1,),)))
    assert not cert.lefschetz_ok
    assert not cert.decided
    assert cert.caveat


@pytest.mark.parametrize("seed", range(100))
def test_matrix_criterion_equivalence(seed):
    rng = random.Random(seed)
    ci = random_instance(rng, max_n=7, max_t=3)
    cert = is_string(ci)
    if cert.lefschetz_ok:
        assert cert.matrix_criterion_ok == (cert.pushforward_p1_zero and cert.w2_zero_mod2)


@pytest.mark.parametrize("degree", [2**62 + 2, 2**64, -(2**70) - 1])
def test_string_decision_is_exact_for_large_degrees(degree):
    cert = is_string(CompleteIntersection((3,), ((degree,),)))
    assert cert.lefschetz_ok
    assert not cert.matrix_criterion_ok and not cert.is_string
    assert cert.matrix_criterion_ok == (cert.pushforward_p1_zero and cert.w2_zero_mod2)


def test_gram_matrix_keeps_python_integers():
    ci = CompleteIntersection((3, 2), ((2**40, 1), (1, 2**40)))
    assert ci.gram().tolist() == [[2**80 + 1, 2**41], [2**41, 2**80 + 1]]


def test_classical_values():
    assert number(genus(POINT, ahat_series(0))) == 1
    assert number(genus(CP2, ahat_series(2))) == Fraction(-1, 8)
    assert number(genus(CP2, lgenus_series(2))) == 1
    assert number(genus(CP1, ahat_series(1))) == 0
    assert euler_characteristic(QUINTIC) == -200
    assert euler_characteristic(CP2) == 3
    assert euler_characteristic(POINT) == 1


def test_witten_genus_of_cp2():
    value = evaluate_genus(CP2, "witten", 3).value
    assert value.coeffs == (Fraction(-1, 8), 3, 9, 12)


def test_twisted_ahat_of_cp2():
    assert number(twisted_genus(CP2, ahat_series(2))) == Fraction(5, 2)


def test_chern_character_rank():
    for ci in (CP2, QUINTIC, STRING_TWELVE):
        assert chern_character_tangent(ci).constant_term() == QSeries.constant(2 * ci.complex_dim, 0)


def test_string_instances_have_vanishing_witten_genus():
    assert evaluate_genus(STRING_SURFACE, "witten", 8).is_zero()
    assert number(twisted_genus(STRING_SURFACE, ahat_series(5))) == 0
    assert evaluate_genus(STRING_TWELVE, "witten", 3).is_zero()


def test_odd_dimension_genus_vanishes():
    assert evaluate_genus(QUINTIC, "witten", 4).is_zero()


def test_k3_witten_genus_is_nonzero():
    value = evaluate_genus(K3, "witten", 2).value
    assert value[0] == 2


def test_genus_needs_enough_y_order():
    with pytest.raises(InsufficientOrderError):
        genus(QUINTIC, ahat_series(2))


def test_unknown_genus_kind():
    with pytest.raises(PreconditionError):
        evaluate_genus(CP2, "todd")


@pytest.mark.parametrize("seed", range(10))
def test_witten_low_coefficients_are_ahat_numbers(seed):
    ci = random_instance(random.Random(seed), max_n=4, max_t=2)
    witten = evaluate_genus(ci, "witten", 1).value
    ahat = number(evaluate_genus(ci, "ahat"))
    ahat_ch = number(evaluate_genus(ci, "ahat_twisted"))
    assert witten[0] == ahat
    assert witten[1] == ahat_ch - 2 * ci.complex_dim * ahat


@pytest.mark.parametrize("seed", range(100))
def test_genus_is_multiplicative(seed):
    rng = random.Random(seed)
    first = random_instance(rng, max_n=2, max_s=1, max_t=1)
    second = random_instance(rng, max_n=2, max_s=1, max_t=1)
    product = product_instance(first, second)
    for kind in ("witten", "ahat", "lgenus"):
        lhs = evaluate_genus(product, kind, 2).value
        rhs = evaluate_genus(first, kind, 2).value * evaluate_genus(second, kind, 2).value
        assert lhs == rhs


@pytest.mark.parametrize("seed", range(100))
def test_hyperplane_section_reduces_dimension(seed):
    rng = random.Random(seed)
    ci = random_instance(rng, max_n=3, max_t=1)
    q = rng.randrange(ci.s)
    if ci.n[q] < 1 or ci.complex_dim < 1:
        pytest.skip("no hyperplane section")
    section = hyperplane_section(ci, q)
    reduced = reduce_dimension(ci, q)
    for kind in ("witten", "ahat", "lgenus"):
        assert evaluate_genus(section, kind, 2).value == evaluate_genus(reduced, kind, 2).value


@pytest.mark.parametrize("seed", range(20))
def test_row_flip_and_factor_permutation(seed):
    rng = random.Random(seed)
    ci = random_instance(rng, max_n=3, max_t=2)
    for kind in ("witten", "ahat", "lgenus"):
        value = evaluate_genus(ci, kind, 2).value
        if ci.t:
            assert evaluate_genus(flip_row(ci, 0), kind, 2).value == -value
        order = list(reversed(range(ci.s)))
        assert evaluate_genus(permute_factors(ci, order), kind, 2).value == value


def test_twelve_dimensional_string_identity():
    report = corollary_identities(STRING_TWELVE)
    assert report.real_dim == 12
    assert report.holds
    assert report.lhs == 0 and report.rhs == 0


@pytest.mark.parametrize("ci", [
    CompleteIntersection((7,), ((2,),)),
    CompleteIntersection((6,)),
    CompleteIntersection((3, 3)),
    CompleteIntersection((4, 3), ((1, 2),)),
    CompleteIntersection((8,), ((1,), (3,))),
])
def test_twelve_dimensional_identity_holds(ci):
    report = corollary_identities(ci)
    assert report.holds
    assert report.difference == 0


def test_twelve_dimensional_identity_is_nontrivial():
    report = corollary_identities(CompleteIntersection((6,)))
    assert report.lhs == 1
    assert report.lhs == report.rhs


@pytest.mark.parametrize("ci", [
    CompleteIntersection((8,)),
    CompleteIntersection((9,), ((3,),)),
    CompleteIntersection((5, 4), ((1, 1),)),
])
def test_sixteen_dimensional_identity_holds(ci):
    report = corollary_identities(ci)
    assert report.real_dim == 16
    assert report.holds


def test_sixteen_dimensional_string_identity():
    assert is_string(STRING_SIXTEEN).is_string
    assert number(evaluate_genus(STRING_SIXTEEN, "lgenus_twisted")) == 0
    report = corollary_identities(STRING_SIXTEEN)
    assert report.real_dim == 16
    assert report.holds
    assert report.lhs == 0 and report.rhs == 0


def test_identity_needs_dimension_twelve_or_sixteen():
    with pytest.raises(PreconditionError):
        corollary_identities(CompleteIntersection((4,)))


def test_landweber_stong_flag():
    assert landweber_stong(STRING_SURFACE)
    assert not landweber_stong(STRING_TWELVE)


def test_instance_builders():
    product = product_instance(STRING_SURFACE, CP2)
    assert product.n == (5, 2)
    assert product.D == ((2, 0), (1, 0), (1, 0))
    section = hyperplane_section(CP2, 0)
    assert section.D == ((1,),)
    with pytest.raises(PreconditionError):
        hyperplane_section(POINT, 0)
