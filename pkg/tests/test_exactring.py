from fractions import Fraction

import numpy as np
import pytest

from sp4_building_zeta.exactring import (LaurentPoly, PowerSeries, RingMatrix, ZERO, ONE, V, X1, S, X2, Q,
                                         ExponentOverflowError, ConstantTermError, NonSquareError,
                                         NotDivisibleError, poly_normalize, exact_div, det, charpoly, adjugate,
                                         format_poly, parse_poly, from_sympy, to_sympy, upoly_mul, upoly_prod,
                                         upoly_reverse, upoly_spread, upoly_eq, one_minus, poly_divides,
                                         series_exp, series_log, series_from_poly)


# ---------------------------------------------------------
# Utility helpers
# ---------------------------------------------------------
def random_poly(rng, n_terms=3, span=3):
    terms = {}
    for _ in range(n_terms):
        e = tuple(int(x) for x in rng.integers(-span, span + 1, size=3))
        terms[e] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
    return LaurentPoly(terms)


def random_matrix(rng, n, small=False):
    if small:
        return RingMatrix.from_rows([[int(x) for x in rng.integers(-3, 4, size=n)] for _ in range(n)])
    return RingMatrix.from_rows([[random_poly(rng, 2, 1) for _ in range(n)] for _ in range(n)])


# ---------------------------------------------------------
# Laurent polynomials
# ---------------------------------------------------------
def test_normalize_drops_zero_terms():
    assert poly_normalize(0 * X1 + 3 - 3) == ZERO
    assert poly_normalize(0 * X1 + 3 - 3).terms == {}
    assert poly_normalize(V ** 2 * V ** -2) == ONE
    assert poly_normalize({(1, 0, 0): 0, (0, 0, 0): 2}) == LaurentPoly.const(2)
    p = poly_normalize(V + X1)
    assert poly_normalize(p) == p


def test_x2_abbreviation_folds_central_character():
    assert X1 * X2 == S ** -2
    assert X1 * X2 * S ** 2 == ONE
    assert parse_poly('x1*x2') == S ** -2


def test_ring_axioms_random():
    rng = np.random.default_rng(7)
    for _ in range(1000):
        a, b, c = random_poly(rng), random_poly(rng), random_poly(rng)
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert a - a == ZERO


def test_exponent_bound():
    with pytest.raises(ExponentOverflowError):
        LaurentPoly.monomial(1, (65, 0, 0))
    with pytest.raises(ExponentOverflowError):
        V ** 40 * V ** 30
    assert LaurentPoly.monomial(1, (-64, 0, 0)).inverse() == V ** 64


def test_exact_division():
    a = (V + X1) * (S - 2)
    assert exact_div(a, V + X1) == S - 2
    assert a / (S - 2) == V + X1
    assert (V ** 3 * S) / (V * S) == V ** 2
    with pytest.raises(NotDivisibleError):
        exact_div(V + 1, V - 1)
    with pytest.raises(ZeroDivisionError):
        exact_div(V, ZERO)


def test_inverse_of_non_monomial_fails():
    with pytest.raises(NotDivisibleError):
        (V + 1).inverse()
    assert (2 * V ** 2 * S).inverse() == Fraction(1, 2) * V ** -2 * S ** -1


def test_evaluate_and_substitute():
    p = 3 * V ** 3 * X1 * S ** -1 + 1
    assert p.evaluate(v=2, x1=1, s=1) == 25
    assert Q.evaluate(v=3) == 9
    twisted = p.substitute({'s': -S})
    assert twisted == -3 * V ** 3 * X1 * S ** -1 + 1
    assert (X1 + X1 ** -1).substitute({'x1': V * X1}) == V * X1 + V ** -1 * X1 ** -1


# ---------------------------------------------------------
# Text form
# ---------------------------------------------------------
def test_canonical_text():
    p = 3 * V ** 3 * X1 * S ** -1 + 1
    assert format_poly(p) == '3*v^3*x1*s^-1 + 1'
    assert format_poly(ZERO) == '0'
    assert format_poly(-V + Fraction(1, 2)) == '-v + 1/2'
    assert parse_poly('3*v^3*x1*s^-1 + 1') == p
    assert parse_poly('q^2 - 1') == V ** 4 - 1


def test_text_is_stable():
    rng = np.random.default_rng(3)
    for _ in range(50):
        p = random_poly(rng, 4)
        assert parse_poly(format_poly(p)) == p
        assert from_sympy(to_sympy(p)) == p


def test_parse_rejects_non_laurent():
    with pytest.raises(ValueError):
        parse_poly('v^(1/2)')
    with pytest.raises(ValueError):
        parse_poly('y + 1')


# ---------------------------------------------------------
# Determinants and characteristic polynomials
# ---------------------------------------------------------
def test_det_small_cases():
    assert det(RingMatrix.identity(3)) == ONE
    assert det(RingMatrix.from_rows([[V ** 3 * S]])) == V ** 3 * S
    assert det(RingMatrix.from_rows([[0, 1], [1, 0]])) == -ONE
    assert det(RingMatrix.from_rows([[X1, V], [V, X1 ** -1]])) == 1 - V ** 2
    with pytest.raises(NonSquareError):
        det(RingMatrix.zeros(2, 3))


def test_det_multiplicative_random():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a, b = random_matrix(rng, 3), random_matrix(rng, 3)
        assert det(a @ b) == det(a) * det(b)


def test_charpoly_small_cases():
    assert charpoly(RingMatrix.zeros(2, 2)) == [ZERO, ZERO, ONE]
    c = V ** 2 * S
    assert charpoly(RingMatrix.from_rows([[c]])) == [-c, ONE]
    with pytest.raises(NonSquareError):
        charpoly(RingMatrix.zeros(1, 2))


def test_cayley_hamilton_random():
    rng = np.random.default_rng(5)
    for _ in range(30):
        m = random_matrix(rng, 3, small=True)
        coeffs = charpoly(m)
        acc = RingMatrix.zeros(3, 3)
        power = RingMatrix.identity(3)
        for c in coeffs:
            acc = acc + power.scale(c)
            power = power @ m
        assert acc == RingMatrix.zeros(3, 3)


def test_charpoly_over_laurent_ring():
    m = RingMatrix.from_rows([[0, V ** 2 * X1], [ONE, 0]])
    assert charpoly(m) == [-V ** 2 * X1, ZERO, ONE]


def test_adjugate_identity():
    rng = np.random.default_rng(2)
    m = random_matrix(rng, 3)
    d = det(m)
    assert m @ adjugate(m) == RingMatrix.identity(3).scale(d)


# ---------------------------------------------------------
# Polynomials in u
# ---------------------------------------------------------
def test_poly_divides():
    assert poly_divides([-1, 0, 1], [-1, 1]) == [ONE, ONE]
    assert poly_divides([0, 0, 1], [-1, 1]) is None
    full = upoly_mul(one_minus(V ** 2 * X1, 2), one_minus(S))
    assert upoly_eq(poly_divides(full, one_minus(S)), one_minus(V ** 2 * X1, 2))
    with pytest.raises(ValueError):
        poly_divides([1, 1], [1, V + 1])


def test_reverse_and_spread():
    # det(uI - M) = u^2 - a u + b  ->  det(I - Mu) = 1 - a u + b u^2
    assert upoly_reverse([V, -X1, ONE]) == [ONE, -X1, V]
    assert upoly_spread([ONE, -S], 2) == [ONE, ZERO, -S]
    assert upoly_prod([one_minus(V), one_minus(-V)]) == [ONE, ZERO, -V ** 2]


# ---------------------------------------------------------
# Power series
# ---------------------------------------------------------
def test_exp_of_zero():
    assert series_exp(PowerSeries.from_coefficients([0], 5)) == PowerSeries.one(5)


def test_log_of_geometric_series():
    f = PowerSeries.from_coefficients([1] * 5, 4)
    assert series_log(f) == PowerSeries.from_coefficients(
        [0, 1, Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)], 4)


def test_exp_of_even_cycle_counts():
    coeffs = [0] * 7
    for n in (1, 2, 3):
        coeffs[2 * n] = Fraction(2, 2 * n)
    assert series_exp(PowerSeries.from_coefficients(coeffs, 6)) == \
        PowerSeries.from_coefficients([1, 0, 1, 0, 1, 0, 1], 6)


def test_exp_log_inverse_random():
    rng = np.random.default_rng(13)
    for _ in range(10):
        coeffs = [1] + [Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))) for _ in range(12)]
        f = PowerSeries.from_coefficients(coeffs, 12)
        assert series_exp(series_log(f)) == f


def test_wrong_constant_terms():
    with pytest.raises(ConstantTermError):
        series_exp(PowerSeries.one(3))
    with pytest.raises(ConstantTermError):
        series_log(PowerSeries.from_coefficients([2, 1], 3))
    with pytest.raises(ConstantTermError):
        PowerSeries.from_coefficients([0, 1], 3).inverse()


def test_series_inverse_and_power():
    f = series_from_poly([1, -1], 6)
    assert (f * f.inverse()) == PowerSeries.one(6)
    assert f.power(-1) == PowerSeries.from_coefficients([1] * 7, 6)
    assert f.power(2) == series_from_poly([1, -2, 1], 6)
    sq = f.power(Fraction(1, 2))
    assert sq * sq == f


def test_series_over_laurent_coefficients():
    f = series_from_poly(one_minus(V ** 2 * S), 4)
    g = f.inverse()
    assert [g[k] for k in range(5)] == [(V ** 2 * S) ** k for k in range(5)]


def test_truncation_is_minimum():
    a = PowerSeries.one(3)
    b = PowerSeries.one(5)
    assert (a * b).order == 3
    assert (a + b).order == 3
    assert a.agree_to(b) == 3
    assert PowerSeries.from_coefficients([1, 2], 3).agree_to(PowerSeries.from_coefficients([1, 3], 3)) == 0
