from fractions import Fraction

import numpy as np
import pytest

from sp4_building_zeta.localgroup import (GroupElem, NotSimilitudeError, J, J_MATRIX, diag, identity, s1, s2, tau,
                                          t_elem, similitude, valuation, is_member, same_coset, weyl_elements,
                                          weyl_left_multiply, weyl_lengths, random_k_element, random_similitude,
                                          siegel_unipotent, fraction_text)


# ---------------------------------------------------------
# Similitude factor
# ---------------------------------------------------------
def test_similitude_of_standard_elements():
    assert J(2).similitude == 1
    assert diag([1, 1, 2, 2], 2).similitude == 2
    assert diag([1, 1, 3, 3], 3).similitude == 3
    assert tau(3).similitude == -3
    assert t_elem(5).similitude == 5
    assert similitude(J_MATRIX) == 1
    assert similitude(tau(5).matrix) == -5
    with pytest.raises(TypeError):
        similitude(J_MATRIX, 5)


def test_non_similitude_rejected():
    with pytest.raises(NotSimilitudeError):
        diag([1, 1, 1, 2], 2)
    with pytest.raises(NotSimilitudeError):
        similitude(np.zeros((4, 4), dtype=object))
    assert issubclass(NotSimilitudeError, ValueError)


def test_similitude_is_multiplicative():
    rng = np.random.default_rng(17)
    for p in (2, 3, 5):
        for _ in range(10):
            g, h = random_similitude(p, rng), random_similitude(p, rng)
            assert (g @ h).similitude == g.similitude * h.similitude


def test_valuation():
    assert valuation(Fraction(12), 2) == 2
    assert valuation(Fraction(5, 9), 3) == -2
    assert valuation(7, 5) == 0
    assert valuation(0, 3) == float('inf')


# ---------------------------------------------------------
# Weyl group and distinguished elements
# ---------------------------------------------------------
def test_weyl_group():
    ws = weyl_elements(3)
    assert len({w.key for w in ws}) == 8
    assert s1(3) @ s1(3) == identity(3)
    assert s2(3) @ s2(3) == diag([1, -1, -1, 1], 3)
    assert weyl_lengths() == [0, 1, 1, 2, 2, 3, 3, 4]


def test_weyl_left_multiply():
    assert weyl_left_multiply(1, 0) == 1
    assert weyl_left_multiply(2, 0) == 2
    assert weyl_left_multiply(1, 2) == 3
    assert weyl_left_multiply(1, 1) == 0
    assert weyl_left_multiply(2, 3) == 6


def test_tau_squares_to_centre():
    for p in (2, 3, 5):
        assert tau(p) @ tau(p) == diag([p] * 4, p)
        assert not is_member(tau(p), 'G0')
        assert is_member(tau(p) @ tau(p), 'G0')


def test_inverse():
    rng = np.random.default_rng(4)
    for p in (2, 3):
        g = random_similitude(p, rng)
        assert g @ g.inverse() == identity(p)
        assert g.inverse().similitude == 1 / g.similitude


# ---------------------------------------------------------
# Membership
# ---------------------------------------------------------
def test_membership_examples():
    assert is_member(identity(2), 'I')
    assert is_member(s1(2), 'P1')
    assert not is_member(s1(2), 'I')
    assert not is_member(s1(2), 'P2')
    assert is_member(s2(2), 'P2')
    assert not is_member(tau(2), 'K')
    assert is_member(siegel_unipotent(1, 2, 3, 2), 'B')
    assert is_member(diag([3, 3, 3, 3], 3), 'Z')
    assert not is_member(diag([1, 1, 3, 3], 3), 'Z')
    assert is_member(identity(5), 'P02')


def test_unknown_subgroup():
    with pytest.raises(ValueError):
        is_member(identity(2), 'Q')


def test_k_closed_under_products_and_inverses():
    rng = np.random.default_rng(23)
    for p in (2, 3, 5):
        for _ in range(10):
            g, h = random_k_element(p, rng), random_k_element(p, rng)
            assert is_member(g, 'K')
            assert is_member(g @ h, 'K')
            assert is_member(g.inverse(), 'K')


def test_same_coset():
    p = 3
    assert same_coset(identity(p), s1(p), 'P1')
    assert not same_coset(identity(p), s1(p), 'I')
    assert same_coset(identity(p), diag([p] * 4, p), 'K')
    assert not same_coset(identity(p), diag([p] * 4, p), 'K', mod_center=False)
    assert not same_coset(identity(p), diag([1, 1, p, p], p), 'K')


def test_json_form():
    assert fraction_text(Fraction(-3, 4)) == '-3/4'
    out = J(2).to_json()
    assert len(out) == 16
    assert out[3] == '1'
    assert GroupElem(J_MATRIX * 2, 2).similitude == 4
