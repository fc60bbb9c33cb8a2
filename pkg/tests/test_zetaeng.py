import cmath
import json
from fractions import Fraction

import numpy as np
import pytest

from sp4_building_zeta.exactring import PowerSeries
from sp4_building_zeta.zetaeng import (MAX_ORDER, ComplexData, ComplexDataError, InconsistentCountsError, Root,
                                       int_matrix, charpoly_int, det_poly, det_series, trace_powers,
                                       count_closed_walks, block_companion, quartic_det_poly, cycle_zeta_series,
                                       theorem41, corollary43, exponent_identity, verify_identity_symbolic,
                                       spectrum_roots, merge_spectra, trivial_zeros, ramanujan_classify,
                                       classify_complex, numeric_spectra, load_spectra)


def random_matrices(count=200, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, 7))
        out.append(int_matrix(rng.integers(0, 4, size=(n, n)).tolist()))
    return out


def zero_complex(q=2):
    return ComplexData.from_dict({'q': q, 'gamma_det_in_4Z': True,
                                  'counts': {k: 0 for k in ('N_p', 'N_s', 'N_ns', 'N1', 'N2', 'N_chambers')},
                                  'matrices': {k: [] for k in ('LP1', 'LP2', 'LI', 'A1', 'A2')}})


def scalar_complex(q=2, n_p=1):
    ''' Correct sizes and row sums, but no geometry behind it '''
    deg = q ** 3 + q ** 2 + q + 1
    counts = {'N_p': n_p, 'N_s': n_p, 'N_ns': (q * q + 1) * n_p, 'N1': 2 * n_p * deg, 'N2': 2 * n_p * deg,
              'N_chambers': 2 * n_p * deg * (q + 1)}
    scalars = {'LP1': (q ** 3, counts['N1']), 'LP2': (q ** 4, counts['N2']), 'LI': (q ** 2, counts['N_chambers']),
               'A1': (deg, 2 * n_p), 'A2': (q ** 4 + q ** 3 + 2 * q ** 2 + q + 1, 2 * n_p)}
    matrices = {k: (c * np.identity(n, dtype=int)).tolist() for k, (c, n) in scalars.items()}
    return {'q': q, 'counts': counts, 'matrices': matrices, 'gamma_det_in_4Z': True}


# ---------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------
def test_int_matrix_rejects_bad_entries():
    with pytest.raises(ComplexDataError):
        int_matrix([[1, 2]])
    with pytest.raises(ComplexDataError):
        int_matrix([[-1]])
    with pytest.raises(ComplexDataError):
        int_matrix([[0.5]])
    assert int_matrix([]).shape == (0, 0)


def test_charpoly_and_determinants():
    m = int_matrix([[2, 1], [1, 2]])
    assert charpoly_int(m) == [3, -4, 1]
    assert det_poly(m) == [1, -4, 3]
    assert det_poly(m, 2) == [1, 0, -4, 0, 3]
    assert list(det_series(m, 3).coefficients) == [1, -4, 3, 0]
    assert charpoly_int(int_matrix([])) == [1]


def test_trace_powers_match_path_enumeration():
    m = int_matrix([[0, 1, 0], [0, 0, 2], [1, 0, 0]])
    assert trace_powers(m, 6) == [0, 0, 6, 0, 0, 12]
    assert count_closed_walks(m, 6) == [0, 0, 6, 0, 0, 12]


def test_quartic_via_block_companion():
    a1, a2 = int_matrix([[15]]), int_matrix([[35]])
    # the trivial representation at q = 2: (1-u)(1-2u)(1-4u)(1-8u)
    assert quartic_det_poly(a1, a2, 2) == [1, -15, 70, -120, 64]
    assert block_companion(a1, a2, 2).shape == (4, 4)
    assert block_companion(int_matrix([]), int_matrix([]), 2).shape == (0, 0)


# ---------------------------------------------------------
# Cycle series
# ---------------------------------------------------------
def test_single_loop():
    z = cycle_zeta_series([[1]], 10)
    assert all(c == 1 for c in z.coefficients)


def test_two_cycle():
    z = cycle_zeta_series([[0, 1], [1, 0]], 10)
    assert list(z.coefficients) == [1, 0] * 5 + [1]


def test_doubled_length():
    z = cycle_zeta_series([[3]], 8, step=2)
    assert list(z.coefficients) == [1, 0, 3, 0, 9, 0, 27, 0, 81]


def test_exp_trace_is_inverse_determinant():
    one = PowerSeries.one(12)
    for m in random_matrices():
        assert cycle_zeta_series(m, 12) * det_series(m, 12) == one


def test_path_enumeration_oracle():
    for m in random_matrices()[:20]:
        assert count_closed_walks(m, 8) == trace_powers(m, 8)


def test_order_limit():
    with pytest.raises(ValueError):
        cycle_zeta_series([[1]], MAX_ORDER + 1)
    with pytest.raises(ComplexDataError):
        cycle_zeta_series([[1, 0]], 4)


# ---------------------------------------------------------
# Cycle closed form
# ---------------------------------------------------------
def test_theorem41_no_cycles():
    data = ComplexData.from_dict({'q': 2, 'matrices': {'LP1': [[0, 0], [0, 0]], 'LP2': [[0]]}})
    r = theorem41(data, 8)
    assert r.passed
    assert r.lhs == PowerSeries.one(8)


def test_theorem41_single_orbit():
    data = ComplexData.from_dict({'q': 3, 'matrices': {'LP1': [[5]], 'LP2': [[0]]}})
    r = theorem41(data, 6)
    assert list(r.factors['Z1'].coefficients) == [5 ** n for n in range(7)]
    assert r.passed


def test_theorem41_random_data():
    ms = random_matrices(20, seed=3)
    for a, b in zip(ms[::2], ms[1::2]):
        data = ComplexData(2, matrices={'LP1': a, 'LP2': b})
        r = theorem41(data, 12)
        assert r.passed
        assert r.checks == {'Z1': True, 'Z2': True}
        assert r.lhs == r.factors['Z1'] * r.factors['Z2']


def test_theorem41_json():
    data = ComplexData.from_dict({'q': 2, 'matrices': {'LP1': [[1, 1], [1, 0]], 'LP2': [[1]]}})
    out = theorem41(data, 5).to_json()
    assert out['pass'] and out['match_order'] == 5
    assert out['lhs_coeffs'] == out['rhs_coeffs']
    assert out['lhs_coeffs'][:3] == ['1', '1', '3']


def test_theorem41_missing_matrix():
    with pytest.raises(ComplexDataError):
        theorem41(ComplexData.from_dict({'q': 2, 'matrices': {'LP1': [[1]]}}), 4)


# ---------------------------------------------------------
# Second closed form
# ---------------------------------------------------------
def test_corollary43_zero_complex():
    r = corollary43(zero_complex(), 10)
    assert r.passed
    assert r.lhs == PowerSeries.one(10) and r.rhs == PowerSeries.one(10)


def test_corollary43_needs_the_determinant_flag():
    data = zero_complex()
    data.gamma_det_in_4Z = False
    with pytest.raises(InconsistentCountsError):
        corollary43(data, 4)


def test_corollary43_rejects_inconsistent_counts():
    d = scalar_complex()
    d['counts']['N_ns'] += 1
    with pytest.raises(InconsistentCountsError):
        corollary43(ComplexData.from_dict(d), 4)


def test_corollary43_rejects_bad_row_sums():
    d = scalar_complex()
    d['matrices']['A1'][0][0] += 1
    with pytest.raises(ComplexDataError):
        corollary43(ComplexData.from_dict(d), 4)


def test_corollary43_reports_a_mismatch():
    data = ComplexData.from_dict(scalar_complex())
    assert data.euler_characteristic() == 7
    r = corollary43(data, 3)
    assert not r.passed
    assert r.match_order == 0
    assert r.factor_data['chi'] == '7' and r.factor_data['q2_exponent'] == '-3'


def test_size_mismatch():
    d = scalar_complex()
    d['matrices']['LP2'] = [[16]]
    with pytest.raises(ComplexDataError):
        ComplexData.from_dict(d).validate(row_sums=False)


def test_complex_data_from_json(tmp_path):
    path = tmp_path / 'zero.json'
    path.write_text(json.dumps(zero_complex().to_json()))
    data = ComplexData.from_json(str(path))
    assert data.gamma_det_in_4Z and data.special_vertex_count() == 0
    bad = tmp_path / 'bad.json'
    bad.write_text('{"q": 2,')
    with pytest.raises(ComplexDataError):
        ComplexData.from_json(str(bad))
    with pytest.raises(ComplexDataError):
        ComplexData.from_dict({'q': 6}).validate()


@pytest.mark.parametrize('q', [2, 3, 4, 5, 7, 8, 9])
def test_exponent_identity(q):
    assert all(exponent_identity(n_p, q) for n_p in range(50))


def test_symbolic_identity():
    r = verify_identity_symbolic()
    assert r.passed
    assert r.chi_exponent == 'N0 - N1 + N2'
    out = r.to_json()
    assert {row['type']: row['pair_exponents'] for row in out['rows']}['Vd'] == [0, 2]
    assert out['checks']['closed_form']


# ---------------------------------------------------------
# Ramanujan classification
# ---------------------------------------------------------
def tempered_type_one(q):
    return spectrum_roots('I', None, q, x1=cmath.exp(0.7j), s=cmath.exp(-1.3j))


@pytest.mark.parametrize('q', [2, 3, 5])
def test_tempered_type_one_is_ramanujan(q):
    r = ramanujan_classify(merge_spectra(tempered_type_one(q), trivial_zeros(q)), q)
    assert r.ramanujan and r.consistent
    assert all(r.operators[op].passed for op in ('A', 'LP1', 'LP2', 'LI'))
    quartic = r.operators['A'].nontrivial
    assert len(quartic) == 4 and all(x['exponent'] == '-3/2' for x in quartic)


def test_nontempered_type_iib_is_flagged():
    q = 3
    r = ramanujan_classify(spectrum_roots('IIb', 1, q, x1=cmath.exp(0.4j)), q)
    assert not r.ramanujan and r.consistent
    outside = {x['exponent'] for x in r.operators['A'].roots if x['status'] == 'outside'}
    assert outside == {'-1', '-2'}
    lp1 = [x for x in r.operators['LP1'].roots if x['status'] == 'outside']
    assert [x['exponent'] for x in lp1] == ['-2']


def test_trivial_zeros_never_flagged():
    q = 2
    r = ramanujan_classify(trivial_zeros(q), q)
    assert r.passed
    exps = sorted(Fraction(x['exponent']) for x in r.operators['A'].roots if x['status'] == 'trivial')
    assert exps == sorted([Fraction(0), Fraction(-1), Fraction(-2), Fraction(-3)] * 2)


def test_untagged_trivial_values_are_removed_once_per_sign():
    q = 2
    numeric = {op: [complex(r.value) for r in roots] for op, roots in trivial_zeros(q).items()}
    r = ramanujan_classify(numeric, q)
    assert r.passed
    assert all(x['status'] == 'trivial' for v in r.operators.values() for x in v.roots)
    # a third copy of the trivial LP2 zero q^-4 is not trivial
    numeric['LP2'].append(complex(q ** -4))
    r = ramanujan_classify(numeric, q)
    assert not r.operators['LP2'].passed


def test_scale_consistency():
    q = 3
    spectra = merge_spectra(tempered_type_one(q), spectrum_roots('IIb', -1, q, x1=1))
    base = ramanujan_classify(spectra, q)
    unit = cmath.exp(2.1j)
    rotated = {op: [Root(r.value * unit, r.source, r.exponent) for r in roots] for op, roots in spectra.items()}
    turned = ramanujan_classify(rotated, q)
    for op in base.operators:
        assert [x['status'] for x in base.operators[op].roots] == [x['status'] for x in turned.operators[op].roots]


def test_numeric_boundary_and_tolerance():
    q = 2
    r = ramanujan_classify({'LP2': [q ** -1.0, q ** -1.5, q ** -2.5]}, q)
    statuses = [x['status'] for x in r.operators['LP2'].roots]
    assert statuses == ['boundary', 'inside', 'outside']
    assert r.operators['LP2'].roots[2]['distance'] == pytest.approx(0.5)
    r = ramanujan_classify({'A': [q ** -1.5 * (1 + 1e-12)]}, q, tol=1e-9)
    assert r.ramanujan


def test_unknown_operator():
    with pytest.raises(ValueError):
        ramanujan_classify({'LE': [1]}, 2)
    with pytest.raises(ValueError):
        spectrum_roots('IIb', None, 2)


def test_classify_complex_numeric():
    d = scalar_complex(q=2)
    data = ComplexData.from_dict(d)
    spectra = numeric_spectra(data)
    assert len(spectra['A']) == 8 and len(spectra['LP1']) == 30
    r = classify_complex(data)
    # every eigenvalue is the trivial one, but only two copies per value are trivial
    assert not r.ramanujan
    assert sum(x['status'] == 'trivial' for x in r.operators['LP1'].roots) == 1


def test_load_spectra():
    spectra, q = load_spectra({'q': 3, 'spectra': {'A': [[0.19245008972987526, 0.0]],
                                                   'LI': [{'re': 1.0, 'im': 0.0, 'source': 'IVa'}]}})
    assert q == 3 and spectra['LI'][0].source == 'IVa'
    with pytest.raises(ComplexDataError):
        load_spectra({'q': 3})
    with pytest.raises(ComplexDataError):
        load_spectra({'q': 3, 'spectra': {'A': [{'re': 'x'}]}})


def test_load_spectra_rejects_bad_q():
    with pytest.raises(ComplexDataError):
        load_spectra({'q': 6, 'spectra': {'A': [[0.1, 0.0]]}})
