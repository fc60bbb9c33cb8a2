### Zeta functions of finite quotients: series, determinants, the two closed forms and Ramanujan tests

'''
Finite complexes enter only through ComplexData: the adjacency matrices of
L_P1, L_P2, L_I, A1, A2 on a quotient together with its cell counts. All
series arithmetic is exact (Fractions); numeric spectra use scipy.
'''

import cmath
import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional

import numpy as np
import scipy.linalg
import sympy

from sp4_building_zeta.exactring import PowerSeries, series_exp, upoly_format
from sp4_building_zeta.localgroup import fraction_text
from sp4_building_zeta.reptheory import (TYPE_TAGS, rep_type, expected_spectra, ledger_exponents, multiplicity_ledger,
                                         multiplicity_symbols, m_expression)

logger = logging.getLogger(__name__)

MAX_ORDER = 24
DEFAULT_TOL = 1e-9
MATRIX_KEYS = ('LP1', 'LP2', 'LI', 'A1', 'A2')
COUNT_KEYS = ('N_p', 'N_s', 'N_ns', 'N1', 'N2', 'N_chambers')


class ComplexDataError(ValueError):
    pass


class InconsistentCountsError(ValueError):
    pass


def _check_order(order):
    if not isinstance(order, (int, np.integer)) or order < 0 or order > MAX_ORDER:
        raise ValueError('Truncation order must be an integer in [0, %d], got %s' % (MAX_ORDER, str(order)))
    return int(order)


def operator_degrees(q):
    ''' Row sums of each operator on any quotient '''
    return {'LP1': q ** 3, 'LP2': q ** 4, 'LI': q ** 2,
            'A1': q ** 3 + q ** 2 + q + 1, 'A2': q ** 4 + q ** 3 + 2 * q ** 2 + q + 1}


### Integer matrices

def int_matrix(rows, name='matrix'):
    ''' Square object array of Python ints, rejecting negative or non-integral entries '''
    if isinstance(rows, np.ndarray):
        rows = rows.tolist()
    if not isinstance(rows, (list, tuple)):
        raise ComplexDataError('%s must be a list of rows, got %s' % (name, type(rows).__name__))
    n = len(rows)
    m = np.zeros((n, n), dtype=object)
    for i, row in enumerate(rows):
        if not isinstance(row, (list, tuple)):
            raise ComplexDataError('%s row %d must be a list, got %s' % (name, i, type(row).__name__))
        if len(row) != n:
            raise ComplexDataError('%s must be square; row %d has %d entries, expected %d' % (name, i, len(row), n))
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, (int, float, np.integer)) or int(x) != x:
                raise ComplexDataError('%s[%d][%d] = %s is not an integer' % (name, i, j, str(x)))
            if x < 0:
                raise ComplexDataError('%s[%d][%d] = %s is negative' % (name, i, j, str(x)))
            m[i, j] = int(x)
    return m


def _det_coefficients(m, k_max):
    ''' Coefficients of u^0..u^k_max in det(I - m u), by the Faddeev-LeVerrier recursion '''
    n = m.shape[0]
    coeffs = [1]
    ident = np.identity(n, dtype=object)
    am = np.zeros((n, n), dtype=object)
    for k in range(1, min(k_max, n) + 1):
        am = m.dot(am + ident * coeffs[k - 1])
        c = Fraction(-int(np.trace(am)), k)
        assert c.denominator == 1, 'Faddeev-LeVerrier produced a non-integral coefficient'
        coeffs.append(int(c))
    return coeffs


def _spread(coeffs, step):
    out = []
    for i, c in enumerate(coeffs):
        out += [c] + ([0] * (step - 1) if i < len(coeffs) - 1 else [])
    return out


def charpoly_int(m):
    ''' Ascending integer coefficients of det(u I - m) '''
    return list(reversed(_det_coefficients(m, m.shape[0])))


def det_poly(m, step=1):
    ''' Ascending coefficients of det(I - m u^step) '''
    return _spread(_det_coefficients(m, m.shape[0]), step)


def det_series(m, order, step=1):
    ''' det(I - m u^step) modulo u^(order+1); only the needed coefficients are computed '''
    order = _check_order(order)
    return PowerSeries.from_coefficients(_spread(_det_coefficients(m, order // step), step), order)


def trace_powers(m, n):
    ''' [tr(m), tr(m^2), ..., tr(m^n)] '''
    out = []
    power = np.identity(m.shape[0], dtype=object)
    for _ in range(n):
        power = power.dot(m)
        out.append(int(np.trace(power)) if m.shape[0] else 0)
    return out


def count_closed_walks(m, max_length):
    '''
    Weighted closed walks of each length 1..max_length by direct path
    enumeration; entry n-1 equals tr(m^n).
    '''
    size = m.shape[0]
    succ = [[(j, int(m[i, j])) for j in range(size) if m[i, j]] for i in range(size)]
    counts = [0] * max_length
    for start in range(size):
        stack = [(start, 0, 1)]
        while stack:
            node, depth, weight = stack.pop()
            if depth and node == start:
                counts[depth - 1] += weight
            if depth == max_length:
                continue
            for j, w in succ[node]:
                stack.append((j, depth + 1, weight * w))
    return counts


def block_companion(a1, a2, q):
    '''
    Companion matrix C of lambda^4 - A1 lambda^3 + q A2 lambda^2 - q^3 A1 lambda + q^6,
    so that det(I - C u) = det(I - A1 u + q A2 u^2 - q^3 A1 u^3 + q^6 u^4).
    '''
    n = a1.shape[0]
    ident = np.identity(n, dtype=object)
    zero = np.zeros((n, n), dtype=object)
    rows = [[zero, ident, zero, zero],
            [zero, zero, ident, zero],
            [zero, zero, zero, ident],
            [-q ** 6 * ident, q ** 3 * a1, -q * a2, a1]]
    return np.block(rows) if n else np.zeros((0, 0), dtype=object)


### Cycle zeta series

def cycle_zeta_series(m, order, step=1):
    '''
    exp(sum_n tr(m^n) / n * u^(step n)) truncated at u^order. step=2 counts
    each closed walk of m as a cycle of doubled length.

    :param m: square nonnegative integer matrix (anything int_matrix accepts)
    :param order: truncation order, at most MAX_ORDER
    :param step: length of one application of m
    '''
    order = _check_order(order)
    m = int_matrix(m, 'L')
    log = [Fraction(0)] * (order + 1)
    traces = trace_powers(m, order // step)
    for n, t in enumerate(traces, start=1):
        log[n * step] = Fraction(t, n)
    return series_exp(PowerSeries.from_coefficients(log, order))


def _binomial_series(c, k, e, order):
    ''' (1 - c u^k)^e for an integer e >= 0 '''
    coeffs = [0] * (order + 1)
    for j in range(e + 1):
        if j * k > order:
            break
        coeffs[j * k] = math.comb(e, j) * (-c) ** j
    return PowerSeries.from_coefficients(coeffs, order)


### Complex data

@dataclass
class ComplexData:
    '''
    Adjacency data of a finite quotient. counts holds N_p, N_s, N_ns (primitive,
    type-2 special and non-special vertices), N1 (directed type-1 edges), N2
    (type-2 edges) and N_chambers (directed chambers).
    '''
    q: int
    counts: Dict[str, int] = field(default_factory=dict)
    matrices: Dict[str, np.ndarray] = field(default_factory=dict)
    gamma_det_in_4Z: bool = False

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict) or 'q' not in d:
            raise ComplexDataError('Complex data needs a mapping with at least the key "q"')
        for key in ('matrices', 'counts'):
            if not isinstance(d.get(key, {}), dict):
                raise ComplexDataError('"%s" must be a mapping, got %s' % (key, type(d[key]).__name__))
        unknown = set(d.get('matrices', {})) - set(MATRIX_KEYS)
        if unknown:
            raise ComplexDataError('Unknown matrices %s. Use %s' % (', '.join(sorted(unknown)), ', '.join(MATRIX_KEYS)))
        unknown = set(d.get('counts', {})) - set(COUNT_KEYS)
        if unknown:
            raise ComplexDataError('Unknown counts %s. Use %s' % (', '.join(sorted(unknown)), ', '.join(COUNT_KEYS)))
        matrices = {k: int_matrix(v, k) for k, v in d.get('matrices', {}).items()}
        counts = {}
        for k, v in d.get('counts', {}).items():
            if isinstance(v, bool) or not isinstance(v, int) or v < 0:
                raise ComplexDataError('Count %s must be a nonnegative integer, got %s' % (k, str(v)))
            counts[k] = v
        return cls(d['q'], counts, matrices, bool(d.get('gamma_det_in_4Z', False)))

    @classmethod
    def from_json(cls, path):
        with open(path, 'r') as f:
            try:
                d = json.load(f)
            except json.JSONDecodeError as err:
                raise ComplexDataError('%s is not valid JSON: %s' % (str(path), str(err)))
        return cls.from_dict(d)

    def to_json(self):
        return {'q': self.q, 'counts': dict(self.counts), 'gamma_det_in_4Z': self.gamma_det_in_4Z,
                'matrices': {k: m.tolist() for k, m in self.matrices.items()}}

    def matrix(self, key):
        if key not in self.matrices:
            raise ComplexDataError('Matrix %s is required but missing' % key)
        return self.matrices[key]

    def has_counts(self):
        return all(k in self.counts for k in COUNT_KEYS)

    def special_vertex_count(self):
        return self.counts['N_p'] + self.counts['N_s']

    def euler_characteristic(self):
        ''' N0 - N1 + N2 over undirected cells '''
        c = self.counts
        n0 = c['N_p'] + c['N_s'] + c['N_ns']
        n1 = c['N1'] // 2 + c['N2']
        n2 = c['N_chambers'] // 2
        return n0 - n1 + n2

    def validate(self, row_sums=True):
        '''
        Checks shapes against the counts and, optionally, the row sums of every
        operator. Raises ComplexDataError.
        '''
        q = self.q
        if isinstance(q, bool) or not isinstance(q, int) or q < 2 or len(sympy.factorint(q)) != 1:
            raise ComplexDataError('q must be a prime power, got %s' % str(q))
        if self.has_counts():
            sizes = {'LP1': self.counts['N1'], 'LP2': self.counts['N2'], 'LI': self.counts['N_chambers'],
                     'A1': self.special_vertex_count(), 'A2': self.special_vertex_count()}
            for k, m in self.matrices.items():
                if m.shape[0] != sizes[k]:
                    raise ComplexDataError('%s has size %d but the counts give %d' % (k, m.shape[0], sizes[k]))
        if 'A1' in self.matrices and 'A2' in self.matrices and self.matrices['A1'].shape != self.matrices['A2'].shape:
            raise ComplexDataError('A1 and A2 must act on the same space')
        if row_sums:
            degrees = operator_degrees(q)
            for k, m in self.matrices.items():
                for i in range(m.shape[0]):
                    total = int(sum(m[i, :]))
                    if total != degrees[k]:
                        raise ComplexDataError('Row %d of %s sums to %d, expected %d' % (i, k, total, degrees[k]))
        return self

    def check_counts(self):
        '''
        Cell-count ratios forced by the local structure, and the declared
        determinant flag. Raises InconsistentCountsError.
        '''
        if not self.has_counts():
            raise InconsistentCountsError('Counts %s are required' % ', '.join(COUNT_KEYS))
        if not self.gamma_det_in_4Z:
            raise InconsistentCountsError('The closed form needs gamma_det_in_4Z = true')
        q, c = self.q, self.counts
        n_p = c['N_p']
        deg = q ** 3 + q ** 2 + q + 1
        expected = {'N_s': n_p, 'N_ns': (q ** 2 + 1) * n_p, 'N1': 2 * n_p * deg, 'N2': 2 * n_p * deg,
                    'N_chambers': 2 * n_p * deg * (q + 1)}
        for k, v in expected.items():
            if c[k] != v:
                raise InconsistentCountsError('%s = %d but N_p = %d and q = %d force %d' % (k, c[k], n_p, q, v))
        return self


### Closed forms

@dataclass
class ZetaReport:
    name: str
    lhs: PowerSeries
    rhs: PowerSeries
    order: int
    factor_data: Dict[str, str] = field(default_factory=dict)
    factors: Dict[str, PowerSeries] = field(default_factory=dict)
    checks: Dict[str, bool] = field(default_factory=dict)

    @property
    def match_order(self):
        return self.lhs.agree_to(self.rhs)

    @property
    def passed(self):
        return self.match_order == self.order and all(self.checks.values())

    def to_json(self):
        return {'name': self.name, 'order': self.order, 'match_order': self.match_order,
                'lhs_coeffs': [fraction_text(c) for c in self.lhs.coefficients],
                'rhs_coeffs': [fraction_text(c) for c in self.rhs.coefficients],
                'factors': {k: [fraction_text(c) for c in s.coefficients] for k, s in self.factors.items()},
                'factor_data': self.factor_data, 'checks': self.checks, 'pass': self.passed}


def theorem41(data, order=12):
    '''
    Z = Z1 Z2 from tailless cycle counts against 1 / (det(I - L_P1 u) det(I - L_P2 u^2)).
    '''
    order = _check_order(order)
    data.validate(row_sums=False)
    lp1, lp2 = data.matrix('LP1'), data.matrix('LP2')
    z1 = cycle_zeta_series(lp1, order)
    z2 = cycle_zeta_series(lp2, order, step=2)
    d1, d2 = det_series(lp1, order), det_series(lp2, order, step=2)
    report = ZetaReport('theorem41', z1 * z2, (d1 * d2).inverse(), order,
                        factor_data={'det(I - L_P1 u)': _series_text(d1), 'det(I - L_P2 u^2)': _series_text(d2)},
                        factors={'Z1': z1, 'Z2': z2},
                        checks={'Z1': z1 == d1.inverse(), 'Z2': z2 == d2.inverse()})
    _log_report(report)
    return report


def quartic_det_poly(a1, a2, q):
    ''' Ascending coefficients of det(I - A1 u + q A2 u^2 - q^3 A1 u^3 + q^6 u^4) '''
    return det_poly(block_companion(a1, a2, q))


def corollary43(data, order=12):
    '''
    (1-u^2)^chi (1-q^2u^2)^(-(q^2-1)N_p) / det(quartic) against
    det(I - L_I u) / (det(I - L_P1 u) det(I - L_P2 u^2)), both sides
    multiplied out so that only polynomials are expanded.
    '''
    order = _check_order(order)
    data.validate(row_sums=True)
    data.check_counts()
    for k in MATRIX_KEYS:
        data.matrix(k)
    q = data.q
    chi = data.euler_characteristic()
    n_p = data.counts['N_p']
    a, b = chi, -(q ** 2 - 1) * n_p
    quartic = det_series(block_companion(data.matrices['A1'], data.matrices['A2'], q), order)
    lhs_num = _binomial_series(1, 2, max(a, 0), order) * _binomial_series(q * q, 2, max(b, 0), order)
    lhs_den = (quartic * _binomial_series(1, 2, max(-a, 0), order)
               * _binomial_series(q * q, 2, max(-b, 0), order))
    rhs_num = det_series(data.matrices['LI'], order)
    rhs_den = det_series(data.matrices['LP1'], order) * det_series(data.matrices['LP2'], order, step=2)
    report = ZetaReport('corollary43', lhs_num * rhs_den, rhs_num * lhs_den, order,
                        factor_data={'chi': str(chi), 'q2_exponent': str(b),
                                     'quartic': _series_text(quartic), 'det(I - L_I u)': _series_text(rhs_num)},
                        checks={'exponent_identity': exponent_identity(n_p, q)})
    _log_report(report)
    return report


def _series_text(series):
    ''' A truncated series as polynomial text, with its order '''
    return '%s + O(u^%d)' % (upoly_format(list(series.coefficients)), series.order + 1)


def _log_report(report):
    if report.passed:
        logger.info('%s agrees to order %d', report.name, report.order)
    else:
        logger.warning('%s disagrees at u^%d (checks %s)', report.name, report.match_order + 1, report.checks)


def exponent_identity(n_p, q):
    ''' 2 N_p - N_ns = -(q^2 - 1) N_p once N_ns = (q^2 + 1) N_p '''
    n_ns = (q * q + 1) * n_p
    return 2 * n_p - n_ns == -(q * q - 1) * n_p


### Symbolic closed form from the representation ledger

@dataclass
class IdentityReport:
    rows: list
    chi_exponent: str
    q2_exponent: str
    checks: Dict[str, bool]

    @property
    def passed(self):
        return all(r['pair_exponents'] is not None for r in self.rows) and all(self.checks.values())

    def to_json(self):
        return {'rows': self.rows, 'chi_exponent': self.chi_exponent, 'q2_exponent': self.q2_exponent,
                'checks': self.checks, 'passed': self.passed}


def verify_identity_symbolic(exponent_grid=None):
    '''
    Assembles R(u) = prod over twist pairs of (1-u^2)^a (1-q^2u^2)^b with m_t / 2
    pairs of each type, then substitutes the Steinberg multiplicity and m.

    :param exponent_grid: (N_p, q) pairs for the integer exponent identity
    '''
    ledger = multiplicity_ledger()
    mult = multiplicity_symbols()
    n0, n1, n2, n_p, q = sympy.symbols('N0 N1 N2 N_p q')
    rows, ea, eb = [], 0, 0
    for t in TYPE_TAGS:
        exps = ledger_exponents(t)
        rows.append({'type': t, 'pair_exponents': list(exps) if exps is not None else None,
                     'multiplicity': str(mult[t])})
        if exps is None:
            logger.warning('type %s has no (1-u^2)^a (1-q^2u^2)^b pair product', t)
            continue
        ea += sympy.Rational(exps[0], 2) * mult[t]
        eb += sympy.Rational(exps[1], 2) * mult[t]
    if not ledger.steinberg_multiplicity:
        return IdentityReport(rows, '', '', {'ledger': False})
    subs = {mult['IVa']: 2 * sympy.sympify(ledger.steinberg_multiplicity), mult['IVd']: 2}
    ea = sympy.expand(sympy.sympify(ea).subs(subs))
    eb = sympy.expand(sympy.sympify(eb).subs(subs))
    m_value = sympy.sympify(ledger.m_value)
    grid = exponent_grid or list(itertools.product(range(0, 11), (2, 3, 4, 5, 7, 8, 9)))
    checks = {'ledger': ledger.passed,
              'chi_exponent': sympy.expand(ea - (n0 - n1 + n2)) == 0,
              'm_exponent': sympy.expand(eb - m_expression(mult) / 2) == 0,
              'closed_form': sympy.expand(m_value / 2 + (q ** 2 - 1) * n_p) == 0,
              'exponent_identity': all(exponent_identity(a, b) for a, b in grid)}
    report = IdentityReport(rows, str(ea), str(sympy.factor(m_value / 2)), checks)
    logger.info('symbolic closed form: (1-u^2)^(%s) (1-q^2u^2)^(%s), %s', report.chi_exponent, report.q2_exponent,
                'PASS' if report.passed else 'FAIL')
    return report


### Ramanujan classification

# closed bands for log_q |zero| of the nontrivial zeros; (a, a) is a single value
BANDS = {
    'A': ((Fraction(-3, 2), Fraction(-3, 2)),),
    'LP1': ((Fraction(-3, 2), Fraction(-3, 2)), (Fraction(-1), Fraction(-1))),
    'LP2': ((Fraction(-2), Fraction(-1)),),
    'LI': ((Fraction(0), Fraction(0)), (Fraction(-1), Fraction(-1, 2))),
}
_STATUS_RANK = {'inside': 0, 'boundary': 1, 'outside': 2}


@dataclass(frozen=True)
class Root:
    '''
    A zero of one of the determinants. exponent, when known, is the exact
    log_q of its modulus; source is the representation type it comes from.
    '''
    value: complex
    source: Optional[str] = None
    exponent: Optional[Fraction] = None

    def log_modulus(self, q):
        if self.exponent is not None:
            return self.exponent
        return math.log(abs(self.value), q)

    def to_json(self):
        z = complex(self.value)
        return {'re': z.real, 'im': z.imag, 'source': self.source,
                'exponent': fraction_text(self.exponent) if self.exponent is not None else None}


def _as_root(x):
    if isinstance(x, Root):
        return x
    if isinstance(x, dict):
        exponent = Fraction(x['exponent']) if x.get('exponent') is not None else None
        return Root(complex(x.get('re', 0), x.get('im', 0)), x.get('source'), exponent)
    if isinstance(x, (list, tuple)):
        return Root(complex(x[0], x[1]))
    return Root(complex(x))


def _on_unit_circle(x):
    return abs(abs(complex(x)) - 1) <= 1e-12


def _exact_exponent(r, degree, x1, s):
    if not r.is_monomial():
        return None
    (e_v, e_x1, e_s), c = r.leading_term()
    if abs(c) != 1:
        return None
    if (e_x1 and not _on_unit_circle(x1)) or (e_s and not _on_unit_circle(s)):
        return None
    return Fraction(-e_v, 2 * degree)


def spectrum_roots(tag, sign=None, q=2, x1=1, s=1):
    '''
    Zeros of det(I - L u) (and of the quartic) contributed by one
    representation, from its tabulated eigenvalues at v = sqrt(q).

    :param x1: value of the inducing character variable x1
    :param s: value of the inducing character variable s
    '''
    if sign not in rep_type(tag).signs:
        raise ValueError('Type %s takes sign in %s, got %s' % (tag, str(rep_type(tag).signs), str(sign)))
    v = math.sqrt(q)
    out = {}
    for op, factors in expected_spectra(tag, sign).items():
        roots = []
        for degree, r in factors:
            value = complex(r.evaluate(v=v, x1=x1, s=s))
            exponent = _exact_exponent(r, degree, x1, s)
            eigen = [value] if degree == 1 else [cmath.sqrt(value), -cmath.sqrt(value)]
            roots += [Root(1 / e, tag, exponent) for e in eigen]
        out[op] = roots
    return out


def merge_spectra(*spectra):
    out = {op: [] for op in BANDS}
    for spec in spectra:
        for op, roots in spec.items():
            out[op] = out[op] + list(roots)
    return out


def trivial_zeros(q):
    ''' Per operator, the zeros contributed by the two one-dimensional representations '''
    return merge_spectra(*(spectrum_roots('IVd', sigma, q) for sigma in (1, -1)))


def _locate(alpha, bands, tol, exact):
    best = 'outside'
    for lo, hi in bands:
        if exact:
            if lo == hi:
                status = 'inside' if alpha == lo else 'outside'
            elif lo < alpha < hi:
                status = 'inside'
            elif alpha in (lo, hi):
                status = 'boundary'
            else:
                status = 'outside'
        else:
            lo, hi = float(lo), float(hi)
            if lo == hi:
                status = 'inside' if abs(alpha - lo) <= tol else 'outside'
            elif lo + tol < alpha < hi - tol:
                status = 'inside'
            elif abs(alpha - lo) <= tol or abs(alpha - hi) <= tol:
                status = 'boundary'
            else:
                status = 'outside'
        if _STATUS_RANK[status] < _STATUS_RANK[best]:
            best = status
    return best


def _band_distance(alpha, bands):
    alpha = float(alpha)
    return min(max(float(lo) - alpha, alpha - float(hi), 0.0) for lo, hi in bands)


@dataclass
class OperatorVerdict:
    operator: str
    roots: list
    unmatched_trivial: int = 0

    @property
    def nontrivial(self):
        return [r for r in self.roots if r['status'] != 'trivial']

    @property
    def passed(self):
        return all(r['status'] != 'outside' for r in self.roots)

    def to_json(self):
        return {'operator': self.operator, 'passed': self.passed, 'roots': self.roots,
                'trivial': sum(r['status'] == 'trivial' for r in self.roots),
                'boundary': sum(r['status'] == 'boundary' for r in self.roots),
                'outside': sum(r['status'] == 'outside' for r in self.roots),
                'unmatched_trivial': self.unmatched_trivial}


@dataclass
class RamanujanReport:
    q: int
    tol: float
    operators: Dict[str, OperatorVerdict]

    @property
    def ramanujan(self):
        return all(v.passed for v in self.operators.values())

    @property
    def consistent(self):
        ''' The four criteria are equivalent, so they must all agree '''
        return len({v.passed for v in self.operators.values()}) <= 1

    @property
    def passed(self):
        return self.ramanujan and self.consistent

    def to_json(self):
        return {'q': self.q, 'tol': self.tol, 'ramanujan': self.ramanujan, 'consistent': self.consistent,
                'operators': {op: v.to_json() for op, v in self.operators.items()}, 'passed': self.passed}


def _mark_trivial(roots, trivial, tol):
    ''' Indices of untagged roots matching one copy of each trivial value, and how many found no match '''
    taken, missing = set(), 0
    for t in trivial:
        target = complex(t.value)
        best = None
        for i, r in enumerate(roots):
            if i in taken or r.source is not None:
                continue
            d = abs(complex(r.value) - target)
            if d <= tol * max(1.0, abs(target)) and (best is None or d < best[1]):
                best = (i, d)
        if best is None:
            missing += 1
        else:
            taken.add(best[0])
    return taken, missing


def ramanujan_classify(spectra, q, tol=DEFAULT_TOL):
    '''
    Splits the zeros of each determinant into trivial and nontrivial and
    tests the nontrivial ones against that operator's band.

    :param spectra: mapping from 'A' (quartic), 'LP1', 'LP2', 'LI' to lists of
        Root, complex numbers, [re, im] pairs or {'re', 'im', 'source', 'exponent'} dicts
    :param q: residue field size
    :param tol: tolerance on log_q |zero| for numeric roots
    '''
    unknown = set(spectra) - set(BANDS)
    if unknown:
        raise ValueError('Unknown operators %s. Use %s' % (', '.join(sorted(unknown)), ', '.join(BANDS)))
    trivial = trivial_zeros(q)
    operators = {}
    for op in BANDS:
        if op not in spectra:
            continue
        roots = [_as_root(x) for x in spectra[op]]
        taken, missing = _mark_trivial(roots, trivial[op], tol)
        records = []
        for i, r in enumerate(roots):
            if r.source == 'IVd' or i in taken:
                status = 'trivial'
            elif complex(r.value) == 0:
                status = 'outside'
            else:
                alpha = r.log_modulus(q)
                status = _locate(alpha, BANDS[op], tol, r.exponent is not None)
            item = r.to_json()
            item['status'] = status
            if status != 'trivial' and complex(r.value) != 0:
                item['log_modulus'] = float(r.log_modulus(q))
            if status == 'outside' and complex(r.value) != 0:
                item['distance'] = _band_distance(r.log_modulus(q), BANDS[op])
            records.append(item)
        verdict = OperatorVerdict(op, records, missing if any(r.source is None for r in roots) else 0)
        for item in records:
            if item['status'] == 'outside':
                logger.warning('%s zero %s+%sj outside the band (log_q |z| = %s)', op, item['re'], item['im'],
                               item.get('log_modulus'))
        operators[op] = verdict
    report = RamanujanReport(q, tol, operators)
    if not report.consistent:
        logger.warning('criteria disagree: %s', {op: v.passed for op, v in operators.items()})
    logger.info('Ramanujan: %s', report.ramanujan)
    return report


def _numeric_zeros(m):
    if m.shape[0] == 0:
        return []
    eig = scipy.linalg.eigvals(np.array(m, dtype=float))
    return [complex(1 / e) for e in eig if abs(e) > 1e-12]


def numeric_spectra(data):
    ''' Zeros of each determinant computed from the matrices present in data '''
    out = {}
    for op in ('LP1', 'LP2', 'LI'):
        if op in data.matrices:
            out[op] = _numeric_zeros(data.matrices[op])
    if 'A1' in data.matrices and 'A2' in data.matrices:
        out['A'] = _numeric_zeros(block_companion(data.matrices['A1'], data.matrices['A2'], data.q))
    return out


def classify_complex(data, tol=DEFAULT_TOL):
    data.validate(row_sums=True)
    return ramanujan_classify(numeric_spectra(data), data.q, tol)


def load_spectra(d):
    '''
    Either complex data (with "matrices") or explicit zeros
    {"q": q, "spectra": {op: [roots]}}, as (spectra, q).
    '''
    if not isinstance(d, dict) or 'q' not in d:
        raise ComplexDataError('Spectrum input needs a mapping with the key "q"')
    if 'matrices' in d:
        data = ComplexData.from_dict(d).validate(row_sums=True)
        return numeric_spectra(data), data.q
    if 'spectra' not in d:
        raise ComplexDataError('Spectrum input needs either "matrices" or "spectra"')
    if not isinstance(d['spectra'], dict):
        raise ComplexDataError('"spectra" must be a mapping, got %s' % type(d['spectra']).__name__)
    for op, roots in d['spectra'].items():
        if not isinstance(roots, list):
            raise ComplexDataError('Zeros of %s must be a list, got %s' % (op, type(roots).__name__))
    try:
        spectra = {op: [_as_root(x) for x in roots] for op, roots in d['spectra'].items()}
    except (TypeError, ValueError, KeyError, IndexError) as err:
        raise ComplexDataError('Malformed root in spectra: %s' % str(err))
    return spectra, ComplexData(d['q']).validate(row_sums=False).q
