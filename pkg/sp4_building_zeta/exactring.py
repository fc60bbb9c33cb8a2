### Exact rings

'''
Exact coefficient arithmetic for the building computations.

Everything lives over Z[v^±1, x1^±1, s^±1] with v = q^(1/2). The second Satake
parameter x2 is never a variable: it is the abbreviation x1^-1 s^-2 (the
central character relation). On top of the Laurent ring sit univariate
polynomials in u (plain coefficient lists), truncated power series in u, and
small dense matrices.
'''

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple, Union

import numpy as np
import sympy
from sympy.parsing.sympy_parser import parse_expr

logger = logging.getLogger(__name__)

EXPONENT_BOUND = 64
VARIABLES = ('v', 'x1', 's')

Exponent = Tuple[int, int, int]
Scalar = Union[int, Fraction]


class ExponentOverflowError(ValueError):
    pass


class ConstantTermError(ValueError):
    pass


class NonSquareError(ValueError):
    pass


class NotDivisibleError(ValueError):
    pass


def _as_fraction(c):
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, np.integer)):
        return Fraction(int(c))
    if isinstance(c, sympy.Rational):
        return Fraction(int(c.p), int(c.q))
    raise TypeError('Expected an exact rational, got %s' % type(c).__name__)


def _check_exponent(e):
    if any(abs(x) > EXPONENT_BOUND for x in e):
        raise ExponentOverflowError('Exponent vector %s exceeds the bound |e| <= %d' % (str(e), EXPONENT_BOUND))
    return e


class LaurentPoly:
    '''
    Immutable element of Z[v^±1, x1^±1, s^±1] with rational coefficients.
    Terms map exponent vectors (e_v, e_x1, e_s) to nonzero Fractions.
    '''
    __slots__ = ('_terms', '_hash')

    def __init__(self, terms=None):
        clean = {}
        for e, c in (terms or {}).items():
            c = _as_fraction(c)
            if c != 0:
                clean[_check_exponent(tuple(int(x) for x in e))] = c
        self._terms = clean
        self._hash = None

    # constructors
    @classmethod
    def const(cls, c):
        return cls({(0, 0, 0): c})

    @classmethod
    def monomial(cls, c, exponent):
        return cls({tuple(exponent): c})

    @classmethod
    def var(cls, name):
        e = [0, 0, 0]
        e[VARIABLES.index(name)] = 1
        return cls({tuple(e): 1})

    # inspection
    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        return dict(self._terms)

    def is_zero(self):
        return not self._terms

    def is_constant(self):
        return all(e == (0, 0, 0) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError('%s is not a constant' % format_poly(self))
        return self._terms.get((0, 0, 0), Fraction(0))

    def is_monomial(self):
        return len(self._terms) == 1

    def leading_term(self):
        ''' Largest exponent vector in lexicographic order, with its coefficient '''
        e = max(self._terms)
        return e, self._terms[e]

    def degree_bounds(self):
        ''' Per-variable (min, max) exponents '''
        cols = list(zip(*self._terms.keys()))
        return [(min(c), max(c)) for c in cols]

    # arithmetic
    @staticmethod
    def _coerce(other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, Fraction, np.integer)):
            return LaurentPoly.const(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, np.integer)):
            if other == 0:
                raise ZeroDivisionError('division of %s by zero' % format_poly(self))
            inv = Fraction(1) / _as_fraction(other)
            return LaurentPoly({e: c * inv for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return exact_div(self, other)

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def inverse(self):
        ''' Inverse of a unit, i.e. a monomial '''
        if not self.is_monomial():
            raise NotDivisibleError('%s is not a unit of the Laurent ring' % format_poly(self))
        (e, c), = self._terms.items()
        return LaurentPoly({(-e[0], -e[1], -e[2]): 1 / c})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return "LaurentPoly('%s')" % format_poly(self)

    def __str__(self):
        return format_poly(self)

    # substitution and evaluation
    def substitute(self, mapping):
        '''
        Replaces variables by ring elements, e.g. {'x1': V * X1, 's': -X1**-1}.
        Negative exponents require the image to be a monomial.
        '''
        images = [mapping.get(name, LaurentPoly.var(name)) for name in VARIABLES]
        images = [self._coerce(im) for im in images]
        out = ZERO
        for e, c in self._terms.items():
            term = LaurentPoly.const(c)
            for im, k in zip(images, e):
                if k:
                    term = term * im ** k
            out = out + term
        return out

    def evaluate(self, v=1, x1=1, s=1):
        ''' Numeric value at the given point (exact for rationals, complex otherwise) '''
        point = (v, x1, s)
        total = 0
        for e, c in self._terms.items():
            val = c
            for x, k in zip(point, e):
                if k:
                    val = val * x ** k
            total = total + val
        return total


def poly_normalize(p):
    ''' Drops zero terms; accepts a LaurentPoly or a raw exponent->coefficient mapping '''
    if isinstance(p, LaurentPoly):
        return LaurentPoly(p.terms)
    return LaurentPoly(dict(p))


ZERO = LaurentPoly()
ONE = LaurentPoly.const(1)
V = LaurentPoly.var('v')
X1 = LaurentPoly.var('x1')
S = LaurentPoly.var('s')
X2 = LaurentPoly.monomial(1, (0, -1, -2))
Q = LaurentPoly.monomial(1, (2, 0, 0))


def as_poly(x):
    if isinstance(x, LaurentPoly):
        return x
    return LaurentPoly.const(x)


def exact_div(a, b):
    '''
    Exact quotient a / b in the Laurent ring by lexicographic long division.
    The quotient's exponents are confined to the box forced by the operands,
    so a non-exact division terminates with NotDivisibleError.
    '''
    a, b = as_poly(a), as_poly(b)
    if b.is_zero():
        raise ZeroDivisionError('exact_div by the zero polynomial')
    if a.is_zero():
        return ZERO
    if b.is_monomial():
        return a * b.inverse()
    abox, bbox = a.degree_bounds(), b.degree_bounds()
    box = [(amin - bmin, amax - bmax) for (amin, amax), (bmin, bmax) in zip(abox, bbox)]
    lead_e, lead_c = b.leading_term()
    quotient = {}
    rem = a
    while not rem.is_zero():
        e, c = rem.leading_term()
        qe = tuple(x - y for x, y in zip(e, lead_e))
        if any(not lo <= x <= hi for x, (lo, hi) in zip(qe, box)):
            raise NotDivisibleError('%s is not divisible by %s' % (format_poly(a), format_poly(b)))
        qc = c / lead_c
        quotient[qe] = qc
        rem = rem - LaurentPoly.monomial(qc, qe) * b
    return LaurentPoly(quotient)


### Text form

def _format_term(e, c):
    factors = []
    for name, k in zip(VARIABLES, e):
        if k == 1:
            factors.append(name)
        elif k:
            factors.append('%s^%d' % (name, k))
    mag = abs(c)
    if not factors:
        return str(mag)
    if mag == 1:
        return '*'.join(factors)
    return str(mag) + '*' + '*'.join(factors)


def format_poly(p):
    ''' Canonical text: terms in descending lexicographic order of (e_v, e_x1, e_s) '''
    items = sorted(p.terms.items(), reverse=True)
    if not items:
        return '0'
    out = ''
    for i, (e, c) in enumerate(items):
        body = _format_term(e, c)
        if i == 0:
            out = ('-' if c < 0 else '') + body
        else:
            out += (' - ' if c < 0 else ' + ') + body
    return out


_SYMBOLS = sympy.symbols('v x1 s')


def from_sympy(expr):
    ''' Converts a sympy expression in v, x1, s (Laurent, rational coefficients) '''
    names = [str(x) for x in _SYMBOLS]
    out = {}
    for term in sympy.Add.make_args(sympy.expand(expr)):
        coeff, rest = term.as_coeff_Mul()
        if not coeff.is_Rational:
            raise ValueError('Non-rational coefficient %s in %s' % (coeff, expr))
        e = [0, 0, 0]
        for base, k in rest.as_powers_dict().items():
            if base == 1:
                continue
            if str(base) not in names or not k.is_Integer:
                raise ValueError('Unsupported factor %s**%s in %s' % (base, k, expr))
            e[names.index(str(base))] += int(k)
        key = tuple(e)
        out[key] = out.get(key, 0) + Fraction(int(coeff.p), int(coeff.q))
    return LaurentPoly(out)


def to_sympy(p):
    v, x1, s = _SYMBOLS
    return sympy.Add(*[sympy.Rational(c.numerator, c.denominator) * v**e[0] * x1**e[1] * s**e[2]
                       for e, c in p.terms.items()])


def parse_poly(text):
    ''' Parses canonical text; also accepts the abbreviations x2 and q '''
    v, x1, s = _SYMBOLS
    local = {'v': v, 'x1': x1, 's': s, 'x2': x1**-1 * s**-2, 'q': v**2}
    expr = parse_expr(text.replace('^', '**'), local_dict=local)
    return from_sympy(expr)


### Univariate polynomials in u (ascending coefficient lists)

def upoly_trim(a):
    a = [as_poly(c) for c in a]
    while a and a[-1].is_zero():
        a.pop()
    return a


def upoly_add(a, b):
    n = max(len(a), len(b))
    a = list(a) + [ZERO] * (n - len(a))
    b = list(b) + [ZERO] * (n - len(b))
    return upoly_trim([x + y for x, y in zip(a, b)])


def upoly_mul(a, b):
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
    return upoly_trim(out)


def upoly_prod(polys):
    out = [ONE]
    for p in polys:
        out = upoly_mul(out, p)
    return out


def upoly_reverse(a):
    ''' det(I - M u) from det(u I - M) '''
    return upoly_trim(list(reversed(upoly_trim(a))))


def upoly_spread(a, k):
    ''' Substitutes u -> u^k '''
    out = []
    for i, c in enumerate(a):
        out += [c] + ([ZERO] * (k - 1) if i < len(a) - 1 else [])
    return upoly_trim(out)


def upoly_eq(a, b):
    return upoly_trim(a) == upoly_trim(b)


def one_minus(r, degree=1):
    ''' The polynomial 1 - r u^degree '''
    return upoly_trim([ONE] + [ZERO] * (degree - 1) + [-as_poly(r)])


def upoly_format(a, var='u'):
    a = upoly_trim(a)
    if not a:
        return '0'
    parts = []
    for k in range(len(a) - 1, -1, -1):
        if a[k].is_zero():
            continue
        coeff = format_poly(a[k])
        if k == 0:
            parts.append('(%s)' % coeff)
        elif k == 1:
            parts.append('(%s)*%s' % (coeff, var))
        else:
            parts.append('(%s)*%s^%d' % (coeff, var, k))
    return ' + '.join(parts)


def poly_divides(a, b):
    '''
    Exact quotient a / b of polynomials in u, or None when b does not divide a.
    b's leading coefficient must be a unit (a monomial).
    '''
    a, b = upoly_trim(a), upoly_trim(b)
    if not b:
        raise ZeroDivisionError('poly_divides by the zero polynomial')
    lead = b[-1]
    if not lead.is_monomial():
        raise ValueError('Divisor must be monic up to a unit; leading coefficient is %s' % format_poly(lead))
    inv = lead.inverse()
    rem = list(a)
    quotient = [ZERO] * max(len(a) - len(b) + 1, 0)
    for k in range(len(a) - len(b), -1, -1):
        c = rem[k + len(b) - 1] * inv
        if c:
            quotient[k] = c
            for i, bc in enumerate(b):
                rem[k + i] = rem[k + i] - c * bc
    if upoly_trim(rem):
        return None
    return upoly_trim(quotient)


### Power series in u

def _invert(c):
    if isinstance(c, LaurentPoly):
        return c.inverse()
    if c == 0:
        raise ConstantTermError('Power series with zero constant term is not invertible')
    return Fraction(1) / c


def _coeff(c):
    return c if isinstance(c, LaurentPoly) else _as_fraction(c)


@dataclass(frozen=True)
class PowerSeries:
    '''
    Series c_0 + c_1 u + ... + c_N u^N, arithmetic modulo u^(N+1).
    Coefficients are Fractions or LaurentPolys.
    '''
    coefficients: Tuple
    order: int

    @classmethod
    def from_coefficients(cls, coeffs, order):
        coeffs = [_coeff(c) for c in list(coeffs)[:order + 1]]
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        return cls(tuple(coeffs), order)

    @classmethod
    def one(cls, order):
        return cls.from_coefficients([1], order)

    def __getitem__(self, k):
        return self.coefficients[k]

    def __len__(self):
        return self.order + 1

    def __add__(self, other):
        n = min(self.order, other.order)
        return PowerSeries.from_coefficients([a + b for a, b in zip(self.coefficients, other.coefficients)], n)

    def __neg__(self):
        return PowerSeries(tuple(-c for c in self.coefficients), self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return PowerSeries.from_coefficients([c * other for c in self.coefficients], self.order)
        n = min(self.order, other.order)
        out = []
        for k in range(n + 1):
            acc = Fraction(0)
            for i in range(k + 1):
                a, b = self.coefficients[i], other.coefficients[k - i]
                if a != 0 and b != 0:
                    acc = acc + a * b
            out.append(acc)
        return PowerSeries.from_coefficients(out, n)

    __rmul__ = __mul__

    def inverse(self):
        c0 = _invert(self.coefficients[0])
        g = [c0]
        for n in range(1, self.order + 1):
            acc = Fraction(0)
            for k in range(1, n + 1):
                acc = acc + self.coefficients[k] * g[n - k]
            g.append(-c0 * acc)
        return PowerSeries.from_coefficients(g, self.order)

    def power(self, alpha):
        ''' f^alpha for rational alpha, constant term 1 '''
        alpha = _as_fraction(alpha)
        if alpha.denominator == 1 and alpha >= 0:
            out = PowerSeries.one(self.order)
            for _ in range(int(alpha)):
                out = out * self
            return out
        return series_exp(series_log(self) * alpha)

    def agree_to(self, other):
        ''' Largest k with coefficients 0..k equal (-1 if the constant terms differ) '''
        n = min(self.order, other.order)
        for k in range(n + 1):
            if self.coefficients[k] != other.coefficients[k]:
                return k - 1
        return n

    def __eq__(self, other):
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and all(a == b for a, b in zip(self.coefficients, other.coefficients))

    def __hash__(self):
        return hash((self.coefficients, self.order))


def series_from_poly(a, order):
    return PowerSeries.from_coefficients(upoly_constants(a) if _all_constant(a) else list(a), order)


def _all_constant(a):
    return all(not isinstance(c, LaurentPoly) or c.is_constant() for c in a)


def upoly_constants(a):
    return [c.constant_value() if isinstance(c, LaurentPoly) else _as_fraction(c) for c in a]


def series_exp(p):
    if p[0] != 0:
        raise ConstantTermError('series_exp needs constant term 0, got %s' % str(p[0]))
    g = [Fraction(1)]
    for n in range(1, p.order + 1):
        acc = Fraction(0)
        for k in range(1, n + 1):
            if p[k] != 0:
                acc = acc + k * p[k] * g[n - k]
        g.append(acc / n)
    return PowerSeries.from_coefficients(g, p.order)


def series_log(p):
    if p[0] != 1:
        raise ConstantTermError('series_log needs constant term 1, got %s' % str(p[0]))
    g = [Fraction(0)]
    for n in range(1, p.order + 1):
        acc = n * p[n]
        for k in range(1, n):
            if g[k] != 0:
                acc = acc - k * g[k] * p[n - k]
        g.append(acc / n)
    return PowerSeries.from_coefficients(g, p.order)


### Matrices over the Laurent ring

@dataclass(frozen=True)
class RingMatrix:
    ''' Dense row-major matrix of LaurentPolys '''
    rows: int
    cols: int
    entries: Tuple[LaurentPoly, ...]

    def __post_init__(self):
        if self.rows * self.cols != len(self.entries):
            raise ValueError('RingMatrix %dx%d needs %d entries, got %d'
                             % (self.rows, self.cols, self.rows * self.cols, len(self.entries)))

    @classmethod
    def from_rows(cls, rows):
        rows = [list(r) for r in rows]
        n_cols = len(rows[0]) if rows else 0
        assert all(len(r) == n_cols for r in rows), '**** ragged rows passed to RingMatrix.from_rows'
        return cls(len(rows), n_cols, tuple(as_poly(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns, n_rows):
        ''' Builds the matrix whose column j is the image of basis vector j, given as {row: entry} '''
        rows = [[ZERO] * len(columns) for _ in range(n_rows)]
        for j, col in enumerate(columns):
            for i, x in col.items():
                rows[i][j] = as_poly(x)
        return cls.from_rows(rows)

    @classmethod
    def identity(cls, n):
        return cls.from_rows([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n_rows, n_cols):
        return cls(n_rows, n_cols, (ZERO,) * (n_rows * n_cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i):
        return list(self.entries[i * self.cols:(i + 1) * self.cols])

    def column(self, j):
        return [self[i, j] for i in range(self.rows)]

    def to_rows(self):
        return [self.row(i) for i in range(self.rows)]

    def is_square(self):
        return self.rows == self.cols

    def __add__(self, other):
        assert (self.rows, self.cols) == (other.rows, other.cols), '**** shape mismatch in RingMatrix add'
        return RingMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self):
        return RingMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_poly(c)
        return RingMatrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError('Cannot multiply %dx%d by %dx%d' % (self.rows, self.cols, other.rows, other.cols))
        out = []
        other_cols = [other.column(j) for j in range(other.cols)]
        for i in range(self.rows):
            r = self.row(i)
            for col in other_cols:
                acc = ZERO
                for a, b in zip(r, col):
                    if a and b:
                        acc = acc + a * b
                out.append(acc)
        return RingMatrix(self.rows, other.cols, tuple(out))

    def apply(self, vector):
        ''' Matrix times a column vector given as a list '''
        vec = [as_poly(x) for x in vector]
        return [sum((a * b for a, b in zip(self.row(i), vec) if a and b), ZERO) for i in range(self.rows)]

    def transpose(self):
        return RingMatrix.from_rows([self.column(j) for j in range(self.cols)])

    def trace(self):
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), ZERO)

    def submatrix(self, row_idx, col_idx):
        return RingMatrix.from_rows([[self[i, j] for j in col_idx] for i in row_idx])

    def map(self, fn):
        return RingMatrix(self.rows, self.cols, tuple(as_poly(fn(a)) for a in self.entries))

    def substitute(self, mapping):
        return self.map(lambda a: a.substitute(mapping))

    def evaluate(self, v=1, x1=1, s=1):
        return np.array([[self[i, j].evaluate(v, x1, s) for j in range(self.cols)] for i in range(self.rows)],
                        dtype=object)

    def __eq__(self, other):
        if not isinstance(other, RingMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.entries) == (other.rows, other.cols, other.entries)

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))


def _require_square(m, what):
    if not m.is_square():
        raise NonSquareError('%s needs a square matrix, got %dx%d' % (what, m.rows, m.cols))


def det(m):
    ''' Bareiss fraction-free elimination; every division is exact in the Laurent ring '''
    _require_square(m, 'det')
    n = m.rows
    if n == 0:
        return ONE
    a = m.to_rows()
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if a[k][k].is_zero():
            swap = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if swap is None:
                return ZERO
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_div(a[k][k] * a[i][j] - a[i][k] * a[k][j], prev)
        prev = a[k][k]
    return a[n - 1][n - 1] * sign


def charpoly(m):
    ''' Ascending coefficients of det(u I - m), by the Faddeev-LeVerrier recursion '''
    _require_square(m, 'charpoly')
    n = m.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    ident = RingMatrix.identity(n)
    am = RingMatrix.zeros(n, n)
    for k in range(1, n + 1):
        mk = am + ident.scale(coeffs[n - k + 1])
        am = m @ mk
        coeffs[n - k] = -am.trace() / k
    return coeffs


def adjugate(m):
    _require_square(m, 'adjugate')
    n = m.rows
    if n == 1:
        return RingMatrix.identity(1)
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = m.submatrix([r for r in range(n) if r != i], [c for c in range(n) if c != j])
            out[j][i] = det(minor) * (-1) ** (i + j)
    return RingMatrix.from_rows(out)
