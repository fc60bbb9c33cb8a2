### Local group GSp4(Q_p)

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

logger = logging.getLogger(__name__)

INFINITY = math.inf
SUBGROUPS = ('K', 'I', 'P1', 'P2', 'P02', 'B', 'Z', 'G0')
WEYL_WORDS = ('id', 's1', 's2', 's1s2', 's2s1', 's1s2s1', 's2s1s2', 's1s2s1s2')


class NotSimilitudeError(ValueError):
    pass


def valuation(x, p):
    ''' p-adic valuation of a rational; math.inf for zero '''
    x = Fraction(x)
    if x == 0:
        return INFINITY
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def is_unit(x, p):
    return valuation(x, p) == 0


def fraction_text(x):
    x = Fraction(x)
    if x.denominator == 1:
        return '%d' % x.numerator
    return '%d/%d' % (x.numerator, x.denominator)


def to_matrix(rows):
    ''' 4x4 object array of Fractions '''
    m = np.empty((4, 4), dtype=object)
    for i in range(4):
        for j in range(4):
            m[i, j] = Fraction(rows[i][j])
    return m


J_MATRIX = to_matrix([[0, 0, 0, 1],
                      [0, 0, 1, 0],
                      [0, -1, 0, 0],
                      [-1, 0, 0, 0]])


def similitude(g):
    '''
    The factor lambda with g^t J g = lambda J.
    :param g: 4x4 array-like of rationals
    '''
    m = to_matrix(g) if not isinstance(g, np.ndarray) else g
    form = m.T.dot(J_MATRIX).dot(m)
    lam = form[0, 3]
    if lam == 0 or not np.array_equal(form, J_MATRIX * lam):
        raise NotSimilitudeError('Matrix is not a symplectic similitude:\n%s' % str(m))
    return lam


def exact_det(m):
    ''' Exact determinant of a small Fraction matrix by Gaussian elimination '''
    a = [list(r) for r in m]
    n = len(a)
    d = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            d = -d
        d *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return d


@dataclass(frozen=True, eq=False)
class GroupElem:
    ''' Element of GSp4(Q_p) as an exact 4x4 rational matrix '''
    matrix: np.ndarray
    p: int = 2
    similitude: Fraction = field(init=False)

    def __post_init__(self):
        m = to_matrix(self.matrix)
        object.__setattr__(self, 'matrix', m)
        object.__setattr__(self, 'similitude', similitude(m))

    @classmethod
    def from_rows(cls, rows, p=2):
        return cls(to_matrix(rows), p)

    @cached_property
    def det(self):
        return exact_det(self.matrix)

    @cached_property
    def entry_valuations(self):
        return np.array([[valuation(x, self.p) for x in row] for row in self.matrix], dtype=object)

    @property
    def key(self):
        return tuple(self.matrix.flatten())

    def __matmul__(self, other):
        return GroupElem(self.matrix.dot(other.matrix), self.p)

    def inverse(self):
        ''' g^-1 = lambda^-1 (-J) g^t J '''
        inv = (-J_MATRIX).dot(self.matrix.T).dot(J_MATRIX) / self.similitude
        return GroupElem(inv, self.p)

    def scaled(self, z):
        return GroupElem(self.matrix * Fraction(z), self.p)

    def __eq__(self, other):
        if not isinstance(other, GroupElem):
            return NotImplemented
        return self.p == other.p and self.key == other.key

    def __hash__(self):
        return hash((self.p, self.key))

    def to_json(self):
        return [fraction_text(x) for x in self.matrix.flatten()]


def diag(entries, p=2):
    rows = [[entries[i] if i == j else 0 for j in range(4)] for i in range(4)]
    return GroupElem.from_rows(rows, p)


def identity(p=2):
    return diag([1, 1, 1, 1], p)


def J(p=2):
    return GroupElem(J_MATRIX, p)


def s1(p=2):
    return GroupElem.from_rows([[0, 1, 0, 0],
                                [1, 0, 0, 0],
                                [0, 0, 0, 1],
                                [0, 0, 1, 0]], p)


def s2(p=2):
    return GroupElem.from_rows([[1, 0, 0, 0],
                                [0, 0, 1, 0],
                                [0, -1, 0, 0],
                                [0, 0, 0, 1]], p)


def tau(p=2):
    ''' tau^2 = p I; lambda(tau) = -p '''
    return GroupElem.from_rows([[0, 0, 1, 0],
                                [0, 0, 0, 1],
                                [p, 0, 0, 0],
                                [0, p, 0, 0]], p)


def t_elem(p=2):
    ''' The element generating the Iwahori double coset of L_I '''
    return GroupElem.from_rows([[1, 0, 0, 0],
                                [0, 0, 1, 0],
                                [0, -p, 0, 0],
                                [0, 0, 0, p]], p)


def weyl_elements(p=2):
    ''' id, s1, s2, s1s2, s2s1, s1s2s1, s2s1s2, s1s2s1s2 '''
    a, b, e = s1(p), s2(p), identity(p)
    return [e, a, b, a @ b, b @ a, a @ b @ a, b @ a @ b, a @ b @ a @ b]


def weyl_lengths():
    return [len(w) // 2 if w != 'id' else 0 for w in WEYL_WORDS]


def coordinate_permutation(g):
    ''' For a monomial matrix, the tuple perm with g e_j in the line of e_perm[j] '''
    perm = []
    for j in range(4):
        rows = [i for i in range(4) if g.matrix[i, j] != 0]
        if len(rows) != 1:
            raise ValueError('Matrix is not monomial:\n%s' % str(g.matrix))
        perm.append(rows[0])
    return tuple(perm)


def weyl_left_multiply(alpha, index, p=2):
    ''' Index of s_alpha * w_index in the Weyl list (equality up to diagonal signs) '''
    gens = {1: s1(p), 2: s2(p)}
    ws = weyl_elements(p)
    target = coordinate_permutation(gens[alpha] @ ws[index])
    patterns = [coordinate_permutation(w) for w in ws]
    return patterns.index(target)


### Membership

def _all_at_least(vals, cells, bound):
    return all(vals[i][j] >= bound for i, j in cells)


_STRICT_LOWER = [(i, j) for i in range(4) for j in range(4) if i > j]
_SIEGEL = [(i, j) for i in (2, 3) for j in (0, 1)]
_KLINGEN = [(1, 0), (2, 0), (3, 0), (3, 1), (3, 2)]
_PARAMODULAR_P = [(1, 0), (2, 0), (3, 0), (3, 1), (3, 2)]


def is_member(g, H):
    '''
    Exact membership of g in the subgroup H.
    :param H: one of 'K', 'I', 'P1', 'P2', 'P02', 'B', 'Z', 'G0'
    '''
    if H not in SUBGROUPS:
        raise ValueError('Unknown subgroup %s. Use one of %s' % (str(H), ', '.join(SUBGROUPS)))
    vals = g.entry_valuations
    p = g.p
    if H == 'Z':
        m = g.matrix
        return all(m[i, j] == 0 for i in range(4) for j in range(4) if i != j) and len(set(m.diagonal())) == 1
    if H == 'B':
        return all(g.matrix[i, j] == 0 for i, j in _STRICT_LOWER)
    if H == 'G0':
        return valuation(g.det, p) % 4 == 0
    if H == 'P02':
        if not is_unit(g.det, p):
            return False
        if vals[0][3] < -1 or not _all_at_least(vals, _PARAMODULAR_P, 1):
            return False
        rest = [(i, j) for i in range(4) for j in range(4) if (i, j) != (0, 3) and (i, j) not in _PARAMODULAR_P]
        return _all_at_least(vals, rest, 0)
    in_k = all(x >= 0 for row in vals for x in row) and is_unit(g.similitude, p)
    if H == 'K' or not in_k:
        return in_k
    if H == 'I':
        return _all_at_least(vals, _STRICT_LOWER, 1)
    if H == 'P1':
        return _all_at_least(vals, _SIEGEL, 1)
    return _all_at_least(vals, _KLINGEN, 1)


def same_coset(g, h, H, mod_center=True):
    ''' True iff g^-1 h lies in H (times the centre when mod_center) '''
    x = g.inverse() @ h
    if not mod_center or H in ('B', 'Z', 'G0'):
        return is_member(x, H)
    lam_val = valuation(x.similitude, g.p)
    if lam_val % 2:
        return False
    return is_member(x.scaled(Fraction(g.p) ** (-(lam_val // 2))), H)


### Random elements

def siegel_unipotent(a, b, c, p=2):
    return GroupElem.from_rows([[1, 0, b, a],
                                [0, 1, c, b],
                                [0, 0, 1, 0],
                                [0, 0, 0, 1]], p)


def levi_unipotent(t, p=2):
    return GroupElem.from_rows([[1, t, 0, 0],
                                [0, 1, 0, 0],
                                [0, 0, 1, -t],
                                [0, 0, 0, 1]], p)


def _random_unit(p, rng):
    while True:
        num = int(rng.integers(1, 4 * p * p))
        if num % p:
            den = int(rng.integers(1, 3 * p)) * p + 1
            return Fraction(num, den)


def random_k_element(p, rng, length=6):
    '''
    Random element of K = GSp4(Z_p) as a product of Weyl elements, integral
    unipotents, and unit similitude tori.
    :param rng: numpy Generator (np.random.default_rng)
    '''
    ws = weyl_elements(p)
    g = identity(p)
    for _ in range(length):
        pick = int(rng.integers(0, 4))
        if pick == 0:
            factor = ws[int(rng.integers(0, 8))]
        elif pick == 1:
            a, b, c = (int(x) for x in rng.integers(-p * p, p * p + 1, size=3))
            factor = siegel_unipotent(a, b, c, p)
        elif pick == 2:
            factor = levi_unipotent(_random_unit(p, rng) * int(rng.integers(0, 2)), p)
        else:
            u = _random_unit(p, rng)
            factor = diag([1, 1, u, u], p)
        g = g @ factor
    return g


def random_similitude(p, rng, length=6):
    ''' Random element of GSp4(Q_p): K-elements interleaved with diag(1,1,p,p) and tau '''
    g = random_k_element(p, rng, length)
    for _ in range(int(rng.integers(0, 3))):
        g = g @ (tau(p) if rng.integers(0, 2) else diag([1, 1, p, p], p)) @ random_k_element(p, rng, 2)
    return g
