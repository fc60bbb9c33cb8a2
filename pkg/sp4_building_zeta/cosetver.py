### Explicit coset decompositions of the five Hecke operators

import itertools
import logging
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from sp4_building_zeta.localgroup import GroupElem, diag, t_elem, same_coset, random_k_element
from sp4_building_zeta.latticegeo import (SUPPORTED_PRIMES, fundamental_chamber, act, adjacent, star, is_close,
                                          elementary_divisors, inverse)

logger = logging.getLogger(__name__)

OPERATORS = ('A1', 'A2', 'LP1', 'LP2', 'LI')
PARABOLIC = {'A1': 'K', 'A2': 'K', 'LP1': 'P1', 'LP2': 'P2', 'LI': 'I'}
PAIRWISE_LIMIT = 64

# indices into the fundamental chamber (L0, L2, L3) of the simplex fixed by each parahoric
SIMPLEX = {'K': (0,), 'P1': (0, 1), 'P2': (0, 2), 'I': (0, 1, 2)}


def expected_count(op, p):
    q = p
    return {'A1': q ** 3 + q ** 2 + q + 1,
            'A2': q ** 4 + q ** 3 + q ** 2 + q,
            'LP1': q ** 3,
            'LP2': q ** 4,
            'LI': q ** 2}[op]


def defining_element(op, p):
    ''' The diagonal (or Iwahori) element whose double coset the family decomposes '''
    if op in ('A1', 'LP1'):
        return diag([1, 1, p, p], p)
    if op in ('A2', 'LP2'):
        return diag([1, p, p, p * p], p)
    if op == 'LI':
        return t_elem(p)
    raise ValueError('Unknown operator %s. Use one of %s' % (str(op), ', '.join(OPERATORS)))


@dataclass
class CosetFamily:
    operator: str
    p: int
    representatives: list
    params: list

    @property
    def parabolic(self):
        return PARABOLIC[self.operator]

    @property
    def expected_count(self):
        return expected_count(self.operator, self.p)

    def __len__(self):
        return len(self.representatives)


### Families

def _units(p, modulus):
    return [x for x in range(modulus) if x % p]


def _a1_family(p):
    out = []
    for a, b, c in itertools.product(range(p), repeat=3):
        out.append((('n', a, b, c), [[p, 0, b, a], [0, p, c, b], [0, 0, 1, 0], [0, 0, 0, 1]]))
    for al, be in itertools.product(range(p), repeat=2):
        out.append((('m', al, be), [[p, -al, 0, be], [0, 1, 0, 0], [0, 0, p, al], [0, 0, 0, 1]]))
    for g in range(p):
        out.append((('k', g), [[1, 0, 0, 0], [0, p, g, 0], [0, 0, 1, 0], [0, 0, 0, p]]))
    out.append((('d',), [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, p, 0], [0, 0, 0, p]]))
    return out


def _a2_family(p, gamma_shift=0):
    out = []
    for a, b in itertools.product(range(p), repeat=2):
        for c in range(p * p):
            out.append((('n', a, b, c), [[p * p, -p * a, p * b, c], [0, p, 0, b], [0, 0, p, a], [0, 0, 0, 1]]))
    for u in range(p):
        for v in range(p * p):
            out.append((('m', u, v), [[p, 0, u, 0], [0, p * p, v, p * u], [0, 0, 1, 0], [0, 0, 0, p]]))
    for w in range(p):
        out.append((('k', w), [[p, -w, 0, 0], [0, 1, 0, 0], [0, 0, p * p, p * w], [0, 0, 0, p]]))
    for al in _units(p, p):
        out.append((('u', al), [[p, 0, 0, al], [0, p, 0, 0], [0, 0, p, 0], [0, 0, 0, p]]))
    for be in range(p):
        for ga in _units(p, p):
            lift = ga + gamma_shift * p
            out.append((('r', be, lift), [[p, 0, be, lift], [0, p, Fraction(be * be, lift), be],
                                          [0, 0, p, 0], [0, 0, 0, p]]))
    out.append((('d',), [[1, 0, 0, 0], [0, p, 0, 0], [0, 0, p, 0], [0, 0, 0, p * p]]))
    return out


def _lp1_family(p):
    return [(('n', a, b, c), [[1, 0, 0, 0], [0, 1, 0, 0], [p * b, p * a, p, 0], [p * c, p * b, 0, p]])
            for a, b, c in itertools.product(range(p), repeat=3)]


def _lp2_family(p):
    out = []
    for a, b in itertools.product(range(p), repeat=2):
        for c in range(p * p):
            out.append((('n', a, b, c), [[1, 0, 0, 0], [-p * a, p, 0, 0], [p * b, 0, p, 0],
                                         [p * c, p * p * b, p * p * a, p * p]]))
    return out


def _li_family(p):
    return [(('n', a, b), [[1, 0, 0, 0], [0, 0, 1, 0], [p * b, -p, 0, 0], [p * a, 0, p * b, p]])
            for a, b in itertools.product(range(p), repeat=2)]


def generate_family(op, p, gamma_shift=0):
    '''
    Instantiate the displayed representatives of one decomposition at the prime p.
    :param op: one of 'A1', 'A2', 'LP1', 'LP2', 'LI'
    :param gamma_shift: moves the integer lift of gamma in the A2 family by gamma_shift*p
    '''
    if p not in SUPPORTED_PRIMES:
        raise ValueError('Unsupported prime %s. Use one of %s' % (str(p), str(SUPPORTED_PRIMES)))
    builders = {'A1': _a1_family,
                'A2': lambda p: _a2_family(p, gamma_shift),
                'LP1': _lp1_family,
                'LP2': _lp2_family,
                'LI': _li_family}
    if op not in builders:
        raise ValueError('Unknown operator %s. Use one of %s' % (str(op), ', '.join(OPERATORS)))
    rows = builders[op](p)
    reps = [GroupElem.from_rows(m, p) for _, m in rows]
    logger.debug('%s at p=%d: %d representatives', op, p, len(reps))
    return CosetFamily(op, p, reps, [params for params, _ in rows])


### Reports

@dataclass
class CheckReport:
    name: str
    passed: bool
    checked: int = 0
    witnesses: list = field(default_factory=list)

    def to_json(self):
        return {'name': self.name, 'passed': self.passed, 'checked': self.checked,
                'witnesses': [list(w) for w in self.witnesses]}


@dataclass
class FamilyReport:
    operator: str
    p: int
    count: int
    expected_count: int
    checks: list

    @property
    def passed(self):
        return self.count == self.expected_count and all(c.passed for c in self.checks)

    def to_json(self):
        out = {'operator': self.operator, 'p': self.p, 'count': self.count,
               'expected_count': self.expected_count, 'passed': self.passed,
               'witnesses': [w for c in self.checks for w in c.to_json()['witnesses']]}
        for c in self.checks:
            out[c.name] = c.passed
        return out


def _witness(f, i):
    return '%s%s' % (f.operator, str(f.params[i]))


### Disjointness

def simplex_image(g, H):
    ''' Image under g of the simplex of the fundamental chamber fixed by H '''
    chamber = fundamental_chamber(g.p)
    return tuple(act(g, chamber[i]) for i in SIMPLEX[H])


def verify_disjoint(f):
    ''' No two representatives lie in the same left coset of the family's parahoric (times the centre) '''
    H = f.parabolic
    n = len(f)
    witnesses = []
    if n <= PAIRWISE_LIMIT:
        checked = 0
        for i, j in itertools.combinations(range(n), 2):
            checked += 1
            if same_coset(f.representatives[i], f.representatives[j], H):
                witnesses.append((_witness(f, i), _witness(f, j)))
    else:
        buckets = defaultdict(list)
        for i, g in enumerate(f.representatives):
            buckets[simplex_image(g, H)].append(i)
        checked = n
        for idx in buckets.values():
            for i, j in itertools.combinations(idx, 2):
                checked += 1
                if same_coset(f.representatives[i], f.representatives[j], H):
                    witnesses.append((_witness(f, i), _witness(f, j)))
    if witnesses:
        logger.warning('%s p=%d: %d representative pairs share a coset, first %s', f.operator, f.p,
                       len(witnesses), str(witnesses[0]))
    return CheckReport('disjoint', not witnesses, checked, witnesses)


### Membership

def _simplex_bases(p):
    return [c.basis for c in fundamental_chamber(p)]


def signature(g, H):
    ''' Elementary divisors of B_i^-1 g B_j over all vertex pairs of H's simplex '''
    bases = _simplex_bases(g.p)
    idx = SIMPLEX[H]
    return tuple(tuple(elementary_divisors(inverse(bases[i]).dot(g.matrix).dot(bases[j]), g.p))
                 for i in idx for j in idx)


def verify_membership(f):
    ''' Every representative has the relative-position signature of the defining element '''
    H = f.parabolic
    ref = signature(defining_element(f.operator, f.p), H)
    witnesses = [(_witness(f, i),) for i, g in enumerate(f.representatives) if signature(g, H) != ref]
    if witnesses:
        logger.warning('%s p=%d: %d representatives outside the double coset, first %s', f.operator, f.p,
                       len(witnesses), str(witnesses[0]))
    return CheckReport('membership', not witnesses, len(f), witnesses)


### Geometry

def _check_a1(f, ball):
    l0 = fundamental_chamber(f.p)[0]
    images = {act(g, l0) for g in f.representatives}
    special = {w for w in star(l0).neighbors if w.vtype == 2}
    witnesses = [('missing', str(w.cls.key)) for w in special - images] + \
                [('extra', str(w.cls.key)) for w in images - special]
    return witnesses, len(images)


def _check_a2(f, ball):
    l0 = fundamental_chamber(f.p)[0]
    first = [w for w in star(l0).neighbors if w.vtype == 2]
    images = [act(g, l0) for g in f.representatives]
    witnesses = []
    if len(set(images)) != len(images):
        witnesses.append(('duplicate image',))
    for i, x in enumerate(images):
        if x.vtype != 0 or x == l0 or not any(adjacent(x, w) for w in first):
            witnesses.append(('not at distance 2', _witness(f, i)))
    return witnesses, len(images)


def _check_lp1(f, ball):
    ''' Each image of L0 -> L2 leaves from L2 towards a special vertex not close to L0 '''
    l0, l2, _ = fundamental_chamber(f.p)
    witnesses = []
    targets = []
    for i, g in enumerate(f.representatives):
        src, dst = act(g, l0), act(g, l2)
        targets.append(dst)
        if src != l2 or not adjacent(l2, dst) or is_close(l0, dst, None):
            witnesses.append(('bad edge', _witness(f, i)))
    if len(set(targets)) != len(targets):
        witnesses.append(('duplicate image',))
    return witnesses, len(targets)


def _check_lp2(f, ball):
    ''' Each image of L0 -> L3 starts at a special vertex next to L3 and close to L0 '''
    l0, _, l3 = fundamental_chamber(f.p)
    witnesses = []
    edges = []
    for i, g in enumerate(f.representatives):
        src, dst = act(g, l0), act(g, l3)
        edges.append((src, dst))
        if src.vtype != 0 or not adjacent(src, l3) or not adjacent(src, dst):
            witnesses.append(('bad edge', _witness(f, i)))
        elif not is_close(l0, src, None) or is_close(l3, dst, None):
            witnesses.append(('closeness', _witness(f, i)))
    if len(set(edges)) != len(edges):
        witnesses.append(('duplicate image',))
    return witnesses, len(edges)


def _check_li(f, ball):
    ''' Image chambers are distinct and all pass through [L2] '''
    chamber = fundamental_chamber(f.p)
    witnesses = []
    images = []
    for i, g in enumerate(f.representatives):
        img = tuple(act(g, v) for v in chamber)
        images.append(img)
        if chamber[1] not in img:
            witnesses.append(('misses L2', _witness(f, i)))
    if len(set(images)) != len(images):
        witnesses.append(('duplicate image',))
    return witnesses, len(images)


_GEOMETRY = {'A1': _check_a1, 'A2': _check_a2, 'LP1': _check_lp1, 'LP2': _check_lp2, 'LI': _check_li}


def cross_check_geometry(f, ball=None):
    '''
    Compare the family's images of the fundamental simplex with the lattice model.
    :param ball: optional BuildingBall; when given, every image vertex must lie in it
    '''
    witnesses, checked = _GEOMETRY[f.operator](f, ball)
    if ball is not None:
        if ball.p != f.p:
            raise ValueError('Ball prime %d does not match family prime %d' % (ball.p, f.p))
        for i, g in enumerate(f.representatives):
            for v in simplex_image(g, f.parabolic):
                if v not in ball.distance:
                    witnesses.append(('outside ball', _witness(f, i)))
    if witnesses:
        logger.warning('%s p=%d: geometry mismatch, first %s', f.operator, f.p, str(witnesses[0]))
    return CheckReport('geometry', not witnesses, checked, witnesses)


def verify_k_stability(f, trials=20, seed=0):
    ''' Left multiplication by K permutes the image simplices '''
    rng = np.random.default_rng(seed)
    H = f.parabolic
    base = {simplex_image(g, H) for g in f.representatives}
    witnesses = []
    for t in range(trials):
        k = random_k_element(f.p, rng)
        moved = {simplex_image(k @ g, H) for g in f.representatives}
        if moved != base:
            witnesses.append(('trial', t))
    return CheckReport('stability', not witnesses, trials, witnesses)


def a2_scalar_check(p):
    ''' |A2 family| + (q^2+1) equals the A2 row sum q^4+q^3+2q^2+q+1 '''
    q = p
    return len(generate_family('A2', p)) + q * q + 1 == q ** 4 + q ** 3 + 2 * q * q + q + 1


def verify_family(op, p, ball=None, stability=False):
    f = generate_family(op, p)
    checks = [verify_disjoint(f), verify_membership(f), cross_check_geometry(f, ball)]
    if stability:
        checks.append(verify_k_stability(f))
    if op == 'A2':
        shifted = generate_family(op, p, gamma_shift=1)
        checks.append(CheckReport('lift_independent',
                                  verify_disjoint(shifted).passed and verify_membership(shifted).passed, len(shifted)))
    report = FamilyReport(op, p, len(f), f.expected_count, checks)
    logger.info('%s p=%d: %d representatives, %s', op, p, len(f), 'PASS' if report.passed else 'FAIL')
    return report


def verify_all(p, ball=None, operators=OPERATORS):
    ''' Reports for every family at p, ordered by operator tag '''
    return [verify_family(op, p, ball, stability=(op == 'A1')) for op in operators]
