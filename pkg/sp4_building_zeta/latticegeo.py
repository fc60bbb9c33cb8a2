### Lattice model of the building of GSp4(Q_p)

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from sp4_building_zeta.localgroup import J_MATRIX, to_matrix, valuation, exact_det, fraction_text, INFINITY

logger = logging.getLogger(__name__)

SUPPORTED_PRIMES = (2, 3, 5)
MAX_RADIUS = 3
MAX_BALL_ESTIMATE = 2000000


class NotAVertexError(ValueError):
    pass


class BallTooLargeError(ValueError):
    pass


### Exact lattice algebra over Z_(p)

def _reduce_mod(x, k, p):
    ''' Canonical representative of x modulo p^k Z_(p) '''
    if x == 0:
        return Fraction(0)
    m = valuation(x, p)
    if m >= k:
        return Fraction(0)
    unit = x / Fraction(p) ** m
    modulus = p ** (k - m)
    r = unit.numerator * pow(unit.denominator, -1, modulus) % modulus
    return Fraction(p) ** m * r


def hermite_form(columns, p):
    '''
    Canonical upper-triangular basis of the Z_(p)-lattice spanned by the columns.
    Pivots are powers of p; entries above a pivot are reduced modulo it.
    :param columns: 4 x m array-like, m >= 4, spanning a full-rank lattice
    '''
    arr = np.asarray(columns, dtype=object)
    cols = [np.array([Fraction(x) for x in arr[:, j]], dtype=object) for j in range(arr.shape[1])]
    cols = [c for c in cols if any(x != 0 for x in c)]
    pivots = [None] * 4
    for i in range(3, -1, -1):
        live = [j for j, c in enumerate(cols) if c[i] != 0]
        if not live:
            raise ValueError('Columns do not span a full-rank lattice (row %d is empty)' % i)
        idx = min(live, key=lambda j: valuation(cols[j][i], p))
        k = valuation(cols[idx][i], p)
        piv = cols[idx] * (Fraction(p) ** k / cols[idx][i])
        rest = []
        for j, c in enumerate(cols):
            if j == idx:
                continue
            if c[i] != 0:
                c = c - piv * (c[i] / piv[i])
            if any(x != 0 for x in c):
                rest.append(c)
        cols = rest
        pivots[i] = piv
    h = np.empty((4, 4), dtype=object)
    for j in range(4):
        h[:, j] = pivots[j]
    for j in range(4):
        for i in range(j - 1, -1, -1):
            x = h[i, j]
            rep = _reduce_mod(x, valuation(h[i, i], p), p)
            if rep != x:
                h[:, j] = h[:, j] - h[:, i] * ((x - rep) / h[i, i])
    return h


def same_lattice(a, b, p):
    return np.array_equal(hermite_form(a, p), hermite_form(b, p))


def contains(outer, inner, p):
    ''' True iff the lattice spanned by inner lies in the one spanned by outer '''
    return same_lattice(np.column_stack([outer, inner]), outer, p)


def inverse(m):
    ''' Exact inverse of a rational matrix '''
    dm = DomainMatrix([[QQ(int(x.numerator), int(x.denominator)) for x in row] for row in m], m.shape, QQ)
    inv = dm.inv().to_Matrix()
    return np.array([[Fraction(int(inv[i, j].p), int(inv[i, j].q)) for j in range(inv.cols)]
                     for i in range(inv.rows)], dtype=object)


def gram(basis):
    ''' Matrix of the symplectic pairing <x, y> = x^t J y on the basis columns '''
    return basis.T.dot(J_MATRIX).dot(basis)


def dual_basis(basis):
    ''' Basis of L* = {v : <L, v> in Z_p}, i.e. (B^t J)^-1 '''
    return inverse(basis.T.dot(J_MATRIX))


def _min_valuation(entries, p):
    return min((valuation(x, p) for x in entries if x != 0), default=INFINITY)


def elementary_divisors(matrix, p):
    ''' Sorted p-adic valuations of the local Smith form of a square rational matrix '''
    a = [[Fraction(x) for x in row] for row in np.asarray(matrix, dtype=object)]
    rows, cols = list(range(len(a))), list(range(len(a)))
    out = []
    while rows:
        cands = [(valuation(a[i][j], p), i, j) for i in rows for j in cols if a[i][j] != 0]
        if not cands:
            out += [INFINITY] * len(rows)
            break
        k, i0, j0 = min(cands)
        piv = a[i0][j0]
        for i in rows:
            if i != i0 and a[i][j0] != 0:
                f = a[i][j0] / piv
                a[i] = [x - f * y for x, y in zip(a[i], a[i0])]
        for j in cols:
            if j != j0 and a[i0][j] != 0:
                a[i0][j] = Fraction(0)
        out.append(k)
        rows.remove(i0)
        cols.remove(j0)
    return sorted(out)


### Lattice classes

@dataclass(frozen=True)
class LatticeClass:
    ''' Homothety class of a Z_p-lattice, keyed by its normalized Hermite form '''
    key: tuple
    p: int

    @property
    def basis(self):
        return np.array(self.key, dtype=object).reshape(4, 4)

    @classmethod
    def from_basis(cls, basis, p):
        return lattice_class(basis, p)

    @property
    def type(self):
        ''' Valuation of the determinant modulo 4 '''
        return sum(valuation(self.key[5 * i], self.p) for i in range(4)) % 4

    def to_json(self):
        return [fraction_text(x) for x in self.key]


def lattice_class(basis, p):
    h = hermite_form(basis, p)
    m = _min_valuation(h.flatten(), p)
    h = h * Fraction(p) ** (-m)
    return LatticeClass(tuple(h.flatten()), p)


def dual_class(cls):
    return lattice_class(dual_basis(cls.basis), cls.p)


def _gram_scaled(basis, p, target):
    ''' Rescale so the minimal Gram valuation equals target; None when parity forbids it '''
    m = _min_valuation(gram(basis).flatten(), p)
    if (m - target) % 2:
        return None
    return basis * Fraction(p) ** ((target - m) // 2)


def is_primitive(cls):
    ''' Some member of the class equals its own dual '''
    lam = _gram_scaled(cls.basis, cls.p, 0)
    return lam is not None and valuation(exact_det(lam), cls.p) == 0


### Vertices

@dataclass(frozen=True)
class VertexLabel:
    '''
    A vertex of the building. Special vertices are lattice classes of type 0 or 2;
    a non-special vertex is the pair {[L], [L*]} of a type-3 class and its dual
    type-1 class. For a non-special vertex cls is always the type-3 class of the
    pair and dual the type-1 class, whichever of the two the vertex was built from.
    basis holds the admissible representative: self-dual for type 0, p-modular for
    type 2, and for type 3 the type-1 member L with L < L* < p^-1 L.
    '''
    cls: LatticeClass
    dual: LatticeClass
    vtype: int
    basis: np.ndarray = field(compare=False, repr=False)

    @property
    def p(self):
        return self.cls.p

    @property
    def is_special(self):
        return self.vtype in (0, 2)

    @property
    def sort_key(self):
        return (self.vtype, self.cls.key)

    def to_json(self):
        return {'type': self.vtype,
                'class': self.cls.to_json(),
                'dual': self.dual.to_json()}


@lru_cache(maxsize=None)
def vertex_of(cls):
    ''' Vertex label of a lattice class; type-1 classes and non-admissible classes raise NotAVertexError '''
    p = cls.p
    t = cls.type
    if t == 1:
        raise NotAVertexError('Lattice class of type 1 is not a building vertex:\n%s' % str(cls.basis))
    if t == 0:
        lam = _gram_scaled(cls.basis, p, 0)
        if lam is not None and same_lattice(dual_basis(lam), lam, p):
            return VertexLabel(cls, cls, 0, lam)
    elif t == 2:
        lam = _gram_scaled(cls.basis, p, 1)
        if lam is not None and same_lattice(dual_basis(lam), lam / p, p):
            return VertexLabel(cls, cls, 2, lam)
    else:
        dual = dual_class(cls)
        lam = _gram_scaled(dual.basis, p, 0)
        if lam is not None:
            lam_dual = dual_basis(lam)
            if contains(lam_dual, lam, p) and contains(lam / p, lam_dual, p):
                return VertexLabel(cls, dual, 3, lam)
    raise NotAVertexError('Lattice class of type %d is not admissible:\n%s' % (t, str(cls.basis)))


def vertex_from_lattice(basis, p):
    ''' Vertex of a lattice; a type-1 lattice names the non-special vertex of its dual '''
    cls = lattice_class(basis, p)
    if cls.type == 1:
        cls = dual_class(cls)
    return vertex_of(cls)


def vertex_type(cls):
    return vertex_of(cls).vtype


def figure1_vertex(a1, a2, b1, b2, p=2):
    ''' The apartment vertex [diag(p^a1, p^a2, p^b1, p^b2) Z_p^4] '''
    return vertex_of(lattice_class(to_matrix(np.diag([Fraction(p) ** e for e in (a1, a2, b1, b2)])), p))


figure1_label = figure1_vertex


def fundamental_chamber(p):
    ''' ([L0], [L2], [L3]) with L0 = Z_p^4, L2 = diag(1,1,p,p), L3 = diag(1,p,p,p) '''
    return (figure1_vertex(0, 0, 0, 0, p), figure1_vertex(0, 0, 1, 1, p), figure1_vertex(0, 1, 1, 1, p))


def act(g, vertex):
    ''' Image of a vertex under a similitude g '''
    return vertex_from_lattice(g.matrix.dot(vertex.basis), vertex.p)


def adjacent(v, w):
    ''' Incidence of two distinct vertices through containment of admissible representatives '''
    if v.vtype == w.vtype:
        return False
    order = {2: 0, 3: 1, 0: 2}
    small, big = sorted((v, w), key=lambda x: order[x.vtype])
    p = v.p
    return contains(big.basis, small.basis, p) and contains(small.basis, big.basis * p, p)


def edge_type(v, w):
    ''' 1 for special-special edges, 2 otherwise '''
    return 1 if v.is_special and w.is_special else 2


### Finite-field helpers

def _mod_p(x, p):
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


def _row_space(rows, p):
    ''' Reduced echelon basis of the F_p span of rows, with pivot positions '''
    basis, pivots = [], []
    for r in rows:
        r = [x % p for x in r]
        for b, c in zip(basis, pivots):
            if r[c]:
                f = r[c]
                r = [(x - f * y) % p for x, y in zip(r, b)]
        lead = next((i for i, x in enumerate(r) if x), None)
        if lead is None:
            continue
        inv = pow(r[lead], -1, p)
        r = [x * inv % p for x in r]
        basis = [[(x - b[lead] * y) % p for x, y in zip(b, r)] for b in basis]
        basis.append(r)
        pivots.append(lead)
    order = sorted(range(len(basis)), key=lambda i: pivots[i])
    return [tuple(basis[i]) for i in order], [pivots[i] for i in order]


def _normalize_line(v, p):
    lead = next(x for x in v if x % p)
    inv = pow(lead, -1, p)
    return tuple(x * inv % p for x in v)


def _lines(n, p):
    ''' Normalized representatives of the lines of F_p^n '''
    for lead in range(n):
        for tail in itertools.product(range(p), repeat=n - lead - 1):
            yield (0,) * lead + (1,) + tail


def _planes(p):
    ''' Echelon bases of the 2-dimensional subspaces of F_p^4 '''
    for i, j in itertools.combinations(range(4), 2):
        free1 = [k for k in range(i + 1, 4) if k != j]
        free2 = list(range(j + 1, 4))
        for vals1 in itertools.product(range(p), repeat=len(free1)):
            for vals2 in itertools.product(range(p), repeat=len(free2)):
                w1, w2 = [0] * 4, [0] * 4
                w1[i], w2[j] = 1, 1
                for k, x in zip(free1, vals1):
                    w1[k] = x
                for k, x in zip(free2, vals2):
                    w2[k] = x
                yield tuple(w1), tuple(w2)


def _lines_in(w1, w2, p):
    out = [tuple((a + t * b) % p for a, b in zip(w1, w2)) for t in range(p)] + [tuple(w2)]
    return [_normalize_line(v, p) for v in out]


def _pairing_mod(x, y, form, p):
    return sum(x[i] * form[i][j] * y[j] for i in range(4) for j in range(4)) % p


def _lift(basis, vectors, factor, base):
    ''' Columns factor * basis.v for each v, followed by the columns of base '''
    cols = [basis.dot(np.array([Fraction(x) for x in v], dtype=object)) * factor for v in vectors]
    return np.column_stack(cols + [base])


### Stars

@dataclass
class Star:
    vertex: VertexLabel
    neighbors: list
    chambers: list

    def counts(self):
        special = sum(1 for w in self.neighbors if w.is_special)
        return {'special': special, 'non_special': len(self.neighbors) - special, 'chambers': len(self.chambers)}


def _chamber(*vertices):
    return tuple(sorted(vertices, key=lambda v: v.vtype))


def _star_special(vertex, scale):
    ''' Shared walk for type 0 (scale 1) and type 2 (scale p): neighbours sit between L and p^-1 L or pL and L '''
    p = vertex.p
    b = vertex.basis
    form = [[_mod_p(x / scale, p) for x in row] for row in gram(b)]
    lagrangians = [w for w in _planes(p) if _pairing_mod(w[0], w[1], form, p) == 0]
    if scale == 1:
        lift = lambda vecs: _lift(b, vecs, 1, b * p)
    else:
        lift = lambda vecs: _lift(b, vecs, Fraction(1, p), b)
    planes = {w: vertex_from_lattice(lift(w), p) for w in lagrangians}
    lines = {l: vertex_from_lattice(lift([l]), p) for l in _lines(4, p)}
    chambers = [_chamber(vertex, planes[w], lines[l]) for w in lagrangians for l in _lines_in(w[0], w[1], p)]
    return Star(vertex, list(planes.values()) + list(lines.values()), chambers)


def _star_non_special(vertex):
    p = vertex.p
    b = vertex.basis
    coords = (inverse(b).dot(dual_basis(b)) * p).T
    u_basis, pivots = _row_space([[_mod_p(x, p) for x in row] for row in coords], p)
    if len(u_basis) != 2:
        raise NotAVertexError('Dual quotient of a non-special vertex must be a plane; got rank %d' % len(u_basis))
    free = [k for k in range(4) if k not in pivots]
    e = [tuple(1 if k == f else 0 for k in range(4)) for f in free]
    primitive = {u: vertex_from_lattice(_lift(b, [u], Fraction(1, p), b), p)
                 for u in _lines_in(u_basis[0], u_basis[1], p)}
    paramodular = {c: vertex_from_lattice(_lift(b, [u_basis[0], u_basis[1], c], 1, b * p), p)
                   for c in _lines_in(e[0], e[1], p)}
    chambers = [_chamber(vertex, v0, v2) for v0 in primitive.values() for v2 in paramodular.values()]
    return Star(vertex, list(primitive.values()) + list(paramodular.values()), chambers)


@lru_cache(maxsize=None)
def star(vertex):
    '''
    Neighbours and chambers through a vertex.
    Special vertices have q^3+q^2+q+1 special and as many non-special neighbours;
    non-special vertices have q+1 of each.
    '''
    if vertex.vtype == 0:
        return _star_special(vertex, 1)
    if vertex.vtype == 2:
        return _star_special(vertex, vertex.p)
    return _star_non_special(vertex)


def neighbors(vertex):
    ''' Adjacent vertices with their edge types '''
    return [(w, edge_type(vertex, w)) for w in star(vertex).neighbors]


def is_close(u, v, ball=None):
    '''
    Two vertices are close when they sit in two chambers sharing an edge, each
    vertex outside the other's chamber.
    :param ball: optional BuildingBall restricting the chambers searched
    '''
    if u == v:
        return False
    for c in star(u).chambers:
        if v in c:
            continue
        a, b = (w for w in c if w != u)
        other = _chamber(a, b, v)
        pool = ball.chambers if ball is not None else star(a).chambers
        if other in pool:
            return True
    return False


### Balls

def _edge(v, w):
    a, b = sorted((v, w), key=lambda x: x.sort_key)
    return (a, b, edge_type(a, b))


@dataclass
class BuildingBall:
    ''' Vertices within combinatorial distance radius of the fundamental chamber '''
    p: int
    radius: int
    distance: dict
    edges: set
    chambers: set

    @property
    def vertices(self):
        return sorted(self.distance, key=lambda v: v.sort_key)

    def counts(self):
        by_type = {t: sum(1 for v in self.distance if v.vtype == t) for t in (0, 2, 3)}
        return {'vertices': len(self.distance), 'edges': len(self.edges), 'chambers': len(self.chambers),
                'type0': by_type[0], 'type2': by_type[2], 'type3': by_type[3]}

    def chambers_on_edge(self, edge):
        a, b, _ = edge
        return [c for c in self.chambers if a in c and b in c]

    def interior_edges(self):
        ''' Edges whose endpoints both had their stars expanded '''
        return [e for e in self.edges if self.distance[e[0]] < self.radius and self.distance[e[1]] < self.radius]

    def degree_profile(self):
        ''' Counts of ball-internal neighbours, keyed by (vertex type, degree) '''
        degree = {v: 0 for v in self.distance}
        for a, b, _ in self.edges:
            degree[a] += 1
            degree[b] += 1
        profile = {}
        for v, d in degree.items():
            profile[(v.vtype, d)] = profile.get((v.vtype, d), 0) + 1
        return profile

    def summary(self):
        c = self.counts()
        return 'ball p=%d radius=%d: %d vertices (%d/%d/%d by type 0/2/3), %d edges, %d chambers' % (
            self.p, self.radius, c['vertices'], c['type0'], c['type2'], c['type3'], c['edges'], c['chambers'])

    def to_json(self):
        verts = self.vertices
        index = {v: i for i, v in enumerate(verts)}
        vertices = []
        for v in verts:
            item = v.to_json()
            item.update(index=index[v], distance=self.distance[v])
            vertices.append(item)
        return {'p': self.p,
                'radius': self.radius,
                'vertices': vertices,
                'edges': sorted([index[a], index[b], t] for a, b, t in self.edges),
                'chambers': sorted(sorted(index[v] for v in c) for c in self.chambers)}


def ball_estimate(radius, p):
    q = p
    return 3 * (2 * (q ** 3 + q ** 2 + q + 1)) ** radius


def ball(radius, p):
    '''
    Breadth-first ball around the fundamental chamber.
    :param radius: 0..MAX_RADIUS
    :param p: one of SUPPORTED_PRIMES
    '''
    if p not in SUPPORTED_PRIMES:
        raise ValueError('Unsupported prime %s. Use one of %s' % (str(p), str(SUPPORTED_PRIMES)))
    if not 0 <= radius <= MAX_RADIUS:
        raise ValueError('Radius must be between 0 and %d. You input %s' % (MAX_RADIUS, str(radius)))
    if ball_estimate(radius, p) > MAX_BALL_ESTIMATE:
        raise BallTooLargeError('Ball of radius %d at p=%d would hold about %d vertices (cap %d)'
                                % (radius, p, ball_estimate(radius, p), MAX_BALL_ESTIMATE))
    chamber0 = fundamental_chamber(p)
    distance = {v: 0 for v in chamber0}
    edges = {_edge(a, b) for a, b in itertools.combinations(chamber0, 2)}
    chambers = {chamber0}
    frontier = list(chamber0)
    for d in range(radius):
        nxt = []
        for v in sorted(frontier, key=lambda x: x.sort_key):
            s = star(v)
            for w in s.neighbors:
                edges.add(_edge(v, w))
                if w not in distance:
                    distance[w] = d + 1
                    nxt.append(w)
            for c in s.chambers:
                chambers.add(c)
                edges.update(_edge(a, b) for a, b in itertools.combinations(c, 2))
        frontier = nxt
        logger.info('ball p=%d: distance %d done, %d vertices so far', p, d + 1, len(distance))
    return BuildingBall(p, radius, distance, edges, chambers)


def check_ball(b):
    '''
    Local counts around every vertex whose star the ball contains: a special
    vertex meets q^3+q^2+q+1 edges of each type, a non-special vertex meets
    2(q+1) type-2 edges split evenly between primitive and type-2 special
    neighbours, and every interior edge lies in q+1 chambers.
    '''
    q = b.p
    deg = q ** 3 + q ** 2 + q + 1
    inner = {v for v, d in b.distance.items() if d < b.radius}
    by_edge_type = {v: {1: 0, 2: 0} for v in inner}
    by_vertex_type = {v: {0: 0, 2: 0, 3: 0} for v in inner}
    for a, c, t in b.edges:
        for v, w in ((a, c), (c, a)):
            if v in inner:
                by_edge_type[v][t] += 1
                by_vertex_type[v][w.vtype] += 1
    on_edge = {}
    for c in b.chambers:
        for v, w in itertools.combinations(c, 2):
            key = _edge(v, w)
            on_edge[key] = on_edge.get(key, 0) + 1
    checks = {
        'special_degree': all(by_edge_type[v] == {1: deg, 2: deg} for v in inner if v.is_special),
        'non_special_degree': all(by_edge_type[v] == {1: 0, 2: 2 * (q + 1)} for v in inner if not v.is_special),
        'non_special_split': all(by_vertex_type[v] == {0: q + 1, 2: q + 1, 3: 0} for v in inner
                                 if not v.is_special),
        'edge_chambers': all(on_edge.get(e, 0) == q + 1 for e in b.interior_edges()),
    }
    for name, ok in checks.items():
        if not ok:
            logger.warning('ball p=%d radius=%d: %s check failed', b.p, b.radius, name)
    return checks
