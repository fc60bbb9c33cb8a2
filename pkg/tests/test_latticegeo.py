from fractions import Fraction

import numpy as np
import pytest

from sp4_building_zeta.localgroup import J_MATRIX, to_matrix, diag, tau, t_elem, random_k_element
from sp4_building_zeta.latticegeo import (NotAVertexError, BallTooLargeError, hermite_form, contains, lattice_class,
                                          dual_class, is_primitive, vertex_of, vertex_type, figure1_vertex,
                                          fundamental_chamber, act, adjacent, edge_type, star, ball,
                                          elementary_divisors, gram, dual_basis, is_close, neighbors, check_ball,
                                          vertex_from_lattice)


def diag_lattice(*entries):
    return to_matrix(np.diag([Fraction(x) for x in entries]))


# ---------------------------------------------------------
# Lattice algebra
# ---------------------------------------------------------
def test_hermite_form_is_canonical():
    a = to_matrix([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 2, 0], [0, 0, 4, 2]])
    b = to_matrix([[1, 0, 0, 0], [1, 1, 0, 0], [0, 0, 2, 0], [0, 0, 0, 2]])
    assert np.array_equal(hermite_form(a, 2), hermite_form(b, 2))
    h = hermite_form(a, 2)
    assert all(h[i, j] == 0 for i in range(4) for j in range(4) if i > j)
    with pytest.raises(ValueError):
        hermite_form(np.zeros((4, 4), dtype=object), 2)


def test_containment():
    assert contains(diag_lattice(1, 1, 1, 1), diag_lattice(1, 1, 2, 2), 2)
    assert not contains(diag_lattice(1, 1, 2, 2), diag_lattice(1, 1, 1, 1), 2)
    # units are invisible over Z_(3)
    assert contains(diag_lattice(1, 1, 1, 1), diag_lattice(Fraction(1, 2), 1, 1, 5), 3)


def test_class_ignores_homothety():
    assert lattice_class(diag_lattice(2, 2, 2, 2), 2) == lattice_class(diag_lattice(1, 1, 1, 1), 2)
    assert lattice_class(diag_lattice(3, 3, 9, 9), 3) == lattice_class(diag_lattice(1, 1, 3, 3), 3)


def test_dual_and_gram():
    b = diag_lattice(1, 1, 1, 1)
    assert np.array_equal(gram(b), J_MATRIX)
    assert np.array_equal(hermite_form(dual_basis(b), 2), b)
    for p in (2, 3):
        l0, l2, l3 = (lattice_class(diag_lattice(*d), p) for d in ((1, 1, 1, 1), (1, 1, p, p), (1, p, p, p)))
        assert dual_class(l0) == l0
        assert dual_class(l2) == l2
        assert dual_class(l3) == lattice_class(diag_lattice(1, 1, 1, p), p)


def test_non_special_vertex_is_named_by_its_type3_class():
    for p in (2, 3):
        l3 = fundamental_chamber(p)[2]
        from_dual = vertex_from_lattice(diag_lattice(1, 1, 1, p), p)
        assert from_dual == l3
        assert (from_dual.cls.type, from_dual.dual.type) == (3, 1)
        assert from_dual.cls == lattice_class(diag_lattice(1, p, p, p), p)


def test_elementary_divisors():
    p = 3
    assert elementary_divisors(diag_lattice(1, 1, p, p), p) == [0, 0, 1, 1]
    assert elementary_divisors(t_elem(p).matrix, p) == [0, 0, 1, 1]
    assert elementary_divisors(diag_lattice(1, p, p, p * p), p) == [0, 1, 1, 2]
    assert elementary_divisors(tau(p).matrix, p) == [0, 0, 1, 1]


# ---------------------------------------------------------
# Vertices
# ---------------------------------------------------------
def test_vertex_types():
    p = 2
    assert vertex_type(lattice_class(diag_lattice(1, 1, 1, 1), p)) == 0
    assert vertex_type(lattice_class(diag_lattice(1, 1, p, p), p)) == 2
    assert vertex_type(lattice_class(diag_lattice(1, p, p, p), p)) == 3
    with pytest.raises(NotAVertexError):
        vertex_of(lattice_class(diag_lattice(1, 1, 1, p), p))
    with pytest.raises(NotAVertexError):
        figure1_vertex(0, 0, 0, 2, p)


def test_primitivity():
    p = 3
    assert is_primitive(lattice_class(diag_lattice(1, 1, 1, 1), p))
    assert is_primitive(lattice_class(diag_lattice(1, 1, p * p, p * p), p))
    assert not is_primitive(lattice_class(diag_lattice(1, 1, p, p), p))
    assert not is_primitive(lattice_class(diag_lattice(1, p, p, p), p))


def test_figure1_coordinates():
    c = fundamental_chamber(2)
    assert figure1_vertex(0, 0, 0, 0) == c[0]
    assert figure1_vertex(0, 0, 1, 1) == c[1]
    assert figure1_vertex(0, 1, 1, 1) == c[2]
    assert figure1_vertex(1, 1, 1, 1) == c[0]
    assert figure1_vertex(-1, -1, 1, 1).vtype == 0
    assert [v.vtype for v in c] == [0, 2, 3]


def test_group_action():
    rng = np.random.default_rng(8)
    for p in (2, 3):
        l0, l2, l3 = fundamental_chamber(p)
        for _ in range(5):
            assert act(random_k_element(p, rng), l0) == l0
        assert act(tau(p), l0) == l2
        assert act(tau(p), l2) == l0
        assert act(tau(p), l3) == l3
        assert act(diag([1, 1, p, p], p), l0).vtype == 2


def test_chamber_incidence():
    l0, l2, l3 = fundamental_chamber(3)
    assert adjacent(l0, l2) and adjacent(l0, l3) and adjacent(l2, l3)
    assert edge_type(l0, l2) == 1
    assert edge_type(l0, l3) == 2
    assert not adjacent(l0, l0)


# ---------------------------------------------------------
# Stars
# ---------------------------------------------------------
@pytest.mark.parametrize('p', [2, 3])
def test_star_counts(p):
    q = p
    deg = q ** 3 + q ** 2 + q + 1
    l0, l2, l3 = fundamental_chamber(p)
    for v in (l0, l2):
        assert star(v).counts() == {'special': deg, 'non_special': deg, 'chambers': (q + 1) * deg}
    assert star(l3).counts() == {'special': q + 1, 'non_special': q + 1, 'chambers': (q + 1) ** 2}


def test_star_neighbours_are_adjacent():
    l0, l2, l3 = fundamental_chamber(2)
    for v in (l0, l2, l3):
        s = star(v)
        assert len(set(s.neighbors)) == len(s.neighbors)
        assert all(adjacent(v, w) for w in s.neighbors)
        assert all(v in c for c in s.chambers)
    assert l2 in star(l0).neighbors and l3 in star(l0).neighbors


# ---------------------------------------------------------
# Balls
# ---------------------------------------------------------
def test_ball_radius_zero():
    b = ball(0, 2)
    assert b.counts() == {'vertices': 3, 'edges': 3, 'chambers': 1, 'type0': 1, 'type2': 1, 'type3': 1}
    assert sorted(t for _, _, t in b.edges) == [1, 2, 2]


def test_ball_radius_one():
    p, q = 2, 2
    b = ball(1, p)
    assert all(d <= 1 for d in b.distance.values())
    for v in b.vertices:
        s = star(v)
        if v.is_special:
            assert len(s.neighbors) == 2 * (q ** 3 + q ** 2 + q + 1)
        else:
            assert len(s.neighbors) == 2 * (q + 1)
    interior = b.interior_edges()
    assert len(interior) == 3
    for e in interior:
        assert len(b.chambers_on_edge(e)) == q + 1
    # isotropic flags of F_2^4: 15 Lagrangian planes with 3 lines each
    l0 = fundamental_chamber(p)[0]
    assert sum(l0 in c for c in b.chambers) == (q ** 3 + q ** 2 + q + 1) * (q + 1) == 45


def test_ball_json_is_deterministic():
    a = ball(1, 2).to_json()
    b = ball(1, 2).to_json()
    assert a == b
    assert a['vertices'][0]['type'] == 0
    assert all(e[0] < e[1] for e in a['edges'])


def test_ball_limits():
    with pytest.raises(BallTooLargeError):
        ball(3, 5)
    with pytest.raises(ValueError):
        ball(1, 7)
    with pytest.raises(ValueError):
        ball(4, 2)
    with pytest.raises(ValueError):
        ball(-1, 2)


# ---------------------------------------------------------
# Closeness
# ---------------------------------------------------------
def test_close_vertices():
    p = 2
    l0, l2, l3 = fundamental_chamber(p)
    assert is_close(l0, figure1_vertex(0, 1, 1, 2, p))
    assert not is_close(l0, figure1_vertex(0, 0, 2, 2, p))
    assert not is_close(l0, l0)
    assert sorted(t for _, t in neighbors(l3)) == [2] * 6


@pytest.mark.parametrize('p', [2, 3])
def test_local_counts_in_radius_one_ball(p):
    checks = check_ball(ball(1, p))
    assert checks == {'special_degree': True, 'non_special_degree': True, 'non_special_split': True,
                      'edge_chambers': True}


def test_local_counts_are_vacuous_at_radius_zero():
    assert all(check_ball(ball(0, 2)).values())
