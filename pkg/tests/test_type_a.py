import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cambrian.coxeter import build_system, weak_le
from cambrian.errors import NotADiagonal
from cambrian.lattice import induced_subposet, is_isomorphism, is_lattice
from cambrian.sortable import orientation_of
from cambrian.type_a import (
    PolygonQ,
    Triangulation,
    TypeAData,
    all_triangulations,
    build_polygon,
    contains_pattern,
    coxeter_element_of_polygon,
    element_of_perm,
    eta,
    expected_orientation,
    fiber_extremes,
    fibers,
    flip,
    flipped_diagonal,
    perm_from_word,
    perm_of_element,
    perm_weak_le,
    segments_cross,
    slope_increases,
    tamari_like_lattice,
    triangulation_svg,
    verify_eta_is_quotient_map,
    word_from_perm,
)


def catalan(k):
    return comb(2 * k, k) // (k + 1)


def barrings(n):
    return ["".join(b) for b in itertools.product("du", repeat=n + 1)]


# --------------------------------------------------------------------------
# permutations


def test_perm_element_round_trip():
    system = build_system("A3")
    for x in itertools.permutations(range(1, 5)):
        w = element_of_perm(system, x)
        assert perm_of_element(w) == x
        assert w.length == len(word_from_perm(x))


def test_generator_dictionary():
    system = build_system("A3")
    s2 = system.from_word("s2")
    s2s1 = system.from_word("s2s1")
    assert perm_of_element(s2) == (1, 3, 2, 4)
    assert perm_of_element(s2s1) == (3, 1, 2, 4)
    assert perm_from_word((2, 1), 4) == (1, 4, 2, 3)


def test_weak_order_is_inversion_containment():
    system = build_system("A3")
    perms = list(itertools.permutations(range(1, 5)))
    els = [element_of_perm(system, x) for x in perms]
    for x, u in zip(perms, els):
        for y, w in zip(perms, els):
            assert perm_weak_le(x, y) == weak_le(u, w)


# --------------------------------------------------------------------------
# patterns


def test_patterns_of_4213():
    x = (4, 2, 1, 3)
    assert contains_pattern(x, "312")
    assert not contains_pattern(x, "132")
    assert contains_pattern((4, 1, 3), "312")


def test_identity_avoids_everything():
    x = tuple(range(1, 7))
    for p in ("312", "132", "231", "213"):
        assert not contains_pattern(x, p)
    assert not contains_pattern(x, "31_2", "d" * 6)
    assert not contains_pattern(x, "^231", "u" * 6)


def test_barred_patterns_look_at_the_middle_value():
    x = (3, 1, 2)
    assert contains_pattern(x, "31_2", "ddd")
    assert not contains_pattern(x, "31_2", "dud")
    y = (2, 3, 1)
    assert contains_pattern(y, "^231", "dud")
    assert not contains_pattern(y, "^231", "udu")
    with pytest.raises(ValueError):
        contains_pattern(x, "31_2")
    with pytest.raises(ValueError):
        contains_pattern(x, "4321")


# --------------------------------------------------------------------------
# polygon and triangulations


@pytest.mark.parametrize("n", range(1, 6))
def test_polygons_are_convex(n):
    for b in barrings(n):
        Q = build_polygon(n, b)
        assert Q.is_convex()
        xs = [Q.coord(i)[0] for i in Q.labels]
        assert xs == sorted(xs)


def test_polygon_example():
    Q = build_polygon(3, "ddud")
    assert Q.coord(3)[1] > 0
    assert all(Q.coord(i)[1] < 0 for i in (1, 2, 4))
    assert Q.coord(0) == (0, 0) and Q.coord(5) == (5, 0)
    assert Q.ccw_order == (0, 1, 2, 4, 5, 3)


def test_bad_barrings():
    with pytest.raises(ValueError):
        build_polygon(3, "ddd")
    with pytest.raises(ValueError):
        build_polygon(3, "ddxd")
    with pytest.raises(ValueError):
        PolygonQ(0, "d")


@pytest.mark.parametrize("n", range(1, 7))
def test_identity_gives_fan_at_zero(n):
    T = eta(tuple(range(1, n + 2)), build_polygon(n))
    assert T.diagonals == {(0, j) for j in range(2, n + 2)}


def test_eta_of_3246175():
    T = eta((3, 2, 4, 6, 1, 7, 5), build_polygon(6))
    assert T.key() == ((0, 5), (1, 4), (1, 5), (2, 4), (5, 7), (5, 8))


@pytest.mark.parametrize("n", range(1, 7))
def test_triangulation_enumeration(n):
    Q = build_polygon(n, ("du" * n)[: n + 1])
    tris = all_triangulations(Q)
    assert len(tris) == catalan(n + 1)
    assert len({T.key() for T in tris}) == len(tris)
    assert all(T.is_valid() for T in tris)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 7).flatmap(lambda n: st.tuples(
    st.permutations(list(range(1, n + 2))),
    st.text(alphabet="ud", min_size=n + 1, max_size=n + 1))))
def test_eta_gives_triangulations(data):
    perm, barring = data
    n = len(perm) - 1
    T = eta(tuple(perm), build_polygon(n, barring))
    assert len(T.diagonals) == n
    assert T.is_valid()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_eta_is_surjective(n):
    data = TypeAData.build(n)
    for b in barrings(n):
        Q = build_polygon(n, b)
        assert len(fibers(Q, data)) == catalan(n + 1) == len(all_triangulations(Q))


def test_flip():
    Q = build_polygon(3)
    T = eta((1, 2, 3, 4), Q)
    ups = [d for d in sorted(T.diagonals) if slope_increases(T, d)]
    assert len(ups) == 3
    for d in T.diagonals:
        U = flip(T, d)
        assert U.is_valid()
        new = flipped_diagonal(T, d)
        assert flip(U, new) == T
        assert Q.slope(new) != Q.slope(d)
        assert slope_increases(T, d) != slope_increases(U, new)
    with pytest.raises(NotADiagonal):
        flip(T, (1, 2))


def test_crossing_test():
    Q = build_polygon(3)
    assert segments_cross(Q, (0, 2), (1, 3))
    assert not segments_cross(Q, (0, 2), (0, 3))
    assert not segments_cross(Q, (0, 2), (2, 4))


def test_invalid_triangulation_detected():
    Q = build_polygon(3)
    assert not Triangulation(Q, {(0, 2), (1, 3), (0, 4)}).is_valid()
    assert not Triangulation(Q, {(0, 2), (0, 3)}).is_valid()


# --------------------------------------------------------------------------
# lattices on triangulations


def test_flip_lattice_small_cases():
    chain = tamari_like_lattice(build_polygon(1, "dd"))
    assert len(chain) == 2 and len(chain.covers) == 1
    tamari = tamari_like_lattice(build_polygon(3))
    assert len(tamari) == 14 and is_lattice(tamari)
    assert set(tamari.undirected_degrees()) == {3}
    other = tamari_like_lattice(build_polygon(3, "ddud"))
    assert len(other) == 14 and is_lattice(other)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_flip_lattices_are_lattices(n):
    for b in barrings(n):
        assert is_lattice(tamari_like_lattice(build_polygon(n, b)))


# --------------------------------------------------------------------------
# fibers and patterns


def test_tamari_fibers_s4():
    Q = build_polygon(3)
    rep = fiber_extremes(Q)
    assert rep.intervals and rep.fiber_count == 14
    perms = list(itertools.permutations(range(1, 5)))
    assert set(rep.minima.values()) == {x for x in perms if not contains_pattern(x, "312")}
    assert set(rep.maxima.values()) == {x for x in perms if not contains_pattern(x, "132")}
    assert (4, 2, 1, 3) in rep.maxima.values()
    assert (4, 2, 1, 3) not in rep.minima.values()


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_all_up_specialisation(n):
    Q = build_polygon(n, "u" * (n + 1))
    rep = fiber_extremes(Q)
    perms = list(itertools.permutations(range(1, n + 2)))
    assert set(rep.minima.values()) == {x for x in perms if not contains_pattern(x, "231")}
    assert set(rep.maxima.values()) == {x for x in perms if not contains_pattern(x, "213")}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_minima_avoid_barred_patterns(n):
    data = TypeAData.build(n)
    for b in barrings(n):
        rep = fiber_extremes(build_polygon(n, b), data)
        assert rep.intervals and rep.minima_match_patterns


def test_n1_fibers_are_singletons():
    for b in barrings(1):
        rep = fiber_extremes(build_polygon(1, b))
        assert rep.fiber_count == 2
        assert rep.minima == rep.maxima


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fiber_minima_form_sublattice_isomorphic_to_flips(n):
    data = TypeAData.build(n)
    weak = data.weak
    for b in barrings(n):
        Q = build_polygon(n, b)
        rep = fiber_extremes(Q, data)
        index = {x: k for k, x in enumerate(data.perms)}
        mins = sorted(index[x] for x in rep.minima.values())
        keep = set(mins)
        assert all(weak.meet(a, c) in keep and weak.join(a, c) in keep for a in mins for c in mins)
        sub = induced_subposet(weak, mins)
        flips = tamari_like_lattice(Q)
        pos = {T.key(): k for k, T in enumerate(flips.elements)}
        f = [pos[eta(data.perms[m], Q).key()] for m in mins]
        assert is_isomorphism(f, sub, flips)


# --------------------------------------------------------------------------
# Coxeter element of a polygon


def test_coxeter_element_examples():
    assert str(coxeter_element_of_polygon(build_polygon(3))) == "s1s2s3"
    assert str(coxeter_element_of_polygon(build_polygon(3, "uuuu"))) == "s3s2s1"
    for b in barrings(1):
        assert str(coxeter_element_of_polygon(build_polygon(1, b))) == "s1"


@pytest.mark.parametrize("n", range(1, 6))
def test_orientation_dictionary(n):
    system = build_system(f"A{n}")
    for b in barrings(n):
        Q = build_polygon(n, b)
        c = coxeter_element_of_polygon(Q, system)
        assert orientation_of(c).arrows == expected_orientation(Q, system)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_eta_is_quotient_map_all_barrings(n):
    data = TypeAData.build(n)
    for b in barrings(n):
        assert verify_eta_is_quotient_map(build_polygon(n, b), data)


def test_eta_is_quotient_map_n4_structural():
    data = TypeAData.build(4)
    for b in ("ddddd", "ududu", "dduud"):
        assert verify_eta_is_quotient_map(build_polygon(4, b), data)


def test_triangulation_svg():
    T = eta((2, 4, 1, 3), build_polygon(3, "ddud"))
    svg = triangulation_svg(T)
    assert svg.count('class="diagonal"') == 3
    assert svg == triangulation_svg(eta((2, 4, 1, 3), build_polygon(3, "ddud")))
    assert T.to_json() == {"n": 3, "barring": "ddud", "diagonals": [list(d) for d in T.key()]}
