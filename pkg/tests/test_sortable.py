from fractions import Fraction
from math import prod

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cambrian.coxeter import build_system
from cambrian.errors import CyclicOrientation, NotSortable
from cambrian.lattice import is_lattice
from cambrian.sortable import (
    Orientation,
    acyclic_orientations,
    all_coxeter_elements,
    c_vectors,
    cambrian_congruence,
    cambrian_lattice,
    coxeter_element,
    coxeter_element_from_word,
    is_sortable,
    is_sortable_recursive,
    orientation_of,
    parse_coxeter_element,
    sortable_elements,
    sortable_record,
    sorting_word,
)

from conftest import weak_order

# degrees of the basic invariants and the Coxeter number
DEGREES = {
    "A2": ((2, 3), 3),
    "B2": ((2, 4), 4),
    "A3": ((2, 3, 4), 4),
    "B3": ((2, 4, 6), 6),
    "H3": ((2, 6, 10), 10),
    "A4": ((2, 3, 4, 5), 5),
    "B4": ((2, 4, 6, 8), 8),
    "D4": ((2, 4, 4, 6), 6),
    "F4": ((2, 6, 8, 12), 12),
}
for _m in range(3, 9):
    DEGREES[f"I2({_m})"] = ((2, _m), _m)


def w_catalan(label):
    degrees, h = DEGREES[label]
    value = prod(Fraction(d + h, d) for d in degrees)
    assert value.denominator == 1
    return int(value)


@pytest.mark.parametrize("label", sorted(DEGREES))
def test_sortable_counts_equal_w_catalan(label):
    weak = weak_order(label)
    expected = w_catalan(label)
    for c in all_coxeter_elements(weak.system):
        tree = sortable_elements(weak.system, c)
        filtered = [k for k, w in enumerate(weak.elements) if is_sortable(w, c)]
        theta = cambrian_congruence(weak, c)
        assert len(tree) == len(filtered) == len(theta) == expected
        assert sorted(weak.index_of(v) for v in tree.nodes) == filtered == sorted(theta.bottoms)


def test_w_catalan_values():
    assert [w_catalan(x) for x in ("A2", "B2", "A3", "B3", "H3", "A4")] == [5, 6, 14, 20, 32, 42]
    assert [w_catalan(f"I2({m})") for m in range(3, 9)] == [m + 2 for m in range(3, 9)]


# --------------------------------------------------------------------------
# sorting words


def test_b2_sorting_words():
    system = build_system("B2")
    expected = {
        "e": ("e", True),
        "s1": ("s1", True),
        "s2": ("s2", True),
        "s1s2": ("s1s2", True),
        "s2s1": ("s2|s1", False),
        "s1s2s1": ("s1s2|s1", True),
        "s2s1s2": ("s2|s1s2", False),
        "s1s2s1s2": ("s1s2|s1s2", True),
    }
    for text, (word, sortable) in expected.items():
        w = system.from_word(text)
        sw = sorting_word(w, (0, 1))
        assert str(sw) == word
        assert sw.is_decreasing() == sortable


def test_b2_cambrian_classes():
    weak = weak_order("B2")
    theta = cambrian_congruence(weak, parse_coxeter_element(weak.system, "s1s2"))
    classes = sorted(sorted(weak.elements[x].label() for x in cls) for cls in theta.classes)
    assert classes == sorted([["e"], ["s1"], ["s2", "s2s1", "s2s1s2"], ["s1s2"], ["s1s2s1"],
                              ["s1s2s1s2"]])


def test_sorting_word_json():
    system = build_system("A3")
    w = system.from_word("s2s1s3s2")
    sw = sorting_word(w, (0, 1, 2))
    data = sw.to_json()
    assert data["sorting_word"] == str(sw)
    assert sum(len(s) for s in data["subsets"]) == w.length
    assert set(data["skip_table"]) == {"s1", "s2", "s3"}


@pytest.mark.parametrize("label", ["A3", "B3", "H3"])
def test_sortability_independent_of_word_for_c(label):
    weak = weak_order(label)
    for c in all_coxeter_elements(weak.system):
        words = c.reduced_words()
        assert len(words) >= 1
        for w in weak.elements:
            results = {sorting_word(w, word).is_decreasing() for word in words}
            assert len(results) == 1


@pytest.mark.parametrize("label", ["A2", "B2", "I2(5)", "I2(7)", "A3", "B3", "H3", "A4", "D4"])
def test_recursive_sortability_agrees(label):
    weak = weak_order(label)
    for c in all_coxeter_elements(weak.system):
        for w in weak.elements:
            assert is_sortable(w, c) == is_sortable_recursive(w, c)


@pytest.mark.parametrize("label", ["A3", "B3", "H3", "A4"])
def test_sortables_form_sublattice(label):
    weak = weak_order(label)
    for c in all_coxeter_elements(weak.system):
        bottoms = [k for k, w in enumerate(weak.elements) if is_sortable(w, c)]
        keep = set(bottoms)
        for a in bottoms:
            for b in bottoms:
                assert weak.meet(a, b) in keep and weak.join(a, b) in keep


def test_search_tree_shape():
    system = build_system("A3")
    c = parse_coxeter_element(system, "s1s2s3")
    tree = sortable_elements(system, c)
    assert tree.parent[system.identity.act] is None
    for v in tree.nodes[1:]:
        parent_word = tree.words[tree.parent[v.act]].letters
        assert tree.words[v.act].letters[:-1] == parent_word


# --------------------------------------------------------------------------
# Coxeter elements and orientations


def test_orientation_counts():
    assert len(acyclic_orientations(build_system("A3"))) == 4
    assert len(acyclic_orientations(build_system("D4"))) == 8
    assert len(acyclic_orientations(build_system("A1xA1"))) == 1


def test_parse_coxeter_element_forms():
    system = build_system("A3")
    a = parse_coxeter_element(system, "s1s3s2")
    b = parse_coxeter_element(system, "132")
    c = parse_coxeter_element(system, "1>2,3>2")
    d = parse_coxeter_element(system, "2<1, 2<3")
    assert a == b == c == d
    assert str(orientation_of(a)) == "1>2,3>2"
    assert a.initial_letters() == [0, 2]
    # s1s3s2 and s3s1s2 are the same element
    assert parse_coxeter_element(system, "s3s1s2") == a


def test_bad_coxeter_elements():
    system = build_system("A3")
    with pytest.raises(ValueError):
        parse_coxeter_element(system, "s1s1s2")
    with pytest.raises(ValueError):
        parse_coxeter_element(system, "1>2")
    with pytest.raises(ValueError):
        parse_coxeter_element(system, "1?2")


class _TriangleDiagram:
    """Stand-in system whose diagram is a triangle (no finite group has one)."""

    rank = 3

    def diagram_edges(self):
        return [(0, 1), (0, 2), (1, 2)]


def test_cyclic_orientation_rejected():
    with pytest.raises(CyclicOrientation):
        Orientation(_TriangleDiagram(), frozenset({(0, 1), (1, 2), (2, 0)}))
    Orientation(_TriangleDiagram(), frozenset({(0, 1), (1, 2), (0, 2)}))


def test_orientation_must_cover_diagram():
    system = build_system("A3")
    with pytest.raises(ValueError):
        Orientation(system, frozenset({(0, 1)}))
    with pytest.raises(ValueError):
        Orientation(system, frozenset({(0, 1), (1, 2), (0, 2)}))


def test_path_orientation_gives_product_in_order():
    system = build_system("A4")
    arrows = frozenset({(0, 1), (1, 2), (2, 3)})
    assert coxeter_element(Orientation(system, arrows)).word == (0, 1, 2, 3)
    arrows = frozenset({(1, 0), (2, 1), (3, 2)})
    assert coxeter_element(Orientation(system, arrows)).word == (3, 2, 1, 0)


def test_coxeter_element_from_word_round_trip():
    system = build_system("B3")
    for c in all_coxeter_elements(system):
        for word in c.reduced_words():
            assert coxeter_element_from_word(system, word) == c


# --------------------------------------------------------------------------
# Cambrian lattices


@pytest.mark.parametrize("label", ["A2", "B2", "I2(5)", "A3", "B3", "H3"])
def test_cambrian_lattice_verified(label):
    weak = weak_order(label)
    for c in all_coxeter_elements(weak.system):
        lat = cambrian_lattice(weak, c, verify=True)
        assert is_lattice(lat)
        assert set(lat.undirected_degrees()) == {weak.system.rank}


# --------------------------------------------------------------------------
# C-vectors


def test_b2_c_vectors():
    system = build_system("B2")
    c = parse_coxeter_element(system, "s1s2")
    a1, a2 = np.eye(2)
    cv = c_vectors(system.from_word("s2"), c)
    assert np.allclose(cv.vectors[0], a1)
    assert np.allclose(cv.vectors[1], -a2)
    v = system.from_word("s1s2")
    cv = c_vectors(v, c)
    assert np.allclose(cv.vectors[0], v.apply(a1))
    assert np.allclose(cv.vectors[1], v.apply(a2))


def test_c_vectors_of_identity_are_simple_roots():
    system = build_system("H3")
    c = parse_coxeter_element(system, "s1s2s3")
    assert c_vectors(system.identity, c).roots == (0, 1, 2)


def test_c_vectors_need_sortable():
    system = build_system("B2")
    with pytest.raises(NotSortable):
        c_vectors(system.from_word("s2s1"), parse_coxeter_element(system, "s1s2"))
    rec = sortable_record(system.from_word("s2s1"), (0, 1))
    assert "c_vectors" not in rec


@pytest.mark.parametrize("label", ["A3", "B3", "H3"])
def test_c_vectors_are_roots_of_opposite_signs_split_by_descents(label):
    weak = weak_order(label)
    for c in all_coxeter_elements(weak.system):
        for v in sortable_elements(weak.system, c).nodes:
            roots = c_vectors(v, c).roots
            assert len(set(roots)) == weak.system.rank
            negative = {s for s, r in enumerate(roots) if r < 0}
            # negative C-vectors correspond to lower covers of v in the Cambrian lattice
            assert len(negative) == len(v.right_descents())


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 2), max_size=20), st.permutations([0, 1, 2]))
def test_sortable_iff_recursive_random_words_h3(word, order):
    system = build_system("H3")
    w = system.element(word)
    c = coxeter_element_from_word(system, tuple(order))
    assert is_sortable(w, c) == is_sortable_recursive(w, c)
    sw = sorting_word(w, c.word)
    assert system.element(sw.letters) == w
    assert len(sw.letters) == w.length
