"""Coxeter elements, Cambrian congruences, sorting words and sortable elements.

Generators are 0-based internally; user-facing strings use ``s1, s2, ...``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .coxeter import parse_word, word_label
from .errors import CyclicOrientation, NotSortable
from .lattice import congruence_from_edges, induced_subposet, is_isomorphism, local_forcing_closure, quotient


# --------------------------------------------------------------------------
# Orientations and Coxeter elements


@dataclass(frozen=True)
class Orientation:
    """For each diagram edge, the pair ``(before, after)``."""

    system: object = field(compare=False, repr=False)
    arrows: frozenset

    def __post_init__(self):
        edges = {tuple(sorted(a)) for a in self.arrows}
        if edges != set(self.system.diagram_edges()) or len(edges) != len(self.arrows):
            raise ValueError("an orientation must orient every diagram edge exactly once")
        if _linear_extension(self.system.rank, self.arrows) is None:
            raise CyclicOrientation(f"orientation {sorted(self.arrows)} has a directed cycle")

    def before(self, i, j):
        return (i, j) in self.arrows

    def __str__(self):
        return ",".join(f"{a + 1}>{b + 1}" for a, b in sorted(self.arrows))


def _linear_extension(n, arrows):
    preds = {i: set() for i in range(n)}
    for a, b in arrows:
        preds[b].add(a)
    out = []
    placed = set()
    while len(out) < n:
        ready = [i for i in range(n) if i not in placed and preds[i] <= placed]
        if not ready:
            return None
        out.append(ready[0])
        placed.add(ready[0])
    return tuple(out)


@dataclass(frozen=True)
class CoxeterElement:
    """A product of all generators, each once, with a chosen reduced word."""

    word: tuple
    element: object = field(repr=False)

    def __eq__(self, other):
        return isinstance(other, CoxeterElement) and self.element == other.element

    def __hash__(self):
        return hash(self.element)

    @property
    def system(self):
        return self.element.system

    def __str__(self):
        return word_label(self.word)

    def orientation(self):
        return orientation_of(self)

    def initial_letters(self):
        arrows = self.orientation().arrows
        return [s for s in range(self.system.rank) if not any(b == s for _, b in arrows)]

    def reduced_words(self):
        """Every word for ``c`` that uses each generator once (linear extensions)."""
        n = self.system.rank
        arrows = self.orientation().arrows
        out = []
        for perm in itertools.permutations(range(n)):
            pos = {s: k for k, s in enumerate(perm)}
            if all(pos[a] < pos[b] for a, b in arrows):
                out.append(perm)
        return out


def coxeter_element_from_word(system, word):
    word = tuple(word)
    if sorted(word) != list(range(system.rank)):
        raise ValueError(f"{word_label(word)} does not use each generator exactly once")
    return CoxeterElement(word, system.element(word))


def coxeter_element(orientation):
    """The Coxeter element of an orientation, word chosen by smallest index first."""
    word = _linear_extension(orientation.system.rank, orientation.arrows)
    if word is None:
        raise CyclicOrientation("orientation has a directed cycle")
    return coxeter_element_from_word(orientation.system, word)


def orientation_of(c):
    pos = {s: k for k, s in enumerate(c.word)}
    arrows = frozenset((i, j) if pos[i] < pos[j] else (j, i) for i, j in c.system.diagram_edges())
    return Orientation(c.system, arrows)


def acyclic_orientations(system):
    edges = system.diagram_edges()
    out = []
    for flips in itertools.product((False, True), repeat=len(edges)):
        arrows = frozenset((j, i) if f else (i, j) for (i, j), f in zip(edges, flips))
        if _linear_extension(system.rank, arrows) is not None:
            out.append(Orientation(system, arrows))
    return out


def all_coxeter_elements(system):
    return [coxeter_element(o) for o in acyclic_orientations(system)]


def parse_coxeter_element(system, text):
    """Accept a word ``"s1s3s2"`` or an orientation ``"1>2,3>2"``."""
    text = text.strip()
    if ">" in text or "<" in text:
        arrows = set()
        for part in filter(None, (p.strip() for p in text.split(","))):
            m = re.fullmatch(r"s?(\d+)\s*([<>])\s*s?(\d+)", part)
            if m is None:
                raise ValueError(f"cannot parse orientation item {part!r}")
            a, b = int(m.group(1)) - 1, int(m.group(3)) - 1
            arrows.add((a, b) if m.group(2) == ">" else (b, a))
        return coxeter_element(Orientation(system, frozenset(arrows)))
    if text.isdigit():
        text = "".join(f"s{ch}" for ch in text)
    return coxeter_element_from_word(system, parse_word(text, system.rank))


# --------------------------------------------------------------------------
# Cambrian congruences


def cambrian_generating_edges(weak, c):
    """Edges of the chains ``s_j < s_j s_i < ...`` for each ``i`` before ``j``.

    The chain for a diagram edge with ``m = m(i, j)`` stops at the
    alternating word of ``m - 1`` letters, contributing ``m - 2`` covers.
    """
    system = weak.system
    edges = set()
    for i, j in c.orientation().arrows:
        m = system.m(i, j)
        word = [j]
        prev = system.element(word)
        for k in range(1, m - 1):
            word.append(i if k % 2 == 1 else j)
            cur = system.element(word)
            edges.add(weak.cover_edge(prev, cur))
            prev = cur
    return frozenset(edges)


def cambrian_congruence(weak, c):
    seed = cambrian_generating_edges(weak, c)
    return congruence_from_edges(weak, local_forcing_closure(weak, seed))


# --------------------------------------------------------------------------
# Sorting words


@dataclass(frozen=True)
class SortingWord:
    order: tuple
    letters: tuple
    passes: tuple      # letters added in each pass
    skips: tuple       # skips[s] = prefix length before s is first tested and rejected

    @property
    def dividers(self):
        out, at = [], 0
        for p in self.passes[:-1]:
            at += len(p)
            out.append(at)
        return tuple(out)

    @property
    def subsets(self):
        return tuple(frozenset(p) for p in self.passes)

    def is_decreasing(self):
        subs = self.subsets
        return all(subs[k] >= subs[k + 1] for k in range(len(subs) - 1))

    def __str__(self):
        return "|".join(word_label(p) for p in self.passes) if self.passes else "e"

    def to_json(self):
        return {
            "order": [s + 1 for s in self.order],
            "sorting_word": str(self),
            "letters": [s + 1 for s in self.letters],
            "dividers": list(self.dividers),
            "subsets": [sorted(s + 1 for s in sub) for sub in self.subsets],
            "skip_table": {f"s{s + 1}": j for s, j in enumerate(self.skips)},
        }


def sorting_word(w, order):
    """The ``order``-sorting word of ``w``: cyclic passes through ``order``.

    Generators never rejected while the word is being built are recorded as
    skipped at the final position.
    """
    order = tuple(order)
    system = w.system
    gens = system.generators
    n = len(order)
    letters, passes = [], []
    skips = [None] * system.rank
    current = w
    pos = 0
    this_pass = []
    while not current.is_identity():
        s = order[pos]
        if current.has_left_descent(s):
            letters.append(s)
            this_pass.append(s)
            current = gens[s] * current
        elif skips[s] is None:
            skips[s] = len(letters)
        pos += 1
        if pos == n:
            pos = 0
            passes.append(tuple(this_pass))
            this_pass = []
    if this_pass:
        passes.append(tuple(this_pass))
    k = len(letters)
    skips = tuple(k if j is None else j for j in skips)
    return SortingWord(order, tuple(letters), tuple(passes), skips)


def _as_word(c):
    return c.word if isinstance(c, CoxeterElement) else tuple(c)


def is_sortable(w, c):
    return sorting_word(w, _as_word(c)).is_decreasing()


def is_sortable_recursive(w, c):
    """Sortability by induction on length and rank.

    With ``s`` initial in ``c``: if ``w >= s`` recurse on ``(sw, scs)``;
    otherwise ``w`` must lie in the parabolic subgroup without ``s`` and we
    recurse on ``(w, sc)`` there.
    """
    system = w.system
    gens = system.generators
    word = _as_word(c)
    allowed = sum(1 << s for s in word)
    while True:
        if w.is_identity():
            return True
        if not word:
            return False
        s = word[0]
        if w.has_left_descent(s):
            w = gens[s] * w
            word = word[1:] + (s,)
        else:
            allowed &= ~(1 << s)
            word = word[1:]
            if not system.in_parabolic(w, allowed):
                return False


@dataclass
class SearchTree:
    order: tuple
    nodes: list                      # GroupElements in visit order
    parent: dict                     # act -> parent act (identity maps to None)
    children: dict                   # act -> list of child acts
    words: dict                      # act -> SortingWord

    def __len__(self):
        return len(self.nodes)


def sortable_elements(system, c):
    """Traverse the c-sortable elements along the sorting-word search tree.

    A child of ``v`` is ``vs`` whose sorting word is that of ``v`` with ``s``
    appended, and which is again sortable.
    """
    order = _as_word(c)
    gens = system.generators
    root = system.identity
    nodes = [root]
    words = {root.act: sorting_word(root, order)}
    parent = {root.act: None}
    children = {}
    stack = [root]
    while stack:
        v = stack.pop()
        vword = words[v.act]
        kids = []
        for s in range(system.rank):
            if v.has_right_descent(s):
                continue
            u = v * gens[s]
            uword = sorting_word(u, order)
            if uword.letters == vword.letters + (s,) and uword.is_decreasing():
                words[u.act] = uword
                parent[u.act] = v.act
                kids.append(u)
        children[v.act] = [u.act for u in kids]
        nodes.extend(kids)
        stack.extend(reversed(kids))
    return SearchTree(order, nodes, parent, children, words)


def cambrian_lattice(weak, c, verify=True):
    """Subposet of the weak order induced by the c-sortable elements.

    With ``verify`` the sortables are checked to be exactly the class
    bottoms of the c-Cambrian congruence, and the subposet to be isomorphic
    to the quotient and to be a lattice.
    """
    tree = sortable_elements(weak.system, c)
    idx = sorted(weak.index_of(v) for v in tree.nodes)
    lat = induced_subposet(weak, idx)
    if verify:
        from .lattice import is_lattice

        theta = cambrian_congruence(weak, c)
        if sorted(theta.bottoms) != idx:
            raise AssertionError("sortable elements differ from Cambrian class bottoms")
        q = quotient(weak, theta)
        pos = {b: k for k, b in enumerate(idx)}
        f = [pos[b] for b in theta.bottoms]
        if not is_isomorphism(f, q, lat):
            raise AssertionError("sortable subposet is not isomorphic to the Cambrian quotient")
        if not is_lattice(lat):
            raise AssertionError("sortable subposet is not a lattice")
    return lat


# --------------------------------------------------------------------------
# C-vectors


@dataclass(frozen=True)
class CVectorSet:
    order: tuple
    roots: tuple       # signed root index per generator
    vectors: np.ndarray = field(compare=False)

    def __len__(self):
        return len(self.roots)


def c_vectors(v, c):
    """``C^{s}(v) = a_1 ... a_j . alpha_s`` where the sorting word skips ``s`` after ``j``."""
    order = _as_word(c)
    sw = sorting_word(v, order)
    if not sw.is_decreasing():
        raise NotSortable(f"{v.label()} is not {word_label(order)}-sortable")
    system = v.system
    roots = []
    for s in range(system.rank):
        prefix = system.element(sw.letters[: sw.skips[s]])
        roots.append(prefix.act_on_root(s))
    vectors = np.array([system.roots.vector(r) for r in roots]) + 0.0
    return CVectorSet(order, tuple(roots), vectors)


def sortable_record(v, c):
    """JSON-ready description of a sortable element."""
    order = _as_word(c)
    sw = sorting_word(v, order)
    rec = sw.to_json()
    rec["element"] = v.label()
    if sw.is_decreasing():
        cv = c_vectors(v, order)
        rec["c_vectors"] = {
            f"s{s + 1}": [round(float(x), 12) + 0.0 for x in cv.vectors[s]] for s in range(len(cv))
        }
    return rec
