"""Permutations, barred polygons, triangulations and the map eta.

The polygon Q for ``n`` has vertices ``0 .. n+2``; vertex ``i`` sits at
``(i, +-i(n+2-i))`` with the sign chosen by its barring, so x-coordinates
increase with the label and the polygon is convex. Slopes are compared
exactly on these integer coordinates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .coxeter import build_system, enumerate_group
from .errors import NotADiagonal
from .lattice import HasseLattice, is_isomorphism, is_lattice, is_lattice_homomorphism, quotient
from .sortable import CoxeterElement, cambrian_congruence, orientation_of

UP, DOWN = "u", "d"

PATTERNS = ("312", "132", "231", "213", "31_2", "^231")


# --------------------------------------------------------------------------
# permutations <-> group elements of A_n


def perm_from_word(word, size):
    """One-line notation of ``s_{a1} ... s_{ak}``; right multiplication swaps positions."""
    x = list(range(1, size + 1))
    for s in word:
        x[s], x[s + 1] = x[s + 1], x[s]
    return tuple(x)


def word_from_perm(x):
    """A reduced word for a permutation (bubble sort on adjacent descents)."""
    x = list(x)
    out = []
    while True:
        for i in range(len(x) - 1):
            if x[i] > x[i + 1]:
                x[i], x[i + 1] = x[i + 1], x[i]
                out.append(i)
                break
        else:
            return tuple(reversed(out))


def element_of_perm(system, x):
    return system.element(word_from_perm(x))


def perm_of_element(w):
    return perm_from_word(w.word(), w.system.rank + 1)


def inversion_pairs(x):
    """Value pairs ``(a, b)``, ``a < b``, with ``b`` left of ``a``.

    This is the left inversion set, so the right weak order is containment.
    """
    pos = {v: i for i, v in enumerate(x)}
    return frozenset((a, b) for a, b in itertools.combinations(sorted(x), 2) if pos[b] < pos[a])


def perm_weak_le(x, y):
    return inversion_pairs(x) <= inversion_pairs(y)


def cycle_permutation(cycle, size):
    """One-line notation of the cycle mapping ``cycle[k] -> cycle[k+1]``."""
    image = list(range(1, size + 1))
    for k, a in enumerate(cycle):
        image[a - 1] = cycle[(k + 1) % len(cycle)]
    return tuple(image)


# --------------------------------------------------------------------------
# patterns


def contains_pattern(x, pattern, barring=None):
    """Occurrence of a 3-letter pattern as a (not necessarily adjacent) subsequence.

    ``"31_2"`` is 312 whose "2" is lower-barred; ``"^231"`` is 231 whose
    "2" is upper-barred. ``barring[v - 1]`` is the bar of value ``v``.
    """
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}; choose from {PATTERNS}")
    digits = pattern.replace("_", "").replace("^", "")
    bar = DOWN if "_" in pattern else UP if "^" in pattern else None
    if bar is not None and barring is None:
        raise ValueError("barred patterns need a barring")
    shape = tuple(int(d) for d in digits)
    for i, j, k in itertools.combinations(range(len(x)), 3):
        trio = (x[i], x[j], x[k])
        ranks = tuple(sorted(trio).index(v) + 1 for v in trio)
        if ranks != shape:
            continue
        if bar is None or barring[trio[shape.index(2)] - 1] == bar:
            return True
    return False


def contains_barred_pattern(x, pattern, barring=None):
    return contains_pattern(x, pattern, barring)


def avoids_cambrian_patterns(x, barring):
    return not contains_pattern(x, "31_2", barring) and not contains_pattern(x, "^231", barring)


# --------------------------------------------------------------------------
# polygon and triangulations


def parse_barring(text, n=None):
    text = text.strip().lower()
    if not text or set(text) - {UP, DOWN}:
        raise ValueError(f"barring must be a string over 'u'/'d', got {text!r}")
    if n is not None and len(text) != n + 1:
        raise ValueError(f"barring for n={n} needs {n + 1} letters, got {len(text)}")
    return text


@dataclass(frozen=True)
class PolygonQ:
    n: int
    barring: str

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        parse_barring(self.barring, self.n)

    @property
    def labels(self):
        return range(self.n + 3)

    def coord(self, i):
        if i == 0 or i == self.n + 2:
            return (i, 0)
        h = i * (self.n + 2 - i)
        return (i, h if self.barring[i - 1] == UP else -h)

    def is_up(self, i):
        return 0 < i < self.n + 2 and self.barring[i - 1] == UP

    @cached_property
    def bottom_chain(self):
        return (0, *[i for i in range(1, self.n + 2) if not self.is_up(i)], self.n + 2)

    @cached_property
    def top_chain(self):
        return (0, *[i for i in range(1, self.n + 2) if self.is_up(i)], self.n + 2)

    @cached_property
    def ccw_order(self):
        """Vertices counter-clockwise from 0: bottom left to right, then top right to left."""
        return self.bottom_chain + tuple(reversed(self.top_chain[1:-1]))

    @cached_property
    def boundary_edges(self):
        cyc = self.ccw_order
        return frozenset(tuple(sorted((cyc[k], cyc[(k + 1) % len(cyc)]))) for k in range(len(cyc)))

    def is_convex(self):
        cyc = [self.coord(i) for i in self.ccw_order]
        m = len(cyc)
        for k in range(m):
            if _orient(cyc[k], cyc[(k + 1) % m], cyc[(k + 2) % m]) <= 0:
                return False
        return True

    def slope(self, d):
        (x1, y1), (x2, y2) = self.coord(d[0]), self.coord(d[1])
        return Fraction(y2 - y1, x2 - x1)


def build_polygon(n, barring=None):
    return PolygonQ(n, DOWN * (n + 1) if barring is None else parse_barring(barring, n))


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def segments_cross(Q, d1, d2):
    """Proper crossing of two diagonals (shared endpoints do not count)."""
    if set(d1) & set(d2):
        return False
    a, b = Q.coord(d1[0]), Q.coord(d1[1])
    c, d = Q.coord(d2[0]), Q.coord(d2[1])
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    return (o1 > 0) != (o2 > 0) and (o3 > 0) != (o4 > 0) and 0 not in (o1, o2, o3, o4)


@dataclass(frozen=True)
class Triangulation:
    polygon: PolygonQ
    diagonals: frozenset

    def __post_init__(self):
        object.__setattr__(self, "diagonals", frozenset(tuple(sorted(d)) for d in self.diagonals))

    def key(self):
        return tuple(sorted(self.diagonals))

    def is_valid(self):
        Q = self.polygon
        if len(self.diagonals) != Q.n:
            return False
        if self.diagonals & Q.boundary_edges:
            return False
        return not any(segments_cross(Q, a, b) for a, b in itertools.combinations(self.diagonals, 2))

    def to_json(self):
        return {"n": self.polygon.n, "barring": self.polygon.barring,
                "diagonals": [list(d) for d in self.key()]}


def eta(x, Q):
    """Triangulation swept out by the path evolution of ``x``.

    Starting from the bottom boundary path, a lower-barred entry is removed
    from the path and an upper-barred entry is inserted.
    """
    path = list(Q.bottom_chain)
    edges = set(zip(path, path[1:]))
    for v in x:
        if Q.is_up(v):
            k = next(i for i, p in enumerate(path) if p > v)
            path.insert(k, v)
        else:
            path.remove(v)
        edges.update(zip(path, path[1:]))
    return Triangulation(Q, frozenset(e for e in edges if e not in Q.boundary_edges))


def all_triangulations(Q):
    """Every triangulation, by choosing the apex over the edge (first, last)."""
    cyc = Q.ccw_order

    def rec(lo, hi):
        if hi - lo < 2:
            return [frozenset()]
        out = []
        for k in range(lo + 1, hi):
            here = set()
            if k - lo > 1:
                here.add(tuple(sorted((cyc[lo], cyc[k]))))
            if hi - k > 1:
                here.add(tuple(sorted((cyc[k], cyc[hi]))))
            for left in rec(lo, k):
                for right in rec(k, hi):
                    out.append(left | right | here)
        return out

    tris = [Triangulation(Q, d) for d in rec(0, len(cyc) - 1)]
    return sorted(tris, key=Triangulation.key)


def _neighbours(T):
    adj = {v: set() for v in T.polygon.labels}
    for a, b in T.diagonals | T.polygon.boundary_edges:
        adj[a].add(b)
        adj[b].add(a)
    return adj


def flip(T, d):
    """Replace diagonal ``d`` by the other diagonal of its quadrilateral."""
    d = tuple(sorted(d))
    if d not in T.diagonals:
        raise NotADiagonal(f"{d} is not a diagonal of the triangulation")
    adj = _neighbours(T)
    apexes = sorted(adj[d[0]] & adj[d[1]])
    if len(apexes) != 2:
        raise NotADiagonal(f"{d} does not bound exactly two triangles")
    new = tuple(apexes)
    return Triangulation(T.polygon, (T.diagonals - {d}) | {new})


def flipped_diagonal(T, d):
    return next(iter(flip(T, d).diagonals - T.diagonals))


def slope_increases(T, d):
    Q = T.polygon
    return Q.slope(flipped_diagonal(T, d)) > Q.slope(tuple(sorted(d)))


def tamari_like_lattice(Q):
    """Flip graph on triangulations, oriented upward by increasing slope."""
    tris = all_triangulations(Q)
    index = {T.key(): k for k, T in enumerate(tris)}
    covers = []
    for k, T in enumerate(tris):
        for d in sorted(T.diagonals):
            if slope_increases(T, d):
                covers.append((k, index[flip(T, d).key()]))
    return HasseLattice(tris, covers)


# --------------------------------------------------------------------------
# Coxeter element of a polygon and eta as a quotient map


def coxeter_element_of_polygon(Q, system=None):
    """The (n+1)-cycle read counter-clockwise around Q, as a Coxeter element."""
    system = build_system(f"A{Q.n}") if system is None else system
    cycle = [v for v in Q.ccw_order if 0 < v < Q.n + 2]
    c = element_of_perm(system, cycle_permutation(cycle, Q.n + 1))
    word = c.word()
    if sorted(word) != list(range(system.rank)):
        raise AssertionError("cycle read from Q is not a Coxeter element")
    return CoxeterElement(word, c)


def expected_orientation(Q, system):
    """``i-1`` before ``i`` when ``i`` is lower-barred, else ``i`` before ``i-1``."""
    arrows = set()
    for i in range(2, Q.n + 1):
        a, b = i - 2, i - 1           # generators s_{i-1}, s_i, 0-based
        arrows.add((b, a) if Q.is_up(i) else (a, b))
    return frozenset(arrows)


@dataclass
class TypeAData:
    """Weak order of S_{n+1} together with one-line notations."""

    weak: object
    perms: list

    @classmethod
    def build(cls, n):
        weak = enumerate_group(build_system(f"A{n}"))
        perms = [perm_of_element(w) for w in weak.elements]
        return cls(weak, perms)


def fibers(Q, data=None):
    """Group weak-order indices by eta image; keys are triangulation keys."""
    data = TypeAData.build(Q.n) if data is None else data
    out = {}
    for k, x in enumerate(data.perms):
        out.setdefault(eta(x, Q).key(), []).append(k)
    return out


@dataclass
class FiberReport:
    fiber_count: int
    intervals: bool
    minima: dict        # triangulation key -> permutation
    maxima: dict
    minima_match_patterns: bool


def fiber_extremes(Q, data=None):
    """Fiber minima/maxima, checking fibers are intervals and minima avoid 31_2 and ^231."""
    data = TypeAData.build(Q.n) if data is None else data
    weak = data.weak
    groups = fibers(Q, data)
    minima, maxima = {}, {}
    intervals = True
    for key, members in groups.items():
        mask = sum(1 << m for m in members)
        lo = [m for m in members if weak.below[m] & mask == 1 << m]
        hi = [m for m in members if weak.above[m] & mask == 1 << m]
        if len(lo) != 1 or len(hi) != 1 or weak.interval(lo[0], hi[0]) != mask:
            intervals = False
            continue
        minima[key] = data.perms[lo[0]]
        maxima[key] = data.perms[hi[0]]
    min_set = set(minima.values())
    avoiders = {x for x in data.perms if avoids_cambrian_patterns(x, Q.barring)}
    return FiberReport(len(groups), intervals, minima, maxima, min_set == avoiders)


def verify_eta_is_quotient_map(Q, data=None, exhaustive_limit=200):
    """eta fibers are the Cambrian classes and eta is a lattice homomorphism.

    Up to ``exhaustive_limit`` elements the homomorphism property is checked
    over all pairs; beyond it, via the isomorphism between the quotient and
    the flip lattice (the quotient map is always a homomorphism).
    """
    data = TypeAData.build(Q.n) if data is None else data
    weak = data.weak
    c = coxeter_element_of_polygon(Q, weak.system)
    theta = cambrian_congruence(weak, c)
    groups = fibers(Q, data)
    if sorted(tuple(sorted(g)) for g in groups.values()) != sorted(theta.classes):
        return False
    flips = tamari_like_lattice(Q)
    if not is_lattice(flips):
        return False
    pos = {T.key(): k for k, T in enumerate(flips.elements)}
    q = quotient(weak, theta)
    f_quot = [pos[eta(data.perms[b], Q).key()] for b in theta.bottoms]
    if not is_isomorphism(f_quot, q, flips):
        return False
    if len(weak) <= exhaustive_limit:
        f = [pos[eta(x, Q).key()] for x in data.perms]
        return is_lattice_homomorphism(f, weak, flips)
    return True


def orientation_matches_polygon(Q, system=None):
    c = coxeter_element_of_polygon(Q, system)
    return orientation_of(c).arrows == expected_orientation(Q, c.system)


def triangulation_svg(T, size=400):
    """Drawing of Q with the diagonals of T."""
    Q = T.polygon
    pts = {i: Q.coord(i) for i in Q.labels}
    xs = [p[0] for p in pts.values()]
    ys = [p[1] for p in pts.values()]
    pad = 1.0
    w = max(xs) - min(xs) + 2 * pad
    h = max(ys) - min(ys) + 2 * pad
    scale = size / max(w, h)

    def xy(i):
        x, y = pts[i]
        return f"{(x - min(xs) + pad) * scale:.3f},{(max(ys) - y + pad) * scale:.3f}"

    cyc = Q.ccw_order
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        '  <rect width="100%" height="100%" fill="white"/>',
        '  <polygon class="boundary" points="' + " ".join(xy(i) for i in cyc)
        + '" fill="none" stroke="black" stroke-width="2"/>',
    ]
    for a, b in T.key():
        (x1, y1), (x2, y2) = xy(a).split(","), xy(b).split(",")
        lines.append(f'  <line class="diagonal" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                     'stroke="steelblue" stroke-width="1.5"/>')
    for i in Q.labels:
        x, y = xy(i).split(",")
        lines.append(f'  <text x="{x}" y="{y}" font-size="12" font-family="sans-serif" '
                     f'text-anchor="middle">{i}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
