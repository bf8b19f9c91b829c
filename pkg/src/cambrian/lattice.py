"""Finite lattices given by explicit Hasse diagrams, and their congruences.

Elements are referred to by index. Down-sets and up-sets are kept as
Python ints used as bitsets, which keeps meet/join a handful of big-int
operations even for a few thousand elements.

Edge sets are frozensets of cover-edge indices into ``L.covers``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

from .errors import NotACongruence, NotALattice, NotPolygonal


def iter_bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class HasseLattice:
    """A finite poset given by its cover relations ``(lower, upper)``."""

    def __init__(self, elements, covers):
        self.elements = list(elements)
        self.covers = [tuple(c) for c in covers]
        n = len(self.elements)
        self.edge_index = {c: k for k, c in enumerate(self.covers)}
        self.upper_covers = [[] for _ in range(n)]
        self.lower_covers = [[] for _ in range(n)]
        for a, b in self.covers:
            self.upper_covers[a].append(b)
            self.lower_covers[b].append(a)
        self.topological_order = self._toposort()
        below = [1 << i for i in range(n)]
        for x in self.topological_order:
            for y in self.lower_covers[x]:
                below[x] |= below[y]
        above = [1 << i for i in range(n)]
        for x in reversed(self.topological_order):
            for y in self.upper_covers[x]:
                above[x] |= above[y]
        self.below = below
        self.above = above

    def _toposort(self):
        n = len(self.elements)
        indeg = [len(self.lower_covers[i]) for i in range(n)]
        ready = [i for i in range(n) if indeg[i] == 0]
        order = []
        while ready:
            x = ready.pop()
            order.append(x)
            for y in self.upper_covers[x]:
                indeg[y] -= 1
                if indeg[y] == 0:
                    ready.append(y)
        if len(order) != n:
            raise ValueError("cover relation has a cycle")
        return order

    @classmethod
    def from_relation(cls, elements, relation):
        """Build from any relation whose transitive closure is the order."""
        n = len(elements)
        succ = [0] * n
        for a, b in relation:
            if a != b:
                succ[a] |= 1 << b
        # transitive closure, then reduction
        order = _toposort_masks(n, succ)
        strict_above = [0] * n
        for x in reversed(order):
            acc = 0
            for y in iter_bits(succ[x]):
                acc |= (1 << y) | strict_above[y]
            strict_above[x] = acc
        covers = []
        for x in range(n):
            indirect = 0
            for y in iter_bits(strict_above[x]):
                indirect |= strict_above[y]
            for y in iter_bits(strict_above[x] & ~indirect):
                covers.append((x, y))
        return cls(elements, covers)

    def __len__(self):
        return len(self.elements)

    def leq(self, u, w):
        return bool(self.below[w] >> u & 1)

    def interval(self, u, w):
        """Bitset of ``[u, w]``."""
        return self.above[u] & self.below[w]

    def meet(self, u, w):
        common = self.below[u] & self.below[w]
        for x in iter_bits(common):
            if self.below[x] == common:
                return x
        raise NotALattice(f"elements {u} and {w} have no meet", witness=(u, w))

    def join(self, u, w):
        common = self.above[u] & self.above[w]
        for x in iter_bits(common):
            if self.above[x] == common:
                return x
        raise NotALattice(f"elements {u} and {w} have no join", witness=(u, w))

    def bottom(self):
        mins = [i for i in range(len(self)) if not self.lower_covers[i]]
        if len(mins) != 1:
            raise NotALattice("no unique minimum", witness=tuple(mins))
        return mins[0]

    def top(self):
        maxs = [i for i in range(len(self)) if not self.upper_covers[i]]
        if len(maxs) != 1:
            raise NotALattice("no unique maximum", witness=tuple(maxs))
        return maxs[0]

    def is_transitively_reduced(self):
        for a, b in self.covers:
            for c in self.upper_covers[a]:
                if c != b and self.leq(c, b):
                    return False
        return True

    def undirected_degrees(self):
        return [len(self.upper_covers[i]) + len(self.lower_covers[i]) for i in range(len(self))]

    @cached_property
    def polygons(self):
        return polygonal_intervals(self)

    @cached_property
    def _forcing_triggers(self):
        triggers = {}
        for poly in self.polygons:
            for e in poly.bottom_edges + poly.top_edges:
                triggers.setdefault(e, []).append(poly)
        return triggers

    def edge_set(self, pairs):
        """EdgeSet from ``(lower, upper)`` index pairs; raises KeyError for non-covers."""
        return frozenset(self.edge_index[tuple(p)] for p in pairs)


def _toposort_masks(n, succ):
    indeg = [0] * n
    for x in range(n):
        for y in iter_bits(succ[x]):
            indeg[y] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    order = []
    while ready:
        x = ready.pop()
        order.append(x)
        for y in iter_bits(succ[x]):
            indeg[y] -= 1
            if indeg[y] == 0:
                ready.append(y)
    if len(order) != n:
        raise ValueError("relation has a cycle")
    return order


class WeakOrder(HasseLattice):
    """Right weak order of a finite Coxeter group, elements are GroupElements."""

    def __init__(self, system, elements, covers, index=None):
        super().__init__(elements, covers)
        self.system = system
        self.index = index if index is not None else {w.act: k for k, w in enumerate(elements)}

    def index_of(self, w):
        return self.index[w.act]

    def cover_edge(self, lower, upper):
        return self.edge_index[(self.index_of(lower), self.index_of(upper))]


def meet(L, u, w):
    return L.meet(u, w)


def join(L, u, w):
    return L.join(u, w)


# --------------------------------------------------------------------------
# Polygonal intervals and local forcing


@dataclass(frozen=True)
class PolygonalInterval:
    bottom: int
    top: int
    chains: tuple          # two tuples of element indices, bottom..top
    chain_edges: tuple     # two tuples of edge indices, bottom..top
    bottom_edges: tuple
    top_edges: tuple
    side_edges: tuple
    opposite: dict         # edge -> edge under the half-turn

    @property
    def size(self):
        return 2 * len(self.chain_edges[0])


def polygonal_intervals(L):
    """``[u, us v ut]`` for every element and pair of upper covers.

    Each interval is checked to be a single cycle; a failure raises
    NotPolygonal (it cannot happen in a weak order).
    """
    out = []
    for u in range(len(L)):
        for a, b in combinations(sorted(L.upper_covers[u]), 2):
            top = L.join(a, b)
            out.append(_polygon(L, u, a, b, top))
    return out


def _polygon(L, u, a, b, top):
    members = L.interval(u, top)
    count = bin(members).count("1")

    def walk(start):
        chain = [u, start]
        while chain[-1] != top:
            ups = [y for y in L.upper_covers[chain[-1]] if members >> y & 1]
            if len(ups) != 1:
                raise NotPolygonal(f"interval [{u}, {top}] is not a cycle", witness=(u, top))
            chain.append(ups[0])
        return tuple(chain)

    ca, cb = walk(a), walk(b)
    if len(ca) != len(cb) or len(ca) + len(cb) - 2 != count:
        raise NotPolygonal(f"interval [{u}, {top}] is not a cycle", witness=(u, top))
    ea = tuple(L.edge_index[(ca[k], ca[k + 1])] for k in range(len(ca) - 1))
    eb = tuple(L.edge_index[(cb[k], cb[k + 1])] for k in range(len(cb) - 1))
    m = len(ea)
    opposite = {}
    for k in range(m):
        opposite[ea[k]] = eb[m - 1 - k]
        opposite[eb[m - 1 - k]] = ea[k]
    return PolygonalInterval(
        bottom=u,
        top=top,
        chains=(ca, cb),
        chain_edges=(ea, eb),
        bottom_edges=(ea[0], eb[0]),
        top_edges=(ea[-1], eb[-1]),
        side_edges=ea[1:-1] + eb[1:-1],
        opposite=opposite,
    )


def local_forcing_closure(L, seed):
    """Smallest edge set containing ``seed`` closed under polygon forcing.

    In every polygonal interval, a contracted bottom or top edge forces its
    opposite edge and all side edges.
    """
    closed = set(seed)
    triggers = L._forcing_triggers
    stack = list(closed)
    while stack:
        e = stack.pop()
        for poly in triggers.get(e, ()):
            for f in (poly.opposite[e], *poly.side_edges):
                if f not in closed:
                    closed.add(f)
                    stack.append(f)
    return frozenset(closed)


# --------------------------------------------------------------------------
# Congruences


@dataclass(frozen=True)
class Congruence:
    lattice: HasseLattice
    class_of: tuple
    classes: tuple
    bottoms: tuple
    tops: tuple
    edges: frozenset

    def __len__(self):
        return len(self.classes)

    def pi_down(self, x):
        return self.bottoms[self.class_of[x]]

    def pi_up(self, x):
        return self.tops[self.class_of[x]]

    def to_json(self):
        return {
            "classes": [list(c) for c in self.classes],
            "bottoms": list(self.bottoms),
            "tops": list(self.tops),
            "contracted_edges": [list(self.lattice.covers[e]) for e in sorted(self.edges)],
        }


def congruence_from_edges(L, edges):
    """Congruence whose classes are the components of the contracted edges.

    Checks that classes are intervals and that both projections preserve
    order; raises NotACongruence with a witness otherwise.
    """
    n = len(L)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in edges:
        a, b = L.covers[e]
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for x in range(n):
        groups.setdefault(find(x), []).append(x)
    classes = sorted(groups.values(), key=lambda c: c[0])
    class_of = [0] * n
    bottoms, tops = [], []
    for k, cls in enumerate(classes):
        mask = 0
        for x in cls:
            class_of[x] = k
            mask |= 1 << x
        lo = [x for x in cls if L.below[x] & mask == 1 << x]
        hi = [x for x in cls if L.above[x] & mask == 1 << x]
        if len(lo) != 1 or len(hi) != 1 or L.interval(lo[0], hi[0]) != mask:
            raise NotACongruence(f"class {cls} is not an interval", witness=tuple(cls))
        bottoms.append(lo[0])
        tops.append(hi[0])
    for a, b in L.covers:
        if not L.leq(bottoms[class_of[a]], bottoms[class_of[b]]):
            raise NotACongruence("projection down is not order-preserving", witness=(a, b))
        if not L.leq(tops[class_of[a]], tops[class_of[b]]):
            raise NotACongruence("projection up is not order-preserving", witness=(a, b))
    contracted = frozenset(
        k for k, (a, b) in enumerate(L.covers) if class_of[a] == class_of[b]
    )
    return Congruence(
        lattice=L,
        class_of=tuple(class_of),
        classes=tuple(tuple(c) for c in classes),
        bottoms=tuple(bottoms),
        tops=tuple(tops),
        edges=contracted,
    )


def quotient(L, theta):
    """Quotient lattice; class ``k`` is element ``k``, labeled by its bottom."""
    rel = {
        (theta.class_of[a], theta.class_of[b])
        for a, b in L.covers
        if theta.class_of[a] != theta.class_of[b]
    }
    labels = [L.elements[b] for b in theta.bottoms]
    return HasseLattice.from_relation(labels, sorted(rel))


def induced_subposet(L, indices):
    """Subposet on ``indices`` (kept in the given order) with L's order."""
    indices = list(indices)
    rel = [
        (i, j)
        for i, x in enumerate(indices)
        for j, y in enumerate(indices)
        if i != j and L.leq(x, y)
    ]
    return HasseLattice.from_relation([L.elements[x] for x in indices], rel)


def bottoms_subposet(L, theta):
    return induced_subposet(L, theta.bottoms)


def is_lattice(P):
    n = len(P)
    try:
        for u in range(n):
            for w in range(u + 1, n):
                P.meet(u, w)
                P.join(u, w)
    except NotALattice:
        return False
    return n > 0


def is_lattice_homomorphism(f, L1, L2):
    """Exhaustive check of ``f(x ^ y) = f(x) ^ f(y)`` and the dual, all pairs."""
    n = len(L1)
    for x in range(n):
        for y in range(x + 1, n):
            if f[L1.meet(x, y)] != L2.meet(f[x], f[y]):
                return False
            if f[L1.join(x, y)] != L2.join(f[x], f[y]):
                return False
    return True


def is_isomorphism(f, L1, L2):
    """True when ``f`` is a bijection carrying covers exactly onto covers."""
    if len(L1) != len(L2) or sorted(f) != list(range(len(L2))):
        return False
    image = {(f[a], f[b]) for a, b in L1.covers}
    return image == set(L2.covers)
