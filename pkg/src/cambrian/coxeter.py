"""Finite Coxeter groups in their geometric representation.

Group elements are stored as signed permutations of the positive roots.
Root vectors are floats and are only used once, while the generator tables
are built; after that all group arithmetic is integer table composition.

Signed root indices: ``q >= 0`` stands for the positive root ``q`` and
``~q`` (that is ``-q - 1``) for its negative.
"""
from __future__ import annotations

import math
import os
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BadLabel, BadMatrix, CapExceeded, InfiniteType, SystemMismatch

ROOT_TOL = 1e-9
DEFAULT_MAX_ROOTS = 20_000
DEFAULT_MAX_ORDER = 2_000_000

_FAMILIES = "ABDEFHI"
_LABEL_RE = re.compile(r"^([A-Za-z])(\d+)(?:\((\d+)\))?$")


def max_order_cap():
    """Element cap for enumeration; ``CAMBRIAN_MAX_ORDER`` overrides it."""
    value = os.environ.get("CAMBRIAN_MAX_ORDER")
    return int(value) if value else DEFAULT_MAX_ORDER


# --------------------------------------------------------------------------
# Labels and Coxeter matrices


@dataclass(frozen=True)
class CoxeterLabel:
    family: str
    parameter: int

    def __str__(self):
        if self.family == "I":
            return f"I2({self.parameter})"
        return f"{self.family}{self.parameter}"

    @property
    def rank(self):
        return 2 if self.family == "I" else self.parameter


def parse_label(text):
    """Parse ``"A3"``, ``"I2(7)"`` or a product such as ``"A2xA1"``.

    Returns a list of irreducible labels, in the order given.
    """
    parts = [p.strip() for p in re.split(r"[xX]", text.strip())]
    if not parts or any(not p for p in parts):
        raise BadLabel(f"cannot parse Coxeter label {text!r}")
    labels = []
    for part in parts:
        m = _LABEL_RE.match(part)
        if m is None:
            raise BadLabel(f"cannot parse Coxeter label {part!r}")
        family = m.group(1).upper()
        number = int(m.group(2))
        if family not in _FAMILIES:
            raise BadLabel(f"unknown family {family!r} in {part!r}")
        if family == "I":
            if number != 2 or m.group(3) is None:
                raise BadLabel(f"dihedral labels are written I2(m), got {part!r}")
            label = CoxeterLabel("I", int(m.group(3)))
        else:
            if m.group(3) is not None:
                raise BadLabel(f"unexpected parameter in {part!r}")
            label = CoxeterLabel(family, number)
        _check_label_range(label)
        labels.append(label)
    return labels


def _check_label_range(label):
    f, p = label.family, label.parameter
    ok = {
        "A": p >= 1,
        "B": p >= 2,
        "D": p >= 4,
        "E": p in (6, 7, 8),
        "F": p == 4,
        "H": p in (3, 4),
        # I2(3) = A2 and I2(4) = B2 are accepted as aliases.
        "I": p >= 3,
    }[f]
    if not ok:
        raise BadLabel(f"{label} is not in the classification of finite Coxeter groups")


def _irreducible_matrix(label):
    f, p = label.family, label.parameter
    if f == "I":
        return np.array([[1, p], [p, 1]], dtype=int)
    n = p
    m = np.full((n, n), 2, dtype=int)
    np.fill_diagonal(m, 1)

    def bond(i, j, value=3):
        m[i, j] = m[j, i] = value

    if f in "ABFH":
        for i in range(n - 1):
            bond(i, i + 1)
        if f in "B":
            bond(0, 1, 4)
        elif f == "F":
            bond(1, 2, 4)
        elif f == "H":
            bond(0, 1, 5)
    elif f == "D":
        # two short legs 0 and 1 attached to node 2, then a path 2-3-...-(n-1)
        bond(0, 2)
        bond(1, 2)
        for i in range(2, n - 1):
            bond(i, i + 1)
    elif f == "E":
        # path 0-1-...-(n-2) with node n-1 attached to node 2
        for i in range(n - 2):
            bond(i, i + 1)
        bond(2, n - 1)
    return m


def coxeter_matrix(labels):
    """Block-diagonal Coxeter matrix of a product of irreducible labels."""
    if isinstance(labels, str):
        labels = parse_label(labels)
    if isinstance(labels, CoxeterLabel):
        labels = [labels]
    blocks = [_irreducible_matrix(lab) for lab in labels]
    n = sum(b.shape[0] for b in blocks)
    m = np.full((n, n), 2, dtype=int)
    at = 0
    for b in blocks:
        k = b.shape[0]
        m[at:at + k, at:at + k] = b
        at += k
    return m


def check_coxeter_matrix(m):
    """Validate a Coxeter matrix; ``0`` or ``inf`` entries mean m(i,j) = infinity."""
    try:
        arr = np.array(m, dtype=float)
    except (TypeError, ValueError) as exc:
        raise BadMatrix(f"not a numeric matrix: {exc}") from None
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise BadMatrix(f"Coxeter matrix must be square and nonempty, got shape {arr.shape}")
    if not np.array_equal(arr, arr.T):
        raise BadMatrix("Coxeter matrix must be symmetric")
    if not np.all(np.diag(arr) == 1):
        raise BadMatrix("Coxeter matrix must have 1 on the diagonal")
    n = arr.shape[0]
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            v = arr[i, j]
            if v == 0 or math.isinf(v):
                continue
            if v < 2 or v != int(v):
                raise BadMatrix(f"m({i + 1},{j + 1}) = {v} must be an integer >= 2")
    return arr


# --------------------------------------------------------------------------
# Root system


def _form_of(matrix):
    """Bilinear form B(a_i, a_j) = -cos(pi / m(i, j)) on unit simple roots."""
    n = matrix.shape[0]
    form = np.eye(n)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            mij = matrix[i, j]
            if mij == 0 or math.isinf(mij):
                form[i, j] = -1.0
            elif mij != 2:
                form[i, j] = -math.cos(math.pi / mij)
    return form


class RootSystem:
    """Positive roots of the standard geometric representation.

    Vectors are written in the basis of simple roots, which all have unit
    norm for the bilinear form ``B(a_i, a_j) = -cos(pi / m(i, j))``.
    ``euclidean`` maps those coordinates into R^n with the ordinary dot
    product agreeing with ``B``.
    """

    def __init__(self, matrix, max_roots=DEFAULT_MAX_ROOTS):
        matrix = np.asarray(matrix)
        self.rank = matrix.shape[0]
        self.form = _form_of(matrix)
        self.positive_roots = self._enumerate(max_roots)
        self._np_roots = np.array(self.positive_roots)

    def _enumerate(self, max_roots):
        n = self.rank
        roots = [np.eye(n)[i] for i in range(n)]
        queue = deque(range(n))
        while queue:
            beta = roots[queue.popleft()]
            b_beta = self.form @ beta
            for i in range(n):
                new = beta.copy()
                new[i] -= 2.0 * b_beta[i]
                if np.all(new > -ROOT_TOL) and self._lookup(roots, new) is None:
                    roots.append(new)
                    if len(roots) > max_roots:
                        raise InfiniteType(
                            f"root enumeration exceeded {max_roots} positive roots; "
                            "the Coxeter matrix is not of finite type"
                        )
                    queue.append(len(roots) - 1)
        return [tuple(float(x) for x in r) for r in roots]

    @staticmethod
    def _lookup(roots, vec):
        arr = np.asarray(roots)
        dist = np.linalg.norm(arr - vec, axis=1)
        k = int(np.argmin(dist))
        return k if dist[k] < ROOT_TOL else None

    @property
    def simple_roots(self):
        return [self.positive_roots[i] for i in range(self.rank)]

    @property
    def total_roots(self):
        return 2 * len(self.positive_roots)

    def signed_index(self, vec):
        """Signed index of a root vector, or ``None`` if ``vec`` is not a root."""
        vec = np.asarray(vec, dtype=float)
        pos = np.linalg.norm(self._np_roots - vec, axis=1)
        k = int(np.argmin(pos))
        if pos[k] < ROOT_TOL:
            return k
        neg = np.linalg.norm(self._np_roots + vec, axis=1)
        k = int(np.argmin(neg))
        if neg[k] < ROOT_TOL:
            return ~k
        return None

    def vector(self, signed):
        v = np.array(self.positive_roots[signed if signed >= 0 else ~signed])
        return v if signed >= 0 else -v

    def reflect(self, i, vec):
        vec = np.asarray(vec, dtype=float)
        out = vec.copy()
        out[i] -= 2.0 * (self.form[i] @ vec)
        return out

    def inner(self, x, y):
        return np.asarray(x) @ self.form @ np.asarray(y)

    @cached_property
    def euclidean(self):
        """Matrix E with ``(E x) . (E y) == B(x, y)``."""
        chol = np.linalg.cholesky(self.form)
        return chol.T

    @cached_property
    def fundamental_weights(self):
        """Rows w_i with ``B(w_i, a_j) = delta_ij`` (root coordinates)."""
        return np.linalg.inv(self.form)

    @cached_property
    def supports(self):
        """Bitmask of simple roots with nonzero coefficient, per positive root."""
        out = []
        for r in self.positive_roots:
            mask = 0
            for i, x in enumerate(r):
                if abs(x) > ROOT_TOL:
                    mask |= 1 << i
            out.append(mask)
        return tuple(out)


# --------------------------------------------------------------------------
# Group elements


def _popcount(x):
    return bin(x).count("1")


class GroupElement:
    """An element acting as a signed permutation of the positive roots."""

    __slots__ = ("system", "act", "inversions", "length")

    def __init__(self, system, act):
        self.system = system
        self.act = act
        inv = 0
        for x in act:
            if x < 0:
                inv |= 1 << ~x
        # left inversion set N(w) = {b > 0 : w^-1 b < 0}
        self.inversions = inv
        self.length = _popcount(inv)

    def __eq__(self, other):
        if not isinstance(other, GroupElement):
            return NotImplemented
        return self.system is other.system and self.act == other.act

    def __hash__(self):
        return hash(self.act)

    def __mul__(self, other):
        return multiply(self, other)

    def __repr__(self):
        return f"<{self.system.name} element {self.label()}>"

    def is_identity(self):
        return self.length == 0

    def inverse(self):
        out = [0] * len(self.act)
        for p, x in enumerate(self.act):
            if x >= 0:
                out[x] = p
            else:
                out[~x] = ~p
        return GroupElement(self.system, tuple(out))

    def left_descents(self):
        return frozenset(i for i in range(self.system.rank) if self.inversions >> i & 1)

    def right_descents(self):
        return frozenset(i for i in range(self.system.rank) if self.act[i] < 0)

    def has_left_descent(self, i):
        return bool(self.inversions >> i & 1)

    def has_right_descent(self, i):
        return self.act[i] < 0

    def act_on_root(self, signed):
        """Image of a signed root index."""
        if signed >= 0:
            return self.act[signed]
        return ~self.act[~signed]

    def matrix(self):
        """Matrix of the element in the simple-root basis."""
        roots = self.system.roots
        cols = [roots.vector(self.act[i]) for i in range(self.system.rank)]
        return np.column_stack(cols)

    def apply(self, vec):
        return self.matrix() @ np.asarray(vec, dtype=float)

    def word(self):
        return reduced_word(self)

    def label(self):
        return word_label(reduced_word(self))


def word_label(word):
    """Render a 0-based word as ``s1s2s1``; the empty word is ``e``."""
    return "".join(f"s{i + 1}" for i in word) or "e"


def parse_word(text, rank=None):
    """Parse ``"s1s3s2"`` (or ``"e"``) into a 0-based tuple."""
    text = text.strip().replace(" ", "")
    if text in ("", "e", "1"):
        return ()
    if not re.fullmatch(r"(s\d+)+", text):
        raise ValueError(f"cannot parse word {text!r}; expected e.g. 's1s2s1'")
    word = tuple(int(x) - 1 for x in re.findall(r"s(\d+)", text))
    if rank is not None and any(not 0 <= i < rank for i in word):
        raise ValueError(f"word {text!r} uses a generator outside s1..s{rank}")
    return word


def multiply(u, w):
    """Group product ``u w`` (apply ``w`` first)."""
    if u.system is not w.system:
        raise SystemMismatch("elements belong to different Coxeter systems")
    ua = u.act
    return GroupElement(u.system, tuple(ua[x] if x >= 0 else ~ua[~x] for x in w.act))


def length(w):
    return w.length


def descents_left(w):
    return w.left_descents()


def descents_right(w):
    return w.right_descents()


def lex_min_reduced_word(w, order=None):
    """Reduced word built by peeling left descents, restarting at ``order[0]``."""
    order = tuple(range(w.system.rank)) if order is None else tuple(order)
    gens = w.system.generators
    word = []
    while not w.is_identity():
        for s in order:
            if w.has_left_descent(s):
                word.append(s)
                w = gens[s] * w
                break
    return tuple(word)


def reduced_word(w):
    return lex_min_reduced_word(w)


def weak_le(u, w):
    """Right weak order, decided by containment of left inversion sets."""
    if u.system is not w.system:
        raise SystemMismatch("elements belong to different Coxeter systems")
    return u.inversions & ~w.inversions == 0


def weak_covers(w):
    gens = w.system.generators
    return [w * gens[s] for s in range(w.system.rank) if not w.has_right_descent(s)]


# --------------------------------------------------------------------------
# Coxeter systems


class CoxeterSystem:
    """A finite Coxeter system with its root system and generator tables."""

    def __init__(self, matrix, name=None, max_roots=DEFAULT_MAX_ROOTS):
        arr = check_coxeter_matrix(matrix)
        n = arr.shape[0]
        if np.any(arr == 0) or np.any(np.isinf(arr)):
            raise InfiniteType("Coxeter matrix has an infinite entry")
        self.matrix = arr.astype(int)
        # W is finite iff the bilinear form is positive definite
        if np.linalg.eigvalsh(_form_of(self.matrix)).min() <= 1e-12:
            raise InfiniteType("bilinear form is not positive definite; W is infinite")
        self.rank = n
        self.name = name or f"W(rank {n})"
        self.roots = RootSystem(self.matrix, max_roots=max_roots)
        npos = len(self.roots.positive_roots)
        gens = []
        for i in range(n):
            act = []
            for p in range(npos):
                if p == i:
                    act.append(~i)
                    continue
                img = self.roots.signed_index(self.roots.reflect(i, self.roots.positive_roots[p]))
                if img is None or img < 0:
                    raise InfiniteType("simple reflection does not permute the positive roots")
                act.append(img)
            gens.append(GroupElement(self, tuple(act)))
        self.generators = tuple(gens)
        self.identity = GroupElement(self, tuple(range(npos)))

    def __repr__(self):
        return f"CoxeterSystem({self.name})"

    @property
    def num_positive_roots(self):
        return len(self.roots.positive_roots)

    def m(self, i, j):
        return int(self.matrix[i, j])

    def diagram_edges(self):
        """Pairs ``(i, j)``, ``i < j``, with ``m(i, j) >= 3``."""
        n = self.rank
        return [(i, j) for i in range(n) for j in range(i + 1, n) if self.matrix[i, j] >= 3]

    def element(self, word):
        w = self.identity
        for s in word:
            w = w * self.generators[s]
        return w

    def from_word(self, text):
        return self.element(parse_word(text, self.rank))

    def longest_element(self):
        w = self.identity
        while True:
            for s in range(self.rank):
                if not w.has_right_descent(s):
                    w = w * self.generators[s]
                    break
            else:
                return w

    def in_parabolic(self, w, allowed_mask):
        """True when ``w`` lies in the parabolic subgroup on ``allowed_mask``."""
        supports = self.roots.supports
        inv = w.inversions
        while inv:
            low = inv & -inv
            if supports[low.bit_length() - 1] & ~allowed_mask:
                return False
            inv ^= low
        return True

    def to_json(self, order=None):
        return {
            "name": self.name,
            "rank": self.rank,
            "matrix": self.matrix.tolist(),
            "positive_root_count": self.num_positive_roots,
            "order": group_order(self) if order is None else order,
        }


def build_system(source, max_roots=DEFAULT_MAX_ROOTS):
    """Build a system from a label string, label list, or Coxeter matrix."""
    if isinstance(source, CoxeterSystem):
        return source
    if isinstance(source, (str, CoxeterLabel)) or (
        isinstance(source, (list, tuple)) and source and isinstance(source[0], CoxeterLabel)
    ):
        labels = parse_label(source) if isinstance(source, str) else (
            [source] if isinstance(source, CoxeterLabel) else list(source))
        name = "x".join(str(lab) for lab in labels)
        return CoxeterSystem(coxeter_matrix(labels), name=name, max_roots=max_roots)
    return CoxeterSystem(source, max_roots=max_roots)


def group_order(system, max_orbit=500_000):
    """|W| by orbit-stabilizer on fundamental weights, without listing W.

    The stabilizer of the fundamental weight for s is the parabolic subgroup
    on S - {s}, so |W| = |orbit| * |W_{S - s}|; recurse on the parabolic.
    """
    return _order_rec(system.matrix, max_orbit)


def _order_rec(matrix, max_orbit):
    n = matrix.shape[0]
    if n == 0:
        return 1
    roots = RootSystem(matrix)
    weights = roots.fundamental_weights
    best = None
    for s in range(n):
        cap = max_orbit if best is None else best[1]
        size = _orbit_size(roots, weights[s], cap)
        if size is not None and (best is None or size < best[1]):
            best = (s, size)
    if best is None:
        raise CapExceeded(f"fundamental-weight orbits exceed {max_orbit}")
    s, size = best
    keep = [i for i in range(n) if i != s]
    return size * _order_rec(matrix[np.ix_(keep, keep)], max_orbit)


def _orbit_size(roots, start, cap):
    scale = 1.0 / max(1e-12, float(np.max(np.abs(start))))

    def key(v):
        return tuple(np.round(v * scale, 7) + 0.0)

    seen = {key(start)}
    queue = deque([np.asarray(start, dtype=float)])
    while queue:
        v = queue.popleft()
        for i in range(roots.rank):
            u = roots.reflect(i, v)
            k = key(u)
            if k not in seen:
                seen.add(k)
                if len(seen) > cap:
                    return None
                queue.append(u)
    return len(seen)


def enumerate_group(system, cap=None):
    """All elements of W with the covers of the right weak order.

    Elements are discovered breadth-first by length, so indices form a
    linear extension of the weak order.
    """
    from .lattice import WeakOrder

    cap = max_order_cap() if cap is None else cap
    gens = system.generators
    elements = [system.identity]
    index = {system.identity.act: 0}
    covers = []
    frontier = [0]
    while frontier:
        nxt = []
        for k in frontier:
            w = elements[k]
            for s in range(system.rank):
                if w.has_right_descent(s):
                    continue
                ws = w * gens[s]
                j = index.get(ws.act)
                if j is None:
                    j = len(elements)
                    if j >= cap:
                        raise CapExceeded(f"group has more than {cap} elements")
                    index[ws.act] = j
                    elements.append(ws)
                    nxt.append(j)
                covers.append((k, j))
        frontier = nxt
    return WeakOrder(system, elements, covers, index)
