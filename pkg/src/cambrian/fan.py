"""Coxeter fans and Cambrian fans, with sampling checks and SVG rendering.

Vectors live in simple-root coordinates and inner products go through the
bilinear form of the representation. A point ``x`` lies in the region
``wD`` exactly when ``B(x, w a_i) >= 0`` for every simple root ``a_i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MismatchWithClassFan, NonConvexUnion, RankUnsupported
from .lattice import induced_subposet
from .sortable import c_vectors, cambrian_congruence, sortable_elements

GEOM_TOL = 1e-9
ARC_SEGMENTS = 256


@dataclass
class Cone:
    label: str
    normals: np.ndarray                 # inward facet normals, one per row
    rays: np.ndarray                    # generating rays, one per row
    normal_roots: tuple = ()            # signed root indices of the normals, when roots
    members: tuple = ()                 # weak-order indices of the regions it is made of
    element: object = field(default=None, repr=False)

    @property
    def dimension(self):
        return int(np.linalg.matrix_rank(self.rays)) if len(self.rays) else 0


@dataclass
class Fan:
    system: object
    cones: list
    adjacencies: list = field(default_factory=list)

    def __len__(self):
        return len(self.cones)

    def membership(self, points, tol=GEOM_TOL):
        """Boolean matrix: point p is interior to cone k."""
        form = self.system.roots.form
        pts = np.atleast_2d(points) @ form
        out = np.zeros((len(pts), len(self.cones)), dtype=bool)
        for k, cone in enumerate(self.cones):
            out[:, k] = np.all(pts @ cone.normals.T > tol, axis=1)
        return out

    def to_json(self):
        return {
            "cones": [
                {
                    "label": cone.label,
                    "normals": _round(cone.normals),
                    "rays": _round(cone.rays),
                }
                for cone in self.cones
            ],
            "adjacencies": [list(p) for p in self.adjacencies],
        }


def _round(arr):
    return [[round(float(x), 10) + 0.0 for x in row] for row in np.asarray(arr)]


# --------------------------------------------------------------------------
# geometry helpers


def interior_point_of_D(system):
    """Sum of the fundamental weights; strictly inside the identity region."""
    return system.roots.fundamental_weights.sum(axis=0)


def _unit(system, vecs):
    vecs = np.atleast_2d(vecs)
    norms = np.sqrt(np.einsum("ij,jk,ik->i", vecs, system.roots.form, vecs))
    return vecs / norms[:, None]


def _dual_rays(system, normals):
    """Rays of the simplicial cone with the given inward normals."""
    m = normals @ system.roots.form
    rays = np.linalg.inv(m)
    return _unit(system, rays.T)


def region_rays(w):
    weights = w.system.roots.fundamental_weights
    return _unit(w.system, (w.matrix() @ weights.T).T)


def sample_points(system, count, seed=0, tol=GEOM_TOL):
    """Uniform random unit vectors kept away from every reflecting hyperplane.

    Points with some product ``|B(x, beta)|`` within ``tol`` are resampled.
    """
    rng = np.random.default_rng(seed)
    emb = system.roots.euclidean
    roots = np.array(system.roots.positive_roots)
    form = system.roots.form
    out = []
    while len(out) < count:
        y = rng.standard_normal((count - len(out), system.rank))
        y /= np.linalg.norm(y, axis=1)[:, None]
        x = np.linalg.solve(emb, y.T).T
        prods = x @ form @ roots.T
        keep = np.all(np.abs(prods) > tol, axis=1)
        out.extend(x[keep])
    return np.array(out[:count])


def regions_of(weak, points):
    """Weak-order index of the region containing each (generic) point."""
    system = weak.system
    roots = np.array(system.roots.positive_roots)
    prods = np.atleast_2d(points) @ system.roots.form @ roots.T
    by_inv = {w.inversions: k for k, w in enumerate(weak.elements)}
    weights = 1 << np.arange(len(roots), dtype=object)
    out = []
    for row in prods < 0:
        inv = int(np.sum(weights[row])) if row.any() else 0
        out.append(by_inv[inv])
    return out


def _ray_ids(fan):
    """Give every distinct ray direction of the fan an integer id."""
    emb = fan.system.roots.euclidean
    ids, keys = [], {}
    for cone in fan.cones:
        cone_ids = []
        for r in cone.rays:
            e = emb @ r
            e = e / np.linalg.norm(e)
            key = tuple(np.round(e, 6) + 0.0)
            cone_ids.append(keys.setdefault(key, len(keys)))
        ids.append(frozenset(cone_ids))
    vecs = [None] * len(keys)
    for cone, cids in zip(fan.cones, ids):
        for r in cone.rays:
            e = emb @ r
            e = e / np.linalg.norm(e)
            vecs[keys[tuple(np.round(e, 6) + 0.0)]] = e
    return ids, vecs


def compute_adjacencies(fan):
    """Pairs of cones sharing a codimension-one face (shared rays span n-1 dims)."""
    n = fan.system.rank
    ids, vecs = _ray_ids(fan)
    pairs = []
    for a in range(len(fan.cones)):
        for b in range(a + 1, len(fan.cones)):
            shared = ids[a] & ids[b]
            if len(shared) < n - 1:
                continue
            rank = np.linalg.matrix_rank(np.array([vecs[i] for i in shared])) if shared else 0
            if rank == n - 1:
                pairs.append((a, b))
    return pairs


# --------------------------------------------------------------------------
# Coxeter fan


def coxeter_fan(weak):
    """One region ``wD`` per element, with inward normals ``w a_i``."""
    system = weak.system
    cones = []
    for k, w in enumerate(weak.elements):
        normal_roots = tuple(w.act[i] for i in range(system.rank))
        normals = np.array([system.roots.vector(r) for r in normal_roots])
        cones.append(Cone(w.label(), normals, region_rays(w), normal_roots, (k,), w))
    fan = Fan(system, cones)
    fan.adjacencies = compute_adjacencies(fan)
    return fan


def region_adjacency_matches_weak_order(weak, fan=None):
    """Adjacent regions are exactly the covers, lower region on the D side."""
    fan = coxeter_fan(weak) if fan is None else fan
    if {tuple(sorted(p)) for p in fan.adjacencies} != {tuple(sorted(c)) for c in weak.covers}:
        return False
    system = weak.system
    x0 = interior_point_of_D(system)
    form = system.roots.form
    for lo, hi in weak.covers:
        a, b = fan.cones[lo], fan.cones[hi]
        shared = set(a.normal_roots) & {~r for r in b.normal_roots}
        if len(shared) != 1:
            return False
        nu = system.roots.vector(shared.pop())
        inside_a = a.rays.sum(axis=0)
        if np.sign(x0 @ form @ nu) != np.sign(inside_a @ form @ nu):
            return False
    return True


# --------------------------------------------------------------------------
# Cambrian fans


def _class_facets(weak, members):
    system = weak.system
    gens = system.generators
    inside = set(members)
    facets = set()
    for k in members:
        w = weak.elements[k]
        for s in range(system.rank):
            if weak.index_of(w * gens[s]) not in inside:
                facets.add(w.act[s])
    return tuple(sorted(facets))


def cambrian_fan_by_classes(weak, c, theta=None, convexity_samples=200, seed=0):
    """One cone per Cambrian class: the union of the class's regions.

    The facets of the union are the region facets that lead out of the
    class. Convexity is checked by facet containment of all region rays and
    by sampling midpoints of point pairs inside the union.
    """
    system = weak.system
    theta = cambrian_congruence(weak, c) if theta is None else theta
    rng = np.random.default_rng(seed)
    form = system.roots.form
    cones = []
    for k, members in enumerate(theta.classes):
        facet_roots = _class_facets(weak, members)
        normals = np.array([system.roots.vector(r) for r in facet_roots])
        all_rays = np.vstack([region_rays(weak.elements[m]) for m in members])
        prods = all_rays @ form @ normals.T
        if np.any(prods < -GEOM_TOL):
            raise NonConvexUnion(f"class {k} has a region outside its facet cone")
        on_facets = np.sum(np.abs(prods) <= 1e-7, axis=1)
        rays = _dedupe_rays(system, all_rays[on_facets >= system.rank - 1])
        _check_midpoints(weak, members, rng, convexity_samples)
        bottom = weak.elements[theta.bottoms[k]]
        cones.append(Cone(bottom.label(), normals, rays, facet_roots, tuple(members), bottom))
    fan = Fan(system, cones)
    fan.adjacencies = compute_adjacencies(fan)
    return fan


def _dedupe_rays(system, rays):
    emb = system.roots.euclidean
    seen, out = set(), []
    for r in rays:
        e = emb @ r
        key = tuple(np.round(e / np.linalg.norm(e), 6) + 0.0)
        if key not in seen:
            seen.add(key)
            out.append(r)
    return np.array(out)


def _check_midpoints(weak, members, rng, count):
    if len(members) == 1 or count == 0:
        return
    inside = set(members)
    ray_sets = [region_rays(weak.elements[m]) for m in members]
    n = weak.system.rank
    for _ in range(count):
        pts = []
        for _ in range(2):
            rays = ray_sets[rng.integers(len(ray_sets))]
            pts.append(rng.uniform(0.05, 1.0, n) @ rays)
        mid = (pts[0] + pts[1]) / 2
        if regions_of(weak, [mid])[0] not in inside:
            raise NonConvexUnion("midpoint of two points of a class union left the union")


def cambrian_fan_by_cvectors(weak, c, class_fan=None, samples=2000, seed=0):
    """One simplicial cone per c-sortable element, normals from its C-vectors.

    The result is checked against the class-union fan: the facet normals
    must match, and sampled points must land in corresponding cones.
    """
    system = weak.system
    tree = sortable_elements(system, c)
    nodes = sorted(tree.nodes, key=weak.index_of)
    cones = []
    for v in nodes:
        cv = c_vectors(v, c)
        cones.append(Cone(v.label(), cv.vectors, _dual_rays(system, cv.vectors), cv.roots,
                          (weak.index_of(v),), v))
    fan = Fan(system, cones)
    fan.adjacencies = compute_adjacencies(fan)
    if class_fan is None:
        class_fan = cambrian_fan_by_classes(weak, c)
    check_fans_agree(weak, fan, class_fan, samples=samples, seed=seed)
    return fan


def check_fans_agree(weak, cv_fan, class_fan, samples=2000, seed=0):
    by_bottom = {cone.element.act: cone for cone in class_fan.cones}
    for cone in cv_fan.cones:
        other = by_bottom.get(cone.element.act)
        if other is None:
            raise MismatchWithClassFan(f"{cone.label} is not a class bottom")
        if sorted(cone.normal_roots) != sorted(other.normal_roots):
            raise MismatchWithClassFan(f"facet normals of {cone.label} differ")
    if samples:
        mismatch = sample_mismatches(weak, cv_fan, class_fan, samples, seed)
        if mismatch:
            raise MismatchWithClassFan(f"{len(mismatch)} sampled points disagree, first {mismatch[0]}")


def sample_mismatches(weak, cv_fan, class_fan, samples, seed, tol=GEOM_TOL):
    """Sample points whose cone differs between the two constructions."""
    pts = sample_points(weak.system, samples, seed, tol)
    cls_index = {}
    for k, cone in enumerate(class_fan.cones):
        for m in cone.members:
            cls_index[m] = k
    class_labels = [class_fan.cones[cls_index[r]].label for r in regions_of(weak, pts)]
    member = cv_fan.membership(pts, tol)
    bad = []
    for p, row in enumerate(member):
        hits = np.flatnonzero(row)
        if len(hits) != 1 or cv_fan.cones[hits[0]].label != class_labels[p]:
            bad.append(p)
    return bad


def fan_adjacency_matches_cambrian_covers(weak, c, fan=None):
    """Adjacency graph of the Cambrian fan equals the Cambrian Hasse diagram."""
    fan = cambrian_fan_by_classes(weak, c) if fan is None else fan
    bottoms = [weak.index_of(cone.element) for cone in fan.cones]
    order = sorted(range(len(bottoms)), key=lambda k: bottoms[k])
    lat = induced_subposet(weak, [bottoms[k] for k in order])
    pos = {k: i for i, k in enumerate(order)}
    adj = {tuple(sorted((pos[a], pos[b]))) for a, b in fan.adjacencies}
    return adj == {tuple(sorted(e)) for e in lat.covers}


# --------------------------------------------------------------------------
# stereographic SVG


def _stereo_frame(system):
    emb = system.roots.euclidean
    rho = emb @ interior_point_of_D(system)
    pole = -rho / np.linalg.norm(rho)
    basis = []
    for k in np.argsort(np.abs(pole), kind="stable"):
        v = np.eye(3)[k]
        for b in [pole, *basis]:
            v = v - (v @ b) * b
        if np.linalg.norm(v) > 1e-6:
            basis.append(v / np.linalg.norm(v))
        if len(basis) == 2:
            break
    return emb, pole, basis[0], basis[1]


def _project(p, pole, u, v):
    d = 1.0 - p @ pole
    return np.array([p @ u / d, -(p @ v) / d])


def _slerp(a, b, steps):
    omega = np.arccos(np.clip(a @ b, -1.0, 1.0))
    if omega < 1e-12:
        return [a]
    ts = np.linspace(0.0, 1.0, steps + 1)
    return [(np.sin((1 - t) * omega) * a + np.sin(t * omega) * b) / np.sin(omega) for t in ts]


def _cell_loop(cone, emb, form):
    """Unit rays of a 3-dimensional cone ordered around its boundary."""
    rays = [emb @ r / np.linalg.norm(emb @ r) for r in cone.rays]
    centre = np.sum(rays, axis=0)
    centre /= np.linalg.norm(centre)
    ref = rays[0] - (rays[0] @ centre) * centre
    ref /= np.linalg.norm(ref)
    other = np.cross(centre, ref)
    angle = [np.arctan2(r @ other, r @ ref) for r in rays]
    order = sorted(range(len(rays)), key=lambda k: angle[k])
    return [rays[k] for k in order], centre


def render_stereographic_svg(fan, size=800, segments=ARC_SEGMENTS, labels=None, title=None):
    """Stereographic picture of a rank-3 fan, one ``<g class="cell">`` per cone.

    The projection pole is opposite the identity region, so that region is
    drawn as a bounded cell near the centre.
    """
    system = fan.system
    if system.rank != 3:
        raise RankUnsupported(f"stereographic rendering needs rank 3, got {system.rank}")
    emb, pole, u, v = _stereo_frame(system)
    cells = []
    extent = 0.0
    for cone in fan.cones:
        loop, centre = _cell_loop(cone, emb, system.roots.form)
        pts = []
        for k in range(len(loop)):
            arc = _slerp(loop[k], loop[(k + 1) % len(loop)], segments)
            pts.extend(_project(p, pole, u, v) for p in (arc if k == 0 else arc[1:]))
        extent = max(extent, max(float(np.max(np.abs(p))) for p in pts))
        label = labels.get(cone.label, cone.label) if labels else cone.label
        at_pole = 1.0 - centre @ pole < 1e-6
        cells.append((label, pts, None if at_pole else _project(centre, pole, u, v)))
    r = float(np.ceil(extent * 1.05 * 100) / 100)
    scale = size / (2 * r)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
    ]
    if title:
        lines.append(f"  <title>{_esc(title)}</title>")
    lines.append('  <rect width="100%" height="100%" fill="white"/>')
    font = max(6, size // 70)

    def xy(p):
        return f"{(p[0] + r) * scale:.3f},{(p[1] + r) * scale:.3f}"

    for label, pts, centre in cells:
        d = "M" + " L".join(xy(p) for p in pts) + " Z"
        lines.append(f'  <g class="cell" data-label="{_esc(label)}">')
        lines.append(f'    <path d="{d}" fill="none" stroke="black" stroke-width="1"/>')
        if centre is None:
            tx, ty, anchor = f"{font:.3f}", f"{1.5 * font:.3f}", "start"
        else:
            (tx, ty), anchor = xy(centre).split(","), "middle"
        lines.append(
            f'    <text x="{tx}" y="{ty}" font-size="{font}" text-anchor="{anchor}" '
            f'font-family="sans-serif">{_esc(label)}</text>'
        )
        lines.append("  </g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def _esc(text):
    return str(text).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
