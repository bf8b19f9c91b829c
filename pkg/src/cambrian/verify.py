"""Property suite run by ``cambrian verify``.

Each check yields a :class:`Check`; the report is plain text with one line
per check, so identical inputs give identical reports.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .coxeter import build_system, enumerate_group, group_order
from .errors import CambrianError
from .fan import (
    cambrian_fan_by_classes,
    cambrian_fan_by_cvectors,
    coxeter_fan,
    fan_adjacency_matches_cambrian_covers,
    region_adjacency_matches_weak_order,
    sample_mismatches,
    sample_points,
)
from .lattice import induced_subposet, is_lattice, polygonal_intervals
from .sortable import (
    all_coxeter_elements,
    cambrian_congruence,
    is_sortable,
    is_sortable_recursive,
    sortable_elements,
)
from .type_a import TypeAData, build_polygon, fiber_extremes, verify_eta_is_quotient_map

CATALOGUE = ("A1", "A2", "B2", "I2(5)", "I2(6)", "A3", "B3", "H3", "A4", "B4", "D4", "F4")


@dataclass(frozen=True)
class Check:
    name: str
    ok: bool
    witness: str = ""

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}" + (f": {self.witness}" if self.witness else "")


def _first(items):
    return next(iter(items), None)


def check_group(weak):
    system = weak.system
    name = system.name
    yield Check(f"{name} order", len(weak) == group_order(system),
                f"enumerated {len(weak)}, orbit count {group_order(system)}")
    top = weak.top()
    yield Check(f"{name} longest element", weak.elements[top].length == system.num_positive_roots)
    bad = _first(p for p in polygonal_intervals(weak) if p.size != 2 * _polygon_m(weak, p))
    yield Check(f"{name} polygonal intervals are 2m-gons", bad is None,
                "" if bad is None else f"bottom {weak.elements[bad.bottom].label()}")


def _polygon_m(weak, p):
    """``m(s, t)`` for the generators labelling the two bottom edges."""
    u = weak.elements[p.bottom]
    s, t = (_generator_between(u, weak.elements[chain[1]]) for chain in p.chains)
    return weak.system.m(s, t)


def _generator_between(lower, upper):
    return next(s for s in range(lower.system.rank)
                if lower * lower.system.generators[s] == upper)


def check_orientation(weak, c, samples, seed, with_fans=True):
    system = weak.system
    tag = f"{system.name} c={c}"
    theta = cambrian_congruence(weak, c)
    tree = sortable_elements(system, c)
    tree_idx = sorted(weak.index_of(v) for v in tree.nodes)
    filtered = [k for k, w in enumerate(weak.elements) if is_sortable(w, c)]
    yield Check(f"{tag} sortables = class bottoms", tree_idx == filtered == sorted(theta.bottoms),
                f"tree {len(tree_idx)}, filter {len(filtered)}, classes {len(theta)}")
    mism = _first(w.label() for w in weak.elements if is_sortable(w, c) != is_sortable_recursive(w, c))
    yield Check(f"{tag} recursive sortability agrees", mism is None, mism or "")
    bottoms = set(filtered)
    bad = None
    for a, b in itertools.combinations(filtered, 2):
        if weak.meet(a, b) not in bottoms or weak.join(a, b) not in bottoms:
            bad = f"{weak.elements[a].label()}, {weak.elements[b].label()}"
            break
    yield Check(f"{tag} sortables form a sublattice", bad is None, bad or "")
    lat = induced_subposet(weak, filtered)
    yield Check(f"{tag} Cambrian lattice is a lattice", is_lattice(lat))
    degrees = lat.undirected_degrees()
    yield Check(f"{tag} Hasse diagram is {system.rank}-regular",
                all(d == system.rank for d in degrees), f"degrees {sorted(set(degrees))}")
    if not with_fans:
        return
    try:
        class_fan = cambrian_fan_by_classes(weak, c, theta, seed=seed)
        cv_fan = cambrian_fan_by_cvectors(weak, c, class_fan, samples=0)
    except CambrianError as exc:
        yield Check(f"{tag} fans", False, str(exc))
        return
    mism = sample_mismatches(weak, cv_fan, class_fan, samples, seed)
    yield Check(f"{tag} C-vector fan = class fan on {samples} samples", not mism,
                f"{len(mism)} mismatches")
    member = cv_fan.membership(sample_points(system, samples, seed))
    yield Check(f"{tag} samples in exactly one cone", bool((member.sum(axis=1) == 1).all()))
    yield Check(f"{tag} fan adjacency = Hasse edges",
                fan_adjacency_matches_cambrian_covers(weak, c, class_fan))


def check_type_a(n, data=None):
    data = TypeAData.build(n) if data is None else data
    for bars in itertools.product("du", repeat=n + 1):
        barring = "".join(bars)
        Q = build_polygon(n, barring)
        rep = fiber_extremes(Q, data)
        ok = rep.intervals and rep.minima_match_patterns
        yield Check(f"A{n} barring {barring} fibers are intervals, minima avoid patterns", ok,
                    f"{rep.fiber_count} fibers")
        yield Check(f"A{n} barring {barring} eta is the Cambrian quotient map",
                    verify_eta_is_quotient_map(Q, data))


def run_suite(groups, samples=2000, seed=0, type_a_max=3, fan_max_rank=3):
    """Run every check; returns the list of :class:`Check` results."""
    results = []
    for label in groups:
        system = build_system(label)
        weak = enumerate_group(system)
        results.extend(check_group(weak))
        results.append(Check(f"{system.name} weak order is a lattice", is_lattice(weak)))
        if system.rank <= fan_max_rank:
            results.append(Check(f"{system.name} Coxeter fan adjacency = weak covers",
                                 region_adjacency_matches_weak_order(weak, coxeter_fan(weak))))
        for c in all_coxeter_elements(system):
            results.extend(check_orientation(weak, c, samples, seed,
                                             with_fans=system.rank <= fan_max_rank))
    for n in range(1, type_a_max + 1):
        results.extend(check_type_a(n))
    return results


def catalogue(max_rank):
    return [g for g in CATALOGUE if build_system(g).rank <= max_rank]


def format_report(results):
    passed = sum(r.ok for r in results)
    lines = [r.line() for r in results]
    lines.append(f"{passed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
