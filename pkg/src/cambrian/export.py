"""DOT and JSON serialisation of lattices, congruences and search trees."""
from __future__ import annotations

import json

from .coxeter import GroupElement


def element_label(x):
    if isinstance(x, GroupElement):
        return x.label()
    if isinstance(x, tuple) and all(isinstance(v, int) for v in x):
        return "".join(map(str, x)) if max(x, default=0) < 10 else " ".join(map(str, x))
    if hasattr(x, "key"):
        return " ".join(f"{a}-{b}" for a, b in x.key())
    return str(x)


def _quote(text):
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def lattice_to_dot(L, name="lattice", labels=None, contracted=(), highlight=()):
    """Hasse diagram bottom-to-top; contracted cover edges are drawn dashed grey."""
    labels = [element_label(x) for x in L.elements] if labels is None else labels
    contracted = set(contracted)
    highlight = set(highlight)
    lines = [f"digraph {_quote(name)} {{", "  rankdir=BT;", "  node [shape=plaintext];"]
    for k, lab in enumerate(labels):
        extra = ", fontcolor=red" if k in highlight else ""
        lines.append(f"  n{k} [label={_quote(lab)}{extra}];")
    for e, (a, b) in enumerate(L.covers):
        style = " [style=dashed, color=gray]" if e in contracted else ""
        lines.append(f"  n{a} -> n{b}{style};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def congruence_to_dot(theta, name="congruence"):
    return lattice_to_dot(theta.lattice, name=name, contracted=theta.edges,
                          highlight=theta.bottoms)


def search_tree_to_dot(tree, name="sortable_tree"):
    ids = {v.act: k for k, v in enumerate(tree.nodes)}
    lines = [f"digraph {_quote(name)} {{", "  rankdir=TB;", "  node [shape=plaintext];"]
    for k, v in enumerate(tree.nodes):
        lines.append(f"  n{k} [label={_quote(str(tree.words[v.act]))}];")
    for v in tree.nodes:
        for child in tree.children.get(v.act, []):
            lines.append(f"  n{ids[v.act]} -> n{ids[child]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def lattice_to_json(L, labels=None):
    labels = [element_label(x) for x in L.elements] if labels is None else labels
    return {"elements": list(labels), "covers": [list(c) for c in L.covers]}


def dumps(data):
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True) + "\n"
