"""Valid-abstraction certificates and the machinery to check them.

A witness relates a component to its abstraction through two maps: a node
map sending every source node onto a target node, and an edge map sending
every source edge onto a target edge.  The edge map must be compatible
with the node map (endpoints map pointwise, labels are preserved), which
makes a witness independently checkable: no trust in the code that
produced it is required.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError, DomainMismatchError
from .model import (
    Component,
    Edge,
    NodeEdge,
    TreeEdge,
    VarEdge,
    Violation,
    edge_sort_key,
)


@dataclass(frozen=True)
class Witness:
    """Node map and edge map certifying one valid abstraction.

    Treat instances as immutable; the maps are plain dicts only because
    that is the lightest faithful representation.
    """

    node_map: dict
    edge_map: dict


def map_edge(e: Edge, node_map: dict) -> Edge:
    """The image an edge is forced to have under a node map."""
    if isinstance(e, VarEdge):
        return VarEdge(e.var, node_map[e.target])
    if isinstance(e, NodeEdge):
        return NodeEdge(node_map[e.src], node_map[e.dst])
    return TreeEdge(node_map[e.src], node_map[e.dst], e.label)


def _edge_endpoints_mapped(e: Edge, node_map: dict) -> bool:
    if isinstance(e, VarEdge):
        return e.target in node_map
    return e.src in node_map and e.dst in node_map


def _is_self_edge(e: Edge) -> bool:
    return isinstance(e, (NodeEdge, TreeEdge)) and e.src == e.dst


def _fmt(e: Edge) -> str:
    if isinstance(e, VarEdge):
        return f"({e.var},{e.target})"
    if isinstance(e, NodeEdge):
        return f"({e.src},{e.dst})"
    return f"({e.src},{e.dst},{e.label})"


def check_valid_abstraction(source: Component, target: Component, w: Witness) -> list:
    """Verify that ``w`` certifies ``target`` as a valid abstraction of ``source``.

    Returns every violation found rather than failing fast: layouts and
    variable sets must agree, both maps must be total and onto, each edge
    image must be the one its endpoints force, and each image must exist
    in the target.

    A target self edge whose node absorbs two or more source nodes stands
    for the collapsed region itself; such edges need no preimage, since a
    merged group may have had no internal edges at all.
    """
    violations: list = []

    if source.layout is not target.layout:
        violations.append(
            Violation(
                "LayoutMismatch",
                f"source is {source.layout.value}, target is {target.layout.value}",
            )
        )
    if source.vars != target.vars:
        violations.append(
            Violation(
                "VariableSetMismatch",
                f"source vars {sorted(source.vars)} != target vars {sorted(target.vars)}",
            )
        )

    for n in sorted(source.nodes - w.node_map.keys()):
        violations.append(Violation("NodeMapNotTotal", f"node {n} is unmapped"))
    images = {w.node_map[n] for n in source.nodes if n in w.node_map}
    for n in sorted(images - target.nodes):
        violations.append(
            Violation("NodeMapImageUnknown", f"image {n} is not a target node")
        )
    for n in sorted(target.nodes - images):
        violations.append(Violation("NodeMapNotOnto", f"target node {n} uncovered"))

    preimage_counts: dict = {}
    for n in source.nodes:
        if n in w.node_map:
            preimage_counts[w.node_map[n]] = preimage_counts.get(w.node_map[n], 0) + 1

    covered = set()
    for e in sorted(source.edges, key=edge_sort_key):
        if e not in w.edge_map:
            violations.append(Violation("EdgeMapNotTotal", f"edge {_fmt(e)} is unmapped"))
            continue
        image = w.edge_map[e]
        covered.add(image)
        if _edge_endpoints_mapped(e, w.node_map):
            forced = map_edge(e, w.node_map)
            if image != forced:
                violations.append(
                    Violation(
                        "EdgeMapIncompatible",
                        f"edge {_fmt(e)} maps to {_fmt(image)}, node map forces {_fmt(forced)}",
                    )
                )
        if image not in target.edges:
            violations.append(
                Violation("ImageEdgeMissing", f"image {_fmt(image)} is not a target edge")
            )

    for e in sorted(target.edges - covered, key=edge_sort_key):
        if _is_self_edge(e) and preimage_counts.get(e.src, 0) >= 2:
            continue
        violations.append(Violation("EdgeMapNotOnto", f"target edge {_fmt(e)} uncovered"))

    return violations


def identity_witness(c: Component) -> Witness:
    """The witness by which every component abstracts itself."""
    return Witness({n: n for n in c.nodes}, {e: e for e in c.edges})


def compose(w1: Witness, w2: Witness) -> Witness:
    """Chain two witnesses (first w1, then w2) into one.

    Valid abstraction is transitive, and composition is how the combined
    certificate is built: both maps compose pointwise.
    """
    node_map = {}
    for n, m in w1.node_map.items():
        if m not in w2.node_map:
            raise DomainMismatchError(f"node {m} is not in the second witness's domain")
        node_map[n] = w2.node_map[m]
    edge_map = {}
    for e, f in w1.edge_map.items():
        if f not in w2.edge_map:
            raise DomainMismatchError(
                f"edge {_fmt(f)} is not in the second witness's domain"
            )
        edge_map[e] = w2.edge_map[f]
    return Witness(node_map, edge_map)


def find_witness_bruteforce(source: Component, target: Component, node_budget: int = 8):
    """Search exhaustively for a witness from ``source`` onto ``target``.

    Enumerates onto node maps by backtracking; the edge map of each
    candidate is forced by compatibility, so a candidate is accepted as
    soon as every forced image exists in the target and the images cover
    all target edges (up to the merged-region self-edge allowance).
    Returns None when no witness exists.  Intended as a small-instance
    oracle; refuses sources larger than ``node_budget`` nodes.
    """
    if len(source.nodes) > node_budget:
        raise BudgetExceededError(
            f"source has {len(source.nodes)} nodes, budget is {node_budget}"
        )
    if source.layout is not target.layout or source.vars != target.vars:
        return None

    src_nodes = sorted(source.nodes)
    tgt_nodes = sorted(target.nodes)
    if not src_nodes:
        if tgt_nodes or target.edges or source.edges:
            return None
        return Witness({}, {})
    if not tgt_nodes:
        return None

    # Edges are checked as soon as their later endpoint gets assigned.
    var_edges_at: dict = {i: [] for i in range(len(src_nodes))}
    node_edges_at: dict = {i: [] for i in range(len(src_nodes))}
    index = {n: i for i, n in enumerate(src_nodes)}
    for e in source.edges:
        if isinstance(e, VarEdge):
            var_edges_at[index[e.target]].append(e)
        else:
            node_edges_at[max(index[e.src], index[e.dst])].append(e)

    assignment: dict = {}
    use_count = {t: 0 for t in tgt_nodes}

    def images_ok(i: int, candidate: str) -> bool:
        assignment[src_nodes[i]] = candidate
        try:
            for e in var_edges_at[i]:
                if map_edge(e, assignment) not in target.edges:
                    return False
            for e in node_edges_at[i]:
                if map_edge(e, assignment) not in target.edges:
                    return False
            return True
        finally:
            del assignment[src_nodes[i]]

    def accept():
        if any(use_count[t] == 0 for t in tgt_nodes):
            return None
        node_map = dict(assignment)
        edge_map = {e: map_edge(e, node_map) for e in source.edges}
        covered = set(edge_map.values())
        preimage_counts: dict = {}
        for t in node_map.values():
            preimage_counts[t] = preimage_counts.get(t, 0) + 1
        for e in target.edges - covered:
            if _is_self_edge(e) and preimage_counts.get(e.src, 0) >= 2:
                continue
            return None
        return Witness(node_map, edge_map)

    def search(i: int):
        if i == len(src_nodes):
            return accept()
        remaining = len(src_nodes) - i
        uncovered = sum(1 for t in tgt_nodes if use_count[t] == 0)
        if uncovered > remaining:
            return None
        for t in tgt_nodes:
            if not images_ok(i, t):
                continue
            assignment[src_nodes[i]] = t
            use_count[t] += 1
            found = search(i + 1)
            if found is not None:
                return found
            use_count[t] -= 1
            del assignment[src_nodes[i]]
        return None

    return search(0)


def _node_signature(c: Component, n: str) -> tuple:
    pointing = []
    out_counts: dict = {}
    in_counts: dict = {}
    self_labels = []
    for e in c.edges:
        if isinstance(e, VarEdge):
            if e.target == n:
                pointing.append(e.var)
            continue
        label = e.label if isinstance(e, TreeEdge) else "n"
        if e.src == n and e.dst == n:
            self_labels.append(label)
            continue
        if e.src == n:
            out_counts[label] = out_counts.get(label, 0) + 1
        if e.dst == n:
            in_counts[label] = in_counts.get(label, 0) + 1
    return (
        tuple(sorted(pointing)),
        tuple(sorted(out_counts.items())),
        tuple(sorted(in_counts.items())),
        tuple(sorted(self_labels)),
    )


def _pair_labels(c: Component) -> dict:
    labels: dict = {}
    for e in c.node_edges():
        label = e.label if isinstance(e, TreeEdge) else "n"
        labels.setdefault((e.src, e.dst), set()).add(label)
    return labels


def isomorphic(c1: Component, c2: Component) -> bool:
    """Equality of components up to renaming of nodes.

    Variables keep their names, edge labels are preserved.  Backtracking
    search with degree-signature pruning; meant for the small components
    this library deals in, not arbitrary graphs.
    """
    if c1.layout is not c2.layout or c1.vars != c2.vars:
        return False
    if len(c1.nodes) != len(c2.nodes) or len(c1.edges) != len(c2.edges):
        return False

    sig2: dict = {}
    for m in c2.nodes:
        sig2.setdefault(_node_signature(c2, m), []).append(m)
    candidates = {}
    for n in c1.nodes:
        matches = sig2.get(_node_signature(c1, n))
        if not matches:
            return False
        candidates[n] = sorted(matches)

    order = sorted(c1.nodes, key=lambda n: (len(candidates[n]), n))
    labels1 = _pair_labels(c1)
    labels2 = _pair_labels(c2)

    mapping: dict = {}
    used: set = set()

    def consistent(n: str, m: str) -> bool:
        for p, q in mapping.items():
            if labels1.get((n, p)) != labels2.get((m, q)):
                return False
            if labels1.get((p, n)) != labels2.get((q, m)):
                return False
        return labels1.get((n, n)) == labels2.get((m, m))

    def search(i: int) -> bool:
        if i == len(order):
            return True
        n = order[i]
        for m in candidates[n]:
            if m in used or not consistent(n, m):
                continue
            mapping[n] = m
            used.add(m)
            if search(i + 1):
                return True
            used.discard(m)
            del mapping[n]
        return False

    return search(0)
