"""Special/ordinary node classification and DAG reference similarity.

A node is special when it carries information the abstraction must keep:
a variable points at it, it touches an anomalous (back or horizontal)
edge, or it is a branch point of a cycle.  Only ordinary nodes are ever
merged.  Which clauses apply depends on the component layout.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable

from .errors import LayoutMismatchError, SameNodeError, UnknownNodeError
from .model import (
    Component,
    Layout,
    NodeEdge,
    TreeEdge,
    VarEdge,
    depth_map,
    edges_in,
    edges_out,
)


class Reason(Enum):
    VAR_POINTED = "VarPointed"
    BACK_EDGE_ENDPOINT = "BackEdgeEndpoint"
    HORIZONTAL_EDGE_ENDPOINT = "HorizontalEdgeEndpoint"
    MULTI_IN = "MultiIn"
    MULTI_OUT = "MultiOut"


_REASON_ORDER = {r: i for i, r in enumerate(Reason)}


@dataclass(frozen=True)
class NodeClass:
    """Classification of one node; special exactly when reasons is nonempty."""

    reasons: tuple

    @property
    def special(self) -> bool:
        return bool(self.reasons)

    @property
    def tag(self) -> str:
        return "Special" if self.reasons else "Ordinary"


@dataclass(frozen=True)
class SimilarityPartition:
    """Disjoint reference-similar groups covering a DAG's ordinary nodes."""

    groups: tuple

    def __post_init__(self):
        object.__setattr__(self, "groups", tuple(frozenset(g) for g in self.groups))
        seen: set = set()
        for g in self.groups:
            if seen & g:
                raise ValueError("similarity groups must be disjoint")
            seen |= g


def _classes(c: Component, reasons_by_node: dict) -> dict:
    return {
        n: NodeClass(
            tuple(sorted(reasons_by_node.get(n, ()), key=_REASON_ORDER.__getitem__))
        )
        for n in c.nodes
    }


def _require_layout(c: Component, layout: Layout, what: str):
    if c.layout is not layout:
        raise LayoutMismatchError(
            f"{what} applies to {layout.value} components, not {c.layout.value}"
        )


def special_nodes_sll(c: Component) -> dict:
    """Classify the nodes of a list component.

    Special nodes are the variable-pointed ones and both endpoints of any
    back edge (an edge from a strictly deeper node to a shallower one).
    """
    _require_layout(c, Layout.SLL, "list classification")
    depths = depth_map(c)
    reasons = defaultdict(set)
    for e in c.edges:
        if isinstance(e, VarEdge):
            reasons[e.target].add(Reason.VAR_POINTED)
        elif isinstance(e, NodeEdge) and depths[e.src] > depths[e.dst]:
            reasons[e.src].add(Reason.BACK_EDGE_ENDPOINT)
            reasons[e.dst].add(Reason.BACK_EDGE_ENDPOINT)
    return _classes(c, reasons)


def special_nodes_tree(c: Component) -> dict:
    """Classify the nodes of a tree component.

    Beyond variable targets, both endpoints of any labeled edge between
    distinct nodes that does not descend (equal depth: horizontal edge,
    decreasing depth: back edge) are special.
    """
    _require_layout(c, Layout.T, "tree classification")
    depths = depth_map(c)
    reasons = defaultdict(set)
    for e in c.edges:
        if isinstance(e, VarEdge):
            reasons[e.target].add(Reason.VAR_POINTED)
        elif isinstance(e, TreeEdge) and e.src != e.dst:
            if depths[e.src] > depths[e.dst]:
                reason = Reason.BACK_EDGE_ENDPOINT
            elif depths[e.src] == depths[e.dst]:
                reason = Reason.HORIZONTAL_EDGE_ENDPOINT
            else:
                continue
            reasons[e.src].add(reason)
            reasons[e.dst].add(reason)
    return _classes(c, reasons)


def special_nodes_cycle(c: Component) -> dict:
    """Classify the nodes of a cycle component.

    Branch points, nodes with more than one entering or leaving edge, are
    special along with variable targets.  Self edges count as neither
    entering nor leaving.
    """
    _require_layout(c, Layout.C, "cycle classification")
    reasons = defaultdict(set)
    for e in c.var_edges():
        reasons[e.target].add(Reason.VAR_POINTED)
    for n in c.nodes:
        if len(edges_in(c, (n,))) > 1:
            reasons[n].add(Reason.MULTI_IN)
        if len(edges_out(c, (n,))) > 1:
            reasons[n].add(Reason.MULTI_OUT)
    return _classes(c, reasons)


def special_nodes_dag(c: Component) -> dict:
    """Classify the nodes of a DAG component: only variable targets are special."""
    _require_layout(c, Layout.DAG, "DAG classification")
    reasons = defaultdict(set)
    for e in c.var_edges():
        reasons[e.target].add(Reason.VAR_POINTED)
    return _classes(c, reasons)


_CLASSIFIERS = {
    Layout.SLL: special_nodes_sll,
    Layout.T: special_nodes_tree,
    Layout.C: special_nodes_cycle,
    Layout.DAG: special_nodes_dag,
}


def node_classes(c: Component) -> dict:
    """Classify every node, dispatching on the component layout."""
    return _CLASSIFIERS[c.layout](c)


def ordinary_nodes(c: Component) -> frozenset:
    """The mergeable nodes: complement of the special ones."""
    return frozenset(n for n, k in node_classes(c).items() if not k.special)


def _adjacency(c: Component) -> tuple:
    pred_sets = defaultdict(set)
    succ_sets = defaultdict(set)
    pairs = set()
    for e in c.edges:
        if isinstance(e, NodeEdge):
            pairs.add((e.src, e.dst))
            succ_sets[e.src].add(e.dst)
            pred_sets[e.dst].add(e.src)
    preds = {n: frozenset(pred_sets[n]) for n in c.nodes}
    succs = {n: frozenset(succ_sets[n]) for n in c.nodes}
    return pairs, preds, succs


def _similar(pairs, preds, succs, a: str, b: str) -> bool:
    if (a, b) in pairs or (b, a) in pairs:
        return False
    return preds[a] == preds[b] and succs[a] == succs[b]


def reference_similar(c: Component, a: str, b: str) -> bool:
    """Whether two distinct DAG nodes are interchangeable references.

    True when no edge connects them and they share exactly the same
    predecessor and successor sets (over node edges; variables do not
    enter into similarity).
    """
    _require_layout(c, Layout.DAG, "reference similarity")
    if a == b:
        raise SameNodeError(f"reference similarity needs two distinct nodes, got {a}")
    unknown = {a, b} - c.nodes
    if unknown:
        raise UnknownNodeError(f"undeclared nodes: {sorted(unknown)}")
    pairs, preds, succs = _adjacency(c)
    return _similar(pairs, preds, succs, a, b)


def reference_similar_set(c: Component, region: Iterable) -> bool:
    """Whether every pair of distinct nodes in the region is reference similar."""
    _require_layout(c, Layout.DAG, "reference similarity")
    members = frozenset(region)
    unknown = members - c.nodes
    if unknown:
        raise UnknownNodeError(f"undeclared nodes: {sorted(unknown)}")
    pairs, preds, succs = _adjacency(c)
    return all(
        _similar(pairs, preds, succs, a, b) for a, b in combinations(sorted(members), 2)
    )


def ref_similar_dag(c: Component) -> SimilarityPartition:
    """Partition a DAG's ordinary nodes into reference-similar groups.

    Seeds are picked in ascending node order; each remaining candidate
    joins the current group only if it is similar to every member, so the
    result is reference similar by construction.
    """
    _require_layout(c, Layout.DAG, "similarity partitioning")
    pairs, preds, succs = _adjacency(c)
    remaining = sorted(ordinary_nodes(c))
    groups = []
    while remaining:
        seed = remaining[0]
        group = [seed]
        for b in remaining[1:]:
            if all(_similar(pairs, preds, succs, x, b) for x in group):
                group.append(b)
        groups.append(frozenset(group))
        taken = set(group)
        remaining = [n for n in remaining if n not in taken]
    return SimilarityPartition(tuple(groups))
