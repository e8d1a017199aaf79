"""Graph model for heaps: components, regions, and their edge sets.

A component is one labeled directed graph with a layout tag; a heap is an
ordered collection of disjoint components.  Node and variable identifiers
are plain string tokens (nonempty, no whitespace, no commas).  The same
types serve concrete heaps (nodes are addresses) and abstract ones (nodes
stand for merged regions); concreteness is a usage convention.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Union

from .errors import (
    EmptyComponentError,
    LayoutMismatchError,
    UnknownNodeError,
    UnreachableNodeError,
)

_TOKEN = re.compile(r"^[^\s,]+$")


class Layout(Enum):
    """Structural class of a component."""

    SLL = "SLL"
    T = "T"
    C = "C"
    DAG = "DAG"


@dataclass(frozen=True)
class VarEdge:
    """Pointer from a variable to a node."""

    var: str
    target: str


@dataclass(frozen=True)
class NodeEdge:
    """Pointer between nodes (list, cycle, and DAG layouts)."""

    src: str
    dst: str


@dataclass(frozen=True)
class TreeEdge:
    """Labeled pointer between tree nodes; the label is "l" or "r"."""

    src: str
    dst: str
    label: str

    def __post_init__(self):
        if self.label not in ("l", "r"):
            raise ValueError(f"tree edge label must be 'l' or 'r', got {self.label!r}")


Edge = Union[VarEdge, NodeEdge, TreeEdge]

# A region is a subset of one component's nodes.
Region = frozenset


def edge_sort_key(e: Edge) -> tuple:
    """Total order over mixed edge kinds, used for deterministic output."""
    if isinstance(e, NodeEdge):
        return ("node", e.src, e.dst, "")
    if isinstance(e, TreeEdge):
        return ("tree", e.src, e.dst, e.label)
    return ("var", e.var, e.target, "")


def _token_ok(ident) -> bool:
    return isinstance(ident, str) and bool(_TOKEN.match(ident))


@dataclass(frozen=True)
class Component:
    """One labeled directed graph with a layout tag.

    Construction is permissive about graph shape (undeclared endpoints,
    kind/layout mismatches and the like are reported by
    :func:`validate_component`, not raised here) so that broken inputs can
    be represented and diagnosed.  Identifier tokens and the separation of
    the variable and node namespaces are enforced eagerly because nothing
    downstream can cope without them.
    """

    layout: Layout
    vars: frozenset = frozenset()
    nodes: frozenset = frozenset()
    edges: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "vars", frozenset(self.vars))
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(self.edges))
        if not isinstance(self.layout, Layout):
            raise ValueError(f"layout must be a Layout, got {self.layout!r}")
        for ident in (*self.vars, *self.nodes):
            if not _token_ok(ident):
                raise ValueError(f"bad identifier token: {ident!r}")
        overlap = self.vars & self.nodes
        if overlap:
            raise ValueError(
                f"identifiers used as both variable and node: {sorted(overlap)}"
            )

    def var_edges(self) -> frozenset:
        return frozenset(e for e in self.edges if isinstance(e, VarEdge))

    def node_edges(self) -> frozenset:
        """All pointer edges between nodes (plain and labeled)."""
        return frozenset(e for e in self.edges if not isinstance(e, VarEdge))


@dataclass(frozen=True)
class Heap:
    """Ordered finite collection of disjoint components."""

    components: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        seen_nodes: set = set()
        seen_vars: set = set()
        for i, comp in enumerate(self.components):
            node_clash = seen_nodes & comp.nodes
            var_clash = seen_vars & comp.vars
            if node_clash:
                raise ValueError(
                    f"node ids reused across components (component {i}): {sorted(node_clash)}"
                )
            if var_clash:
                raise ValueError(
                    f"variable ids reused across components (component {i}): {sorted(var_clash)}"
                )
            seen_nodes |= comp.nodes
            seen_vars |= comp.vars


@dataclass(frozen=True)
class Violation:
    """One well-formedness failure, with a stable machine-readable code."""

    code: str
    detail: str


def _checked_region(c: Component, r: Iterable) -> frozenset:
    region = frozenset(r)
    unknown = region - c.nodes
    if unknown:
        raise UnknownNodeError(f"region references undeclared nodes: {sorted(unknown)}")
    return region


def region_edges(c: Component, r: Iterable) -> frozenset:
    """Pointer edges of the component with both endpoints inside the region."""
    region = _checked_region(c, r)
    return frozenset(
        e for e in c.node_edges() if e.src in region and e.dst in region
    )


def edges_in(c: Component, r: Iterable) -> frozenset:
    """Pointer edges entering the region from outside it."""
    region = _checked_region(c, r)
    return frozenset(
        e for e in c.node_edges() if e.src not in region and e.dst in region
    )


def edges_out(c: Component, r: Iterable) -> frozenset:
    """Pointer edges leaving the region to the outside."""
    region = _checked_region(c, r)
    return frozenset(
        e for e in c.node_edges() if e.src in region and e.dst not in region
    )


def lift_concrete(h: Heap) -> Heap:
    """Read a concrete heap as an abstract one (identity embedding)."""
    return Heap(h.components)


def entry_nodes(c: Component) -> frozenset:
    """Traversal entry points of a component.

    Nodes with no incoming pointer edge from another node; when every
    node has one (for instance a list whose head is the target of a
    cycle-closing edge), variable-pointed nodes serve instead.  A self
    edge marks a collapsed region and never costs a node its entry
    status.
    """
    with_incoming = {e.dst for e in c.node_edges() if e.src != e.dst}
    indeg0 = c.nodes - with_incoming
    if indeg0:
        return frozenset(indeg0)
    return frozenset(e.target for e in c.var_edges() if e.target in c.nodes)


def _bfs_depths(c: Component) -> dict:
    adjacency: dict = {n: [] for n in c.nodes}
    for e in c.node_edges():
        adjacency[e.src].append(e.dst)
    depths = {n: 0 for n in entry_nodes(c)}
    queue = deque(sorted(depths))
    while queue:
        n = queue.popleft()
        for m in adjacency[n]:
            if m not in depths:
                depths[m] = depths[n] + 1
                queue.append(m)
    return depths


def depth_map(c: Component) -> dict:
    """Shortest-path distance of every node from the component's entries.

    Only list and tree layouts have a depth notion; edges that point from
    a deeper node back to a shallower one never define depth, they are the
    anomalies depth exists to detect.
    """
    if c.layout not in (Layout.SLL, Layout.T):
        raise LayoutMismatchError(
            f"depth is defined for SLL and T components, not {c.layout.value}"
        )
    depths = _bfs_depths(c)
    missing = c.nodes - depths.keys()
    if missing:
        raise UnreachableNodeError(
            f"nodes unreachable from entries: {sorted(missing)}"
        )
    return depths


def height(c: Component) -> int:
    """Largest depth in a tree component."""
    if c.layout is not Layout.T:
        raise LayoutMismatchError(f"height is defined for T components, not {c.layout.value}")
    if not c.nodes:
        raise EmptyComponentError("height of an empty component is undefined")
    return max(depth_map(c).values())


def _kahn_leftover(nodes: frozenset, arcs: list) -> set:
    """Nodes that survive repeated removal of in-degree-0 nodes.

    Nonempty result means the arc set contains a directed cycle through
    exactly those nodes.
    """
    indegree = {n: 0 for n in nodes}
    out: dict = {n: [] for n in nodes}
    for src, dst in arcs:
        indegree[dst] += 1
        out[src].append(dst)
    queue = deque(n for n in nodes if indegree[n] == 0)
    remaining = set(nodes)
    while queue:
        n = queue.popleft()
        remaining.discard(n)
        for m in out[n]:
            indegree[m] -= 1
            if indegree[m] == 0:
                queue.append(m)
    return remaining


def validate_component(c: Component) -> list:
    """Check a component's well-formedness rules, returning all violations.

    Checks run in a fixed order: endpoint declaration, edge-kind/layout
    match, then the per-layout structure rules (reachability for lists and
    trees, acyclicity for DAGs, cycle existence for cycles, and the tree
    skeleton rule).  Structure rules are skipped when endpoints are
    undeclared, since the graph cannot be traversed meaningfully.

    Self edges mark collapsed regions in abstract components, so they do
    not count against DAG acyclicity.
    """
    violations: list = []

    sorted_edges = sorted(c.edges, key=edge_sort_key)
    for e in sorted_edges:
        if isinstance(e, VarEdge):
            if e.var not in c.vars:
                violations.append(
                    Violation("UndeclaredEndpoint", f"variable {e.var} not declared")
                )
            if e.target not in c.nodes:
                violations.append(
                    Violation("UndeclaredEndpoint", f"node {e.target} not declared")
                )
        else:
            for endpoint in (e.src, e.dst):
                if endpoint not in c.nodes:
                    violations.append(
                        Violation("UndeclaredEndpoint", f"node {endpoint} not declared")
                    )
    endpoints_ok = not violations

    for e in sorted_edges:
        if isinstance(e, TreeEdge) and c.layout is not Layout.T:
            violations.append(
                Violation(
                    "EdgeKindMismatch",
                    f"labeled edge ({e.src},{e.dst},{e.label}) in {c.layout.value} component",
                )
            )
        elif isinstance(e, NodeEdge) and c.layout is Layout.T:
            violations.append(
                Violation(
                    "EdgeKindMismatch",
                    f"unlabeled edge ({e.src},{e.dst}) in T component",
                )
            )

    if not endpoints_ok:
        return violations

    if c.layout in (Layout.SLL, Layout.T):
        depths = _bfs_depths(c)
        for n in sorted(c.nodes - depths.keys()):
            violations.append(
                Violation("UnreachableNode", f"node {n} unreachable from entries")
            )

    if c.layout is Layout.SLL:
        # Singly linked: one next pointer per node.  Self edges stand for
        # collapsed regions and do not count.
        out_counts: dict = {}
        for e in c.node_edges():
            if e.src != e.dst:
                out_counts[e.src] = out_counts.get(e.src, 0) + 1
        for n in sorted(n for n, k in out_counts.items() if k > 1):
            violations.append(
                Violation(
                    "BranchingList",
                    f"node {n} has {out_counts[n]} outgoing edges",
                )
            )

    if c.layout is Layout.DAG:
        arcs = [(e.src, e.dst) for e in c.node_edges() if e.src != e.dst]
        leftover = _kahn_leftover(c.nodes, arcs)
        if leftover:
            violations.append(
                Violation("CycleInDag", f"cycle through nodes {sorted(leftover)}")
            )

    if c.layout is Layout.C:
        has_self = any(e.src == e.dst for e in c.node_edges())
        arcs = [(e.src, e.dst) for e in c.node_edges() if e.src != e.dst]
        if not has_self and not _kahn_leftover(c.nodes, arcs):
            violations.append(
                Violation("MissingCycle", "no directed cycle among node edges")
            )

    if c.layout is Layout.T:
        depths = _bfs_depths(c)
        entries = entry_nodes(c)
        tree_in: dict = {n: [] for n in c.nodes}
        for e in c.edges:
            if isinstance(e, TreeEdge):
                tree_in[e.dst].append(e.src)
        for n in sorted(c.nodes):
            if n in entries or n not in depths:
                continue
            if not any(
                src in depths and depths[src] < depths[n] for src in tree_in[n]
            ):
                violations.append(
                    Violation(
                        "MissingTreeParent",
                        f"node {n} has no labeled edge from a shallower node",
                    )
                )

    return violations
