"""Heap abstraction by grouping logically related regions.

The library models program heaps as collections of labeled directed graph
components (lists, binary trees, cycles, DAGs), classifies each node as
special or ordinary, and merges ordinary nodes into compact abstract
components.  Every abstraction run yields a witness, an onto node map and
edge map, that certifies the output as a valid abstraction of the input
and can be checked independently.
"""

__version__ = "0.1.0"

from .abstraction import (
    AbstractionResult,
    MergeEvent,
    abstract_component,
    abstract_cycle,
    abstract_dag,
    abstract_sll,
    abstract_tree,
    heap_abstract,
    heap_abstract_results,
    remove_node,
    remove_nodes_tree,
)
from .classify import (
    NodeClass,
    Reason,
    SimilarityPartition,
    node_classes,
    ordinary_nodes,
    ref_similar_dag,
    reference_similar,
    reference_similar_set,
    special_nodes_cycle,
    special_nodes_dag,
    special_nodes_sll,
    special_nodes_tree,
)
from .errors import (
    BudgetExceededError,
    DomainMismatchError,
    EmptyComponentError,
    HeapAbstractError,
    InvalidComponentError,
    LayoutMismatchError,
    ModelError,
    ParseError,
    SameNodeError,
    SchemaError,
    UnknownNodeError,
    UnreachableNodeError,
)
from .formats import (
    export_dot,
    parse_heap,
    parse_witness,
    parse_witnesses,
    serialize_heap,
    serialize_witness,
    serialize_witnesses,
)
from .model import (
    Component,
    Edge,
    Heap,
    Layout,
    NodeEdge,
    Region,
    TreeEdge,
    VarEdge,
    Violation,
    depth_map,
    edges_in,
    edges_out,
    entry_nodes,
    height,
    lift_concrete,
    region_edges,
    validate_component,
)
from .witness import (
    Witness,
    check_valid_abstraction,
    compose,
    find_witness_bruteforce,
    identity_witness,
    isomorphic,
)

__all__ = [
    "AbstractionResult",
    "BudgetExceededError",
    "Component",
    "DomainMismatchError",
    "Edge",
    "EmptyComponentError",
    "Heap",
    "HeapAbstractError",
    "InvalidComponentError",
    "Layout",
    "LayoutMismatchError",
    "MergeEvent",
    "ModelError",
    "NodeClass",
    "NodeEdge",
    "ParseError",
    "Reason",
    "Region",
    "SameNodeError",
    "SchemaError",
    "SimilarityPartition",
    "TreeEdge",
    "UnknownNodeError",
    "UnreachableNodeError",
    "VarEdge",
    "Violation",
    "Witness",
    "abstract_component",
    "abstract_cycle",
    "abstract_dag",
    "abstract_sll",
    "abstract_tree",
    "check_valid_abstraction",
    "compose",
    "depth_map",
    "edges_in",
    "edges_out",
    "entry_nodes",
    "export_dot",
    "find_witness_bruteforce",
    "heap_abstract",
    "heap_abstract_results",
    "height",
    "identity_witness",
    "isomorphic",
    "lift_concrete",
    "node_classes",
    "ordinary_nodes",
    "parse_heap",
    "parse_witness",
    "parse_witnesses",
    "ref_similar_dag",
    "reference_similar",
    "reference_similar_set",
    "region_edges",
    "remove_node",
    "remove_nodes_tree",
    "serialize_heap",
    "serialize_witness",
    "serialize_witnesses",
    "special_nodes_cycle",
    "special_nodes_dag",
    "special_nodes_sll",
    "special_nodes_tree",
    "validate_component",
]
