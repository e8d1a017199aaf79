"""Command-line front end: parse, abstract, check, validate, export.

Exit codes are stable:
  0  success
  1  a check failed (invalid witness, or no witness exists)
  2  input error (unreadable file, bad document, invalid component)
  3  internal invariant breach

Data goes to stdout or --out; diagnostics go to stderr.  Identical inputs
produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .abstraction import heap_abstract_results
from .classify import node_classes
from .errors import (
    BudgetExceededError,
    DocumentError,
    InvalidComponentError,
)
from .formats import (
    export_dot,
    parse_heap,
    parse_witnesses,
    serialize_heap,
    serialize_witnesses,
)
from .model import Heap, validate_component
from .witness import check_valid_abstraction, find_witness_bruteforce

OK = 0
CHECK_FAILED = 1
INPUT_ERROR = 2
INTERNAL_ERROR = 3


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _load_heap(path: str) -> Heap:
    return parse_heap(_read(path))


def _validate_heap(h: Heap) -> list:
    findings = []
    for i, comp in enumerate(h.components):
        for v in validate_component(comp):
            findings.append((i, v))
    return findings


def _print_validation(findings, stream):
    for i, v in findings:
        print(f"component {i}: {v.code}: {v.detail}", file=stream)


def _cmd_abstract(args) -> int:
    heap = _load_heap(args.heap)
    findings = _validate_heap(heap)
    if findings:
        _print_validation(findings, sys.stderr)
        return INPUT_ERROR
    results = heap_abstract_results(heap)
    out_heap = Heap(tuple(r.output for r in results))

    # The produced certificates are re-checked before anything is written;
    # a failure here is a bug in the abstractor, not in the input.
    for i, r in enumerate(results):
        bad = check_valid_abstraction(heap.components[i], r.output, r.witness)
        assert not bad, f"component {i} produced an invalid witness: {bad}"

    if args.stats:
        for i, r in enumerate(results):
            before = heap.components[i]
            print(
                f"component {i}: {before.layout.value}"
                f" nodes {len(before.nodes)} -> {len(r.output.nodes)}"
                f" edges {len(before.edges)} -> {len(r.output.edges)}"
                f" merges {len(r.merge_log)}",
                file=sys.stderr,
            )
    _emit(serialize_heap(out_heap), args.out)
    if args.witness:
        _emit(serialize_witnesses([r.witness for r in results]), args.witness)
    return OK


def _cmd_classify(args) -> int:
    heap = _load_heap(args.heap)
    findings = _validate_heap(heap)
    if findings:
        _print_validation(findings, sys.stderr)
        return INPUT_ERROR
    lines = []
    for i, comp in enumerate(heap.components):
        classes = node_classes(comp)
        for n in sorted(comp.nodes):
            k = classes[n]
            reasons = ",".join(r.value for r in k.reasons)
            label = "special" if k.special else "ordinary"
            lines.append(f"component {i} {n} {label}" + (f" [{reasons}]" if reasons else ""))
    _emit("\n".join(lines) + ("\n" if lines else ""), None)
    return OK


def _paired_components(source: Heap, target: Heap, extra=None):
    counts = {len(source.components), len(target.components)}
    if extra is not None:
        counts.add(len(extra))
    if len(counts) != 1:
        print("error: component counts differ between inputs", file=sys.stderr)
        return None
    return list(zip(source.components, target.components))


def _cmd_check_witness(args) -> int:
    source = _load_heap(args.source)
    target = _load_heap(args.target)
    witnesses = parse_witnesses(_read(args.witness))
    pairs = _paired_components(source, target, witnesses)
    if pairs is None:
        return INPUT_ERROR
    failed = False
    for i, (src, tgt) in enumerate(pairs):
        for v in check_valid_abstraction(src, tgt, witnesses[i]):
            failed = True
            print(f"component {i}: {v.code}: {v.detail}")
    return CHECK_FAILED if failed else OK


def _cmd_check_valid(args) -> int:
    source = _load_heap(args.source)
    target = _load_heap(args.target)
    pairs = _paired_components(source, target)
    if pairs is None:
        return INPUT_ERROR
    missing = False
    for i, (src, tgt) in enumerate(pairs):
        found = find_witness_bruteforce(src, tgt, node_budget=args.budget)
        if found is None:
            missing = True
            print(f"component {i}: no witness")
        else:
            print(f"component {i}: witness found")
    return CHECK_FAILED if missing else OK


def _cmd_validate(args) -> int:
    heap = _load_heap(args.heap)
    findings = _validate_heap(heap)
    if findings:
        _print_validation(findings, sys.stdout)
        return INPUT_ERROR
    print("ok")
    return OK


def _cmd_export_dot(args) -> int:
    heap = _load_heap(args.heap)
    _emit(export_dot(heap), args.out)
    return OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heapabstract",
        description="Group logically related regions of heap components into compact abstractions.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("abstract", help="abstract every component of a heap")
    p.add_argument("heap")
    p.add_argument("--out", help="write the abstract heap here instead of stdout")
    p.add_argument("--witness", help="write the witnesses document here")
    p.add_argument("--stats", action="store_true", help="print per-component merge stats")
    p.set_defaults(handler=_cmd_abstract)

    p = sub.add_parser("classify", help="print each node's class and reasons")
    p.add_argument("heap")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("check-witness", help="check a witness document against two heaps")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("witness")
    p.set_defaults(handler=_cmd_check_witness)

    p = sub.add_parser("check-valid", help="search exhaustively for a witness")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--budget", type=int, default=8, help="max source nodes per component")
    p.set_defaults(handler=_cmd_check_valid)

    p = sub.add_parser("validate", help="check heap well-formedness")
    p.add_argument("heap")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("export-dot", help="render a heap as a Graphviz document")
    p.add_argument("heap")
    p.add_argument("--out", help="write the DOT document here instead of stdout")
    p.set_defaults(handler=_cmd_export_dot)

    return parser


def run(argv=None) -> int:
    """Run the CLI and return its exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code in (0, None) else INPUT_ERROR
    try:
        return args.handler(args)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (InvalidComponentError, BudgetExceededError) as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except Exception as exc:  # noqa: BLE001  - anything else is a bug in us
        print(f"internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


def main():
    raise SystemExit(run())
