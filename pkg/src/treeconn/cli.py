"""Command-line front end for batch enumeration, construction, search, and
export.  Every command is deterministic in canonical mode: identical inputs
produce byte-identical outputs."""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .colorings import annotate, invariant_set, lower_top, prune_top, to_strong
from .config import Budget, RunConfig
from .constructions import add_root, doubling_tree, graft, plus_leaf, star_extend
from .errors import BudgetExceededError, ParseError
from .homsets import enumerate_hom, enumerate_rigid_surjections
from .morphisms import (
    CONN,
    CONN_ROOT,
    EMB,
    INC_INJ,
    PSC,
    RIGID,
    connection_from_record,
    connection_to_record,
)
from .search import arrow_check, degree_at_witness, verify_lower_bound, verify_no_ramsey
from .trees import (
    Forest,
    OrderedTree,
    chain,
    dump_tree,
    forest_from_record,
    format_tree,
    parse_forest,
    parse_tree,
    tree_from_record,
)

CAT_FLAGS = {
    "incinj": INC_INJ,
    "rigid": RIGID,
    "conn": CONN,
    "conn-root": CONN_ROOT,
    "psc": PSC,
}

ENUM_KINDS = {
    "emb": EMB,
    "embeddings": EMB,
    "incinj": INC_INJ,
    "rigid": RIGID,
    "conn": CONN,
    "conn-root": CONN_ROOT,
    "psc": PSC,
}

_CHAIN_RE = re.compile(r"^chain(\d+)$")


def load_tree(arg: str) -> OrderedTree:
    """Resolve a tree argument: an existing file (JSON or parenthesis text),
    a literal parenthesis string, or the shorthand chainK."""
    p = Path(arg)
    if p.is_file():
        text = p.read_text().strip()
        if text.startswith("{"):
            return tree_from_record(json.loads(text))
        return parse_tree(text)
    if arg.startswith("("):
        return parse_tree(arg)
    m = _CHAIN_RE.match(arg)
    if m:
        return chain(int(m.group(1)))
    raise ValueError(f"cannot resolve tree argument {arg!r}")


def load_forest(arg: str) -> Forest:
    if arg in ("", "empty"):
        return Forest(())
    p = Path(arg)
    if p.is_file():
        text = p.read_text().strip()
        if text.startswith("{"):
            return forest_from_record(json.loads(text))
        return parse_forest(text)
    return parse_forest(arg)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def export_dot(t: OrderedTree, labels: dict[int, str] | None = None) -> str:
    """Deterministic graph description: ancestry edges, child order preserved
    left to right via the out-edge ordering."""
    lines = ["digraph tree {", "  ordering=out;"]
    for v in range(t.n):
        label = labels.get(v, str(v)) if labels else str(v)
        lines.append(f'  n{v} [label="{label}"];')
    for v in range(t.n):
        for c in t.children[v]:
            lines.append(f"  n{v} -> n{c};")
    lines.append("}")
    return "\n".join(lines)


def _labels_from_table(path: str) -> dict[int, str]:
    rec = json.loads(Path(path).read_text())
    labels: dict[int, str] = {}
    for v, idx in enumerate(rec.get("vertex_map", [])):
        labels[idx] = str(v)
    for b, b1, b2 in rec.get("doubles", []):
        labels[b1] = f"{b}.1"
        labels[b2] = f"{b}.2"
    return labels


def _budget_from_args(args) -> Budget:
    defaults = {}
    if getattr(args, "config", None):
        defaults = json.loads(Path(args.config).read_text())
    kwargs = {
        "max_tree_size": defaults.get("max_tree_size", 8),
        "max_vertices": defaults.get("max_vertices", 24),
        "max_hom": defaults.get("max_hom", 200_000),
        "max_nodes": defaults.get("max_nodes", 20_000_000),
        "time_cap": defaults.get("time_cap"),
    }
    if args.budget_max_tree is not None:
        kwargs["max_tree_size"] = args.budget_max_tree
    if args.budget_max_vertices is not None:
        kwargs["max_vertices"] = args.budget_max_vertices
    if args.budget_max_hom is not None:
        kwargs["max_hom"] = args.budget_max_hom
    if args.budget_max_nodes is not None:
        kwargs["max_nodes"] = args.budget_max_nodes
    if args.budget_time is not None:
        kwargs["time_cap"] = args.budget_time
    return Budget(**kwargs)


def _config_from_args(args) -> RunConfig:
    mode = args.mode
    if mode is None and getattr(args, "config", None):
        mode = json.loads(Path(args.config).read_text()).get("mode")
    return RunConfig(budget=_budget_from_args(args), mode=mode or "canonical")


def _cmd_enum(args) -> int:
    cfg = _config_from_args(args)
    category = ENUM_KINDS[args.kind]
    A = load_tree(args.source)
    B = load_tree(args.target)
    if category == RIGID:
        hom = enumerate_rigid_surjections(A, B, cfg.budget)
    else:
        hom = enumerate_hom(category, A, B, cfg.budget)
    if args.count:
        _emit(str(len(hom)), args.out)
        return 0
    lines = [_dumps(connection_to_record(c)) for c in hom]
    _emit("\n".join(lines) if lines else "", args.out)
    return 0


def _cmd_construct(args) -> int:
    cfg = _config_from_args(args)
    kind = args.kind
    if kind == "doubling":
        result = doubling_tree(load_tree(args.inputs[0]))
        _emit(_dumps(result.to_record()), args.out)
        print(format_tree(result.tree), file=sys.stderr)
        return 0
    if kind == "graft":
        T = load_tree(args.inputs[0])
        anchors = [int(x) for x in args.at.split(",")] if args.at else []
        forests = [load_forest(a) for a in args.inputs[1:]]
        result = graft(T, anchors, forests)
        _emit(_dumps(result.to_record()), args.out)
        return 0
    if kind == "add-root":
        tree = add_root(load_forest(args.inputs[0] if args.inputs else "empty"))
    elif kind == "plus-leaf":
        tree = plus_leaf(load_tree(args.inputs[0]))
    elif kind == "star":
        tree = star_extend(load_tree(args.inputs[0]))
    else:
        raise ValueError(f"unknown construction {kind!r}")
    _emit(dump_tree(tree) if args.json else format_tree(tree), args.out)
    return 0


def _cmd_arrow(args) -> int:
    cfg = _config_from_args(args)
    cert = arrow_check(
        load_tree(args.source), load_tree(args.middle), load_tree(args.witness),
        args.r, CAT_FLAGS[args.cat], cfg.budget, cfg.mode,
    )
    _emit(cert.to_json(), args.out)
    return cert.exit_code


def _cmd_degree(args) -> int:
    cfg = _config_from_args(args)
    _, cert = degree_at_witness(
        load_tree(args.source), load_tree(args.middle), load_tree(args.witness),
        args.r, CAT_FLAGS[args.cat], cfg.budget, cfg.mode, at_most=args.at_most,
    )
    _emit(cert.to_json(), args.out)
    return cert.exit_code


def _resolve_witness(which: str, T: OrderedTree) -> OrderedTree:
    if which == "self":
        return T
    if which == "double":
        return doubling_tree(T).tree
    return load_tree(which)


def _cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    S = load_tree(args.source)
    dbl = doubling_tree(S)
    V = _resolve_witness(args.witness, dbl.tree)
    if args.check == "lower-bound":
        report = verify_lower_bound(S, V, cfg.budget)
    else:  # no-ramsey
        w = dbl.connection_for({args.vertex})
        report = verify_no_ramsey(S, dbl.tree, args.vertex, w.surj, w.emb, V, cfg.budget)
    _emit(report.summary(), args.out)
    return 0 if report.ok else 1


def _load_connection(arg: str):
    text = Path(arg).read_text() if Path(arg).is_file() else arg
    return connection_from_record(json.loads(text))


def _cmd_invariant(args) -> int:
    c = _load_connection(args.morphism)
    _emit(_dumps(sorted(invariant_set(c))), args.out)
    return 0


def _cmd_functor(args) -> int:
    c = _load_connection(args.morphism)
    before = connection_to_record(c)
    if args.which == "strong":
        out = {"before": before, "after": connection_to_record(to_strong(c))}
    elif args.which == "prune":
        pruned = prune_top(annotate(c))
        out = {
            "before": before,
            "after": connection_to_record(pruned.hom),
            "bits": list(pruned.bits),
        }
    else:  # lower
        out = {"before": before, "after": connection_to_record(lower_top(c))}
    _emit(_dumps(out), args.out)
    return 0


def _cmd_export(args) -> int:
    t = load_tree(args.tree)
    if args.dot:
        labels = _labels_from_table(args.labels) if args.labels else None
        _emit(export_dot(t, labels), args.out)
    elif args.json:
        _emit(dump_tree(t), args.out)
    else:
        _emit(format_tree(t), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="treeconn",
        description="Enumerate, construct, and exhaustively search morphisms "
        "between finite ordered trees.",
    )
    ap.add_argument("--mode", choices=("canonical", "fast"), default=None)
    ap.add_argument("--config", help="JSON file of default budget/mode values; flags win")
    ap.add_argument("--budget-max-tree", type=int, default=None)
    ap.add_argument("--budget-max-vertices", type=int, default=None)
    ap.add_argument("--budget-max-hom", type=int, default=None)
    ap.add_argument("--budget-max-nodes", type=int, default=None)
    ap.add_argument("--budget-time", type=float, default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enum", help="enumerate or count a Hom-set")
    p.add_argument("kind", choices=sorted(ENUM_KINDS))
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--count", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_enum)

    p = sub.add_parser("construct", help="build trees and witness morphisms")
    p.add_argument("kind", choices=("doubling", "plus-leaf", "star", "add-root", "graft"))
    p.add_argument("inputs", nargs="*")
    p.add_argument("--at", help="comma-separated anchor vertices for graft")
    p.add_argument("--json", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_construct)

    p = sub.add_parser("arrow", help="decide an arrow relation")
    p.add_argument("source")
    p.add_argument("middle")
    p.add_argument("witness")
    p.add_argument("--cat", choices=sorted(CAT_FLAGS), required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_arrow)

    p = sub.add_parser("degree", help="compute the degree at a witness")
    p.add_argument("source")
    p.add_argument("middle")
    p.add_argument("witness")
    p.add_argument("--cat", choices=sorted(CAT_FLAGS), required=True)
    p.add_argument("-r", type=int, required=True)
    p.add_argument("--at-most", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_degree)

    p = sub.add_parser("verify", help="run a doubling-based batch verification")
    p.add_argument("check", choices=("lower-bound", "no-ramsey"))
    p.add_argument("source")
    p.add_argument("--witness", default="self", help="self | double | tree argument")
    p.add_argument("--vertex", type=int, default=1, help="marked vertex for no-ramsey")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("invariant", help="print a morphism's disagreement set")
    p.add_argument("morphism", help="morphism record (file or literal JSON)")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_invariant)

    p = sub.add_parser("functor", help="apply a morphism operation, print before/after")
    p.add_argument("which", choices=("strong", "prune", "lower"))
    p.add_argument("morphism", help="morphism record (file or literal JSON)")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_functor)

    p = sub.add_parser("export", help="print a tree in text, JSON, or dot form")
    p.add_argument("tree")
    p.add_argument("--dot", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--labels", help="translation table from construct doubling")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_export)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 2
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, IndexError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
