"""Command-line interface: every toolkit operation as a subcommand.

Exit codes: 0 on success or a passing check, 1 on a property violation (a
failing check, a missing isomorphism, an anomalous sweep), 2 on usage or
input errors.  Machine reports (--json) embed a run manifest with the
command, input hashes, seed and version; wall-clock timing is shown only in
the human output so that equal inputs give byte-identical JSON.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__, acceptance, analysis, graphs, group, trees, witness
from .errors import ToolkitError
from .folog import structure_from_json

PASS, FAIL, USAGE = 0, 1, 2


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        digest.update(fh.read())
    return digest.hexdigest()


def _load_json(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ToolkitError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise ToolkitError(f"invalid JSON in {path}: {exc}")


def _manifest(command, paths, seed=None):
    return {
        "command": command,
        "inputs": {p: _sha256(p) for p in sorted(paths)},
        "seed": seed,
        "version": __version__,
    }


def _emit(args, manifest, payload, human_lines, elapsed):
    if args.json:
        report = {"manifest": manifest, "result": payload}
        sys.stdout.write(json.dumps(report, sort_keys=True, separators=(",", ":")) + "\n")
    else:
        for line in human_lines:
            print(line)
        print(f"[{manifest['command']}] {elapsed:.2f}s")


def _load_graph(path):
    return graphs.graph_from_json(_load_json(path))


def _context(args):
    return group.mk_context(
        args.p, _load_graph(args.graph), allow_non_nice=getattr(args, "allow_non_nice", False)
    )


# ── Subcommand handlers ────────────────────────────────────────────────────


def cmd_check_nice(args):
    g = _load_graph(args.graph)
    report = graphs.is_nice(g)
    payload = {"nice": report.nice, "violation": report.violation}
    lines = ["nice" if report.nice else f"not nice: {report.violation}"]
    return (PASS if report.nice else FAIL), payload, lines, [args.graph]


def cmd_find_nice(args):
    found = graphs.find_nice_graphs(args.n_max)
    payload = {"count": len(found), "graphs": [graphs.graph_to_json(g) for g in found]}
    lines = [f"{len(found)} nice graphs with n <= {args.n_max}"]
    lines += [f"  n={g.n} edges={sorted(g.edges)}" for g in found]
    return PASS, payload, lines, []


def cmd_group_info(args):
    ctx = _context(args)
    u_z = analysis.central_u_space(ctx)
    center_dim = u_z.dim + ctx.m
    payload = {
        "order": ctx.order(),
        "center_dimension": center_dim,
        "nonedges": [list(pair) for pair in ctx.nonedges],
    }
    lines = [
        f"order: {ctx.order()} = {ctx.p}^{ctx.n + ctx.m}",
        f"center dimension: {center_dim}",
        f"nonedges: {list(ctx.nonedges)}",
    ]
    return PASS, payload, lines, [args.graph]


def cmd_classify(args):
    ctx = _context(args)
    el = group.element_from_json(ctx, _load_json(args.element))
    label = analysis.classify(ctx, el)
    payload = {"kind": label.kind.value, "q": label.q, "isolated": label.isolated}
    lines = [f"kind={label.kind.value} q={label.q} isolated={label.isolated}"]
    return PASS, payload, lines, [args.graph, args.element]


def cmd_sweep_classify(args):
    ctx = _context(args)
    sweep = analysis.sweep_classification(ctx)
    counts = {}
    for label in sweep.labels.values():
        counts[label.kind.value] = counts.get(label.kind.value, 0) + 1
    anomalous = counts.get(analysis.TypeKind.ANOMALOUS.value, 0)
    payload = {"counts": dict(sorted(counts.items())), "anomalous": anomalous}
    lines = [f"{kind}: {count}" for kind, count in sorted(counts.items())]
    return (FAIL if anomalous else PASS), payload, lines, [args.graph]


def cmd_gamma(args):
    ctx = _context(args)
    interpreted = analysis.gamma(ctx)
    payload = {"gamma": graphs.graph_to_json(interpreted)}
    lines = [f"gamma: n={interpreted.n} edges={sorted(interpreted.edges)}"]
    code = PASS
    if args.check_iso:
        iso = analysis.gamma_roundtrip(ctx)
        payload["iso"] = iso
        if iso is None:
            lines.append("no isomorphism with the source graph")
            code = FAIL
        else:
            lines.append(f"iso: {iso}")
    return code, payload, lines, [args.graph]


def cmd_transversal(args):
    ctx = _context(args)
    t = analysis.build_transversal(ctx, iota_mode=args.iota_mode)
    report = analysis.verify_transversal(ctx, t, iota_mode=args.iota_mode)
    payload = {
        "x_nu": [list(el.u) for el in t.x_nu],
        "x_p": [list(el.u) for el in t.x_p],
        "x_iota": [list(el.u) for el in t.x_iota],
        "handles": {
            str(i): t.x_nu.index(t.handle_of_xp[el]) for i, el in enumerate(t.x_p)
        },
        "verified": report.ok,
        "clauses": report.clauses,
    }
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
    lines = [
        f"|x_nu|={len(t.x_nu)} |x_p|={len(t.x_p)} |x_iota|={len(t.x_iota)}",
        f"verified: {report.ok} {report.clauses}",
    ]
    return (PASS if report.ok else FAIL), payload, lines, [args.graph]


def _parse_tuple(text):
    if text == "":
        return ((),)
    return tuple(trees.parse_node(part) for part in text.split(","))


def cmd_tree_qftp(args):
    t1, t2 = _parse_tuple(args.tuple1), _parse_tuple(args.tuple2)
    equal = trees.qftp_equal(t1, t2)
    payload = {
        "equal": equal,
        "fingerprint1": repr(trees.qftp_fingerprint(t1)),
        "fingerprint2": repr(trees.qftp_fingerprint(t2)),
    }
    lines = [f"qftp equal: {equal}"]
    return (PASS if equal else FAIL), payload, lines, []


def cmd_tree_mono(args):
    coloring = trees.coloring_from_json(_load_json(args.coloring))
    host = coloring.domain
    if args.shape == "sop2":
        res = trees.mono_subtree_sop2(host, coloring, args.depth)
    elif args.shape == "sop1":
        res = trees.mono_subtree_sop1(host, coloring, args.depth)
    else:
        res = trees.mono_subtree_tp1(host, coloring, args.depth, args.width)
    valid = res.found and trees.validate_mono_embedding(
        args.shape, host, coloring, res
    )
    payload = {
        "found": res.found,
        "color": res.color,
        "failed_colors": list(res.failed_colors),
        "validated": valid,
        "embedding": {
            trees.node_str(k): trees.node_str(v) for k, v in sorted(res.embedding.items())
        }
        if res.found
        else None,
    }
    lines = [
        f"shape={args.shape} depth={args.depth} found={res.found} "
        f"color={res.color} failed={list(res.failed_colors)}"
    ]
    if res.found:
        lines.append(f"validated: {valid}")
    return (PASS if res.found and valid else FAIL), payload, lines, [args.coloring]


def _witness_loader(base_path):
    import os

    def load(rel):
        path = rel if os.path.isabs(rel) else os.path.join(os.path.dirname(base_path), rel)
        return structure_from_json(_load_json(path))

    return load


def cmd_witness_check(args):
    fam = witness.family_from_json(_load_json(args.family), _witness_loader(args.family))
    if args.kind == "sop1":
        report = witness.check_sop1(fam)
    elif args.kind == "sop2":
        report = witness.check_sop2(fam)
    elif args.kind == "tp1":
        report = witness.check_tp1(fam)
    else:
        report = witness.check_weak_ktp1(fam, args.k)
    payload = {
        "kind": report.kind,
        "ok": report.ok,
        "clauses": report.clauses,
        "counterexample": repr(report.counterexample),
    }
    lines = [f"{report.kind}: {'pass' if report.ok else 'fail'} clauses={report.clauses}"]
    if report.counterexample:
        lines.append(f"counterexample: {report.counterexample}")
    return (PASS if report.ok else FAIL), payload, lines, [args.family]


def cmd_witness_array(args):
    arr = witness.array_from_json(_load_json(args.family), _witness_loader(args.family))
    report = witness.check_sop1_array(arr, args.k, check_indiscernible=args.indiscernible)
    payload = {
        "ok": report.ok,
        "clauses": report.clauses,
        "counterexample": repr(report.counterexample),
    }
    lines = [f"sop1 array: {'pass' if report.ok else 'fail'} clauses={report.clauses}"]
    if report.counterexample:
        lines.append(f"counterexample: {report.counterexample}")
    return (PASS if report.ok else FAIL), payload, lines, [args.family]


def cmd_repro(args):
    results = acceptance.run_all(args.seed)
    payload_once = acceptance.results_payload(results)
    rerun = acceptance.results_payload(acceptance.run_all(args.seed))
    deterministic = json.dumps(payload_once, sort_keys=True) == json.dumps(
        rerun, sort_keys=True
    )
    results.append(
        acceptance.CriterionResult(
            15, "repro determinism", deterministic, "double build compared"
        )
    )
    payload = {
        "seed": args.seed,
        "criteria": acceptance.results_payload(results),
        "all_passed": all(r.passed for r in results),
    }
    lines = [f"{'#':>2}  {'criterion':34s} verdict"]
    for r in results:
        lines.append(f"{r.number:2d}  {r.name:34s} {'pass' if r.passed else 'FAIL'}  ({r.details})")
    lines.append("all passed" if payload["all_passed"] else "FAILURES PRESENT")
    return (PASS if payload["all_passed"] else FAIL), payload, lines, []


# ── Parser ─────────────────────────────────────────────────────────────────


def build_parser():
    parser = argparse.ArgumentParser(
        prog="meklerkit",
        description="Finite-scale toolkit: Mekler groups, tree combinatorics, witness checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.set_defaults(handler=handler)
        return p

    p = add("check-nice", cmd_check_nice, help="test the niceness conditions")
    p.add_argument("graph", help="graph JSON file")

    p = add("find-nice", cmd_find_nice, help="enumerate nice graphs up to iso")
    p.add_argument("--n-max", type=int, required=True)

    for name, handler in (
        ("group-info", cmd_group_info),
        ("sweep-classify", cmd_sweep_classify),
        ("gamma", cmd_gamma),
        ("transversal", cmd_transversal),
        ("classify", cmd_classify),
    ):
        p = add(name, handler, help=f"{name} over the group of a nice graph")
        p.add_argument("--graph", required=True, help="graph JSON file")
        p.add_argument("-p", type=int, required=True, help="odd prime")
        p.add_argument("--allow-non-nice", action="store_true")
        if name == "classify":
            p.add_argument("--element", required=True, help="element JSON file")
        if name == "gamma":
            p.add_argument("--check-iso", action="store_true")
        if name == "transversal":
            p.add_argument("--out", help="write transversal JSON here")
            p.add_argument(
                "--iota-mode", choices=("nu_p", "iota_p"), default="nu_p"
            )

    tree = sub.add_parser("tree", help="tree language operations")
    tree_sub = tree.add_subparsers(dest="tree_command", required=True)
    p = tree_sub.add_parser("qftp", help="compare quantifier-free types")
    p.add_argument("tuple1", help='comma-separated nodes, e.g. "00,01"')
    p.add_argument("tuple2")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_tree_qftp)
    p = tree_sub.add_parser("mono", help="search a monochromatic subtree")
    p.add_argument("--shape", choices=("sop1", "sop2", "tp1"), required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--width", type=int, default=2, help="branching for tp1")
    p.add_argument("--coloring", required=True, help="coloring JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_tree_mono)

    wit = sub.add_parser("witness", help="witness family checks")
    wit_sub = wit.add_subparsers(dest="witness_command", required=True)
    p = wit_sub.add_parser("check", help="check a tree witness family")
    p.add_argument("--kind", choices=("sop1", "sop2", "tp1", "weak"), required=True)
    p.add_argument("--family", required=True, help="family JSON file")
    p.add_argument("-k", type=int, default=2, help="sibling count for weak k-TP1")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_witness_check)
    p = wit_sub.add_parser("array", help="check an array family")
    p.add_argument("--family", required=True, help="array JSON file")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--indiscernible", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(handler=cmd_witness_array)

    p = add("repro", cmd_repro, help="run the acceptance criteria")
    p.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.time()
    try:
        code, payload, lines, paths = args.handler(args)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    seed = getattr(args, "seed", None)
    command = args.command
    for extra in ("tree_command", "witness_command"):
        if getattr(args, extra, None):
            command += " " + getattr(args, extra)
    manifest = _manifest(command, paths, seed)
    _emit(args, manifest, payload, lines, time.time() - started)
    return code


if __name__ == "__main__":
    sys.exit(main())
