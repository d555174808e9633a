"""Command-line frontend: ``widthproof <subcommand> ...``.

Exit codes: ``check`` 0 accept, 1 reject, 2 error; ``prove`` 0 holds, 1 refuted,
3 budget exhausted (2 on input errors); everything else 0 on success, 2 on error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .atp import Verdict, bounded_inclusion_test, dump_refutation, inclusion_test
from .combinator import ProductCore, conjecture
from .dpcore import INV_UNDEFINED, DPCore, decode_int, dynamize, has_final, measure_complexity
from .errors import WidthproofError
from .graphs import graph_from_json, graph_to_dot, graph_to_json
from .itd import enumerate_valid_terms, extract, from_nice_decomposition, nice_decomposition_from_json, run_states, width
from .terms import format_term, parse_term

EXIT_ERROR = 2
EXIT_BUDGET = 3


def _read_text(path: str) -> str:
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _read_term(path: str):
    return parse_term(_read_text(path))


def _conjecture(args):
    text = args.expr
    if text.startswith("@"):
        path = Path(text[1:])
        return conjecture(path.read_text().strip(), base_dir=path.parent)
    return conjecture(text, base_dir=Path.cwd())


def show_inv(core: DPCore, inv: bytes) -> str:
    if inv == INV_UNDEFINED:
        return "undefined"
    if core.integer_inv:
        return str(decode_int(inv))
    return inv.hex() or "empty"


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(text)


def _width_for(args, term) -> int:
    return args.width if args.width is not None else max(width(term), 0)


# ---------------------------------------------------------------- subcommands


def cmd_check(args) -> int:
    term = _read_term(args.term)
    k = _width_for(args, term)
    conj = _conjecture(args)
    core = conj.core()
    run_states(k, term)
    ws = dynamize(core, k, term)
    ok = has_final(core, k, ws)
    if isinstance(core, ProductCore):
        invs = core.component_invs(k, ws)
    else:
        invs = [core.inv(k, ws)]
    rows = [(c.name, show_inv(c, i)) for c, i in zip(conj.cores, invs)]
    payload = {"k": k, "conjecture": conj.text.strip(), "accepted": ok, "invariants": {n: v for n, v in rows}}
    text = ("ACCEPT" if ok else "REJECT") + "\n" + "".join(f"inv {n} = {v}\n" for n, v in rows)
    _emit(args, payload, text)
    return 0 if ok else 1


def cmd_prove(args) -> int:
    conj = _conjecture(args)
    core = conj.core()
    if args.max_size is not None:
        out = bounded_inclusion_test(core, args.width, args.max_size, args.max_pairs, args.max_bytes)
    else:
        out = inclusion_test(core, args.width, args.max_pairs, args.max_bytes)
    if out.refutation is not None and args.refutation_out:
        Path(args.refutation_out).write_text(dump_refutation(core, out.refutation))
    if args.format == "json":
        _emit(args, out.to_json(core, include_time=args.time), "")
    elif args.format == "dot" and out.graph is not None:
        sys.stdout.write(graph_to_dot(out.graph))
    else:
        scope = f"at width {args.width}" + (f" up to size {args.max_size}" if args.max_size is not None else "")
        st = out.stats
        lines = []
        if out.verdict is Verdict.HOLDS:
            lines.append(f"HOLDS {scope}")
        elif out.verdict is Verdict.REFUTED:
            lines.append(f"REFUTED {scope}")
            lines.append(f"counterexample: {format_term(out.counterexample)}")
            lines.append(f"counterexample size: {out.counterexample.size}")
            g = out.graph
            lines.append(f"graph: vertices={list(g.vertices)} edges={[(a, b) for _, a, b in g.edge_ends]}")
            lines.append(f"refutation length: {len(out.refutation)}")
        else:
            lines.append(f"RESOURCE EXHAUSTED {scope}: {out.reason}")
        lines.append(f"pairs visited: {st.pairs_visited}, discovered: {st.pairs_discovered}, frontier peak: {st.frontier_peak}")
        if args.time:
            lines.append(f"wall time: {st.wall_time:.3f}s")
        sys.stdout.write("\n".join(lines) + "\n")
    return {Verdict.HOLDS: 0, Verdict.REFUTED: 1, Verdict.EXHAUSTED: EXIT_BUDGET}[out.verdict]


def cmd_extract(args) -> int:
    term = _read_term(args.term)
    k = _width_for(args, term)
    res = extract(k, term)
    g = res.graph
    if args.format == "dot":
        sys.stdout.write(graph_to_dot(g))
    else:
        payload = {"graph": graph_to_json(g), "boundary": {str(u): x for u, x in res.top_map}}
        text = f"vertices: {list(g.vertices)}\nedges: {[(e, a, b) for e, a, b in g.edge_ends]}\nboundary: {dict(res.top_map)}\n"
        _emit(args, payload, text)
    return 0


def cmd_validate(args) -> int:
    term = _read_term(args.term)
    k = _width_for(args, term)
    run_states(k, term)
    _emit(args, {"valid": True, "k": k, "size": term.size, "height": term.height}, f"valid at width {k} (size {term.size}, height {term.height})\n")
    return 0


def cmd_enumerate(args) -> int:
    terms = list(enumerate_valid_terms(args.width, args.max_size))
    if args.count:
        _emit(args, {"k": args.width, "max_size": args.max_size, "count": len(terms)}, f"{len(terms)}\n")
    else:
        _emit(args, {"k": args.width, "max_size": args.max_size, "terms": [format_term(t) for t in terms]}, "".join(format_term(t) + "\n" for t in terms))
    return 0


def cmd_measure(args) -> int:
    core = _conjecture(args).core()
    rep = measure_complexity(core, args.width, args.max_size, max_pairs=args.max_pairs, method=args.method)
    payload = {"core": core.name, "k": rep.k, "n": rep.n, "beta": rep.beta, "mu": rep.mu, "nu": rep.nu, "delta": rep.delta, "relations_hold": rep.relations_hold()}
    text = f"{core.name} k={rep.k} n={rep.n}: beta={rep.beta} mu={rep.mu} nu={rep.nu} delta={rep.delta}\n"
    _emit(args, payload, text)
    return 0


def cmd_convert(args) -> int:
    g = graph_from_json(_read_text(args.graph))
    d = nice_decomposition_from_json(_read_text(args.decomposition))
    order = [int(x) for x in args.label_order.split(",")] if args.label_order else None
    term = from_nice_decomposition(g, d, args.width, order)
    _emit(args, {"term": format_term(term)}, format_term(term) + "\n")
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="widthproof", description="Model checking and conjecture proving over instructive tree decompositions.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, width_required=False, formats=("text", "json")):
        sp.add_argument("--width", "-k", type=int, required=width_required, help="width k (labels 1..k+1)")
        sp.add_argument("--format", choices=formats, default="text")
        sp.add_argument("--seed", type=int, default=None, help="accepted for uniformity; the engine is deterministic")

    sp = sub.add_parser("check", help="model-check a term against a core or conjecture")
    common(sp)
    sp.add_argument("term", help="term file in s-expression syntax ('-' for stdin)")
    sp.add_argument("expr", help="core or conjecture expression, or @file")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("prove", help="decide a conjecture for all graphs of treewidth at most k")
    common(sp, width_required=True, formats=("text", "json", "dot"))
    sp.add_argument("expr", help="core or conjecture expression, or @file")
    sp.add_argument("--max-size", type=int, default=None, help="only consider terms of at most this size")
    sp.add_argument("--max-pairs", type=int, default=5_000_000)
    sp.add_argument("--max-bytes", type=int, default=None, help="memory budget (default: $WIDTHPROOF_BUDGET_BYTES or 2 GiB)")
    sp.add_argument("--refutation-out", default=None, help="write the refutation JSON here")
    sp.add_argument("--time", action="store_true", help="report wall time (makes output nondeterministic)")
    sp.set_defaults(func=cmd_prove)

    sp = sub.add_parser("extract-graph", help="print the graph built by a term")
    common(sp, formats=("text", "json", "dot"))
    sp.add_argument("term")
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("validate", help="check that a term is a valid instructive term")
    common(sp)
    sp.add_argument("term")
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("enumerate", help="list valid terms up to a size")
    common(sp, width_required=True)
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--count", action="store_true")
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("measure", help="measure bitlength, multiplicity and state complexities")
    common(sp, width_required=True)
    sp.add_argument("expr")
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--max-pairs", type=int, default=2_000_000)
    sp.add_argument("--method", choices=("closure", "enumerate"), default="closure")
    sp.set_defaults(func=cmd_measure)

    sp = sub.add_parser("convert", help="turn a nice edge-introducing decomposition into a term")
    common(sp)
    sp.add_argument("graph", help="graph JSON")
    sp.add_argument("decomposition", help="nice decomposition JSON")
    sp.add_argument("--label-order", default=None, help="comma-separated permutation of 1..k+1")
    sp.set_defaults(func=cmd_convert)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "width", None) is not None and args.width < 0:
        parser.error("--width must be non-negative")
    try:
        return args.func(args)
    except (WidthproofError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
