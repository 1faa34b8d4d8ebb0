"""Command-line interface.

Exit codes: 0 success, 2 domain/input error, 3 conjectural result,
4 optimizer non-convergence (best effort still printed).
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import shlex
import sys

from . import graphs, oracle, optimize, turan
from .core import Profile, frac_str
from .density import density_polynomial, format_poly

EXIT_OK, EXIT_INPUT, EXIT_CONJECTURAL, EXIT_NONCONVERGED = 0, 2, 3, 4


class InputError(ValueError):
    pass


# --- argument parsing -------------------------------------------------------

def _common(defaults: bool) -> argparse.ArgumentParser:
    """Flags accepted both before and after the subcommand."""
    kw = {} if defaults else {"default": argparse.SUPPRESS}
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("text", "json", "csv"), **({"default": "text"} if defaults else kw))
    p.add_argument("--seed", type=int, **({"default": 0} if defaults else kw))
    p.add_argument("--threads", type=int, **({"default": 1} if defaults else kw))
    return p


def _profile_arg(text: str) -> Profile:
    try:
        return Profile.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="inducibility", parents=[_common(True)],
                                     description="Inducibility of complete multipartite and Turan graphs.")
    sub = parser.add_subparsers(dest="command", required=True)
    common = [_common(False)]

    p = sub.add_parser("turan", parents=common, help="closed-form i_k(T(s,r)) or i(T(s,r))")
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=int)

    sub.add_parser("table14", parents=common, help="all Turan graphs on at most 14 vertices")

    p = sub.add_parser("poly", parents=common, help="dump the density polynomial P_{F,m}")
    p.add_argument("--parts", type=_profile_arg, required=True)
    p.add_argument("--m", type=int, required=True)

    p = sub.add_parser("opt", parents=common, help="numerically compute i_k(F)")
    p.add_argument("--parts", type=_profile_arg, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("limit", parents=common, help="optimum for m = r..m_max parts")
    p.add_argument("--parts", type=_profile_arg, required=True)
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--tol", type=float, default=1e-12)

    p = sub.add_parser("oracle", parents=common, help="brute-force maximum over finite graphs")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--parts", type=_profile_arg)
    target.add_argument("--graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--forbid-k", type=int)
    p.add_argument("--multipartite", action="store_true",
                   help="search complete multipartite hosts only (parts < forbid-k, or --max-parts)")
    p.add_argument("--max-parts", type=int)
    p.add_argument("--limit", type=int, help="raise the vertex cap explicitly")
    p.add_argument("--witness-out", help="write the witness graph file here")

    p = sub.add_parser("blowup", parents=common, help="blowup or nested blowup of a graph")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--parts", type=_profile_arg)
    target.add_argument("--graph")
    how = p.add_mutually_exclusive_group(required=True)
    how.add_argument("--sizes", help="comma-separated part sizes, one per vertex")
    how.add_argument("--uniform", type=int, help="t-blowup")
    how.add_argument("--nested", type=int, help="depth of the nested blowup")

    p = sub.add_parser("symmetrize", parents=common, help="Zykov-symmetrize a graph to complete multipartite")
    p.add_argument("--graph", required=True)
    p.add_argument("--family", action="append", default=[], help="graph file of a family member (repeatable)")
    p.add_argument("--family-parts", action="append", default=[], type=_profile_arg,
                   help="complete multipartite family member (repeatable)")

    p = sub.add_parser("check", parents=common, help="structural predicates")
    p.add_argument("subcheck", choices=("symmetrizable", "robust", "strongly-unbalanced", "bs-condition"))
    p.add_argument("--graph", action="append", default=[])
    p.add_argument("--parts", type=_profile_arg)
    p.add_argument("--s", type=int)
    p.add_argument("--r", type=int)
    return parser


# --- helpers ------------------------------------------------------------------

def _load_graph(path: str) -> graphs.Graph:
    try:
        return graphs.read_graph(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _target(args) -> graphs.Graph:
    if getattr(args, "parts", None) is not None:
        return graphs.complete_multipartite(args.parts)
    return _load_graph(args.graph)


def _config(args) -> optimize.OptimizerConfig:
    return optimize.OptimizerConfig(restarts=args.restarts, grad_tol=args.tol,
                                    seed=args.seed, threads=args.threads)


def _kv_csv(payload: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    for key, val in payload.items():
        w.writerow([key, json.dumps(val) if isinstance(val, (list, dict)) else val])
    return buf.getvalue()


def _fmt_point(xs) -> str:
    return "(" + ", ".join(f"{x:.10g}" for x in xs) + ")"


# --- commands: each returns (payload, text, csv or None, exit code) ----------

def cmd_turan(args):
    res = turan.inducibility_turan(args.s, args.r, args.k)
    d = res.to_dict()
    which = "i" if args.k is None else f"i_{args.k}"
    lines = [f"{which}(T({args.s},{args.r})) = {d['value']} ~ {d['value_float']:.12g}",
             f"  t = {res.t}, parts used = {res.ell}, certificate = {res.certificate}"]
    if res.graphon:
        lines.append(f"  graphon: W[1/{res.ell}, ..., 1/{res.ell}] ({res.ell} parts)")
    if not res.attained:
        lines.append("  supremum not attained by any finite graphon")
    if not res.proven:
        lines.append("  UNPROVEN: candidate from the best equipartition only")
    code = EXIT_CONJECTURAL if not res.proven else EXIT_OK
    return d, "\n".join(lines) + "\n", None, code


def cmd_table14(args):
    rows = turan.table14()
    payload = [r.to_dict() for r in rows]
    text = "".join(f"T({r.s},{r.r})  t={r.t:<3} {frac_str(r.value):>48}  {r.certificate}\n" for r in rows)
    return payload, text, turan.table_csv(rows), EXIT_OK


def cmd_poly(args):
    poly = density_polynomial(args.parts, args.m)
    payload = {"profile": str(args.parts), "m": args.m,
               "monomials": [{"coeff": str(c), "exponents": list(e)} for e, c in poly.terms]}
    dump = format_poly(poly)
    return payload, dump, dump, EXIT_OK


def _opt_text(rep: optimize.OptimizationReport) -> str:
    lines = [f"value = {rep.value:.12g}"]
    if rep.exact_value is not None:
        lines[0] += f"  exact {frac_str(rep.exact_value)}"
    lines.append(f"point = {_fmt_point(rep.point)}  ({rep.support} parts)")
    lines.append(f"stationary = {rep.stationary}  residual = {rep.grad_norm:.3g}  "
                 f"restarts = {rep.restarts}  iterations = {rep.iterations}")
    return "\n".join(lines) + "\n"


def cmd_opt(args):
    try:
        rep = optimize.inducibility_partite(args.parts, args.k, _config(args))
        code = EXIT_OK
    except optimize.NonConvergenceError as exc:
        rep, code = exc.report, EXIT_NONCONVERGED
    d = {"profile": str(args.parts), "k": args.k, **rep.to_dict()}
    return d, _opt_text(rep), None, code


def cmd_limit(args):
    try:
        res = optimize.inducibility_limit(args.parts, args.m_max, _config(args))
    except optimize.NonConvergenceError as exc:
        d = {"profile": str(args.parts), **exc.report.to_dict()}
        return d, "did not converge\n" + _opt_text(exc.report), None, EXIT_NONCONVERGED
    d = res.to_dict()
    lines = []
    for (m, v), rep in zip(res.values, res.reports):
        exact = f"  exact {frac_str(rep.exact_value)}" if rep.exact_value is not None else ""
        lines.append(f"m={m:<3} {v:.12g}{exact}  parts used {rep.support}")
    lines.append(f"stabilization: {res.stabilization}")
    lines += [f"warning: {w}" for w in res.warnings]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["m", "value"])
    w.writerows(res.values)
    return d, "\n".join(lines) + "\n", buf.getvalue(), EXIT_OK


def cmd_oracle(args):
    F = _target(args)
    if F.n > args.n:
        raise InputError(f"target has {F.n} vertices, more than n={args.n}")
    if args.multipartite or args.max_parts is not None:
        max_parts = args.max_parts
        if max_parts is None:
            max_parts = args.n if args.forbid_k is None else args.forbid_k - 1
        kw = {} if args.limit is None else {"limit": args.limit}
        res = oracle.max_over_multipartite(F, args.n, max_parts, **kw)
    else:
        kw = {} if args.limit is None else {"limit": args.limit}
        res = oracle.max_over_all_graphs(F, args.n, args.forbid_k, **kw)
    d = res.to_dict()
    if args.witness_out:
        with open(args.witness_out, "w") as fh:
            fh.write(d["witness"])
        d["witness_file"] = args.witness_out
    text = (f"max density = {d['density']} ~ {d['density_float']:.12g}\n"
            f"graphs examined = {res.examined}, constraint: {res.constraint}\n"
            f"witness{' (' + d['witness_profile'] + ')' if d['witness_profile'] else ''}:\n")
    text += d["witness"] if not args.witness_out else f"  written to {args.witness_out}\n"
    return d, text, None, EXIT_OK


def cmd_blowup(args):
    F = _target(args)
    if args.nested is not None:
        G = graphs.nested_blowup(F, args.nested)
    elif args.uniform is not None:
        G = graphs.blowup(F, [args.uniform] * F.n)
    else:
        try:
            sizes = [int(t) for t in args.sizes.split(",")]
        except ValueError:
            raise InputError(f"malformed sizes {args.sizes!r}") from None
        G = graphs.blowup(F, sizes)
    text = graphs.format_graph(G)
    return {"n": G.n, "edges": [list(e) for e in G.edges()], "graph": text}, text, None, EXIT_OK


def cmd_symmetrize(args):
    G = _load_graph(args.graph)
    family = [_load_graph(p) for p in args.family] + [graphs.complete_multipartite(p) for p in args.family_parts]
    if not family:
        raise InputError("give at least one --family or --family-parts member")
    if len({f.n for f in family}) != 1:
        raise InputError("family members must share a vertex count")
    trace = graphs.symmetrize_to_multipartite(G, family)
    prof = graphs.is_complete_multipartite(trace.final)
    steps = [{"source": s.source, "replaced": s.replaced, "before": s.before, "after": s.after, "kind": s.kind}
             for s in trace.steps]
    d = {"steps": steps, "initial_count": trace.initial_count, "final_count": trace.final_count,
         "final_profile": str(prof) if prof else None, "final_graph": graphs.format_graph(trace.final)}
    lines = [f"copies: {trace.initial_count} -> {trace.final_count} in {len(steps)} steps"]
    lines += [f"  {s['kind']:6} clone {s['source']} onto {s['replaced']}: {s['before']} -> {s['after']}" for s in steps]
    lines.append(f"final: complete multipartite {prof}")
    return d, "\n".join(lines) + "\n", None, EXIT_OK


def cmd_check(args):
    sub = args.subcheck
    witness = None
    if sub == "symmetrizable":
        if not args.graph and args.parts is None:
            raise InputError("symmetrizable needs --graph (repeatable) or --parts")
        fam = [_load_graph(p) for p in args.graph]
        if args.parts is not None:
            fam.append(graphs.complete_multipartite(args.parts))
        if len({f.n for f in fam}) != 1:
            raise InputError("family members must share a vertex count")
        w = graphs.symmetrizable_witness(fam)
        verdict = w is None
        if w:
            witness = {"member": w[0], "replaced": w[1], "copied": w[2]}
    elif sub == "robust":
        if len(args.graph) != 1 and args.parts is None:
            raise InputError("robust needs exactly one --graph or --parts")
        F = _load_graph(args.graph[0]) if args.graph else graphs.complete_multipartite(args.parts)
        part = graphs.fuzzy_blowup_witness(F)
        verdict = part is None
        if part:
            witness = {"partition": part}
    elif sub == "strongly-unbalanced":
        if args.parts is None:
            raise InputError("strongly-unbalanced needs --parts")
        verdict = graphs.is_strongly_unbalanced(args.parts)
        if not verdict:
            a = args.parts.parts
            bad = next((x, y) for i, x in enumerate(a) for y in a[i + 1:] if (x - y) ** 2 <= x + y)
            witness = {"pair": list(bad)}
    else:
        if args.s is None or args.r is None:
            raise InputError("bs-condition needs --s and --r")
        if not 2 <= args.r < args.s:
            raise InputError("bs-condition needs 2 <= r < s")
        verdict = turan.bs_condition(args.s, args.r)
    d = {"check": sub, "verdict": verdict}
    if witness is not None:
        d["witness"] = witness
    text = f"{sub}: {str(verdict).lower()}\n" + (f"  witness: {json.dumps(witness)}\n" if witness else "")
    return d, text, None, EXIT_OK


COMMANDS = {
    "turan": cmd_turan, "table14": cmd_table14, "poly": cmd_poly, "opt": cmd_opt,
    "limit": cmd_limit, "oracle": cmd_oracle, "blowup": cmd_blowup,
    "symmetrize": cmd_symmetrize, "check": cmd_check,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(argv)
    try:
        payload, text, csv_text, code = COMMANDS[args.command](args)
    except (ValueError, InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.format == "json":
        envelope = {"command": " ".join(shlex.quote(a) for a in argv), "format": "json", "result": payload}
        sys.stdout.write(json.dumps(envelope, indent=2) + "\n")
    elif args.format == "csv":
        sys.stdout.write(csv_text if csv_text is not None else _kv_csv(payload if isinstance(payload, dict) else {}))
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
