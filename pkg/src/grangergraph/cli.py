"""Command-line front end.

Exit status: 0 on success, 2 on usage errors (including malformed vertex
sets), 1 on domain errors such as unreadable files or invalid models.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .crosscheck import crosscheck_graph, crosscheck_random
from .errors import GrangerGraphError, QueryError
from .graph import marginal_ancestral_graph, read_mg, to_dot, to_mg
from .markov import enumerate_statements, gc_contemp, gc_noncausal, ga_condindep, psep_granger_bundle
from .var import (
    ThresholdModelParams,
    TimeSeries,
    VarModel,
    counterexample_report,
    fit_var,
    is_stationary,
    random_var,
    simulate_var,
    test_contemp,
    test_noncausal,
    test_regime,
    validate_var,
)


class UsageError(Exception):
    pass


def _vset(text):
    if text is None or text == "":
        return []
    items = text.split(",")
    if any(not s or s != s.strip() for s in items):
        raise UsageError(f"malformed vertex set {text!r}")
    return items


def _fmt(value):
    return "true" if value else "false"


def _sets(args):
    A, B, S = _vset(args.A), _vset(args.B), _vset(args.S)
    if not A or not B:
        raise UsageError("-A and -B are required and must be nonempty")
    return A, B, S


def _braces(g, vs):
    return "{" + ",".join(str(v) for v in g.sorted_labels(vs)) + "}"


# -- graph commands -----------------------------------------------------------


def cmd_psep(args):
    g = read_mg(args.graph)
    A, B, S = _sets(args)
    sep = ga_condindep(g, A, B, S)
    return {"A": A, "B": B, "S": S, "separated": sep}, [f"separated: {_fmt(sep)}"]


def cmd_noncausal(args):
    g = read_mg(args.graph)
    A, B, S = _sets(args)
    ok = gc_noncausal(g, A, B, S)
    info = _braces(g, A + B + S)
    return (
        {"A": A, "B": B, "S": S, "noncausal": ok},
        [f"noncausal: {_fmt(ok)}", f"claim: {_braces(g, A)} -/-> {_braces(g, B)} | info={info}"],
    )


def cmd_contemp(args):
    g = read_mg(args.graph)
    A, B, S = _sets(args)
    ok = gc_contemp(g, A, B, S)
    info = _braces(g, A + B + S)
    return (
        {"A": A, "B": B, "S": S, "contemp": ok},
        [f"contemp: {_fmt(ok)}", f"claim: {_braces(g, A)} <-/-> {_braces(g, B)} | info={info}"],
    )


def cmd_bundle(args):
    g = read_mg(args.graph)
    A, B, S = _sets(args)
    ab, ba, ci = psep_granger_bundle(g, A, B, S)
    return (
        {"A": A, "B": B, "S": S, "noncausal_ab": ab, "noncausal_ba": ba, "contemp": ci},
        [f"noncausal A->B: {_fmt(ab)}", f"noncausal B->A: {_fmt(ba)}", f"contemp: {_fmt(ci)}"],
    )


def cmd_markov(args):
    g = read_mg(args.graph)
    sts = enumerate_statements(g, args.level, max_block=args.max_block)
    return (
        {"level": args.level, "statements": [s.to_dict() for s in sts], "text": [str(s) for s in sts]},
        [str(s) for s in sts],
    )


def cmd_mag(args):
    g = read_mg(args.graph)
    U = _vset(args.U)
    if not U:
        raise UsageError("-U must be nonempty")
    mag = marginal_ancestral_graph(g, U)
    if args.dot:
        Path(args.dot).write_text(to_dot(mag), encoding="utf-8")
    doc = {
        "vertices": [str(v) for v in mag.labels],
        "directed": [[str(a), str(b)] for a, b in mag.directed_pairs()],
        "undirected": [[str(a), str(b)] for a, b in mag.undirected_pairs()],
    }
    return doc, to_mg(mag).rstrip("\n").splitlines()


def cmd_oracle(args):
    g = read_mg(args.graph)
    own = crosscheck_graph(g)
    rnd = crosscheck_random(args.trials, args.seed)
    doc = {
        "graph": {"queries": own.queries, "disagreements": own.disagreements},
        "random": {"trials": args.trials, "seed": args.seed, "queries": rnd.queries,
                   "disagreements": rnd.disagreements},
    }
    lines = [
        f"graph: queries={own.queries} disagreements={len(own.disagreements)}",
        f"random: trials={args.trials} queries={rnd.queries} disagreements={len(rnd.disagreements)}",
    ]
    for d in own.disagreements + rnd.disagreements:
        lines.append("disagreement: " + json.dumps(d, sort_keys=True))
    return doc, lines


# -- var commands -------------------------------------------------------------


def _write_or_print(text, out, lines):
    if out:
        Path(out).write_text(text, encoding="utf-8")
        lines.append(f"wrote {out}")
    else:
        lines.extend(text.rstrip("\n").splitlines())


def _load_model(path):
    try:
        return VarModel.from_json(Path(path).read_text(encoding="utf-8"))
    except (ValueError, KeyError, TypeError) as exc:
        if isinstance(exc, GrangerGraphError):
            raise
        raise GrangerGraphError(f"cannot read model: {exc}") from None


def _load_series(path):
    try:
        return TimeSeries.from_csv(Path(path).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise GrangerGraphError(f"cannot read series: {exc}") from None


def cmd_var(args):
    sub = args.var_cmd
    lines = []
    if sub == "random":
        model = random_var(read_mg(args.graph), args.order, args.seed, args.radius)
        _write_or_print(model.to_json() + "\n", args.out, lines)
        return model.to_dict(), lines
    if sub == "simulate":
        model = _load_model(args.model)
        series = simulate_var(model, args.n, args.burnin, args.seed)
        _write_or_print(series.to_csv(), args.out, lines)
        return {"labels": list(series.labels), "n": len(series), "out": args.out}, lines
    if sub == "fit":
        model = fit_var(_load_series(args.data), read_mg(args.graph), args.order)
        _write_or_print(model.to_json() + "\n", args.out, lines)
        return model.to_dict(), lines
    if sub == "validate":
        model = _load_model(args.model)
        viol = validate_var(model, read_mg(args.graph))
        stationary, radius = is_stationary(model)
        lines.append(f"valid: {_fmt(not viol)}")
        lines.append(f"stationary: {_fmt(stationary)} (spectral radius {radius:.6g})")
        lines.extend(f"violation: {v}" for v in viol)
        return {"valid": not viol, "stationary": stationary, "spectral_radius": radius,
                "violations": [str(v) for v in viol]}, lines
    if sub == "test":
        series = _load_series(args.data)
        A, B, S = _sets(args)
        fn = {"noncausal": test_noncausal, "contemp": test_contemp, "regime": test_regime}[args.kind]
        try:
            rep = fn(series, A, B, S, p=args.order, alpha=args.alpha)
        except ValueError as exc:
            if isinstance(exc, GrangerGraphError):
                raise
            raise UsageError(str(exc)) from None
        doc = rep.to_dict()
        lines.append(f"statement: {doc['statement']}")
        lines.append(f"test: {rep.test}")
        lines.append(f"statistic: {rep.statistic:.6g}")
        lines.append(f"p_value: {rep.p_value:.6g}")
        lines.append(f"reject_at_alpha: {_fmt(rep.decision_at_alpha)} (alpha={rep.alpha:g})")
        lines.append(f"n_used: {rep.n_used}")
        return doc, lines
    raise UsageError("missing var subcommand")


def cmd_counterexample(args):
    # rho=0 switches the interaction off; the params type itself requires rho != 0
    params = ThresholdModelParams(c=args.c)
    rep = counterexample_report(params, seed=args.seed, n=args.n, p=args.order, rho=args.rho)
    s = rep["summary"]
    lines = [
        f"rho={args.rho:g} c={args.c:g} n={args.n} seed={args.seed}",
        f"corr_high: {rep['corr_high']:.4f}",
        f"corr_low: {rep['corr_low']:.4f}",
        f"ks_pass: {_fmt(rep['ks_pass'])}",
        f"Ga pairwise: {'pass' if s['Ga_pc_pass'] else 'fail'}",
        f"Ga block-recursive: {'pass' if s['Ga_bc_pass'] else 'fail'}",
        f"Gb pairwise: {'pass' if s['Gb_pc_pass'] else 'fail'}",
        f"Gb block-recursive: {'pass' if s['Gb_bc_pass'] else 'fail'}",
    ]
    return rep, lines


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit a single JSON document")

    parser = argparse.ArgumentParser(prog="grangergraph", parents=[common],
                                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    def graph_query(name, func, help_):
        sp = subs.add_parser(name, parents=[common], help=help_)
        sp.add_argument("-g", "--graph", required=True)
        sp.add_argument("-A", required=True)
        sp.add_argument("-B", required=True)
        sp.add_argument("-S", default="")
        sp.set_defaults(func=func)

    graph_query("psep", cmd_psep, "p-separation of A and B given S")
    graph_query("noncausal", cmd_noncausal, "does the graph license X_A -/-> X_B w.r.t. A|B|S")
    graph_query("contemp", cmd_contemp, "does the graph license contemporaneous CI w.r.t. A|B|S")
    graph_query("bundle", cmd_bundle, "both noncausality directions plus contemporaneous CI")

    sp = subs.add_parser("markov", parents=[common], help="enumerate PC/LC/BC statements")
    sp.add_argument("-g", "--graph", required=True)
    sp.add_argument("--level", choices=["pc", "lc", "bc"], required=True)
    sp.add_argument("--max-block", type=int, default=3)
    sp.set_defaults(func=cmd_markov)

    sp = subs.add_parser("mag", parents=[common], help="marginal ancestral graph")
    sp.add_argument("-g", "--graph", required=True)
    sp.add_argument("-U", required=True)
    sp.add_argument("--dot")
    sp.set_defaults(func=cmd_mag)

    sp = subs.add_parser("oracle", parents=[common], help="cross-check separation engines")
    sp.add_argument("-g", "--graph", required=True)
    sp.add_argument("--trials", type=int, default=0)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_oracle)

    vp = subs.add_parser("var", parents=[common], help="graphical VAR models")
    vsubs = vp.add_subparsers(dest="var_cmd", required=True)
    vp.set_defaults(func=cmd_var)

    s = vsubs.add_parser("random", parents=[common], help="random stationary VAR(p, G)")
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("-p", "--order", type=int, default=1)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--radius", type=float, default=0.8)
    s.add_argument("-o", "--out")

    s = vsubs.add_parser("simulate", parents=[common], help="simulate a VAR model")
    s.add_argument("-m", "--model", required=True)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--burnin", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("-o", "--out")

    s = vsubs.add_parser("fit", parents=[common], help="constrained least-squares fit")
    s.add_argument("-d", "--data", required=True)
    s.add_argument("-g", "--graph", required=True)
    s.add_argument("-p", "--order", type=int, default=1)
    s.add_argument("-o", "--out")

    s = vsubs.add_parser("validate", parents=[common], help="check a model against a graph")
    s.add_argument("-m", "--model", required=True)
    s.add_argument("-g", "--graph", required=True)

    s = vsubs.add_parser("test", parents=[common], help="empirical test of one statement")
    s.add_argument("-d", "--data", required=True)
    s.add_argument("--kind", choices=["noncausal", "contemp", "regime"], default="noncausal")
    s.add_argument("-A", required=True)
    s.add_argument("-B", required=True)
    s.add_argument("-S", default="")
    s.add_argument("-p", "--order", type=int, default=1)
    s.add_argument("--alpha", type=float, default=0.01)

    sp = subs.add_parser("counterexample", parents=[common],
                         help="threshold-correlation process: pairwise vs block-recursive")
    sp.add_argument("--rho", type=float, default=0.6)
    sp.add_argument("--c", type=float, default=0.67449)
    sp.add_argument("-n", type=int, default=20000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-p", "--order", type=int, default=1)
    sp.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json = getattr(args, "json", False)
    try:
        doc, lines = args.func(args)
    except (UsageError, QueryError) as exc:
        print(f"{parser.prog}: usage error: {exc}", file=sys.stderr)
        return 2
    except (GrangerGraphError, OSError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 1
    if as_json:
        doc = {"command": args.command, **({"var_command": args.var_cmd} if args.command == "var" else {}),
               "result": doc}
        print(json.dumps(doc, sort_keys=True, default=str))
    else:
        for ln in lines:
            print(ln)
    return 0


if __name__ == "__main__":
    sys.exit(main())
