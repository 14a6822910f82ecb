"""Command-line front end: ``bracketforge <command> ...``.

Exit status is 0 on success, 1 for domain or validation errors and 2 for
usage errors.  Data goes to stdout (or ``--output``), diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import dsl
from .builder import attach_consolation, build_proper_bracket
from .core import Multibracket
from .engine import DEFAULT_STATE_CAP, enumerate_exact, simulate
from .errors import BracketForgeError
from .flowchart import classify, to_dot, validate
from .metrics import compare_formats
from .models import load_matrix, load_strengths, make_model
from .signatures import swiss_record_profile

STATE_CAP_ENV = "BRACKETFORGE_STATE_CAP"


def _signature_arg(text):
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _parser():
    p = argparse.ArgumentParser(prog="bracketforge",
                                description="Compile, check and evaluate tournament formats.")
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    def source_args(sp, many=False):
        if many:
            sp.add_argument("--format", action="append", metavar="FILE", dest="formats",
                            help="format file (repeat to compare several)")
        else:
            sp.add_argument("--format", metavar="FILE", help="format file (.fmt)")
        sp.add_argument("--signature", type=_signature_arg, metavar="a,b,c",
                        help="use the proper bracket for this signature instead of a file")

    def model_args(sp):
        sp.add_argument("--model", choices=["coin", "bt", "matrix"], default="coin")
        sp.add_argument("--strengths", metavar="FILE", help="CSV of Bradley-Terry strengths")
        sp.add_argument("--matrix", metavar="FILE", help="CSV win-probability matrix")
        sp.add_argument("--state-cap", type=int, metavar="N")
        sp.add_argument("--reps", type=int, default=100000, metavar="N")
        sp.add_argument("--seed", type=int, default=0, metavar="S")
        sp.add_argument("--workers", type=int, default=1, metavar="K")

    def out_args(sp, choices=("json", "csv")):
        sp.add_argument("--out", choices=choices, default=choices[0])
        sp.add_argument("-o", "--output", metavar="FILE", help="write data here instead of stdout")

    sp = sub.add_parser("validate", help="check a format")
    source_args(sp)

    sp = sub.add_parser("build", help="print the canonical .fmt text of a format")
    source_args(sp)
    sp.add_argument("--consolation", type=int, metavar="DEPTH", help="attach consolation play")
    sp.add_argument("--name", default=None)
    sp.add_argument("-o", "--output", metavar="FILE")

    sp = sub.add_parser("render", help="Graphviz DOT for a static format")
    source_args(sp)
    sp.add_argument("--dot", metavar="FILE", help="write DOT here instead of stdout")

    sp = sub.add_parser("enumerate", help="exact placement distribution")
    source_args(sp)
    model_args(sp)
    out_args(sp)

    sp = sub.add_parser("simulate", help="Monte Carlo placement distribution")
    source_args(sp)
    model_args(sp)
    out_args(sp)

    sp = sub.add_parser("swiss", help="record profile of a power-of-two Swiss")
    sp.add_argument("--teams", type=int, required=True)
    sp.add_argument("--rounds", type=int, required=True)
    out_args(sp)

    sp = sub.add_parser("compare", help="compare several formats side by side")
    source_args(sp, many=True)
    model_args(sp)
    sp.add_argument("--method", choices=["exact", "mc"], default="exact")
    out_args(sp, choices=("text", "json"))
    return p


def _load_format(path=None, signature=None):
    if signature is not None:
        return build_proper_bracket(signature, name="(" + ",".join(map(str, signature)) + ")")
    with open(path, encoding="utf-8") as fh:
        return dsl.load(fh.read())


def _need_source(parser, args):
    if (args.format is None) == (args.signature is None):
        parser.error("give exactly one of --format or --signature")


def _model(parser, args):
    if args.model == "bt":
        if not args.strengths:
            parser.error("--model bt needs --strengths FILE")
        return load_strengths(args.strengths)
    if args.model == "matrix":
        if not args.matrix:
            parser.error("--model matrix needs --matrix FILE")
        return load_matrix(args.matrix)
    return make_model("coin")


def _state_cap(args):
    if args.state_cap is not None:
        return args.state_cap
    env = os.environ.get(STATE_CAP_ENV)
    return int(env) if env else DEFAULT_STATE_CAP


def _write(args, text):
    target = getattr(args, "output", None)
    if target:
        with open(target, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _distribution_text(fmt, model_name, dist, out):
    n = dist.team_count
    if out == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["seed", "place", "prob"] + (["stderr"] if dist.stderr is not None else [])
        w.writerow(header)
        for i in range(n):
            for p in range(n):
                row = [i + 1, p + 1, repr(float(dist.D[i, p]))]
                if dist.stderr is not None:
                    row.append(repr(float(dist.stderr[i, p])))
                w.writerow(row)
        return buf.getvalue()
    doc = {"format": fmt.name, "team_count": n, "model": model_name, "method": dist.method}
    if dist.reps is not None:
        doc["reps"] = dist.reps
    doc["D"] = dist.D.tolist()
    if dist.stderr is not None:
        doc["stderr"] = dist.stderr.tolist()
    doc["expected_matches"] = dist.expected_matches.tolist()
    doc["total_matches"] = dist.total_matches
    return json.dumps(doc, indent=2) + "\n"


def _cmd_validate(parser, args):
    _need_source(parser, args)
    fmt = _load_format(args.format, args.signature)
    if not isinstance(fmt, Multibracket):
        _write(args, f"ok\n{fmt.kind} policy, {fmt.team_count} teams\n")
        return 0
    report = validate(fmt)
    if not report.ok:
        _write(args, "".join(f"{v}\n" for v in report.violations))
        return 1
    c = classify(fmt)
    kind = "bracket" if c.is_bracket else "linear" if c.is_linear else "nonlinear"
    _write(args, f"ok\n{kind}, {fmt.team_count} teams, {len(fmt)} matches\n")
    return 0


def _cmd_build(parser, args):
    _need_source(parser, args)
    fmt = _load_format(args.format, args.signature)
    if args.consolation:
        fmt = attach_consolation(fmt, args.consolation)
    _write(args, dsl.emit(fmt, name=args.name))
    return 0


def _cmd_render(parser, args):
    _need_source(parser, args)
    fmt = _load_format(args.format, args.signature)
    if not isinstance(fmt, Multibracket):
        raise BracketForgeError("only static formats have a match graph to render")
    text = to_dot(fmt)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _evaluate(parser, args, fmt, method):
    model = _model(parser, args)
    if method == "exact":
        return model, enumerate_exact(fmt, model, _state_cap(args))
    return model, simulate(fmt, model, args.reps, args.seed, args.workers)


def _cmd_enumerate(parser, args, method="exact"):
    _need_source(parser, args)
    fmt = _load_format(args.format, args.signature)
    model, dist = _evaluate(parser, args, fmt, method)
    _write(args, _distribution_text(fmt, model.describe(), dist, args.out))
    return 0


def _cmd_simulate(parser, args):
    return _cmd_enumerate(parser, args, method="mc")


def _cmd_swiss(parser, args):
    profile = swiss_record_profile(args.teams, args.rounds)
    if args.out == "csv":
        text = "wins,losses,teams\n" + "".join(f"{w},{l},{c}\n" for (w, l), c in profile.items())
    else:
        doc = {"teams": args.teams, "rounds": args.rounds,
               "profile": {f"{w}-{l}": c for (w, l), c in profile.items()}}
        text = json.dumps(doc, indent=2) + "\n"
    _write(args, text)
    return 0


def _cmd_compare(parser, args):
    paths = args.formats or []
    fmts = [_load_format(p) for p in paths]
    if args.signature is not None:
        fmts.append(_load_format(signature=args.signature))
    if not fmts:
        parser.error("compare needs at least one --format or --signature")
    results = []
    for fmt in fmts:
        _, dist = _evaluate(parser, args, fmt, args.method)
        results.append((fmt.name, dist))
    report = compare_formats(results)
    _write(args, report.to_json() if args.out == "json" else report.to_text())
    return 0


COMMANDS = {
    "validate": _cmd_validate,
    "build": _cmd_build,
    "render": _cmd_render,
    "enumerate": _cmd_enumerate,
    "simulate": _cmd_simulate,
    "swiss": _cmd_swiss,
    "compare": _cmd_compare,
}


def run(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](parser, args)
    except SystemExit as exc:  # parser.error inside a command
        return int(exc.code or 0)
    except (BracketForgeError, OSError) as exc:
        print(f"bracketforge {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())
