"""Command-line interface.

Exit codes: 0 success, 2 argument error, 3 quadrature budget exceeded,
4 malformed input file, 5 I/O error.
"""

import argparse
import datetime
import json
import math
import os
import platform
import shlex
import sys

import numpy as np

from gumbelmax import __version__
from gumbelmax.distributions import Case, gumbel_pdf, model
from gumbelmax.exceptions import BudgetExceeded, DomainError, SampleFileError
from gumbelmax.mda import default_grid, exact_max_sup_distance, limit_report, mills_ratio, von_mises_ratio
from gumbelmax.montecarlo import (
    HIST_BIN_WIDTH,
    HIST_HI,
    HIST_LO,
    SampleSet,
    SimConfig,
    default_workers,
    gof_report,
    histogram,
    ks_statistic,
    normalize,
    read_samples,
    run_cases,
    total_variation,
    write_samples,
)
from gumbelmax.numerics import AccuracyBudget
from gumbelmax.sequences import sequences
from gumbelmax.svg import histogram_svg

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_PARSE = 4
EXIT_IO = 5

CASE_CHOICES = [c.value for c in Case]
CURVE_POINTS = 600
FIG1_BIN_WIDTH = 0.05
FIG1_PANELS = (("left", Case.NORMAL, Case.ABS_NORMAL), ("right", Case.SUM_NORMAL, Case.DIFF_ABS))


class _IOFailure(Exception):
    pass


def _count(text):
    """Integer argument; accepts forms like ``1e8``."""
    try:
        return int(text)
    except ValueError:
        pass
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def _g17(v):
    return f"{float(v):.17g}"


def _dump_json(obj, fh=None):
    text = json.dumps(obj, indent=2, sort_keys=False)
    (fh or sys.stdout).write(text + "\n")


def _manifest(argv, outdir, seed, parameters, outputs):
    versions = f"gumbelmax {__version__}; python {platform.python_version()}; numpy {np.__version__}"
    data = {
        "command": shlex.join(["gumbelmax", *argv]),
        "seed": seed,
        "parameters": parameters,
        "versions": versions,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "outputs": sorted(outputs),
    }
    with open(os.path.join(outdir, "manifest.json"), "w") as fh:
        _dump_json(data, fh)


def _ensure_dir(path):
    try:
        os.makedirs(path, exist_ok=True)
        probe = os.path.join(path, ".write-test")
        with open(probe, "w"):
            pass
        os.remove(probe)
    except OSError as exc:
        raise _IOFailure(f"cannot write to {path}: {exc}") from None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_seq(args, parser, argv):
    if args.n < 2:
        parser.error("--n must be at least 2")
    seq = sequences(args.case, args.n)
    if args.format == "csv":
        print("n,a,b,delta")
        print(f"{seq.n},{_g17(seq.a)},{_g17(seq.b)},{_g17(seq.delta)}")
    else:
        _dump_json(seq.as_dict())
    return EXIT_OK


def cmd_dist(args, parser, argv):
    if not args.step > 0:
        parser.error("--step must be positive")
    if args.start > args.stop:
        parser.error("--from must not exceed --to")
    m = model(args.case)
    fn = {"pdf": m.density, "cdf": m.cdf, "tail": m.tail}[args.what]
    count = int(math.floor((args.stop - args.start) / args.step + 1e-9)) + 1
    xs = [args.start + k * args.step for k in range(count)]
    rows = [(x, fn(x)) for x in xs]
    if args.format == "json":
        _dump_json({"case": m.case.value, "what": args.what,
                    "rows": [{"x": x, "value": v} for x, v in rows]})
    else:
        print(f"x,{args.what}")
        for x, v in rows:
            print(f"{_g17(x)},{_g17(v)}")
    return EXIT_OK


def cmd_check(args, parser, argv):
    kind = args.check
    if kind == "mills":
        if not (args.c > 0 and args.x > 0):
            parser.error("mills needs --c > 0 and --x > 0")
        budget = AccuracyBudget(args.abs_tol, args.rel_tol, args.max_refinements)
        ratio = mills_ratio(args.c, args.x, budget)
        report = {"check": "mills", "inputs": {"c": args.c, "x": args.x},
                  "value": ratio, "target": 1.0, "error": abs(ratio - 1.0)}
    elif kind == "vonmises":
        r = von_mises_ratio(args.case, args.t, args.x)
        report = {"check": "vonmises", "inputs": {"case": args.case, "t": r.t, "x": r.x},
                  "value": r.ratio, "target": r.target, "error": r.abs_error}
    elif kind == "limit":
        if args.n < 2:
            parser.error("--n must be at least 2")
        lr = limit_report(args.case, args.n, args.x)
        report = {"check": "limit", "inputs": {"case": lr["case"], "n": lr["n"], "x": lr["x"]},
                  "value": lr["value"], "target": lr["target"], "error": lr["error"]}
    else:
        if args.n < 2:
            parser.error("--n must be at least 2")
        if not args.step > 0 or args.start > args.stop:
            parser.error("supdist grid needs --step > 0 and --from <= --to")
        grid = default_grid(args.start, args.stop, args.step)
        d = exact_max_sup_distance(args.case, args.n, grid)
        report = {"check": "supdist",
                  "inputs": {"case": args.case, "n": args.n, "from": args.start,
                             "to": args.stop, "step": args.step},
                  "value": d, "target": 0.0, "error": d}
    _dump_json(report)
    return EXIT_OK


def cmd_sim(args, parser, argv):
    if args.n < 1 or args.reps < 1 or args.workers < 1:
        parser.error("--n, --reps and --workers must be positive")
    outdir = os.path.dirname(os.path.abspath(args.out))
    _ensure_dir(outdir)
    config = SimConfig(args.case, args.n, args.reps, args.seed, args.workers)
    s = run_cases([config.case], config.n, config.reps, config.seed, config.workers)[config.case]
    try:
        write_samples(args.out, s)
        _manifest(argv, outdir, args.seed,
                  {"case": config.case.value, "n": args.n, "reps": args.reps, "seed": args.seed},
                  [os.path.basename(args.out)])
    except OSError as exc:
        raise _IOFailure(str(exc)) from None
    return EXIT_OK


def cmd_gof(args, parser, argv):
    try:
        values, normalized = read_samples(args.infile)
    except OSError as exc:
        raise _IOFailure(str(exc)) from None
    case = Case.parse(args.case)
    s = SampleSet(SimConfig(case, args.n, len(values), 0), values, normalized=normalized)
    if not normalized:
        if args.n < 2:
            parser.error("--n must be at least 2")
        seq_case = Case.parse(args.force_case) if args.force_case else case
        s = normalize(s, sequences(seq_case, args.n), allow_mismatch=args.force_case is not None)
    report = gof_report(s, args.bin_width, args.lo, args.hi).as_dict()
    report = {"case": case.value, "n": args.n,
              "sequences": args.force_case or case.value, **report}
    _dump_json(report)
    return EXIT_OK


def _write_text(path, text):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(str(exc)) from None


def _figure1(args, outdir):
    cases = sorted({c for _, a, b in FIG1_PANELS for c in (a, b)}, key=lambda c: c.index)
    samples = run_cases(cases, args.n, args.reps, args.seed, args.workers)
    outputs = []
    w = FIG1_BIN_WIDTH
    for name, first, second in FIG1_PANELS:
        va, vb = samples[first].values, samples[second].values
        lo = math.floor(min(va.min(), vb.min()) / w) * w
        hi = (math.floor(max(va.max(), vb.max()) / w) + 1) * w
        ha, hb = histogram(va, w, lo, hi), histogram(vb, w, lo, hi)
        # overflow bins are empty by construction of lo/hi
        ha, hb = ha[1:-1], hb[1:-1]
        lines = [f"bin_lo,bin_hi,count_{first.value},count_{second.value}"]
        lines += [f"{_g17(a.lo)},{_g17(a.hi)},{a.count},{b.count}" for a, b in zip(ha, hb)]
        stem = f"figure1_{name}"
        _write_text(os.path.join(outdir, stem + ".csv"), "\n".join(lines) + "\n")
        series = [
            ([(b.lo, b.hi, b.count / (len(va) * w)) for b in ha], "white"),
            ([(b.lo, b.hi, b.count / (len(vb) * w)) for b in hb], "grey"),
        ]
        title = f"M^({first.index}) (white) and M^({second.index}) (grey), n={args.n}"
        _write_text(os.path.join(outdir, stem + ".svg"),
                    histogram_svg(series, title=title, xlabel="maximum"))
        outputs += [stem + ".csv", stem + ".svg"]
    return outputs


def _figure2(args, outdir):
    samples = run_cases(list(Case), args.n, args.reps, args.seed, args.workers)
    xs = np.linspace(HIST_LO, HIST_HI, CURVE_POINTS)
    curve = list(zip(xs.tolist(), gumbel_pdf(xs).tolist()))
    outputs = []
    summary = {}
    w = HIST_BIN_WIDTH
    for case in Case:
        s = normalize(samples[case], sequences(case, args.n))
        bins = histogram(s, w, HIST_LO, HIST_HI)
        total = len(s)
        lines = ["bin_lo,bin_hi,count,frequency"]
        lines += [f"{_g17(b.lo)},{_g17(b.hi)},{b.count},{_g17(b.count / total)}" for b in bins]
        stem = f"figure2_{case.index}_{case.value}"
        _write_text(os.path.join(outdir, stem + ".csv"), "\n".join(lines) + "\n")
        finite = [(b.lo, b.hi, b.count / (total * w)) for b in bins[1:-1]]
        title = f"normalized M^({case.index}) = max {case.statistic}, n={args.n}"
        _write_text(os.path.join(outdir, stem + ".svg"),
                    histogram_svg([(finite, "lightgrey")], title=title,
                                  xlabel="(max - b_n) / a_n", curve=curve,
                                  xrange=(HIST_LO, HIST_HI)))
        outputs += [stem + ".csv", stem + ".svg"]
        summary[case.value] = {"ks": ks_statistic(s), "total_variation": total_variation(bins)}
    _write_text(os.path.join(outdir, "figure2_gof.json"), json.dumps(summary, indent=2) + "\n")
    outputs.append("figure2_gof.json")
    return outputs


def cmd_figure(args, parser, argv):
    if args.n < 2 or args.reps < 1 or args.workers < 1:
        parser.error("--n must be at least 2; --reps and --workers positive")
    _ensure_dir(args.outdir)
    outputs = (_figure1 if args.which == 1 else _figure2)(args, args.outdir)
    try:
        _manifest(argv, args.outdir, args.seed,
                  {"which": args.which, "n": args.n, "reps": args.reps, "seed": args.seed},
                  outputs)
    except OSError as exc:
        raise _IOFailure(str(exc)) from None
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="gumbelmax",
        description="Gumbel limits of maxima of normal, half-normal and related statistics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", help="normalizing sequences a_n, b_n, delta_n")
    p.add_argument("--case", required=True, choices=CASE_CHOICES)
    p.add_argument("--n", required=True, type=_count)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_seq)

    p = sub.add_parser("dist", help="density, cdf or tail on a grid")
    p.add_argument("--case", required=True, choices=CASE_CHOICES)
    p.add_argument("--what", required=True, choices=("pdf", "cdf", "tail"))
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("check", help="numerical verifiers")
    checks = p.add_subparsers(dest="check", required=True)
    c = checks.add_parser("mills", help="tail integral over its first-order asymptote")
    c.add_argument("--c", type=float, required=True)
    c.add_argument("--x", type=float, required=True)
    c.add_argument("--abs-tol", type=float, default=0.0)
    c.add_argument("--rel-tol", type=float, default=1e-13)
    c.add_argument("--max-refinements", type=int, default=2000)
    c = checks.add_parser("vonmises", help="tail ratio against exp(-x)")
    c.add_argument("--case", required=True, choices=CASE_CHOICES)
    c.add_argument("--t", type=float, required=True)
    c.add_argument("--x", type=float, required=True)
    c = checks.add_parser("limit", help="n * tail(a_n x + b_n) against exp(-x)")
    c.add_argument("--case", required=True, choices=CASE_CHOICES)
    c.add_argument("--n", type=_count, required=True)
    c.add_argument("--x", type=float, default=0.0)
    c = checks.add_parser("supdist", help="exact sup-distance of the maximum law to Gumbel")
    c.add_argument("--case", required=True, choices=CASE_CHOICES)
    c.add_argument("--n", type=_count, required=True)
    c.add_argument("--from", dest="start", type=float, default=-3.0)
    c.add_argument("--to", dest="stop", type=float, default=8.0)
    c.add_argument("--step", type=float, default=0.01)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sim", help="simulate raw maxima to a CSV file")
    p.add_argument("--case", required=True, choices=CASE_CHOICES)
    p.add_argument("--n", type=_count, default=10_000)
    p.add_argument("--reps", type=_count, default=10_000)
    p.add_argument("--seed", type=_count, default=1)
    p.add_argument("--workers", type=_count, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("gof", help="Gumbel goodness of fit of a sample CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--case", required=True, choices=CASE_CHOICES)
    p.add_argument("--n", type=_count, required=True)
    p.add_argument("--force-case", choices=CASE_CHOICES, default=None,
                   help="normalize with this case's sequences instead")
    p.add_argument("--bin-width", type=float, default=HIST_BIN_WIDTH)
    p.add_argument("--lo", type=float, default=HIST_LO)
    p.add_argument("--hi", type=float, default=HIST_HI)
    p.set_defaults(func=cmd_gof)

    p = sub.add_parser("figure", help="regenerate Figure 1 or 2 as CSV + SVG")
    p.add_argument("--which", type=int, choices=(1, 2), required=True)
    p.add_argument("--n", type=_count, default=10_000)
    p.add_argument("--reps", type=_count, default=10_000)
    p.add_argument("--seed", type=_count, default=1)
    p.add_argument("--workers", type=_count, default=None)
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) is None:
        try:
            args.workers = default_workers()
        except DomainError as exc:
            parser.error(str(exc))
    try:
        return args.func(args, parser, argv)
    except DomainError as exc:
        parser.print_usage(sys.stderr)
        print(f"gumbelmax: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"gumbelmax: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except SampleFileError as exc:
        print(f"gumbelmax: {args.infile}: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except _IOFailure as exc:
        print(f"gumbelmax: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
