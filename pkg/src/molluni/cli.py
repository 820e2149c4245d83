"""Command-line front end.

Every command writes its result either to ``--out`` (then a one-line
summary goes to stdout) or straight to stdout.  Exit codes: 0 success,
2 usage error, 3 validation error, 4 numerical failure.  Errors are
reported on stderr as a single JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .ar1 import Ar1ScModel, default_b_grid, stationary_analysis, sweep_figure3
from .continuous import MollifiedUniform, kurtosis_curve
from .discrete import DiscreteMollifiedUniform
from .errors import NumericalError
from .glm import run_example2
from .io import csv_text, format_float, json_text
from .mollifiers import Family, MollifierSpec
from .streams import check_seed, default_seed, generator

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VALIDATION = 3
EXIT_NUMERICAL = 4

# Default mollifier scales for `dist` tables: the soft-clipping c values
# usually plotted for pdf, cdf and qf.
DEFAULT_SCALES = (0.01, 0.02, 0.05, 0.1)
DEFAULT_M = 10
DEFAULT_LAMBDA = 0.1


class ValidationError(Exception):
    def __init__(self, parameter: str | None, message: str):
        super().__init__(message)
        self.parameter = parameter


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        _emit_error("usage", None, message)
        sys.exit(EXIT_USAGE)


def _emit_error(kind: str, parameter: str | None, message: str) -> None:
    payload = {"error": kind, "parameter": parameter, "message": message}
    print(json.dumps(payload), file=sys.stderr)


# -- argument types ----------------------------------------------------------


def _real(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a real number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def _integer(text: str) -> int:
    try:
        return int(text, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def _list_of(kind):
    def parse(text: str):
        parts = [p for p in text.split(",") if p.strip()]
        if not parts:
            raise argparse.ArgumentTypeError("expected a comma-separated list")
        return [kind(p.strip()) for p in parts]

    parse.__name__ = f"{kind.__name__}-list"
    return parse


def _seed(text: str) -> int:
    try:
        return check_seed(int(text, 0))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# -- validation helpers ------------------------------------------------------


def _positive(name: str, value: float) -> float:
    if not value > 0:
        raise ValidationError(name, f"{name} must be > 0, got {value}")
    return value


def _at_least(name: str, value: int, low: int) -> int:
    if value < low:
        raise ValidationError(name, f"{name} must be >= {low}, got {value}")
    return value


def _single(name: str, values: list[float]) -> float:
    if len(values) != 1:
        raise ValidationError(name, f"{name} takes a single value here, got {len(values)}")
    return values[0]


# -- commands --------------------------------------------------------------


def _values_output(args, header, rows, meta):
    fmt = args.format
    if fmt == "json":
        return json_text({**meta, "points": [dict(zip(header, r)) for r in rows]})
    if fmt == "csv" or args.out:
        return csv_text(header, rows)
    return "".join(format_float(r[-1]) + "\n" for r in rows)


def cmd_dist(args):
    scales = [_positive("scale", v) for v in args.scale]
    family = Family.parse(args.family)
    ev = args.eval
    if ev in ("pdf", "cdf", "qf") and args.at is None:
        raise ValidationError("at", f"--at is required for --eval {ev}")
    if ev == "qf":
        for q in args.at:
            if not 0 < q < 1:
                raise ValidationError("at", f"quantile level must lie in (0, 1), got {q}")
    order = args.order if args.order is not None else 2
    if ev == "moment" and not 0 <= order <= 30:
        raise ValidationError("order", f"order must be in 0..30, got {order}")
    rows = []
    for scale in scales:
        dist = MollifiedUniform(MollifierSpec(family, scale))
        if ev in ("pdf", "cdf", "qf"):
            fn = {"pdf": dist.pdf, "cdf": dist.cdf, "qf": dist.qf}[ev]
            rows.extend((scale, x, float(fn(x))) for x in args.at)
        elif ev == "moment":
            value = dist.central_moment(order) if args.central else dist.raw_moment(order)
            rows.append((scale, order, value))
        else:
            rows.append((scale, "kurtosis", dist.kurtosis()))
    header = ("scale", {"moment": "order", "kurtosis": "quantity"}.get(ev, "at"), "value")
    meta = {"family": family.value, "eval": ev}
    text = _values_output(args, header, rows, meta)
    return text, f"dist {family.value} eval={ev}: {len(rows)} value(s) for {len(scales)} scale(s)"


def cmd_ddist(args):
    m = _at_least("m", args.m, 2)
    lam = _positive("lambda", args.lam)
    dist = DiscreteMollifiedUniform(m, lam)
    ev = args.eval
    if ev == "table":
        ys = range(-10, m + 11)
        pmf = dist.pmf(np.asarray(ys))
        rows = [(y, float(p)) for y, p in zip(ys, pmf)]
        header = ("y", "probability")
        if args.format == "json":
            text = json_text({"m": m, "lambda": lam, "pmf": [{"y": y, "probability": p} for y, p in rows]})
        else:
            text = csv_text(header, rows)
        return text, f"ddist m={m} lambda={format_float(lam)}: {len(rows)} pmf rows"
    if ev in ("pmf", "cdf"):
        if args.at is None:
            raise ValidationError("at", f"--at is required for --eval {ev}")
        fn = dist.pmf if ev == "pmf" else dist.cdf
        rows = [(y, float(fn(y))) for y in args.at]
        header = ("at", "value")
    elif ev == "moment":
        order = args.order if args.order is not None else 2
        if not 0 <= order <= 8:
            raise ValidationError("order", f"order must be in 0..8, got {order}")
        rows = [(order, dist.central_moment(order))]
        header = ("order", "value")
    else:
        rows = [("kurtosis", dist.kurtosis())]
        header = ("quantity", "value")
    text = _values_output(args, header, rows, {"m": m, "lambda": lam, "eval": ev})
    return text, f"ddist m={m} lambda={format_float(lam)} eval={ev}: {len(rows)} value(s)"


def cmd_kurtosis_curve(args):
    vmin = _positive("vmin", args.vmin)
    vmax = _positive("vmax", args.vmax)
    if vmax <= vmin:
        raise ValidationError("vmax", "vmax must exceed vmin")
    points = _at_least("points", args.points, 2)
    grid = np.geomspace(vmin, vmax, points)
    families = [Family.parse(args.family)] if args.family else list(Family)
    rows = []
    for fam in families:
        rows.extend(kurtosis_curve(fam, grid, include_limit=True))
    if args.format == "json":
        text = json_text([{"family": f, "variance": v, "kurtosis": k} for f, v, k in rows])
    else:
        text = csv_text(("family", "variance", "kurtosis"), rows)
    return text, f"kurtosis-curve: {len(rows)} rows for {len(families)} families"


def cmd_glm_example2(args):
    runs = _at_least("runs", args.runs, 1)
    size = _at_least("size", args.size, 2)
    n = _at_least("n", args.n, 1)
    c = _positive("c", _single("c", args.c))
    jobs = _at_least("jobs", args.jobs, 1)
    summary = run_example2(
        seed=args.seed, runs=runs, size=size, n=n, a=args.a, b=args.b, c=c, jobs=jobs
    )
    if args.per_run:
        per_run = csv_text(
            ("run", "alpha_hat", "beta_hat", "violations"),
            [(r.run, r.alpha_hat, r.beta_hat, r.violations) for r in summary.per_run],
        )
        Path(args.per_run).write_text(per_run)
    payload = summary.to_json_dict()
    if args.format == "csv":
        text = csv_text(tuple(payload), [tuple(payload.values())])
    else:
        text = json_text(payload)
    line = (
        f"glm-example2 seed={summary.seed} runs={runs}: "
        f"mean_alpha={summary.mean_alpha_hat:.4f} mean_beta={summary.mean_beta_hat:.4f} "
        f"runs_nonpositive={summary.runs_with_nonpositive_linpred}"
    )
    return text, line


def cmd_ar1_sweep(args):
    n = _at_least("n", args.n, 1)
    c_values = [_positive("c", c) for c in args.c]
    step = _positive("b-step", args.b_step)
    limit = args.b_limit
    if not 0 < limit < 1:
        raise ValidationError("b-limit", "b-limit must lie in (0, 1)")
    try:
        grid = default_b_grid(step, limit)
    except ValueError as exc:
        raise ValidationError("b-step", str(exc)) from None
    jobs = _at_least("jobs", args.jobs, 1)
    rows = sweep_figure3(n, c_values, grid, args.target_mean, jobs=jobs)
    header = ("c", "b", "mean_norm", "pacf1", "pacf2")
    if args.format == "json":
        text = json_text([dict(zip(header, r)) for r in rows])
    else:
        text = csv_text(header, rows)
    return text, f"ar1-sweep n={n}: {len(rows)} rows ({len(c_values)} c values x {grid.size} slopes)"


def cmd_ar1_analyze(args):
    n = _at_least("n", args.n, 1)
    c = _positive("c", _single("c", args.c))
    if not 2 <= args.max_lag <= 10:
        raise ValidationError("max-lag", "max-lag must be in 2..10")
    res = stationary_analysis(Ar1ScModel(n, args.a, args.b, c), max_lag=args.max_lag)
    payload = {"a": args.a, "b": args.b, "c": c, **res.to_json_dict()}
    if args.format == "csv":
        text = csv_text(("lag", "acf", "pacf"), [(h, res.acf[h], res.pacf[h - 1] if h else 1.0) for h in range(res.acf.size)])
    else:
        text = json_text(payload)
    return text, (
        f"ar1-analyze n={n} a={format_float(args.a)} b={format_float(args.b)} c={format_float(c)}: "
        f"mean_norm={res.mean_norm:.6f} pacf1={res.pacf[0]:.6f}"
    )


def cmd_sample(args):
    scale = _positive("scale", args.scale)
    count = _at_least("count", args.count, 1)
    dist = MollifiedUniform(MollifierSpec(Family.parse(args.family), scale))
    draws = dist.sample(count, generator(args.seed))
    if args.format == "json":
        text = json_text({"family": dist.family.value, "scale": scale, "seed": args.seed, "values": draws})
    else:
        text = csv_text(("value",), [(v,) for v in draws])
    return text, f"sample {dist.family.value} scale={format_float(scale)} seed={args.seed}: {count} draws"


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed, default=None, help="master seed (default: $MOLLUNI_SEED or built-in)")
    common.add_argument("--out", default=None, help="write the result to this path")
    common.add_argument("--format", choices=("csv", "json"), default=None, help="output format")

    parser = _Parser(prog="molluni", description="Mollified uniform distributions and soft-clipping models.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    families = [f.value for f in Family]

    p = sub.add_parser("dist", parents=[common], help="evaluate the continuous mollified uniform")
    p.add_argument("--family", choices=families, default="logistic")
    p.add_argument(
        "--scale",
        type=_list_of(_real),
        default=list(DEFAULT_SCALES),
        help="comma-separated mollifier scales (sigma, c or b); default 0.01,0.02,0.05,0.1",
    )
    p.add_argument("--eval", choices=("pdf", "cdf", "qf", "moment", "kurtosis"), required=True)
    p.add_argument("--at", type=_list_of(_real), help="comma-separated evaluation points")
    p.add_argument("--order", type=_integer, help="moment order")
    p.add_argument("--central", action="store_true", help="central instead of raw moment")
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("ddist", parents=[common], help="evaluate the Skellam-mollified discrete uniform")
    p.add_argument("--m", type=_integer, default=DEFAULT_M)
    p.add_argument("--lambda", dest="lam", type=_real, default=DEFAULT_LAMBDA)
    p.add_argument("--eval", choices=("table", "pmf", "cdf", "moment", "kurtosis"), default="table")
    p.add_argument("--at", type=_list_of(_integer), help="comma-separated integer points")
    p.add_argument("--order", type=_integer, help="central moment order")
    p.set_defaults(func=cmd_ddist)

    p = sub.add_parser("kurtosis-curve", parents=[common], help="kurtosis against mollifier variance")
    p.add_argument("--family", choices=families, default=None, help="one family (default: all)")
    p.add_argument("--vmin", type=_real, default=1e-4)
    p.add_argument("--vmax", type=_real, default=10.0)
    p.add_argument("--points", type=_integer, default=200)
    p.set_defaults(func=cmd_kurtosis_curve)

    p = sub.add_parser("glm-example2", parents=[common], help="binomial soft-clipping GLM simulation study")
    p.add_argument("--runs", type=_integer, default=1000)
    p.add_argument("--size", type=_integer, default=100)
    p.add_argument("--n", type=_integer, default=30)
    p.add_argument("--a", type=_real, default=0.4)
    p.add_argument("--b", type=_real, default=-0.6)
    p.add_argument("--c", type=_list_of(_real), default=[0.01])
    p.add_argument("--jobs", type=_integer, default=1, help="worker processes")
    p.add_argument("--per-run", default=None, help="also write per-run CSV to this path")
    p.set_defaults(func=cmd_glm_example2)

    p = sub.add_parser("ar1-sweep", parents=[common], help="exact AR(1)-like chain over a slope grid")
    p.add_argument("--n", type=_integer, default=30)
    p.add_argument("--c", type=_list_of(_real), default=[0.01, 0.1])
    p.add_argument("--target-mean", type=_real, default=0.3)
    p.add_argument("--b-step", type=_real, default=0.1)
    p.add_argument("--b-limit", type=_real, default=0.9)
    p.add_argument("--jobs", type=_integer, default=1, help="worker processes")
    p.set_defaults(func=cmd_ar1_sweep)

    p = sub.add_parser("ar1-analyze", parents=[common], help="stationary analysis of one AR(1)-like model")
    p.add_argument("--n", type=_integer, default=30)
    p.add_argument("--a", type=_real, required=True)
    p.add_argument("--b", type=_real, required=True)
    p.add_argument("--c", type=_list_of(_real), default=[0.01])
    p.add_argument("--max-lag", type=_integer, default=2)
    p.set_defaults(func=cmd_ar1_analyze)

    p = sub.add_parser("sample", parents=[common], help="draw from the continuous mollified uniform")
    p.add_argument("--family", choices=families, default="logistic")
    p.add_argument("--scale", type=_real, required=True)
    p.add_argument("--count", type=_integer, default=1000)
    p.set_defaults(func=cmd_sample)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        if args.seed is None:
            args.seed = default_seed()
        text, summary = args.func(args)
    except ValidationError as exc:
        _emit_error("validation", exc.parameter, str(exc))
        return EXIT_VALIDATION
    except NumericalError as exc:
        _emit_error("numerical", None, str(exc))
        return EXIT_NUMERICAL
    except ValueError as exc:
        _emit_error("validation", None, str(exc))
        return EXIT_VALIDATION
    if args.out:
        Path(args.out).write_text(text)
        print(summary)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
