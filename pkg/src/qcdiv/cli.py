"""Command-line surface: evaluate divergences, run limit studies, suites, tables.

Exit codes: 0 success (or expected-and-detected infinite branch), 1 property
violation / convergence failure, 2 usage or configuration error.  Infinite
values print as the single token ``inf`` in every output format; plain output
uses 6 significant digits, csv and json use 17 (round-trip safe).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import checks, oracles
from .bregman import (
    bregman,
    delta_averaged_qcvx_bregman,
    extended_bregman,
    qcvx_bregman,
)
from .core import build_generator
from .jensen import extended_jensen, log_ratio_gap, qccv_jensen, qcvx_jensen
from .means import (
    MeanSpec,
    mn_jensen,
    power_mean_bregman,
    power_mean_jensen,
    r_power_bregman,
)
from .statdiv import (
    ExpFamily,
    expfam_cross_entropy,
    expfam_entropy,
    expfam_kl,
    kl_nested_uniform,
    kl_power_nested,
)


class CliError(Exception):
    """Configuration problem detected after argument parsing; exits 2."""


def _fmt(value: float, mode: str) -> str:
    v = float(value)
    if math.isinf(v):
        return "inf"
    if v == 0.0:
        v = 0.0  # never print -0
    return format(v, ".6g" if mode == "plain" else ".17g")


def _parse_vector(text: str, flag: str):
    try:
        coords = tuple(float(part) for part in text.split(","))
    except ValueError:
        raise CliError(f"{flag} expects comma-separated reals, got {text!r}") from None
    if not coords:
        raise CliError(f"{flag} must contain at least one coordinate")
    return coords


def _load_generator(args):
    if getattr(args, "gen_file", None):
        with open(args.gen_file, "r", encoding="utf-8") as fh:
            return build_generator(json.load(fh))
    if getattr(args, "gen", None):
        return build_generator(args.gen)
    raise CliError("this divergence needs a generator: pass --gen or --gen-file")


def _parse_mean(text: str, flag: str) -> MeanSpec:
    if text == "arithmetic":
        return MeanSpec.arithmetic()
    if text == "max":
        return MeanSpec.maximum()
    if text == "min":
        return MeanSpec.minimum()
    if text.startswith("power:"):
        try:
            return MeanSpec.power(float(text[len("power:"):]))
        except ValueError:
            raise CliError(f"{flag}: bad power exponent in {text!r}") from None
    if text.startswith("qa:"):
        return MeanSpec.quasi_arithmetic(build_generator(text[len("qa:"):]))
    raise CliError(
        f"{flag}: unknown mean {text!r} "
        "(use arithmetic | max | min | power:<delta> | qa:<generator-spec>)"
    )


def _need(args, name: str, flag: str):
    value = getattr(args, name)
    if value is None:
        raise CliError(f"--div {args.div} requires {flag}")
    return value


def _scalar(vec, flag: str) -> float:
    if len(vec) != 1:
        raise CliError(f"{flag} must be a single real for this divergence")
    return vec[0]


def _build_evaluator(args):
    """Return (needs_theta_prime, fn(theta, theta_p) -> value) for --div."""
    div = args.div

    if div == "kl-nested-uniform":
        return True, lambda t, tp: kl_nested_uniform(_scalar(t, "--theta"),
                                                     _scalar(tp, "--theta-prime"))
    if div == "kl-power-nested":
        expo = _need(args, "exponent", "--exponent")
        return True, lambda t, tp: kl_power_nested(expo, _scalar(t, "--theta"),
                                                   _scalar(tp, "--theta-prime"))

    g = _load_generator(args)

    if div in ("qcvx-jensen", "qccv-jensen", "log-ratio", "ext-jensen"):
        alpha = _need(args, "alpha", "--alpha")
        fn = {
            "qcvx-jensen": qcvx_jensen,
            "qccv-jensen": qccv_jensen,
            "log-ratio": log_ratio_gap,
            "ext-jensen": extended_jensen,
        }[div]
        return True, lambda t, tp: fn(g, t, tp, alpha)
    if div == "mn-jensen":
        alpha = _need(args, "alpha", "--alpha")
        mean_m = _parse_mean(_need(args, "mean_m", "--mean-m"), "--mean-m")
        mean_n = _parse_mean(_need(args, "mean_n", "--mean-n"), "--mean-n")
        return True, lambda t, tp: mn_jensen(g, mean_m, mean_n, alpha, t, tp)
    if div == "power-jensen":
        alpha = _need(args, "alpha", "--alpha")
        delta = _need(args, "delta", "--delta")
        return True, lambda t, tp: power_mean_jensen(g, delta, alpha, t, tp)
    if div == "bregman":
        return True, lambda t, tp: bregman(g, t, tp)
    if div == "qcvx-bregman":
        return True, lambda t, tp: qcvx_bregman(g, t, tp)
    if div == "delta-qcvx-bregman":
        delta = _need(args, "delta", "--delta")
        return True, lambda t, tp: delta_averaged_qcvx_bregman(g, t, tp, delta)
    if div == "ext-bregman":
        return True, lambda t, tp: extended_bregman(g, t, tp)
    if div == "power-bregman":
        d1 = _need(args, "delta1", "--delta1")
        d2 = _need(args, "delta2", "--delta2")
        return True, lambda t, tp: power_mean_bregman(
            g, d1, d2, _scalar(t, "--theta"), _scalar(tp, "--theta-prime"))
    if div == "r-power-bregman":
        r = _need(args, "r", "--r")
        return True, lambda t, tp: r_power_bregman(
            g, r, _scalar(t, "--theta"), _scalar(tp, "--theta-prime"))

    fam = ExpFamily(g)
    if div == "expfam-kl":
        return True, lambda t, tp: expfam_kl(fam, t, tp)
    if div == "expfam-cross-entropy":
        return True, lambda t, tp: expfam_cross_entropy(fam, t, tp)
    if div == "expfam-entropy":
        return False, lambda t, tp: expfam_entropy(fam, t)
    raise CliError(f"unknown divergence {div!r}")


DIV_CHOICES = (
    "qcvx-jensen", "qccv-jensen", "log-ratio", "ext-jensen", "mn-jensen",
    "power-jensen", "bregman", "qcvx-bregman", "delta-qcvx-bregman",
    "ext-bregman", "power-bregman", "r-power-bregman", "kl-nested-uniform",
    "kl-power-nested", "expfam-kl", "expfam-entropy", "expfam-cross-entropy",
)


def _add_common_div_flags(p):
    p.add_argument("--div", required=True, choices=DIV_CHOICES, metavar="DIV")
    p.add_argument("--gen", help="generator spec, inline JSON or built-in name")
    p.add_argument("--gen-file", help="path to a JSON generator spec")
    p.add_argument("--alpha", type=float, help="skew parameter in (0,1)")
    p.add_argument("--delta", type=float,
                   help="power exponent (power-jensen) or averaging ratio (delta-qcvx-bregman)")
    p.add_argument("--delta1", type=float, help="first power-bregman exponent")
    p.add_argument("--delta2", type=float, help="second power-bregman exponent")
    p.add_argument("--r", type=float, help="r-power-bregman exponent, >= 1")
    p.add_argument("--exponent", type=float,
                   help="power-family exponent alpha > 1 (kl-power-nested)")
    p.add_argument("--mean-m", help="argument mean for mn-jensen")
    p.add_argument("--mean-n", help="value mean for mn-jensen")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcdiv",
        description="Quasiconvex Jensen/Bregman divergences and their numeric oracles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate one divergence")
    _add_common_div_flags(p_eval)
    p_eval.add_argument("--theta", required=True, help="comma-separated reals")
    p_eval.add_argument("--theta-prime", help="comma-separated reals")
    p_eval.add_argument("--format", choices=("plain", "csv", "json"), default="plain")

    p_limit = sub.add_parser("limit-study", help="run a dyadic convergence study")
    p_limit.add_argument("--study", required=True,
                         choices=("scaled-jensen", "power-jensen", "r-power-bregman"))
    p_limit.add_argument("--gen", help="generator spec, inline JSON or built-in name")
    p_limit.add_argument("--gen-file", help="path to a JSON generator spec")
    p_limit.add_argument("--theta", required=True)
    p_limit.add_argument("--theta-prime", required=True)
    p_limit.add_argument("--k-max", type=int, default=20)

    p_check = sub.add_parser("check", help="run a randomized property suite")
    p_check.add_argument("--suite", required=True, choices=sorted(checks.SUITES))
    p_check.add_argument("--samples", type=int, default=10000)
    p_check.add_argument("--seed", type=int, default=0)

    p_table = sub.add_parser("table", help="emit a divergence grid as CSV")
    _add_common_div_flags(p_table)
    p_table.add_argument("--grid-min", type=float, required=True)
    p_table.add_argument("--grid-max", type=float, required=True)
    p_table.add_argument("--grid-step", type=float, required=True)
    p_table.add_argument("--format", choices=("csv",), default="csv")

    return parser


def cmd_eval(args) -> int:
    needs_tp, evaluate = _build_evaluator(args)
    theta = _parse_vector(args.theta, "--theta")
    theta_p = None
    if args.theta_prime is not None:
        theta_p = _parse_vector(args.theta_prime, "--theta-prime")
    elif needs_tp:
        raise CliError(f"--div {args.div} requires --theta-prime")
    value = evaluate(theta, theta_p)
    text = _fmt(value, args.format)
    if args.format == "json":
        print('{"value": "inf"}' if math.isinf(value) else f'{{"value": {text}}}')
    elif args.format == "csv":
        print("value")
        print(text)
    else:
        print(text)
    return 0


def cmd_limit_study(args) -> int:
    if not 4 <= args.k_max <= 40:
        raise CliError(f"--k-max must lie in [4, 40], got {args.k_max}")
    g = _load_generator(args)
    theta = _parse_vector(args.theta, "--theta")
    theta_p = _parse_vector(args.theta_prime, "--theta-prime")
    run = {
        "scaled-jensen": oracles.limit_scaled_jensen,
        "power-jensen": oracles.limit_power_jensen,
        "r-power-bregman": oracles.limit_r_power_bregman,
    }[args.study]
    study = run(g, theta, theta_p, args.k_max)
    for row in study.csv_rows():
        print(row)
    return 0 if study.converged else 1


def cmd_check(args) -> int:
    if args.samples < 1:
        raise CliError(f"--samples must be >= 1, got {args.samples}")
    result = checks.run_suite(args.suite, args.samples, args.seed)
    for line in result.report_lines():
        print(line)
    return 0 if result.passed else 1


def cmd_table(args) -> int:
    if not args.grid_step > 0.0:
        raise CliError(f"--grid-step must be > 0, got {args.grid_step}")
    if not args.grid_min < args.grid_max:
        raise CliError("--grid-min must be below --grid-max")
    needs_tp, evaluate = _build_evaluator(args)
    if not needs_tp:
        raise CliError(f"--div {args.div} is unary; table needs a binary divergence")
    count = int(math.floor((args.grid_max - args.grid_min) / args.grid_step + 1e-9)) + 1
    points = [args.grid_min + i * args.grid_step for i in range(count)]
    print("theta,theta_prime,value")
    for a in points:
        for b in points:
            value = evaluate((a,), (b,))
            print(f"{_fmt(a, 'csv')},{_fmt(b, 'csv')},{_fmt(value, 'csv')}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = {
        "eval": cmd_eval,
        "limit-study": cmd_limit_study,
        "check": cmd_check,
        "table": cmd_table,
    }[args.command]
    try:
        return command(args)
    except CliError as e:
        print(f"qcdiv: error: {e}", file=sys.stderr)
        return 2
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as e:
        print(f"qcdiv: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
