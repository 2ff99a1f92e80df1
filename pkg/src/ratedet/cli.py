"""Command-line driver: designs, figure data files, allocation experiments.

SNR convention: the per-channel SNR is the signal energy E = m**2 in dB, so
the amplitude is m = 10**(snr_db/20) (0 dB means m = 1). All commands are
deterministic given their flags; randomized ones derive every stream from
--seed through named PCG64 seed sequences. CSV output uses ',' separators,
'.' decimal points, LF line endings, and full round-trip float precision.

Exit codes: 0 success, 1 runtime/capacity failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys

import numpy as np

from .allocation import best_allocation
from .chernoff import chernoff_information, chernoff_raw, is_discrete_concave
from .design import (
    BBDesigner,
    DesignerConfig,
    chernoff_curve,
    design_bb,
    design_numerical,
)
from .detection import McConfig, NetworkConfig, exact_map_error, monte_carlo_error
from .errors import CapacityError
from .observation import model_from_snr_db
from .quantizer import Quantizer, conditional_pmf

DEFAULT_SEED = 1729
FIG4_ALLOCATIONS = ("4-4-4-0-0-0", "3-3-3-3-0-0", "5-3-1-1-1-1", "3-3-2-2-1-1", "2-2-2-2-2-2")


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_snr_list(text: str) -> list[float]:
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR list {text!r}") from None


def _parse_rate_range(text: str) -> list[int]:
    """Accepts 'A..B' (inclusive) or a comma-separated list."""
    try:
        if ".." in text:
            first, last = text.split("..")
            rates = list(range(int(first), int(last) + 1))
        else:
            rates = [int(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad rate range {text!r}") from None
    if not rates or any(r < 0 for r in rates):
        raise argparse.ArgumentTypeError(f"bad rate range {text!r}")
    return rates


def _parse_allocation(text: str) -> tuple[int, ...]:
    try:
        rates = tuple(int(tok) for tok in text.split("-"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad allocation {text!r}") from None
    if not rates or any(r < 0 for r in rates):
        raise argparse.ArgumentTypeError(f"bad allocation {text!r}")
    return rates


def _parse_allocation_list(text: str) -> list[tuple[int, ...]]:
    return [_parse_allocation(tok) for tok in text.split(",") if tok.strip() != ""]


def _write_output(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as handle:
            handle.write(text)


def _derived_seed(base: int, *keys: int) -> int:
    """Stable nonnegative stream key for a (rate, SNR) grid point."""
    entropy = (int(base),) + tuple(int(k) for k in keys)
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def _snr_key(snr_db: float) -> int:
    return int(round(snr_db * 1000)) + (1 << 22)


def _designer_config(args, rate: int, snr_db: float) -> DesignerConfig:
    return DesignerConfig(
        eta=args.eta,
        restarts=args.restarts,
        seed=_derived_seed(args.seed, rate, _snr_key(snr_db)),
        grid_points=args.grid_points,
        max_iters=args.max_iters,
    )


def _design_with_cache(args, rate: int, snr_db: float, model) -> Quantizer:
    """Numerical design, optionally cached as a quantizer JSON file.

    The cache key covers everything the result depends on, so a hit is
    bit-identical to a fresh run.
    """
    cache_dir = getattr(args, "cache_dir", None)
    if cache_dir is None:
        return design_numerical(rate, model, _designer_config(args, rate, snr_db)).quantizer
    os.makedirs(cache_dir, exist_ok=True)
    name = (
        f"numerical-r{rate}-snr{_snr_key(snr_db)}-seed{args.seed}"
        f"-eta{args.eta!r}-n{args.restarts}-g{args.grid_points}.json"
    )
    path = os.path.join(cache_dir, name)
    if os.path.exists(path):
        with open(path) as handle:
            return Quantizer.from_json(handle.read())
    quantizer = design_numerical(rate, model, _designer_config(args, rate, snr_db)).quantizer
    with open(path, "w", newline="\n") as handle:
        handle.write(quantizer.to_json() + "\n")
    return quantizer


class _PerRateNumericalDesigner:
    """Numerical designer whose RNG stream is keyed by (rate, SNR)."""

    name = "numerical"

    def __init__(self, args, snr_db: float):
        self._args = args
        self._snr_db = snr_db
        self._cache: dict[tuple[int, float], object] = {}

    def design(self, rate, model):
        key = (rate, model.m)
        if key not in self._cache:
            cfg = _designer_config(self._args, rate, self._snr_db)
            self._cache[key] = design_numerical(rate, model, cfg).quantizer
        return self._cache[key]


def _make_designer(args, snr_db: float):
    if args.method == "bb":
        return BBDesigner()
    return _PerRateNumericalDesigner(args, snr_db)


def _gnuplot_script(csv_path: str, title: str, xlabel: str, ylabel: str) -> str:
    return (
        "set datafile separator ','\n"
        f"set title '{title}'\n"
        f"set xlabel '{xlabel}'\n"
        f"set ylabel '{ylabel}'\n"
        "set key autotitle columnhead\n"
        f"plot '{csv_path}' using 1:2 with linespoints\n"
    )


def _maybe_gnuplot(args, title: str, xlabel: str, ylabel: str) -> None:
    if getattr(args, "gnuplot", False):
        if not args.out or args.out == "-":
            raise ValueError("--gnuplot requires --out")
        _write_output(args.out + ".gp", _gnuplot_script(args.out, title, xlabel, ylabel))


# ---------------------------------------------------------------- commands


def cmd_design(args) -> int:
    model = model_from_snr_db(args.snr_db)
    if args.method == "bb":
        quantizer = design_bb(args.rate)
        result = chernoff_information(conditional_pmf(quantizer, model))
        chernoff, alpha = result.value, result.alpha_star
    else:
        design = design_numerical(args.rate, model, _designer_config(args, args.rate, args.snr_db))
        quantizer, chernoff, alpha = design.quantizer, design.chernoff, design.alpha_star
    payload = {
        "rate": quantizer.rate,
        "boundaries": list(quantizer.boundaries),
        "chernoff": chernoff,
        "alpha_star": alpha,
    }
    _write_output(args.out, json.dumps(payload) + "\n")
    return 0


def cmd_fig2(args) -> int:
    lines = ["snr_db,rate,chernoff"]
    designer = BBDesigner()
    for snr_db in args.snr_db:
        model = model_from_snr_db(snr_db)
        curve = chernoff_curve(designer, model, args.rates)
        for rate, value in zip(curve.rates, curve.values):
            lines.append(f"{_fmt(snr_db)},{rate},{_fmt(value)}")
    _write_output(args.out, "\n".join(lines) + "\n")
    _maybe_gnuplot(args, "Chernoff information vs rate", "rate (bits)", "chernoff (nats)")
    return 0


def cmd_fig3(args) -> int:
    model = model_from_snr_db(args.snr_db)
    c_inf = chernoff_raw(model)
    bb = chernoff_curve(BBDesigner(), model, args.rates)
    lines = ["rate,c_bb,c_numerical,c_inf"]
    for rate, c_bb in zip(bb.rates, bb.values):
        quantizer = _design_with_cache(args, rate, args.snr_db, model)
        c_num = chernoff_information(conditional_pmf(quantizer, model)).value
        lines.append(f"{rate},{_fmt(c_bb)},{_fmt(c_num)},{_fmt(c_inf)}")
    _write_output(args.out, "\n".join(lines) + "\n")
    _maybe_gnuplot(args, "Design methods vs raw observation", "rate (bits)", "chernoff (nats)")
    return 0


def cmd_fig4(args) -> int:
    allocations = args.allocations
    lines = ["snr_db,allocation,log10_pe"]
    for snr_db in args.snr_db:
        model = model_from_snr_db(snr_db)
        quantizer_by_rate = {}
        for rates in allocations:
            for rate in rates:
                if rate not in quantizer_by_rate:
                    quantizer_by_rate[rate] = _design_with_cache(args, rate, snr_db, model)
        for rates in allocations:
            config = NetworkConfig(
                quantizers=tuple(quantizer_by_rate[r] for r in rates), model=model
            )
            pe = exact_map_error(config)
            label = "-".join(str(r) for r in rates)
            lines.append(f"{_fmt(snr_db)},{label},{_fmt(math.log10(pe))}")
    _write_output(args.out, "\n".join(lines) + "\n")
    _maybe_gnuplot(args, "MAP error probability vs SNR", "SNR (dB)", "log10 Pe")
    return 0


def cmd_allocate(args) -> int:
    model = model_from_snr_db(args.snr_db)
    designer = _make_designer(args, args.snr_db)
    best, ranked = best_allocation(args.n_sensors, args.total_rate, model, designer)
    lines = ["allocation,network_chernoff"]
    lines.extend(f"{s.allocation.label()},{_fmt(s.network_chernoff)}" for s in ranked)
    _write_output(args.out, "\n".join(lines) + "\n")
    winner = f"winner: {best.allocation.label()} (network chernoff {_fmt(best.network_chernoff)})\n"
    if args.out is None or args.out == "-":
        sys.stderr.write(winner)
    else:
        sys.stdout.write(winner)
    return 0


def cmd_concavity(args) -> int:
    lines = ["method,snr_db,concave,violations"]
    all_ok = True
    for snr_db in args.snr_db:
        model = model_from_snr_db(snr_db)
        designer = _make_designer(args, snr_db)
        curve = chernoff_curve(designer, model, args.rates)
        report = is_discrete_concave(curve.values, slack=args.slack)
        all_ok = all_ok and report.is_concave
        marks = ";".join(str(v) for v in report.violations)
        lines.append(f"{args.method},{_fmt(snr_db)},{str(report.is_concave).lower()},{marks}")
    _write_output(args.out, "\n".join(lines) + "\n")
    return 0 if all_ok else 1


def cmd_pe(args) -> int:
    model = model_from_snr_db(args.snr_db)
    designer = _make_designer(args, args.snr_db)
    rates = args.allocation
    config = NetworkConfig(
        quantizers=tuple(designer.design(r, model) for r in rates), model=model
    )
    pe = exact_map_error(config)
    label = "-".join(str(r) for r in rates)
    lines = ["snr_db,allocation,pe,log10_pe",
             f"{_fmt(args.snr_db)},{label},{_fmt(pe)},{_fmt(math.log10(pe)) if pe > 0 else 'nan'}"]
    _write_output(args.out, "\n".join(lines) + "\n")
    return 0


def cmd_mc(args) -> int:
    model = model_from_snr_db(args.snr_db)
    designer = _make_designer(args, args.snr_db)
    rates = args.allocation
    config = NetworkConfig(
        quantizers=tuple(designer.design(r, model) for r in rates), model=model
    )
    mc = McConfig(snapshots=args.snapshots, trials=args.trials,
                  seed=_derived_seed(args.seed, 0, _snr_key(args.snr_db)))
    result = monte_carlo_error(config, mc)
    label = "-".join(str(r) for r in rates)
    lines = ["snr_db,allocation,T,estimate,std_err",
             f"{_fmt(args.snr_db)},{label},{args.snapshots},"
             f"{_fmt(result.estimate)},{_fmt(result.std_err)}"]
    _write_output(args.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------- parser


def _add_designer_flags(parser: argparse.ArgumentParser, eta: float) -> None:
    parser.add_argument("--eta", type=float, default=eta,
                        help=f"ascent stopping threshold (default {eta})")
    parser.add_argument("--restarts", type=int, default=16,
                        help="independent random starts (default 16)")
    parser.add_argument("--grid-points", type=int, default=64, dest="grid_points",
                        help="coarse grid size of the boundary subproblem (default 64)")
    parser.add_argument("--max-iters", type=int, default=10000, dest="max_iters",
                        help="iteration cap per start (default 10000)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED,
                        help=f"base RNG seed (default {DEFAULT_SEED})")


def _add_out_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratedet",
        description=(
            "Quantizer design and rate allocation for decentralized detection. "
            "SNR flags are the per-channel energy E = m**2 in dB; "
            "the signal amplitude is m = 10**(snr_db/20)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="design one quantizer, print JSON")
    p.add_argument("--rate", type=int, required=True)
    p.add_argument("--snr-db", type=float, default=0.0, dest="snr_db")
    p.add_argument("--method", choices=("bb", "numerical"), default="bb")
    _add_designer_flags(p, eta=1e-4)
    _add_out_flag(p)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("fig2", help="compander Chernoff vs rate across SNRs (CSV)")
    p.add_argument("--snr-db", type=_parse_snr_list, default=[-2.0, -1.0, 0.0, 1.0, 2.0],
                   dest="snr_db")
    p.add_argument("--rates", type=_parse_rate_range, default=list(range(8)))
    p.add_argument("--gnuplot", action="store_true", help="also write <out>.gp plot script")
    _add_out_flag(p)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("fig3", help="compander vs numerical design at one SNR (CSV)")
    p.add_argument("--snr-db", type=float, default=0.0, dest="snr_db")
    p.add_argument("--rates", type=_parse_rate_range, default=list(range(8)))
    p.add_argument("--gnuplot", action="store_true")
    p.add_argument("--cache-dir", default=None, dest="cache_dir",
                   help="directory for quantizer JSON cache files")
    _add_designer_flags(p, eta=1e-8)
    _add_out_flag(p)
    p.set_defaults(func=cmd_fig3)

    p = sub.add_parser("fig4", help="exact MAP error vs SNR per allocation (CSV)")
    p.add_argument("--snr-db", type=_parse_snr_list,
                   default=[float(s) for s in range(-5, 6)], dest="snr_db")
    p.add_argument("--allocations", type=_parse_allocation_list,
                   default=",".join(FIG4_ALLOCATIONS),
                   help="comma-separated hyphen-joined allocations")
    p.add_argument("--gnuplot", action="store_true")
    p.add_argument("--cache-dir", default=None, dest="cache_dir",
                   help="directory for quantizer JSON cache files")
    _add_designer_flags(p, eta=1e-8)
    _add_out_flag(p)
    p.set_defaults(func=cmd_fig4)

    p = sub.add_parser("allocate", help="rank all full-budget allocations")
    p.add_argument("-n", "--n-sensors", type=int, required=True, dest="n_sensors")
    p.add_argument("-r", "--total-rate", type=int, required=True, dest="total_rate")
    p.add_argument("--snr-db", type=float, default=0.0, dest="snr_db")
    p.add_argument("--method", choices=("bb", "numerical"), default="bb")
    _add_designer_flags(p, eta=1e-8)
    _add_out_flag(p)
    p.set_defaults(func=cmd_allocate)

    p = sub.add_parser("concavity", help="discrete-concavity check per SNR; exit 0 iff all pass")
    p.add_argument("--snr-db", type=_parse_snr_list, default=[-2.0, -1.0, 0.0, 1.0, 2.0],
                   dest="snr_db")
    p.add_argument("--rates", type=_parse_rate_range, default=list(range(8)))
    p.add_argument("--method", choices=("bb", "numerical"), default="bb")
    p.add_argument("--slack", type=float, default=1e-9)
    _add_designer_flags(p, eta=1e-8)
    _add_out_flag(p)
    p.set_defaults(func=cmd_concavity)

    p = sub.add_parser("pe", help="exact MAP error of one allocation at one SNR")
    p.add_argument("--allocation", required=True, type=_parse_allocation)
    p.add_argument("--snr-db", type=float, default=0.0, dest="snr_db")
    p.add_argument("--method", choices=("bb", "numerical"), default="bb")
    _add_designer_flags(p, eta=1e-8)
    _add_out_flag(p)
    p.set_defaults(func=cmd_pe)

    p = sub.add_parser("mc", help="Monte-Carlo MAP error of one allocation")
    p.add_argument("--allocation", required=True, type=_parse_allocation)
    p.add_argument("--snr-db", type=float, default=0.0, dest="snr_db")
    p.add_argument("--method", choices=("bb", "numerical"), default="bb")
    p.add_argument("-T", "--snapshots", type=int, default=1, dest="snapshots")
    p.add_argument("--trials", type=int, default=100000)
    _add_designer_flags(p, eta=1e-8)
    _add_out_flag(p)
    p.set_defaults(func=cmd_mc)

    # Accept leading-minus values like "-2,-1,0,1,2" for SNR lists; every
    # real option begins with a letter, so any "-<digit>..." token is a value.
    matcher = re.compile(r"^-\d")
    parser._negative_number_matcher = matcher
    for subparser in sub.choices.values():
        subparser._negative_number_matcher = matcher

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
