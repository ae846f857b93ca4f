"""Command-line front end.

Subcommands: ``det-capacity``, ``gauss``, ``verify``, ``sweep``,
``simulate`` and ``replay``. Every file written by ``sweep`` or
``simulate`` gets a JSON manifest next to it (``<out>.manifest.json``);
``replay`` regenerates the file from the manifest byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__, binning, deterministic as det, gaussian as gs, verify
from .errors import BudgetExceededError
from .limits import ENV_VAR, enumeration_budget


@dataclass
class RunManifest:
    subcommand: str
    params: dict
    seeds: list = field(default_factory=list)
    artifact_version: str = __version__
    output: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "RunManifest":
        return cls(**json.loads(text))


def manifest_path(out: str) -> str:
    return out + ".manifest.json"


def _fmt(v) -> str:
    if v is None:
        return "NA"
    return f"{v:.6f}"


def _write_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _nonneg_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _rate(text: str) -> str:
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rate like 0.5 or 1/3, got {text!r}") from None
    if f < 0:
        raise argparse.ArgumentTypeError("rates must be nonnegative")
    return str(f)


# -- pure runners (params dict -> output text) -------------------------------

def run_sweep(params: dict) -> str:
    lo, hi, points = params["h1sq_min"], params["h1sq_max"], params["points"]
    g1, beta = params["g1"], params["beta"]
    grid = [float(x) for x in np.geomspace(lo, hi, points)]
    if params["figure"] == "fig2":
        header = ["h1sq", "alpha_star", "rate_alpha_star", "rate_alpha_1", "upper_bound"]
        curves = ["alpha_star", "secrecy_rate_alpha_star", "secrecy_rate_alpha_1",
                  "secrecy_upper"]
    else:
        header = ["h1sq", "key_rate_rho_star", "key_rate_rho_0", "key_upper", "valid"]
        curves = ["key_rate_rho_star", "key_rate_rho_0", "key_upper"]
    cols = [gs.sweep(c, grid, g1, beta) for c in curves]
    rows = []
    for k, h1sq in enumerate(grid):
        row = [_fmt(h1sq)] + [_fmt(col[k][1]) for col in cols]
        if params["figure"] == "fig3":
            p = gs.GaussWiretapParams(math.sqrt(h1sq), g1, beta)
            row.append("true" if gs.secret_key_bounds(p).valid else "false")
        rows.append(row)
    return _write_csv(header, rows)


def run_simulate(params: dict, seeds) -> str:
    ch = det.DetWiretapParams(params["n1"], params["m1"], params["n2"], params["m2"])
    n = params["n"]
    rate, rate_c = float(Fraction(params["rate"])), float(Fraction(params["rate_confusion"]))
    rows, reports = [], []
    for seed in seeds:
        rep = binning.simulate(binning.BinningConfig(ch, n, rate, rate_c, seed))
        reports.append(rep)
        rows.append([str(seed), _fmt(rep.error_probability), _fmt(rep.leakage),
                     _fmt(rep.covering_failure)])
    if reports:
        k = len(reports)
        rows.append(["mean",
                     _fmt(math.fsum(r.error_probability for r in reports) / k),
                     _fmt(math.fsum(r.leakage for r in reports) / k),
                     _fmt(math.fsum(r.covering_failure for r in reports) / k)])
    return _write_csv(["seed", "error", "leakage_bits_per_use", "covering_failure"], rows)


def _emit(out: str, text: str, manifest: RunManifest) -> None:
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    manifest.output = out
    with open(manifest_path(out), "w", encoding="utf-8", newline="") as fh:
        fh.write(manifest.to_json())


def _generate(manifest: RunManifest) -> str:
    if manifest.subcommand == "sweep":
        return run_sweep(manifest.params)
    if manifest.subcommand == "simulate":
        return run_simulate(manifest.params, manifest.seeds)
    raise ValueError(f"manifest subcommand {manifest.subcommand!r} cannot be replayed")


# -- subcommands ---------------------------------------------------------------

def cmd_det_capacity(args) -> int:
    p = det.DetWiretapParams(args.n1, args.m1, args.n2, args.m2)
    by_cases = det.det_secrecy_capacity_cases(p)
    by_rank = det.det_secrecy_capacity_rank(p)
    case, label, d_ab = det.row_count_case(p)
    key = det.det_secret_key_capacity(p)
    agree = by_cases == by_rank
    if args.json:
        print(json.dumps({"n1": p.n1, "m1": p.m1, "n2": p.n2, "m2": p.m2, "q": p.q,
                          "cs_cases": by_cases, "cs_rank": by_rank, "case": case,
                          "case_label": label, "d_ab": d_ab, "ck": key, "agree": agree},
                         sort_keys=True))
    else:
        print(f"n1={p.n1} m1={p.m1} n2={p.n2} m2={p.m2} q={p.q}")
        print(f"case {case} ({label}), d_AB={d_ab}")
        print(f"Cs (case formula) = {by_cases}")
        print(f"Cs (rank formula) = {by_rank}")
        print(f"C_K = {key}")
        if not agree:
            print("MISMATCH between case and rank formulas", file=sys.stderr)
    return 0 if agree else 1


def cmd_gauss(args) -> int:
    p = gs.GaussWiretapParams(args.h1, args.g1, args.beta)
    sb = gs.secrecy_bounds(p)
    kb = gs.secret_key_bounds(p)
    try:
        rho = gs.rho_star(p.h1, p.g1)
    except ValueError:
        rho = None
    vals = {
        "secrecy_lower": sb.lower, "secrecy_upper": sb.upper, "secrecy_gap": sb.gap,
        "key_lower": kb.lower, "key_upper": kb.upper, "key_gap": kb.gap,
        "key_valid": kb.valid, "alpha_star": gs.alpha_star(p), "rho_star": rho,
        "h1L_sq": gs.h1_low_sq(p.g1, p.beta), "h1H_sq": gs.h1_high_sq(p.g1, p.beta),
        "h1T_sq": gs.h1_threshold_sq(p.g1),
    }
    if args.alpha is not None:
        vals["rate_alpha"] = gs.secrecy_rate_achievable(p, args.alpha)
    if args.json:
        clean = {k: (None if isinstance(v, float) and math.isinf(v) else v)
                 for k, v in vals.items()}
        print(json.dumps(clean, sort_keys=True))
        return 0
    print(f"secrecy lower={_fmt(sb.lower)} upper={_fmt(sb.upper)} gap={_fmt(sb.gap)}")
    print(f"key lower={_fmt(kb.lower)} upper={_fmt(kb.upper)} gap={_fmt(kb.gap)} "
          f"valid={'true' if kb.valid else 'false'}")
    print(f"alpha_star={_fmt(vals['alpha_star'])} rho_star={_fmt(rho)}")
    if args.alpha is not None:
        print(f"rate(alpha={args.alpha})={_fmt(vals['rate_alpha'])}")
    print(f"h1L_sq={_fmt(vals['h1L_sq'])} h1H_sq={_fmt(vals['h1H_sq'])} "
          f"h1T_sq={_fmt(vals['h1T_sq'])}")
    return 0


def cmd_verify(args) -> int:
    results = verify.run_suite(args.suite, trials=args.trials)
    if args.json:
        print(json.dumps([asdict(r) for r in results], sort_keys=True))
    else:
        for r in results:
            print(r.summary())
    return 0 if all(r.passed for r in results) else 1


def cmd_sweep(args) -> int:
    params = {"figure": args.figure, "points": args.points, "h1sq_min": args.h1sq_min,
              "h1sq_max": args.h1sq_max, "g1": args.g1, "beta": args.beta}
    manifest = RunManifest("sweep", params)
    text = run_sweep(params)
    if args.out:
        _emit(args.out, text, manifest)
    else:
        sys.stdout.write(text)
    return 0


def cmd_simulate(args) -> int:
    params = {"n1": args.n1, "m1": args.m1, "n2": args.n2, "m2": args.m2, "n": args.n,
              "rate": args.rate, "rate_confusion": args.rate_confusion}
    seeds = list(range(args.seed, args.seed + args.seeds))
    manifest = RunManifest("simulate", params, seeds)
    text = run_simulate(params, seeds)
    if args.out:
        _emit(args.out, text, manifest)
    else:
        sys.stdout.write(text)
    return 0


def cmd_replay(args) -> int:
    with open(args.manifest, encoding="utf-8") as fh:
        manifest = RunManifest.from_json(fh.read())
    out = args.out or manifest.output
    _emit(out, _generate(manifest), manifest)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dpcwiretap", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("--budget", type=_nonneg_int, default=None,
                    help=f"lower the enumeration cap (default {enumeration_budget()})")
    sub = ap.add_subparsers(dest="command", required=True)

    def gains(p):
        for g in ("n1", "m1", "n2", "m2"):
            p.add_argument(f"--{g}", type=_nonneg_int, required=True)

    p = sub.add_parser("det-capacity", help="deterministic-model secrecy and key capacity")
    gains(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_det_capacity)

    p = sub.add_parser("gauss", help="degraded Gaussian secrecy and key bounds")
    p.add_argument("--h1", type=float, required=True)
    p.add_argument("--g1", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gauss)

    p = sub.add_parser("verify", help="run self-check suites")
    p.add_argument("suite", nargs="?", default="all", choices=["all", *verify.SUITES])
    p.add_argument("--trials", type=_nonneg_int, default=None, help="lemma1 pair count")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="figure data as CSV")
    p.add_argument("--figure", choices=["fig2", "fig3"], required=True)
    p.add_argument("--points", type=int, default=101)
    p.add_argument("--h1sq-min", type=float, default=1e-2)
    p.add_argument("--h1sq-max", type=float, default=1e2)
    p.add_argument("--g1", type=float, default=1.0)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="exact finite-n double-binning evaluation")
    gains(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rate", type=_rate, required=True)
    p.add_argument("--rate-confusion", type=_rate, default="0")
    p.add_argument("--seeds", type=_nonneg_int, default=1, help="number of seeds")
    p.add_argument("--seed", type=_nonneg_int, default=0, help="first seed")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("replay", help="regenerate an output file from its manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_replay)
    return ap


def _validate(ap: argparse.ArgumentParser, args) -> None:
    if args.command == "gauss" and abs(args.beta) > 1.0:
        ap.error(f"--beta must satisfy |beta| <= 1, got {args.beta}")
    if args.command == "sweep":
        if args.points < 2:
            ap.error("--points must be at least 2")
        lo, hi = args.h1sq_min, args.h1sq_max
        if not (1e-3 <= lo <= hi <= 1e3):
            ap.error("need 1e-3 <= --h1sq-min <= --h1sq-max <= 1e3")
    if args.command == "simulate" and args.n < 1:
        ap.error("--n must be at least 1")


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    _validate(ap, args)
    saved = os.environ.get(ENV_VAR)
    if args.budget is not None:
        os.environ[ENV_VAR] = str(enumeration_budget(args.budget))
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"budget refusal: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        if saved is None:
            os.environ.pop(ENV_VAR, None)
        else:
            os.environ[ENV_VAR] = saved


if __name__ == "__main__":
    sys.exit(main())
