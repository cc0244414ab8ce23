"""Command-line surface: analytic queries, exact oracles, experiments,
and empirical-vs-theoretical comparisons.

Exit codes: 0 success, 1 usage, 2 validation, 3 size/budget refusal,
4 I/O failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from . import analytic as an
from . import montecarlo as mc
from . import oracle as orc
from .files import (
    FileFormatError,
    RunManifest,
    read_empirical_csv,
    write_empirical_csv,
    write_manifest,
    write_reference_csv,
)
from .model import TrialDistribution, ValidationError

EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_IO = 4

# (p, q1, q2, N, s, m) parameter sets for the eight figure presets
FIGURE_PRESETS = {
    1: ("1/3", "1/3", "1/3", 3_000_000, 3000, 16),
    2: ("0.4", "0.3", "0.3", 3_000_000, 3000, 19),
    3: ("0.5", "0.4", "0.1", 4_000_000, 3000, 25),
    4: ("0.5", "0.3", "0.2", 3_000_000, 3000, 23),
    5: ("0.5", "0.25", "0.25", 2_000_000, 2000, 25),
    6: ("0.6", "0.2", "0.2", 4_000_000, 3000, 34),
    7: ("0.7", "0.2", "0.1", 4_000_000, 3000, 47),
    8: ("0.8", "0.1", "0.1", 3_000_000, 3000, 72),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_prob(text: str) -> Fraction:
    """Accept '1/3' and decimal literals; both become exact fractions."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"cannot parse probability {text!r}") from None


def _dist(args) -> TrialDistribution:
    for name in ("p", "q1", "q2"):
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name} is required for this query")
    return TrialDistribution(parse_prob(args.p), parse_prob(args.q1), parse_prob(args.q2))


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise UsageError(f"--{name} is required for this query")


# --- analytic ----------------------------------------------------------

def cmd_analytic(args) -> int:
    q = args.quantity
    if q == "constants":
        c = an.derive_constants(_dist(args))
        payload = {"C": c.C, "C0": float(c.C0), "C1": float(c.C1),
                   "C2": float(c.C2), "K": c.K}
        _emit(args, payload, "\n".join(f"{k} = {v}" for k, v in payload.items()))
    elif q == "pA1":
        _require(args, "m")
        v = an.window_probability(_dist(args), args.m)
        payload = {"pA1": float(v)}
        exact = f" = {v}" if isinstance(v, Fraction) else ""
        _emit(args, payload, f"P(A1){exact} ~ {float(v):.9g}")
    elif q == "alpha":
        _require(args, "m")
        b = an.alpha_correction(_dist(args), args.m)
        payload = {"alpha": float(b.alpha), "numerator": float(b.numerator),
                   "denominator": float(b.denominator)}
        _emit(args, payload,
              f"alpha = {float(b.alpha):.9g} "
              f"(numerator {float(b.numerator):.9g} / denominator {float(b.denominator):.9g})")
    elif q == "mN":
        _require(args, "N")
        r = an.m_of_n(_dist(args), args.N)
        payload = {"total": r.total, "integer_part": r.integer_part,
                   "fractional_part": r.fractional_part, "terms": r.terms}
        lines = [f"m(N) = {r.total!r}  [m(N)] = {r.integer_part}  "
                 f"{{m(N)}} = {r.fractional_part!r}"]
        lines += [f"  {v:+.9g}  {k}" for k, v in r.terms.items()]
        _emit(args, payload, "\n".join(lines))
    elif q == "H":
        _require(args, "N", "x")
        r = an.h_function_terms(_dist(args), args.N, args.x)
        payload = {"total": r.total, "terms": r.terms}
        lines = [f"H({args.x}) = {r.total!r}"]
        lines += [f"  {v:+.9g}  {k}" for k, v in r.terms.items()]
        _emit(args, payload, "\n".join(lines))
    elif q == "accompanying":
        _require(args, "N", "k")
        d = an.accompanying_cdf_details(_dist(args), args.N, args.k)
        payload = {"cdf": d.cdf, "exponent": d.exponent, "clamped": d.clamped}
        _emit(args, payload,
              f"P(mu(N) - [m(N)] < {args.k}) = {d.cdf!r}"
              + (" (clamped)" if d.clamped else ""))
    elif q == "theorem1":
        _require(args, "x")
        v = an.theorem1_limit_cdf(args.x)
        _emit(args, {"cdf": v}, f"P(tau_m alpha P(A1) <= {args.x}) -> {v!r}")
    elif q == "bounds":
        _require(args, "m", "N")
        dist = _dist(args)
        alpha = float(an.alpha_correction(dist, args.m).alpha)
        pa1 = float(an.window_probability(dist, args.m))
        if args.eps is not None:
            eps = args.eps
        else:
            # measured discrepancy when the closed forms are usable, else 10 p^m
            try:
                eps = abs(float(an.conditional_survival(dist, args.m)) - alpha)
            except (OverflowError, ValidationError):
                eps = 10.0 * float(dist.p) ** args.m
        lo, hi = an.cfk_bounds(alpha, eps, args.N, args.m, pa1)
        payload = {"lower": lo, "upper": hi, "alpha": alpha, "eps": eps, "pA1": pa1}
        _emit(args, payload,
              f"{lo!r} < P(no valid window among {args.N}) < {hi!r} "
              f"(alpha={alpha:.9g}, eps={eps:.3g})")
    else:
        raise UsageError(f"unknown analytic quantity {q!r}")
    return 0


# --- oracle ------------------------------------------------------------

def _print_prob(args, label: str, v) -> None:
    payload = {"value": float(v)}
    if isinstance(v, Fraction):
        payload["exact"] = f"{v.numerator}/{v.denominator}"
        _emit(args, payload, f"{label} = {v} ~ {float(v):.12g}")
    else:
        _emit(args, payload, f"{label} = {float(v)!r}")


def cmd_oracle(args) -> int:
    q = args.query
    dist = _dist(args)
    if q == "longest-cdf":
        _require(args, "N", "m")
        v = orc.dp_longest_cdf(dist, args.N, args.m, mode=args.mode, budget=args.budget)
        _print_prob(args, f"P(mu({args.N}) < {args.m})", v)
    elif q == "hitting-tail":
        _require(args, "N", "m")
        v = orc.dp_hitting_tail(dist, args.m, args.N, mode=args.mode, budget=args.budget)
        _print_prob(args, f"P(tau_{args.m} > {args.N})", v)
    elif q == "conditional":
        _require(args, "m")
        v = orc.enumerate_conditional(dist, args.m)
        _print_prob(args, f"P(no recurrence in windows 2..{args.m} | A1)", v)
    elif q == "window":
        _require(args, "m")
        v = orc.window_probability_by_enumeration(dist, args.m)
        _print_prob(args, "P(A1) by enumeration", v)
    else:
        raise UsageError(f"unknown oracle query {q!r}")
    return 0


# --- experiment --------------------------------------------------------

def _experiment_config(args) -> tuple[mc.ExperimentConfig, float]:
    if args.figure is not None:
        if args.figure not in FIGURE_PRESETS:
            raise UsageError(f"--figure must be in 1..8, got {args.figure}")
        p, q1, q2, N, s, m = FIGURE_PRESETS[args.figure]
        args.p, args.q1, args.q2 = p, q1, q2
        N = args.N if args.N is not None else N
        s = args.s if args.s is not None else s
        m = args.m if args.m is not None else m
    else:
        _require(args, "N", "s")
        N, s, m = args.N, args.s, args.m
    scale = args.scale
    if scale is not None:
        if not (0 < scale <= 1):
            raise ValidationError(f"--scale must lie in (0, 1], got {scale}")
        N = max(1, int(round(N * scale)))
        s = max(1, int(round(s * scale)))
    if args.mode == "hitting" and m is None:
        raise UsageError("hitting mode requires --m (or a --figure preset)")
    cfg = mc.ExperimentConfig(dist=_dist(args), N=N, s=s, seed=args.seed,
                              mode=args.mode, m=m if args.mode == "hitting" else None)
    return cfg, (scale if scale is not None else 1.0)


def _reference_for(cfg: mc.ExperimentConfig):
    """(grid -> cdf value, description) for the experiment's theoretical law."""
    if cfg.mode == "hitting":
        return an.theorem1_limit_cdf, "exp1"
    return (lambda x: an.accompanying_cdf(cfg.dist, cfg.N, math.floor(x) + 1)), "accompanying"


def _sup_distance_for(cfg, empirical):
    ref, _ = _reference_for(cfg)
    if cfg.mode == "longest":
        return mc.sup_distance_lattice(
            empirical, lambda k: an.accompanying_cdf(cfg.dist, cfg.N, k))
    return mc.sup_distance(empirical, ref)


def cmd_experiment(args) -> int:
    cfg, scale = _experiment_config(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    if cfg.mode == "longest":
        result = mc.run_longest_experiment(cfg, workers=args.threads)
    else:
        result = mc.run_hitting_experiment(cfg, workers=args.threads)
    wall = time.perf_counter() - t0

    prefix = f"{cfg.mode}_p{float(cfg.dist.p):g}_N{cfg.N}_s{cfg.s}"
    meta = {
        "mode": cfg.mode, "p": args.p, "q1": args.q1, "q2": args.q2,
        "N": cfg.N, "s": cfg.s, "m": cfg.m if cfg.m is not None else "",
        "seed": cfg.seed, "scale": scale, "rng_scheme": mc.RNG_SCHEME_ID,
        "tool_version": __version__,
    }
    emp_path = out_dir / f"{prefix}_empirical.csv"
    ref_path = out_dir / f"{prefix}_reference.csv"
    rep_path = out_dir / f"{prefix}_report.json"
    man_path = out_dir / f"{prefix}_manifest.json"

    write_empirical_csv(emp_path, result.empirical, meta)
    ref_fn, ref_name = _reference_for(cfg)
    grid = [int(x) if cfg.mode == "longest" else float(x) for x in result.empirical.support]
    write_reference_csv(ref_path, grid, [ref_fn(x) for x in grid],
                        {**meta, "reference": ref_name})
    distance = _sup_distance_for(cfg, result.empirical)
    report = {"sup_distance": distance, "reference": ref_name,
              "samples": result.empirical.total, "excluded": result.excluded}
    rep_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")

    manifest = RunManifest(
        config={"mode": cfg.mode, "p": args.p, "q1": args.q1, "q2": args.q2,
                "N": cfg.N, "s": cfg.s, "m": cfg.m, "seed": cfg.seed, "scale": scale},
        tool_version=__version__,
        rng_scheme=mc.RNG_SCHEME_ID,
        wall_time_s=wall,
        excluded=result.excluded,
        outputs={"empirical": str(emp_path), "reference": str(ref_path),
                 "report": str(rep_path)},
    )
    write_manifest(man_path, manifest)
    _emit(args, {**report, "outputs": manifest.outputs, "manifest": str(man_path)},
          f"sup-distance vs {ref_name}: {distance:.6f} "
          f"({result.empirical.total} samples, {result.excluded} excluded)\n"
          f"wrote {emp_path}, {ref_path}, {rep_path}, {man_path}")
    return 0


# --- compare -----------------------------------------------------------

def cmd_compare(args) -> int:
    empirical, meta = read_empirical_csv(args.empirical)
    ref_name = args.ref
    if ref_name is None:
        ref_name = "exp1" if meta.get("mode") == "hitting" else "accompanying"

    lattice = None
    if ref_name == "exp1":
        ref = an.theorem1_limit_cdf
    elif ref_name == "accompanying":
        p = parse_prob(args.p if args.p is not None else meta["p"])
        q1 = parse_prob(args.q1 if args.q1 is not None else meta["q1"])
        q2 = parse_prob(args.q2 if args.q2 is not None else meta["q2"])
        N = args.N if args.N is not None else int(meta["N"])
        dist = TrialDistribution(p, q1, q2)
        lattice = lambda k: an.accompanying_cdf(dist, N, k)
        ref = lambda x: an.accompanying_cdf(dist, N, math.floor(x) + 1)
    else:
        other, _ = read_empirical_csv(ref_name)
        ref = other.cdf
        lattice = "step"
    if lattice == "step":
        distance = mc.sup_distance_step(empirical, other)
    elif lattice is not None:
        distance = mc.sup_distance_lattice(empirical, lattice)
    else:
        distance = mc.sup_distance(empirical, ref)
    cum = empirical.cumulative()
    rows = [(float(x), float(c), float(ref(float(x))))
            for x, c in zip(empirical.support, cum)]
    payload = {"sup_distance": distance, "reference": ref_name,
               "table": [{"value": v, "ecdf": e, "reference_cdf": r} for v, e, r in rows]}
    lines = [f"sup-distance vs {ref_name}: {distance:.6f}", "value,ecdf,reference_cdf"]
    lines += [f"{v!r},{e!r},{r!r}" for v, e, r in rows]
    _emit(args, payload, "\n".join(lines))
    return 0


# --- wiring ------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="contamruns",
                     description="At most 1+1 contaminated runs: formulas, oracles, experiments")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--seed", type=int, default=20240817, help="experiment master seed")
    parser.add_argument("--threads", type=int, default=1, help="worker pool size")
    parser.add_argument("--out", default="out", help="output directory for experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_dist(p):
        p.add_argument("--p")
        p.add_argument("--q1")
        p.add_argument("--q2")

    pa = sub.add_parser("analytic", help="closed-form quantities")
    pa.add_argument("quantity",
                    choices=["pA1", "alpha", "mN", "H", "accompanying",
                             "theorem1", "bounds", "constants"])
    add_dist(pa)
    pa.add_argument("--m", type=int)
    pa.add_argument("--N", type=int)
    pa.add_argument("--x", type=float)
    pa.add_argument("--k", type=int)
    pa.add_argument("--eps", type=float)
    pa.set_defaults(fn=cmd_analytic)

    po = sub.add_parser("oracle", help="exact enumeration / DP oracles")
    po.add_argument("query", choices=["longest-cdf", "hitting-tail", "conditional", "window"])
    add_dist(po)
    po.add_argument("--m", type=int)
    po.add_argument("--N", type=int)
    po.add_argument("--mode", choices=["exact", "float"], default="exact")
    po.add_argument("--budget", type=float, default=orc.DEFAULT_BUDGET)
    po.set_defaults(fn=cmd_oracle)

    pe = sub.add_parser("experiment", help="run a Monte Carlo experiment")
    add_dist(pe)
    pe.add_argument("--figure", type=int, help="figure preset 1..8")
    pe.add_argument("--mode", choices=["longest", "hitting"], default="longest")
    pe.add_argument("--N", type=int)
    pe.add_argument("--s", type=int)
    pe.add_argument("--m", type=int)
    pe.add_argument("--scale", type=float, help="multiply N and s down for desk-scale runs")
    pe.set_defaults(fn=cmd_experiment)

    pc = sub.add_parser("compare", help="empirical CSV vs a reference CDF")
    pc.add_argument("empirical", help="empirical distribution CSV")
    pc.add_argument("--ref", help="exp1 | accompanying | path to another empirical CSV")
    add_dist(pc)
    pc.add_argument("--N", type=int)
    pc.set_defaults(fn=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValidationError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except orc.SizeError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except FileFormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
