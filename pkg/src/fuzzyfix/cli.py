"""Command-line front end.

Exit codes: 0 on success, 1 when a verification fails or an iteration does
not converge (outputs are still written), 2 on usage or I/O errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import coverings, fixpoint, fmetric, functions, satellite
from .reports import to_plain

DEFAULT_SEED = 20250101

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class CliError(Exception):
    """Usage or I/O problem; reported on stderr with exit code 2."""


def _fmt(v) -> str:
    return format(float(v), ".17g")


def read_points(path: str) -> list[float]:
    """One real per line; blank lines and '#' comments are ignored."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read points file {path}: {exc.strerror or exc}") from exc
    points = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            points.append(float(line))
        except ValueError:
            raise CliError(f"{path}:{lineno}: not a number: {line!r}") from None
    if not points:
        raise CliError(f"{path}: no points found")
    return points


def _write(path: str | None, text: str) -> None:
    if path is None:
        return
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror or exc}") from exc


def _emit(report: dict, args) -> None:
    text = json.dumps(to_plain(report), indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    _write(getattr(args, "report", None), text)


# --- subcommands ------------------------------------------------------------------

def corrupted_config(domain) -> fmetric.FMetricConfig:
    """(t/(t+1))**|x - y| with f = identity, alpha = 1, product norm."""
    def metric(x, y, t):
        return float(np.exp(abs(x - y) * -np.log1p(1.0 / t)))
    return fmetric.FMetricConfig(metric, functions.FClassFn.power(1), 1.0,
                                 functions.TNorm.product(), domain)


def cmd_axioms(args) -> int:
    domain = fmetric.Interval(args.lo, args.hi)
    if args.metric == "canonical":
        cfg = fmetric.canonical_config(domain)
    else:
        cfg = corrupted_config(domain)
    samples = args.samples
    fm = fmetric.verify_axioms(cfg, samples, samples, args.max_chain_len, args.seed,
                               (0.0, args.t_max))
    tn = functions.verify_tnorm(cfg.star, samples, args.seed)
    fc = functions.verify_fclass(cfg.f, max(samples, 2))
    report = {"metric": args.metric, "seed": args.seed, "alpha": cfg.alpha,
              "fmetric": fm.to_dict(), "tnorm": tn.to_dict(), "fclass": fc.to_dict(),
              "passed": fm.passed and tn.passed and fc.passed}
    _write(args.out, json.dumps(to_plain(report), indent=2, sort_keys=True) + "\n")
    _emit(report, args)
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_net(args) -> int:
    if not 0.0 < args.r < 1.0:
        raise CliError("--r must lie in (0, 1)")
    if args.epsilon <= 0:
        raise CliError("--epsilon must be positive")
    cfg = fmetric.canonical_config()
    pts = read_points(args.points)
    A = coverings.FiniteSubset(tuple(pts), cfg)
    bounded = coverings.boundedness_witness(A, args.t0)
    greedy = coverings.greedy_separated_points(A, args.r, args.epsilon, budget=args.budget)
    cands = read_points(args.candidates) if args.candidates else pts
    report = {
        "points": pts,
        "epsilon": args.epsilon,
        "r": args.r,
        "boundedness": {"t0": bounded.t0, "beta": bounded.beta, "r": bounded.r,
                        "threshold": bounded.threshold},
        "greedy": {"net": list(greedy.points), "size": greedy.size, "complete": greedy.complete,
                   "separation_slack": coverings.separation_slack(
                       cfg, [p for p in greedy.points], args.r, args.epsilon)
                   if greedy.size > 1 else None},
    }
    if len(cands) <= coverings.MAX_BRUTE_FORCE:
        best = coverings.min_net_bruteforce(A, cands, args.r, args.epsilon)
        report["min_net"] = None if best is None else {"net": list(best), "size": len(best)}
    else:
        report["min_net"] = "skipped: more than 20 candidates"
    if len(pts) > 1:
        obs = coverings.common_cover_obstruction(A, args.r, args.epsilon)
        report["obstruction"] = {"bound": obs.bound, "blocked_pairs": len(obs.blocked),
                                 "pairs": len(obs.pairs), "all_blocked": obs.all_blocked}
    _write(args.out, json.dumps(to_plain(report), indent=2, sort_keys=True) + "\n")
    _emit(report, args)
    return EXIT_OK if greedy.complete else EXIT_FAIL


_EXAMPLES = {
    "sixth": (fixpoint.sixth, 5.0, lambda: fmetric.Interval(-5.0, 5.0)),
    "tenfold": (fixpoint.tenfold, 2.0, lambda: fmetric.FiniteSet(tuple(float(v) for v in range(0, 101, 2)))),
}


def cmd_fixpoint(args) -> int:
    T, default_x0, make_domain = _EXAMPLES[args.example]
    cfg = fmetric.canonical_config(make_domain())
    psi = functions.PsiFn.sqrt()
    contraction = fixpoint.verify_contraction(cfg, T, psi, args.samples, seed=args.seed)
    x0 = default_x0 if args.x0 is None else args.x0
    trace = fixpoint.picard_solve(cfg, T, x0, tol=args.tol, max_iter=args.max_iter, psi=psi)
    _write(args.out, trace.to_csv())
    report = {
        "example": args.example,
        "seed": args.seed,
        "contraction": contraction.to_dict(),
        "x0": x0,
        "converged": trace.converged,
        "iterations": trace.iterations,
        "fixed_point": trace.fixed_point,
        "last_iterate": trace.iterates[-1],
        "psi_chain_slack": trace.psi_chain_slack(),
    }
    _emit(report, args)
    return EXIT_OK if (contraction.holds and trace.converged) else EXIT_FAIL


def cmd_satellite(args) -> int:
    try:
        cfg = satellite.BvpConfig(mu=args.mu, grid_size=args.grid, quadrature=args.quadrature,
                                  tol=args.tol, max_iter=args.max_iter, k_bound=args.k_bound,
                                  homogeneous=args.homogeneous)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    w0 = satellite.GridFunction.constant(args.start, cfg.grid_size)
    result = satellite.solve_bvp(cfg, w0)
    _write(args.out, result.solution_csv())
    report = result.to_dict()
    report.update({"mu": cfg.mu, "grid": cfg.grid_size, "quadrature": cfg.quadrature,
                   "homogeneous": cfg.homogeneous, "start": args.start, "tol": cfg.tol})
    _emit(report, args)
    return EXIT_OK if result.converged else EXIT_FAIL


def figure1_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cols = ["panel", "x", "y", "t", "M_Tx_Ty", "psi_M_x_y", "margin"]
    w.writerow(cols)
    for row in rows:
        w.writerow([row["panel"]] + [_fmt(row[c]) for c in cols[1:]])
    return buf.getvalue()


def cmd_figure1(args) -> int:
    if args.grid < 2:
        raise CliError("--grid must be >= 2")
    if args.t <= 0:
        raise CliError("--t must be positive")
    rows = fixpoint.figure1_rows(t_fixed=args.t, xy_range=(args.lo, args.hi), grid=args.grid)
    text = figure1_csv(rows)
    if args.out is None:
        sys.stdout.write(text)
    else:
        _write(args.out, text)
    worst = min(r["margin"] for r in rows)
    report = {"rows": len(rows), "min_margin": worst, "t": args.t}
    if args.out is not None:
        _emit(report, args)
    return EXIT_OK if worst >= 0.0 else EXIT_FAIL


# --- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fuzzyfix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, tol=True):
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--out", default=None, help="output file")
        if tol:
            p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("axioms", help="sample the fuzzy F-metric axioms")
    common(p, tol=False)
    p.add_argument("--metric", choices=("canonical", "corrupted"), default="canonical")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--max-chain-len", type=int, default=6)
    p.add_argument("--lo", type=float, default=-5.0)
    p.add_argument("--hi", type=float, default=5.0)
    p.add_argument("--t-max", type=float, default=10.0)
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("net", help="boundedness and r-epsilon nets of a point set")
    common(p, tol=False)
    p.add_argument("--points", required=True)
    p.add_argument("--candidates", default=None)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--t0", type=float, default=1.0)
    p.add_argument("--budget", type=int, default=None)
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("fixpoint", help="contraction check and Picard iteration on the real line")
    common(p)
    p.add_argument("--example", choices=sorted(_EXAMPLES), default="sixth")
    p.add_argument("--x0", type=float, default=None)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--max-iter", type=int, default=200)
    p.set_defaults(func=cmd_fixpoint)

    p = sub.add_parser("satellite", help="solve the satellite web coupling problem")
    common(p)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--max-iter", type=int, default=200)
    p.add_argument("--quadrature", choices=("simpson", "trapezoid"), default="simpson")
    p.add_argument("--k-bound", type=float, default=3.99)
    p.add_argument("--start", type=float, default=1.0, help="constant initial guess")
    p.add_argument("--homogeneous", action="store_true")
    p.add_argument("--report", default=None, help="also write the JSON report here")
    p.set_defaults(func=cmd_satellite)

    p = sub.add_parser("figure1", help="tabulate M(Tx, Ty, t) against psi(M(x, y, t)) for T(x) = x/6")
    common(p, tol=False)
    p.add_argument("--t", type=float, default=2.0)
    p.add_argument("--grid", type=int, default=21)
    p.add_argument("--lo", type=float, default=-5.0)
    p.add_argument("--hi", type=float, default=5.0)
    p.set_defaults(func=cmd_figure1)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if hasattr(args, "tol") and not 0.0 < args.tol < 1.0:
        print("error: --tol must lie in (0, 1)", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_exit() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
