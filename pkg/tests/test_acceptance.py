"""Acceptance criteria, one test per criterion.

Each test records a PASS/FAIL line; the lines are printed in the terminal
summary of every pytest run that includes this module.
"""

import filecmp
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from fuzzyfix.coverings import FiniteSubset, min_net_bruteforce
from fuzzyfix.fixpoint import figure1_rows, picard_solve, sixth, tenfold, verify_contraction
from fuzzyfix.fmetric import FiniteSet, canonical_config, canonical_gap, verify_axioms
from fuzzyfix.functions import PsiFn, psi_iterate, psi_iterations_to
from fuzzyfix.satellite import (BvpConfig, GridFunction, apply_operator, green_quadrature,
                                green_row_integral, solve_bvp)


RESULTS: list[str] = []


def report(label, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {label}: {detail}"
    RESULTS.append(line)
    print("\n" + line)
    assert ok, detail


def test_criterion_1_axiom_suite():
    start = time.perf_counter()
    rep = verify_axioms(canonical_config(), pair_samples=10_000, chain_samples=10_000,
                        max_chain_len=6, seed=0)
    elapsed = time.perf_counter() - start
    fm4 = rep.check("FM4")
    ok = rep.passed and fm4.worst_slack >= -1e-12 and elapsed < 10
    report("1 axiom suite", ok,
           f"FM1-FM4 {[c.status for c in rep.checks]}, worst FM4 slack {fm4.worst_slack:.3e}, "
           f"{elapsed:.2f}s")


def test_criterion_2_psi_class():
    psis = [PsiFn.sqrt()] + [PsiFn.rational(k) for k in (0.1, 0.5, 0.9)]
    counts = []
    for psi in psis:
        for t0 in np.arange(1, 10) / 10:
            n = psi_iterations_to(psi, float(t0), 1 - 1e-6, max_iter=10**6)
            reached = n is not None and psi_iterate(psi, float(t0), n) >= 1 - 1e-6
            counts.append(n if reached else None)
    ok = all(n is not None for n in counts)
    report("2 psi-class", ok, f"{len(counts)} (psi, t0) cases, max iterations to 1 - 1e-6: "
           f"{max(n for n in counts if n is not None)}")


def test_criterion_3_sixth():
    start = time.perf_counter()
    cfg = canonical_config()
    psi = PsiFn.sqrt()
    con = verify_contraction(cfg, sixth, psi, samples=10**5, seed=0)
    tr = picard_solve(cfg, sixth, 5.0, t_grid=(0.5, 1.0, 2.0), psi=psi)
    elapsed = time.perf_counter() - start
    slack = tr.psi_chain_slack()
    ok = (con.holds and con.min_margin >= 0 and tr.converged and abs(tr.fixed_point) < 1e-8
          and slack >= -1e-12 and elapsed < 1)
    report("3 T(x)=x/6", ok,
           f"min_margin {con.min_margin:.3e}, fixed point {tr.fixed_point:.3e} after "
           f"{tr.iterations} steps, psi-chain slack {slack:.3e}, {elapsed:.2f}s")


def test_criterion_4_tenfold():
    cfg = canonical_config(FiniteSet(tuple(float(v) for v in range(0, 101, 2))))
    con = verify_contraction(cfg, tenfold, PsiFn.sqrt(), samples=10**3, seed=0)
    fixed = all(canonical_gap(0.0, tenfold(0.0), t) == 0.0 for t in (0.5, 1.0, 2.0))
    report("4 T(x)=10x", (not con.holds) and fixed,
           f"witness {con.witness}, 1 - M(0, T0, t) = 0: {fixed}")


def test_criterion_5_total_boundedness_example():
    eps = math.sqrt(2) / 3
    r = 1 - 1 / math.sqrt(2)
    A = FiniteSubset((1.0, 3.0, 5.0, 7.0, 9.0), canonical_config())
    best = min_net_bruteforce(A, A.points, r, eps)
    base = 2 * eps / (1 + 2 * eps)
    exps = [abs(a - b) ** 2 / 2 for i, a in enumerate(A.points) for b in A.points[i + 1:]]
    below = all(0.485281 ** e < 1 / math.sqrt(2) - 1e-6 for e in exps)
    ok = best is not None and len(best) == 5 and abs(base - 0.485281) < 1e-6 and below
    report("5 A={1,3,5,7,9}", ok,
           f"min net size {len(best) if best else None}, base {base:.6f}, pairs below 1/sqrt2: {below}")


def test_criterion_6_green_oracle():
    q = green_quadrature(201, "simpson")
    t = np.linspace(0, 1, 201)
    err = float(np.max(np.abs(q - t * (1 - t) / 2)))
    top = int(np.argmax(q))
    ok = err <= 1e-10 and abs(q[top] - 0.125) <= 1e-10 and t[top] == 0.5
    report("6 Green oracle", ok, f"max error {err:.2e}, sup {float(q[top])!r} at t={t[top]}")


def test_criterion_7_satellite():
    start = time.perf_counter()
    cfg = BvpConfig(mu=1.0, grid_size=201, tol=1e-10)
    one = solve_bvp(cfg, GridFunction.constant(1.0, 201))
    zero = solve_bvp(cfg, GridFunction.constant(0.0, 201))
    w1 = apply_operator(cfg, GridFunction.constant(1.0, 201))
    elapsed = time.perf_counter() - start
    exact1 = 1 - w1.nodes * (1 - w1.nodes) / 2
    first_err = float(np.max(np.abs(w1.values - exact1)))
    agree = float(np.max(np.abs(one.solution.values - zero.solution.values)))
    factor_ok = all(ratio <= k * k / 16 for ratio, k in zip(one.pair_ratios, one.pair_k))
    ok = (one.converged and zero.converged and one.iterations <= 50
          and one.residual_sup <= 5e-3 and abs(w1.at(0.5) - 0.875) <= 1e-9 and first_err <= 1e-10
          and agree <= 1e-8 and factor_ok and elapsed < 5)
    report("7 satellite solve", ok,
           f"{one.iterations} iterations, residual {one.residual_sup:.2e}, "
           f"omega1(0.5)-0.875 = {w1.at(0.5) - 0.875:.1e}, start agreement {agree:.1e}, "
           f"max factor {one.contraction_factor_measured:.4f} vs k^2/16 {one.bound_factor:.4f}, "
           f"{elapsed:.2f}s")


def test_criterion_8_figure1(tmp_path):
    out = tmp_path / "fig.csv"
    code = subprocess.run([sys.executable, "-m", "fuzzyfix", "figure1", "--out", str(out)],
                          capture_output=True).returncode
    lines = out.read_text().splitlines()
    header = lines[0].split(",")
    rows = [dict(zip(header, ln.split(","))) for ln in lines[1:]]
    min_margin = min(float(r["margin"]) for r in rows)
    spot = [r for r in rows if r["panel"] == "b" and float(r["t"]) == 2.0
            and abs(float(r["x"]) - float(r["y"])) == 10]
    spot_err = abs(float(spot[0]["M_Tx_Ty"]) - (2 / 3) ** (25 / 9))
    ok = code == 0 and min_margin >= 0 and len(spot) == 1 and spot_err <= 1e-12
    report("8 figure reproduction", ok,
           f"{len(rows)} rows, min margin {min_margin:.3e}, spot error {spot_err:.1e}")


CLI_RUNS = [
    ["axioms", "--samples", "2000", "--seed", "5"],
    ["fixpoint", "--samples", "2000", "--seed", "5", "--out", "{out}"],
    ["fixpoint", "--example", "tenfold", "--max-iter", "40", "--out", "{out}"],
    ["net", "--points", "{points}", "--epsilon", "0.4714045207910317", "--r", "0.2928932188134524",
     "--out", "{out}"],
    ["satellite", "--out", "{out}"],
    ["figure1", "--out", "{out}"],
]


def test_criterion_9_determinism(tmp_path):
    points = tmp_path / "points.txt"
    points.write_text("1\n3\n5\n7\n9\n")
    same = []
    for i, argv in enumerate(CLI_RUNS):
        outputs = []
        for rep in range(2):
            out = tmp_path / f"out{i}_{rep}"
            args = [a.format(out=out, points=points) for a in argv]
            proc = subprocess.run([sys.executable, "-m", "fuzzyfix", *args], capture_output=True)
            outputs.append((proc.returncode, proc.stdout, out.read_bytes() if out.exists() else b""))
        same.append(outputs[0] == outputs[1])
    report("9 determinism", all(same), f"{sum(same)}/{len(same)} invocations byte-identical")
