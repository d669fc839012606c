"""Fuzzy psi-contractions: sampled verification, Picard iteration with
fuzzy-metric stopping, and a multi-start uniqueness probe."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .fmetric import DEFAULT_T_GRID, FMetricConfig
from .functions import PsiFn


def sixth(x):
    return x / 6.0


def tenfold(x):
    return 10.0 * x


def identity(x):
    return x


@dataclass(frozen=True)
class ContractionReport:
    sampled_pairs: int
    min_margin: float
    witness: dict | None = None
    skipped: int = 0

    @property
    def holds(self) -> bool:
        return self.witness is None

    def to_dict(self) -> dict:
        return {"sampled_pairs": self.sampled_pairs, "skipped": self.skipped,
                "min_margin": self.min_margin, "witness": self.witness, "holds": self.holds}


def _map_points(T: Callable, points) -> list:
    """Apply T to every point, vectorising over scalar points when T allows."""
    if isinstance(points, np.ndarray) and points.ndim == 1:
        try:
            out = np.asarray(T(points), dtype=float)
            if out.shape == points.shape:
                return list(out)
        except (TypeError, ValueError):
            pass
    return [T(p) for p in points]


def _plain(p):
    return p.tolist() if isinstance(p, np.ndarray) else float(p)


def verify_contraction(
    cfg: FMetricConfig,
    T: Callable,
    psi: PsiFn,
    samples: int = 10_000,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
    seed: int = 0,
    domain=None,
) -> ContractionReport:
    """Sample M(Tx, Ty, t) - psi(M(x, y, t)) over pairs with 0 < M(x, y, t) < 1.

    Pairs come from ``domain`` (default ``cfg.domain``); every sampled pair is
    tested at each t in ``t_grid``. The witness is the first violation in
    sampling order.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    domain = domain if domain is not None else cfg.domain
    rng = np.random.default_rng(seed)
    xs = domain.sample(rng, samples)
    ys = domain.sample(rng, samples)
    txs = _map_points(T, xs)
    tys = _map_points(T, ys)

    counted, skipped = 0, 0
    min_margin, witness = np.inf, None
    scalar = isinstance(xs, np.ndarray) and xs.ndim == 1
    for t in t_grid:
        if scalar:
            m = np.asarray(cfg.metric(xs, ys, t), dtype=float)
            mt = np.asarray(cfg.metric(np.asarray(txs), np.asarray(tys), t), dtype=float)
        else:
            m = np.array([float(cfg.metric(x, y, t)) for x, y in zip(xs, ys)])
            mt = np.array([float(cfg.metric(a, b, t)) for a, b in zip(txs, tys)])
        guard = (m > 0.0) & (m < 1.0)
        skipped += int(np.count_nonzero(~guard))
        if not guard.any():
            continue
        margin = mt[guard] - np.asarray(psi(m[guard]), dtype=float)
        counted += int(guard.sum())
        min_margin = min(min_margin, float(margin.min()))
        if witness is None and (margin < 0.0).any():
            k = int(np.flatnonzero(guard)[np.argmax(margin < 0.0)])
            witness = {"x": _plain(xs[k]), "y": _plain(ys[k]), "t": float(t),
                       "M_Tx_Ty": float(mt[k]), "psi_M_x_y": float(psi(m[k])),
                       "margin": float(mt[k] - psi(m[k]))}
    if counted == 0:
        min_margin = 0.0
    return ContractionReport(counted, float(min_margin), witness, skipped)


@dataclass
class IterationTrace:
    """Picard iterates x_0, x_1 = T x_0, ... with per-step diagnostics.

    ``step_gaps[n][k]`` is 1 - M(x_{n+1}, x_n, t_grid[k]); ``step_metric`` holds
    M itself and ``psi_bounds[n][k]`` the lower bound psi^n(M(x_1, x_0, t)).
    """

    t_grid: tuple
    iterates: list = field(default_factory=list)
    step_gaps: list = field(default_factory=list)
    step_metric: list = field(default_factory=list)
    step_sizes: list = field(default_factory=list)
    psi_bounds: list | None = None
    converged: bool = False
    fixed_point: Any = None
    hypothesis_holds: bool = True

    @property
    def iterations(self) -> int:
        return len(self.iterates) - 1

    def psi_chain_slack(self) -> float:
        """min over n, t of M(x_{n+1}, x_n, t) - psi^n(M(x_1, x_0, t))."""
        if not self.psi_bounds:
            raise ValueError("trace was recorded without a psi function")
        diffs = np.asarray(self.step_metric) - np.asarray(self.psi_bounds)
        return float(diffs.min())

    def to_csv(self) -> str:
        """CSV with iter, point (or sup-norm), step size, 1 - M per t, and the
        psi-chain bound per t when available."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        header = ["iter", "point", "step"] + [f"gap_t={_fmt(t)}" for t in self.t_grid]
        if self.psi_bounds:
            header += [f"psi_bound_t={_fmt(t)}" for t in self.t_grid]
        w.writerow(header)
        for n, gaps in enumerate(self.step_gaps):
            x = self.iterates[n]
            point = float(np.max(np.abs(x))) if np.ndim(x) else float(x)
            row = [n, _fmt(point), _fmt(self.step_sizes[n])] + [_fmt(g) for g in gaps]
            if self.psi_bounds:
                row += [_fmt(b) for b in self.psi_bounds[n]]
            w.writerow(row)
        return buf.getvalue()


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _step_size(cfg: FMetricConfig, a, b) -> float:
    if cfg.distance is not None:
        return float(cfg.distance(a, b))
    return float(np.max(np.abs(np.subtract(a, b, dtype=float))))


def picard_solve(
    cfg: FMetricConfig,
    T: Callable,
    x0,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
    tol: float = 1e-10,
    max_iter: int = 200,
    psi: PsiFn | None = None,
    step_tol: float | None = None,
) -> IterationTrace:
    """Iterate x_{n+1} = T(x_n) until the step is small in the fuzzy metric.

    Stops once 1 - M(x_{n+1}, x_n, t) < tol at every t in ``t_grid`` and the
    plain step distance is below ``step_tol`` (default: ``tol``). The second
    test matters because 1 - M scales with the square of the distance. When
    x_0 is already fixed the trace ends after one application of T.
    """
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    step_tol = tol if step_tol is None else step_tol
    t_grid = tuple(float(t) for t in t_grid)
    trace = IterationTrace(t_grid=t_grid, iterates=[x0])
    if psi is not None:
        trace.psi_bounds = []
    first_metric = None

    x = x0
    for n in range(max_iter):
        nxt = T(x)
        trace.iterates.append(nxt)
        metric = [float(cfg.metric(nxt, x, t)) for t in t_grid]
        gaps = [float(cfg.gap(nxt, x, t)) for t in t_grid]
        size = _step_size(cfg, nxt, x)
        trace.step_metric.append(metric)
        trace.step_gaps.append(gaps)
        trace.step_sizes.append(size)
        if n == 0:
            first_metric = metric
            trace.hypothesis_holds = all(0.0 < m < 1.0 for m in metric)
        if psi is not None:
            trace.psi_bounds.append([_psi_power(psi, m, n) for m in first_metric])
        if not np.all(np.isfinite(np.asarray(nxt, dtype=float))):
            break
        if all(g < tol for g in gaps) and size < step_tol:
            trace.converged = True
            trace.fixed_point = nxt
            break
        x = nxt
    return trace


def _psi_power(psi: PsiFn, value: float, n: int) -> float:
    v = float(value)
    for _ in range(n):
        nv = float(psi(v))
        if nv == v:
            break
        v = nv
    return v


@dataclass(frozen=True)
class UniquenessReport:
    traces: tuple
    pairwise_gap: dict  # (i, j) -> max over t of 1 - M(u_i, u_j, t)
    tol: float

    @property
    def converged(self) -> tuple:
        return tuple(tr.converged for tr in self.traces)

    @property
    def agree(self) -> bool:
        return all(self.converged) and all(g < self.tol for g in self.pairwise_gap.values())

    def to_dict(self) -> dict:
        return {"converged": list(self.converged), "agree": self.agree, "tol": self.tol,
                "iterations": [tr.iterations for tr in self.traces],
                "pairwise_gap": {f"{i},{j}": g for (i, j), g in self.pairwise_gap.items()}}


def uniqueness_probe(cfg: FMetricConfig, T: Callable, starts: Sequence,
                     t_grid: Sequence[float] = DEFAULT_T_GRID, tol: float = 1e-10,
                     max_iter: int = 200, step_tol: float | None = None) -> UniquenessReport:
    """Solve from every start and compare the fixed points that were reached."""
    if len(starts) < 2:
        raise ValueError("need at least two starts")
    traces = tuple(picard_solve(cfg, T, s, t_grid, tol, max_iter, step_tol=step_tol)
                   for s in starts)
    gaps = {}
    for i, j in itertools.combinations(range(len(traces)), 2):
        a, b = traces[i], traces[j]
        if a.converged and b.converged:
            gaps[(i, j)] = max(float(cfg.gap(a.fixed_point, b.fixed_point, t)) for t in t_grid)
    return UniquenessReport(traces, gaps, tol)


def figure1_rows(T: Callable = sixth, psi: PsiFn | None = None, metric=None,
                 t_fixed: float = 2.0, xy_range: tuple = (-5.0, 5.0), grid: int = 21,
                 separation: float = 10.0, t_max: float = 10.0, t_steps: int = 50) -> list[dict]:
    """Tabulate M(Tx, Ty, t) against psi(M(x, y, t)).

    Panel "a": all (x, y) on a grid x grid lattice of ``xy_range`` at t = t_fixed.
    Panel "b": the pair (hi, hi - separation) for t = t_max * k / t_steps,
    k = 1..t_steps (the defaults put t = 2 on the grid exactly).
    """
    from .fmetric import canonical_metric

    if grid < 2:
        raise ValueError("grid must be >= 2")
    psi = psi or PsiFn.sqrt()
    metric = metric or canonical_metric
    rows = []
    lo, hi = xy_range
    xs = np.linspace(lo, hi, grid)
    for x in xs:
        for y in xs:
            mt = float(metric(T(x), T(y), t_fixed))
            pm = float(psi(metric(x, y, t_fixed)))
            rows.append({"panel": "a", "x": float(x), "y": float(y), "t": float(t_fixed),
                         "M_Tx_Ty": mt, "psi_M_x_y": pm, "margin": mt - pm})
    x, y = hi, hi - separation
    for k in range(1, t_steps + 1):
        t = t_max * k / t_steps
        mt = float(metric(T(x), T(y), t))
        pm = float(psi(metric(x, y, t)))
        rows.append({"panel": "b", "x": float(x), "y": float(y), "t": float(t),
                     "M_Tx_Ty": mt, "psi_M_x_y": pm, "margin": mt - pm})
    return rows
