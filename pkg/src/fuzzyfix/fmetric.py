"""Fuzzy F-metric spaces: the canonical metric, sampled FM1-FM4 checks and
finite-trace convergence diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

import numpy as np

from .functions import EQ_TOL, FClassFn, TNorm
from .reports import FAIL, PASS, AxiomCheck, VerificationReport

DEFAULT_T_GRID = (0.5, 1.0, 2.0)


def _log_base(t):
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    return -np.log1p(1.0 / t)


def canonical_metric(x, y, t):
    """(t/(t+1)) ** |x - y|**2, elementwise."""
    d2 = np.square(np.subtract(x, y, dtype=float))
    out = np.exp(d2 * _log_base(t))
    return float(out) if np.ndim(out) == 0 else out


def canonical_gap(x, y, t):
    """1 - canonical_metric(x, y, t) without cancellation."""
    d2 = np.square(np.subtract(x, y, dtype=float))
    out = -np.expm1(d2 * _log_base(t))
    return float(out) if np.ndim(out) == 0 else out


def sup_distance(x, y) -> float:
    return float(np.max(np.abs(np.subtract(x, y, dtype=float))))


def sup_metric(x, y, t) -> float:
    """Canonical metric on functions sampled on a common grid, with the grid
    maximum standing in for the sup-norm."""
    d = sup_distance(x, y)
    return float(np.exp(d * d * _log_base(t)))


def sup_gap(x, y, t) -> float:
    d = sup_distance(x, y)
    return float(-np.expm1(d * d * _log_base(t)))


def abs_distance(x, y):
    return np.abs(np.subtract(x, y, dtype=float))


# --- carrier sets -------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    lo: float = -5.0
    hi: float = 5.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, n)

    def describe(self) -> str:
        return f"interval[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class FiniteSet:
    points: tuple

    def __post_init__(self):
        if len(self.points) == 0:
            raise ValueError("finite carrier set must be nonempty")

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        idx = rng.integers(0, len(self.points), n)
        return np.asarray(self.points, dtype=float)[idx]

    def describe(self) -> str:
        return f"finite[{len(self.points)} points]"


@dataclass(frozen=True)
class FunctionGrid:
    """Random functions on a uniform grid of [0, 1] with values in [lo, hi].

    Draws are smooth-ish: a random cubic plus a small random perturbation,
    so sup distances span several scales.
    """

    grid_size: int = 21
    lo: float = -1.0
    hi: float = 1.0

    def sample(self, rng: np.random.Generator, n: int) -> list[np.ndarray]:
        s = np.linspace(0.0, 1.0, self.grid_size)
        out = []
        for _ in range(n):
            coef = rng.uniform(-1.0, 1.0, 4)
            base = np.polyval(coef, s) + 0.1 * rng.uniform(-1.0, 1.0, self.grid_size)
            scale = rng.uniform(0.0, 1.0)
            out.append(np.clip(scale * base, self.lo, self.hi))
        return out

    def describe(self) -> str:
        return f"functions[{self.grid_size} nodes]"


@dataclass(frozen=True)
class FMetricConfig:
    """The data (M, f, alpha, star, X) defining a fuzzy F-metric space.

    ``gap`` computes 1 - M without cancellation and ``distance`` is the
    plain distance the metric is built from; both are optional.
    """

    metric: Callable[[Any, Any, float], float] = field(compare=False)
    f: FClassFn
    alpha: float
    star: TNorm
    domain: Any = field(default_factory=Interval)
    gap_fn: Callable[[Any, Any, float], float] | None = field(default=None, compare=False)
    distance: Callable[[Any, Any], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")

    def __call__(self, x, y, t):
        return self.metric(x, y, t)

    def gap(self, x, y, t):
        if self.gap_fn is not None:
            return self.gap_fn(x, y, t)
        return 1.0 - self.metric(x, y, t)


def canonical_config(domain=None, f: FClassFn | None = None, alpha: float = 0.5,
                     star: TNorm | None = None) -> FMetricConfig:
    """Canonical metric on the reals with f(x) = x**2, alpha = 1/2, product norm."""
    return FMetricConfig(
        metric=canonical_metric,
        f=f or FClassFn.power(2),
        alpha=alpha,
        star=star or TNorm.product(),
        domain=domain if domain is not None else Interval(-5.0, 5.0),
        gap_fn=canonical_gap,
        distance=lambda x, y: float(abs(x - y)),
    )


def function_space_config(grid_size: int = 201, domain=None) -> FMetricConfig:
    """Sup-norm version of the canonical metric on grid functions over [0, 1]."""
    return FMetricConfig(
        metric=sup_metric,
        f=FClassFn.power(2),
        alpha=0.5,
        star=TNorm.product(),
        domain=domain if domain is not None else FunctionGrid(grid_size),
        gap_fn=sup_gap,
        distance=sup_distance,
    )


@dataclass(frozen=True)
class Chain:
    points: tuple
    times: tuple

    def __post_init__(self):
        if len(self.points) < 2:
            raise ValueError("a chain needs at least two points")
        if len(self.times) != len(self.points) - 1:
            raise ValueError("a chain of N points needs N - 1 times")
        if any(t <= 0 for t in self.times):
            raise ValueError("chain times must be positive")

    @property
    def total_time(self) -> float:
        return float(sum(self.times))


def fm4_slack(cfg: FMetricConfig, chain: Chain) -> float | None:
    """(f(M(x, y, T)))**alpha - f(M(u1,u2,t1) * ... * M(u_{N-1},u_N,t_{N-1})).

    Returns None when M(x, y, T) = 1, where the chain axiom imposes nothing.
    """
    x, y = chain.points[0], chain.points[-1]
    total = chain.total_time
    m = float(cfg.metric(x, y, total))
    if m >= 1.0:
        return None
    links = [float(cfg.metric(chain.points[i], chain.points[i + 1], chain.times[i]))
             for i in range(len(chain.times))]
    rhs = float(cfg.f(cfg.star.fold(links)))
    return float(cfg.f(m)) ** cfg.alpha - rhs


def _witness_point(p):
    return p.tolist() if isinstance(p, np.ndarray) else float(p)


def verify_axioms(
    cfg: FMetricConfig,
    pair_samples: int = 10_000,
    chain_samples: int = 10_000,
    max_chain_len: int = 6,
    seed: int = 0,
    t_range: tuple[float, float] = (0.0, 10.0),
    tol: float = EQ_TOL,
) -> VerificationReport:
    """Sample FM1-FM4 for ``cfg``.

    Pair times and chain totals are uniform on ``t_range`` (open at the left
    end); chain times split the total by a flat Dirichlet draw.
    """
    if max_chain_len < 2:
        raise ValueError("max_chain_len must be >= 2")
    rng = np.random.default_rng(seed)
    lo_t, hi_t = t_range

    def draw_t(n):
        t = rng.uniform(lo_t, hi_t, n)
        return np.where(t <= 0.0, hi_t, t)

    xs = cfg.domain.sample(rng, pair_samples)
    ys = cfg.domain.sample(rng, pair_samples)
    ts = draw_t(pair_samples)
    checks = []

    # FM1: values in (0, 1]
    m_xy = [float(cfg.metric(x, y, t)) for x, y, t in zip(xs, ys, ts)]
    worst, witness = math.inf, None
    for x, y, t, m in zip(xs, ys, ts, m_xy):
        slack = min(m, 1.0 - m)
        if slack < worst:
            worst = slack
            if m <= 0.0 or m > 1.0:
                witness = {"x": _witness_point(x), "y": _witness_point(y), "t": float(t), "M": m}
    ok = all(0.0 < m <= 1.0 for m in m_xy)
    checks.append(AxiomCheck("FM1", PASS if ok else FAIL, worst, None if ok else witness, pair_samples))

    # FM2: M(x, x, t) = 1, and M(x, y, t) < 1 for some probe t when x != y
    worst, witness = 0.0, None
    for x, t in zip(xs, ts):
        dev = abs(float(cfg.metric(x, x, t)) - 1.0)
        if dev > worst:
            worst, witness = dev, {"x": _witness_point(x), "t": float(t)}
    probes = (float(lo_t) if lo_t > 0 else 1e-3, 1.0, float(hi_t))
    distinct_bad = None
    for x, y in zip(xs, ys):
        if np.array_equal(x, y):
            continue
        if all(float(cfg.metric(x, y, t)) >= 1.0 for t in probes):
            distinct_bad = {"x": _witness_point(x), "y": _witness_point(y), "t": list(probes)}
            break
    ok = worst <= tol and distinct_bad is None
    checks.append(AxiomCheck("FM2", PASS if ok else FAIL, 0.0 - worst,
                             None if ok else (witness if worst > tol else distinct_bad), pair_samples))

    # FM3: symmetry
    worst, witness = 0.0, None
    for x, y, t, m in zip(xs, ys, ts, m_xy):
        dev = abs(float(cfg.metric(y, x, t)) - m)
        if dev > worst:
            worst, witness = dev, {"x": _witness_point(x), "y": _witness_point(y), "t": float(t)}
    ok = worst <= tol
    checks.append(AxiomCheck("FM3", PASS if ok else FAIL, 0.0 - worst, None if ok else witness, pair_samples))

    # FM4: chain inequality
    worst, witness, violations, constrained = math.inf, None, 0, 0
    for _ in range(chain_samples):
        n_pts = int(rng.integers(2, max_chain_len + 1))
        pts = cfg.domain.sample(rng, n_pts)
        total = float(draw_t(1)[0])
        times = total * rng.dirichlet(np.ones(n_pts - 1))
        times = np.maximum(times, np.finfo(float).tiny)
        chain = Chain(tuple(pts), tuple(float(t) for t in times))
        slack = fm4_slack(cfg, chain)
        if slack is None:
            continue
        constrained += 1
        if slack < -tol:
            violations += 1
        if slack < worst:
            worst = slack
            if slack < -tol:
                witness = {"points": [_witness_point(p) for p in pts],
                           "times": [float(t) for t in times], "slack": slack}
    ok = violations == 0
    checks.append(AxiomCheck(
        "FM4", PASS if ok else FAIL, worst if constrained else 0.0,
        None if ok else witness, chain_samples,
        note=f"{constrained} constrained chains, {violations} with slack < -{tol:g}"))

    return VerificationReport(f"fmetric:{cfg.domain.describe()}", tuple(checks))


# --- convergence diagnostics ----------------------------------------------------

@dataclass(frozen=True)
class ConvergenceReport:
    """Per-t tail indices (1-based; None when not reached in the trace)."""

    tail_index: dict
    tol: float

    @property
    def converged(self) -> bool:
        return all(v is not None for v in self.tail_index.values())

    @property
    def index(self) -> int | None:
        """Tail index valid for every grid t, or None."""
        if not self.converged:
            return None
        return max(self.tail_index.values())

    def to_dict(self) -> dict:
        return {"converged": self.converged, "tol": self.tol,
                "tail_index": {repr(float(k)): v for k, v in self.tail_index.items()}}


def _tail_start(bad: Sequence[bool]) -> int | None:
    """1-based index after which no entry of ``bad`` is True; None if the last is."""
    if len(bad) == 0 or bad[-1]:
        return None
    last_bad = max((i for i, b in enumerate(bad) if b), default=-1)
    return last_bad + 2


def convergence_diagnostic(cfg: FMetricConfig, trace: Sequence, limit,
                           t_grid: Sequence[float] = DEFAULT_T_GRID,
                           tol: float = 1e-6) -> ConvergenceReport:
    """For each t, the first index from which 1 - M(x_n, limit, t) < tol holds
    through the end of the trace."""
    if len(trace) == 0:
        raise ValueError("trace must be nonempty")
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    out = {}
    for t in t_grid:
        bad = [float(cfg.gap(x, limit, t)) >= tol for x in trace]
        out[float(t)] = _tail_start(bad)
    return ConvergenceReport(out, tol)


def _gaps_to(cfg: FMetricConfig, x, others: Sequence, t) -> np.ndarray:
    if np.ndim(x) == 0:
        try:
            g = np.asarray(cfg.gap(x, np.asarray(others, dtype=float), t), dtype=float)
            if g.shape == (len(others),):
                return g
        except (TypeError, ValueError):
            pass
    return np.asarray([float(cfg.gap(x, y, t)) for y in others])


def cauchy_diagnostic(cfg: FMetricConfig, trace: Sequence,
                      t_grid: Sequence[float] = DEFAULT_T_GRID,
                      tol: float = 1e-6) -> ConvergenceReport:
    """For each t, the first index N with 1 - M(x_n, x_m, t) < tol for all
    n, m >= N in the trace. A single-element tail is vacuously Cauchy, so a
    trace whose last two entries disagree reports None."""
    if len(trace) == 0:
        raise ValueError("trace must be nonempty")
    if not 0.0 < tol < 1.0:
        raise ValueError("tol must lie in (0, 1)")
    n = len(trace)
    out = {}
    for t in t_grid:
        # worst[i] = max_{m > i} gap(x_i, x_m); tail from N is Cauchy iff
        # worst[i] < tol for every i >= N.
        worst = [0.0] * n
        for i in range(n - 1):
            worst[i] = float(np.max(_gaps_to(cfg, trace[i], trace[i + 1:], t)))
        bad = [w >= tol for w in worst]
        if n >= 2 and bad[-2]:
            out[float(t)] = None
        else:
            out[float(t)] = _tail_start(bad)
    return ConvergenceReport(out, tol)
