"""Boundedness certificates and r-epsilon nets for finite point sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .fmetric import FMetricConfig

MAX_BRUTE_FORCE = 20


@dataclass(frozen=True)
class FiniteSubset:
    points: tuple
    cfg: FMetricConfig = field(compare=False)

    def __post_init__(self):
        if len(self.points) == 0:
            raise ValueError("a finite subset must be nonempty")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)


@dataclass(frozen=True)
class Boundedness:
    """``beta`` is the least pairwise nearness at ``t0``; every pair satisfies
    M > ``threshold`` = 1 - r. The threshold is kept separately because
    1 - r rounds away for beta below machine epsilon."""

    beta: float
    r: float
    threshold: float
    t0: float
    pair: tuple | None = None

    def certifies(self, cfg: FMetricConfig, points: Sequence) -> bool:
        return all(float(cfg.metric(a, b, self.t0)) > self.threshold
                   for a, b in itertools.combinations(points, 2))


def boundedness_witness(A: FiniteSubset, t0: float) -> Boundedness:
    if t0 <= 0:
        raise ValueError("t0 must be positive")
    cfg = A.cfg
    beta, pair = 1.0, None
    for i, j in itertools.combinations(range(len(A)), 2):
        m = float(cfg.metric(A.points[i], A.points[j], t0))
        if m < beta:
            beta, pair = m, (i, j)
    if beta < 1.0:
        threshold = beta / 2.0
        r = 1.0 - threshold
    else:
        threshold, r = 0.5, 0.5
    return Boundedness(beta, r, threshold, float(t0), pair)


@dataclass(frozen=True)
class NetCertificate:
    net_points: tuple
    r: float
    epsilon: float
    assignment: dict  # set index -> net index

    ok = True

    @property
    def size(self) -> int:
        return len(self.net_points)


@dataclass(frozen=True)
class Uncovered:
    """Failure witness: the set point with index ``index`` has no net point
    within nearness 1 - r at scale epsilon."""

    index: int
    point: object
    best_nearness: float

    ok = False


def _check_r_eps(r: float, epsilon: float) -> None:
    if not 0.0 < r < 1.0:
        raise ValueError("r must lie in (0, 1)")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")


def _nearness(cfg: FMetricConfig, points: Sequence, net: Sequence, epsilon: float) -> np.ndarray:
    return np.array([[float(cfg.metric(a, b, epsilon)) for b in net] for a in points]).reshape(
        len(points), len(net))


def is_net(A: FiniteSubset, B: Sequence, r: float, epsilon: float) -> NetCertificate | Uncovered:
    """Check that every point of A has some b in B with M(a, b, epsilon) > 1 - r.

    Each point is assigned to its nearest covering net point; the first
    uncovered point (in A's order) is returned on failure.
    """
    _check_r_eps(r, epsilon)
    B = tuple(B)
    level = 1.0 - r
    if not B:
        return Uncovered(0, A.points[0], 0.0)
    near = _nearness(A.cfg, A.points, B, epsilon)
    assignment = {}
    for i, row in enumerate(near):
        j = int(np.argmax(row))
        if not row[j] > level:
            return Uncovered(i, A.points[i], float(row[j]))
        assignment[i] = j
    return NetCertificate(B, float(r), float(epsilon), assignment)


@dataclass(frozen=True)
class GreedyResult:
    points: tuple
    complete: bool
    certificate: NetCertificate | None

    @property
    def size(self) -> int:
        return len(self.points)


def greedy_separated_points(A: FiniteSubset, r: float, epsilon: float, start=None,
                            budget: int | None = None) -> GreedyResult:
    """Grow a family of points until it r-epsilon-covers A.

    Starts from ``start`` (default: the first point of A) and repeatedly
    appends the first point of A not yet covered. Points taken from A are
    pairwise separated: M(x_i, x_j, epsilon) <= 1 - r. With a ``budget`` the
    search may stop early, returning the separated family found so far.
    """
    _check_r_eps(r, epsilon)
    cfg = A.cfg
    level = 1.0 - r
    chosen = [A.points[0] if start is None else start]
    covered = np.array([float(cfg.metric(a, chosen[0], epsilon)) > level for a in A.points])
    while not covered.all():
        if budget is not None and len(chosen) >= budget:
            return GreedyResult(tuple(chosen), False, None)
        i = int(np.argmin(covered))
        p = A.points[i]
        chosen.append(p)
        covered |= np.array([float(cfg.metric(a, p, epsilon)) > level for a in A.points])
    cert = is_net(A, chosen, r, epsilon)
    return GreedyResult(tuple(chosen), True, cert if cert.ok else None)


def separation_slack(cfg: FMetricConfig, points: Sequence, r: float, epsilon: float) -> float:
    """min over distinct pairs of (1 - r) - M(x_i, x_j, epsilon); >= 0 means
    the family is r-epsilon separated."""
    level = 1.0 - r
    slack = np.inf
    for a, b in itertools.combinations(points, 2):
        slack = min(slack, level - float(cfg.metric(a, b, epsilon)))
    return float(slack)


def min_net_bruteforce(A: FiniteSubset, candidates: Sequence, r: float,
                       epsilon: float) -> tuple | None:
    """Smallest subset of ``candidates`` that is an r-epsilon net for A.

    Exhaustive search by increasing size; ties resolve to the
    lexicographically first index combination. Returns None when even the
    full candidate pool leaves a point uncovered.
    """
    _check_r_eps(r, epsilon)
    candidates = tuple(candidates)
    if len(candidates) > MAX_BRUTE_FORCE:
        raise ValueError(f"brute force limited to {MAX_BRUTE_FORCE} candidates, got {len(candidates)}")
    if not candidates:
        return None
    covers = _nearness(A.cfg, A.points, candidates, epsilon) > 1.0 - r
    full = (1 << len(A)) - 1
    masks = [sum(1 << i for i in np.flatnonzero(covers[:, j])) for j in range(len(candidates))]
    for size in range(1, len(candidates) + 1):
        for combo in itertools.combinations(range(len(candidates)), size):
            acc = 0
            for j in combo:
                acc |= masks[j]
            if acc == full:
                return tuple(candidates[j] for j in combo)
    return None


@dataclass(frozen=True)
class PairObstruction:
    """For each distinct pair, (f(M(x_i, x_j, 2 epsilon)))**alpha against the
    level f((1 - r) * (1 - r)) that any common cover would force."""

    pairs: tuple
    values: tuple
    bound: float

    @property
    def blocked(self) -> tuple:
        return tuple(p for p, v in zip(self.pairs, self.values) if v < self.bound)

    @property
    def all_blocked(self) -> bool:
        return all(v < self.bound for v in self.values)


def common_cover_obstruction(A: FiniteSubset, r: float, epsilon: float) -> PairObstruction:
    """Pairs of A that no single point can r-epsilon-cover simultaneously.

    If y covered both x_i and x_j, the three-point chain x_i, y, x_j with
    times epsilon, epsilon would give (f(M(x_i, x_j, 2 eps)))**alpha >=
    f((1 - r) * (1 - r)). A pair whose left side falls below that level is
    therefore blocked, and a set whose pairs are all blocked needs at least
    |A| net points from anywhere in the carrier. This relies on the
    three-point chain axiom holding for ``A.cfg``.
    """
    _check_r_eps(r, epsilon)
    cfg = A.cfg
    level = 1.0 - r
    bound = float(cfg.f(cfg.star(level, level)))
    pairs, values = [], []
    for i, j in itertools.combinations(range(len(A)), 2):
        m = float(cfg.metric(A.points[i], A.points[j], 2.0 * epsilon))
        pairs.append((i, j))
        values.append(float(cfg.f(m)) ** cfg.alpha)
    return PairObstruction(tuple(pairs), tuple(values), bound)
