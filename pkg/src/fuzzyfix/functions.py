"""t-norms, F-class functions and Psi-class comparison functions.

Each family is a small immutable wrapper around an evaluator. The
``verify_*`` helpers check the defining axioms by sampling; they are
probabilistic checks, not proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Callable, Iterable, Sequence

import numpy as np

from .reports import FAIL, INCONCLUSIVE, PASS, AxiomCheck, VerificationReport

EQ_TOL = 1e-12
DEFAULT_SAMPLES = 10_000


@dataclass(frozen=True)
class TNorm:
    kind: str
    eval: Callable[[float, float], float] = field(compare=False)

    def __call__(self, a, b):
        return self.eval(a, b)

    def fold(self, values: Iterable[float]) -> float:
        """Left fold of the norm over ``values`` (1 for an empty sequence)."""
        return reduce(self.eval, values, 1.0)

    @classmethod
    def minimum(cls) -> "TNorm":
        return cls("minimum", lambda a, b: np.minimum(a, b))

    @classmethod
    def product(cls) -> "TNorm":
        return cls("product", lambda a, b: a * b)

    @classmethod
    def lukasiewicz(cls) -> "TNorm":
        return cls("lukasiewicz", lambda a, b: np.maximum(0.0, a + b - 1.0))

    @classmethod
    def custom(cls, fn: Callable[[float, float], float]) -> "TNorm":
        return cls("custom", fn)

    @classmethod
    def by_name(cls, name: str) -> "TNorm":
        try:
            return {"minimum": cls.minimum, "min": cls.minimum,
                    "product": cls.product, "lukasiewicz": cls.lukasiewicz}[name]()
        except KeyError:
            raise ValueError(f"unknown t-norm {name!r}") from None


@dataclass(frozen=True)
class FClassFn:
    kind: str
    eval: Callable[[float], float] = field(compare=False)
    param: float | None = None

    def __call__(self, x):
        return self.eval(x)

    @classmethod
    def power(cls, n: int) -> "FClassFn":
        if int(n) != n or n < 1:
            raise ValueError("power F-class function needs a positive integer exponent")
        n = int(n)
        return cls("power", lambda x: np.power(x, n), float(n))

    @classmethod
    def sqrt(cls) -> "FClassFn":
        return cls("sqrt", np.sqrt)

    @classmethod
    def custom(cls, fn: Callable[[float], float]) -> "FClassFn":
        return cls("custom", fn)


@dataclass(frozen=True)
class PsiFn:
    kind: str
    eval: Callable[[float], float] = field(compare=False)
    param: float | None = None

    def __call__(self, t):
        return self.eval(t)

    @classmethod
    def sqrt(cls) -> "PsiFn":
        return cls("sqrt", np.sqrt)

    @classmethod
    def rational(cls, k: float) -> "PsiFn":
        """psi(t) = t / (t + k(1 - t)) for k in (0, 1)."""
        if not 0.0 < k < 1.0:
            raise ValueError("rational psi needs k in (0, 1)")
        return cls("rational", lambda t: t / (t + k * (1.0 - t)), float(k))

    @classmethod
    def power(cls, exponent: float) -> "PsiFn":
        """psi(t) = t**exponent; ``exponent`` plays the role of 1/beta in (0, 1)."""
        if not 0.0 < exponent < 1.0:
            raise ValueError("power psi needs an exponent in (0, 1)")
        return cls("power", lambda t: np.power(t, exponent), float(exponent))

    @classmethod
    def custom(cls, fn: Callable[[float], float]) -> "PsiFn":
        return cls("custom", fn)


def _abs_dev(x, y) -> float:
    return abs(float(x) - float(y))


def verify_tnorm(norm: TNorm, samples: int = DEFAULT_SAMPLES, seed: int = 0) -> VerificationReport:
    """Check identity, commutativity, associativity and monotonicity of ``norm``.

    The corner values {0, 1/2, 1} are always included ahead of the random
    draws, so the report is deterministic for a fixed seed.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    corners = np.array([0.0, 0.5, 1.0])
    a = np.concatenate([corners, rng.random(samples)])
    b = np.concatenate([corners[::-1], rng.random(samples)])
    c = np.concatenate([corners, rng.random(samples)])
    d = np.concatenate([corners, rng.random(samples)])
    ev = norm.eval

    checks = []

    worst, witness = 0.0, None
    for x in a:
        dev = _abs_dev(ev(x, 1.0), x)
        if dev > worst:
            worst, witness = dev, (float(x), 1.0, float(ev(x, 1.0)))
    checks.append(_equality_check("identity", worst, witness, len(a)))

    worst, witness = 0.0, None
    for x, y in zip(a, b):
        dev = _abs_dev(ev(x, y), ev(y, x))
        if dev > worst:
            worst, witness = dev, (float(x), float(y), None)
    checks.append(_equality_check("commutativity", worst, witness, len(a)))

    worst, witness = 0.0, None
    for x, y, z in zip(a, b, c):
        dev = _abs_dev(ev(x, ev(y, z)), ev(ev(x, y), z))
        if dev > worst:
            worst, witness = dev, (float(x), float(y), float(z))
    checks.append(_equality_check("associativity", worst, witness, len(a)))

    worst, witness = math.inf, None
    for x, y, z, w in zip(a, b, c, d):
        lo1, hi1 = min(x, y), max(x, y)
        lo2, hi2 = min(z, w), max(z, w)
        slack = float(ev(hi1, hi2)) - float(ev(lo1, lo2))
        if slack < worst:
            worst = slack
            if slack < -EQ_TOL:
                witness = (float(lo1), float(hi1), float(lo2), float(hi2))
    status = PASS if worst >= -EQ_TOL else FAIL
    checks.append(AxiomCheck("monotonicity", status, worst, witness, len(a)))

    return VerificationReport(f"tnorm:{norm.kind}", tuple(checks))


def _equality_check(name: str, worst_dev: float, witness, n: int) -> AxiomCheck:
    ok = worst_dev <= EQ_TOL
    return AxiomCheck(name, PASS if ok else FAIL, 0.0 - worst_dev, None if ok else witness, n)


def _sequence_converges(values: np.ndarray, tol: float) -> bool:
    return abs(1.0 - float(values[-1])) <= tol


def verify_fclass(
    f: FClassFn,
    grid: int = DEFAULT_SAMPLES,
    sequences: Sequence[Sequence[float]] = (),
    seq_tol: float = 1e-6,
) -> VerificationReport:
    """Check the F-class conditions of ``f`` on finite surrogates.

    * strict increase on the uniform grid i/grid, i = 0..grid-1 (margin > 0);
    * f(1) = 1 within 1e-12;
    * F2 on t_n = 1 - 1/n, n = 1..grid: the gaps 1 - f(t_n) must be
      nonincreasing and their Richardson extrapolation (model L + c/n) must
      be at most half the last gap. If the last gap is still >= 1/2 the
      family never got close to 1 and the check is inconclusive;
    * F2 on each user sequence: the tail is within ``seq_tol`` of 1 iff the
      tail of f along it is.
    """
    if grid < 2:
        raise ValueError("grid must be >= 2")
    checks = []
    xs = np.arange(grid) / grid
    ys = np.asarray([float(f(x)) for x in xs])

    in_range = (ys >= 0.0) & (ys <= 1.0)
    bad = np.flatnonzero(~in_range)
    checks.append(AxiomCheck(
        "range", PASS if bad.size == 0 else FAIL,
        float(min(ys.min(), 1.0 - ys.max())),
        None if bad.size == 0 else (float(xs[bad[0]]), float(ys[bad[0]])), grid))

    steps = np.diff(ys)
    worst = float(steps.min())
    idx = int(np.argmin(steps))
    checks.append(AxiomCheck(
        "strictly_increasing", PASS if worst > 0.0 else FAIL, worst,
        None if worst > 0.0 else (float(xs[idx]), float(xs[idx + 1])), grid - 1))

    f1 = float(f(1.0))
    dev = abs(f1 - 1.0)
    checks.append(AxiomCheck("f(1)=1", PASS if dev <= EQ_TOL else FAIL, -dev,
                             None if dev <= EQ_TOL else (1.0, f1), 1))

    n = np.arange(1, grid + 1)
    tn = 1.0 - 1.0 / n
    gaps = 1.0 - np.asarray([float(f(t)) for t in tn])
    rises = np.diff(gaps)
    extrapolated = 2.0 * gaps[-1] - gaps[grid // 2 - 1]
    if np.any(rises > EQ_TOL):
        j = int(np.argmax(rises))
        checks.append(AxiomCheck("F2:1-1/n", FAIL, -float(rises.max()),
                                 (float(tn[j]), float(tn[j + 1])), grid))
    elif gaps[-1] >= 0.5:
        checks.append(AxiomCheck("F2:1-1/n", INCONCLUSIVE, float(gaps[-1]), None, grid,
                                 note="family did not approach 1 in f-values"))
    else:
        ok = extrapolated <= 0.5 * gaps[-1]
        checks.append(AxiomCheck("F2:1-1/n", PASS if ok else FAIL,
                                 float(0.5 * gaps[-1] - extrapolated),
                                 None if ok else {"extrapolated_gap": float(extrapolated)}, grid))

    for i, seq in enumerate(sequences):
        t = np.asarray(seq, dtype=float)
        ft = np.asarray([float(f(v)) for v in t])
        lhs, rhs = _sequence_converges(t, seq_tol), _sequence_converges(ft, seq_tol)
        checks.append(AxiomCheck(f"F2:sequence[{i}]", PASS if lhs == rhs else FAIL,
                                 0.0 if lhs == rhs else -1.0,
                                 None if lhs == rhs else {"t_tail": float(t[-1]), "f_tail": float(ft[-1])},
                                 len(t)))

    return VerificationReport(f"fclass:{f.kind}", tuple(checks))


def verify_psi(psi: PsiFn, grid: int = DEFAULT_SAMPLES) -> VerificationReport:
    """Check nondecrease, psi(t) > t on the interior, and psi(1) = 1."""
    if grid < 2:
        raise ValueError("grid must be >= 2")
    ts = np.arange(grid + 1) / grid
    vals = np.asarray([float(psi(t)) for t in ts])
    checks = []

    in_range = (vals >= 0.0) & (vals <= 1.0)
    bad = np.flatnonzero(~in_range)
    checks.append(AxiomCheck(
        "range", PASS if bad.size == 0 else FAIL,
        float(min(vals.min(), 1.0 - vals.max())),
        None if bad.size == 0 else (float(ts[bad[0]]), float(vals[bad[0]])), grid + 1))

    steps = np.diff(vals)
    worst = float(steps.min())
    ok = worst >= -EQ_TOL
    j = int(np.argmin(steps))
    checks.append(AxiomCheck("nondecreasing", PASS if ok else FAIL, worst,
                             None if ok else (float(ts[j]), float(ts[j + 1])), grid))

    margin = vals[1:-1] - ts[1:-1]
    worst = float(margin.min())
    ok = worst > 0.0
    j = int(np.argmin(margin)) + 1
    checks.append(AxiomCheck("psi(t)>t", PASS if ok else FAIL, worst,
                             None if ok else (float(ts[j]), float(vals[j])), grid - 1))

    dev = abs(vals[-1] - 1.0)
    checks.append(AxiomCheck("psi(1)=1", PASS if dev <= EQ_TOL else FAIL, -float(dev),
                             None if dev <= EQ_TOL else (1.0, float(vals[-1])), 1))
    return VerificationReport(f"psi:{psi.kind}", tuple(checks))


def psi_iterate(psi: PsiFn, t0: float, n: int) -> float:
    """Return the n-fold composition psi^n(t0)."""
    if not 0.0 < t0 < 1.0:
        raise ValueError(f"t0 must lie in (0, 1), got {t0}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    t = float(t0)
    for _ in range(n):
        nxt = float(psi(t))
        if nxt == t:
            break
        t = nxt
    return t


def psi_iterations_to(psi: PsiFn, t0: float, level: float, max_iter: int = 10**6) -> int | None:
    """Smallest n <= max_iter with psi^n(t0) >= level, or None."""
    if not 0.0 < t0 < 1.0:
        raise ValueError(f"t0 must lie in (0, 1), got {t0}")
    t = float(t0)
    for n in range(max_iter + 1):
        if t >= level:
            return n
        t = float(psi(t))
    return None
