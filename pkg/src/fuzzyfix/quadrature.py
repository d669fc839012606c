"""Composite Newton-Cotes weights on uniform sub-grids.

Integrands with a kink at a grid node are handled by integrating each
smooth piece separately, so the weights here cover a single piece.
"""

from __future__ import annotations

import numpy as np

RULES = ("simpson", "trapezoid")


def piece_weights(n_intervals: int, h: float, rule: str = "simpson") -> np.ndarray:
    """Weights for n_intervals + 1 equally spaced nodes of spacing h.

    Simpson with an odd interval count closes the last three intervals with
    the 3/8 rule; a single interval falls back to the trapezoid rule.
    """
    if rule not in RULES:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    n = int(n_intervals)
    w = np.zeros(n + 1)
    if n == 0:
        return w
    if rule == "trapezoid" or n == 1:
        w[:] = h
        w[0] = w[-1] = h / 2.0
        return w
    even = n if n % 2 == 0 else n - 3
    if even > 0:
        w[0:even + 1:2] += 2.0 * h / 3.0
        w[1:even:2] += 4.0 * h / 3.0
        w[0] -= h / 3.0
        w[even] -= h / 3.0
    if even != n:
        w[even:even + 4] += 3.0 * h / 8.0 * np.array([1.0, 3.0, 3.0, 1.0])
    return w


def integrate(values, h: float, rule: str = "simpson") -> float:
    values = np.asarray(values, dtype=float)
    return float(np.sum(piece_weights(values.size - 1, h, rule) * values))


def split_weights(n_nodes: int, split: int, rule: str = "simpson") -> np.ndarray:
    """Weights on [0, 1] with a uniform grid of n_nodes, integrating
    [0, s_split] and [s_split, 1] as separate pieces."""
    if n_nodes < 2:
        raise ValueError("need at least two nodes")
    if not 0 <= split < n_nodes:
        raise ValueError("split index outside the grid")
    h = 1.0 / (n_nodes - 1)
    w = np.zeros(n_nodes)
    w[:split + 1] += piece_weights(split, h, rule)
    w[split:] += piece_weights(n_nodes - 1 - split, h, rule)
    return w
