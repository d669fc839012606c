import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fuzzyfix.quadrature import integrate, piece_weights, split_weights


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7, 10, 11])
def test_weights_sum_to_length(n):
    for rule in ("simpson", "trapezoid"):
        assert math.isclose(piece_weights(n, 0.1, rule).sum(), n * 0.1)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 8, 9])
def test_simpson_exact_on_cubics(n):
    x = np.linspace(0.0, 1.0, n + 1)
    assert integrate(x ** 3 - 2 * x ** 2 + x, 1.0 / n) == pytest.approx(1 / 4 - 2 / 3 + 1 / 2, abs=1e-14)


def test_simpson_fourth_order():
    errs = [abs(integrate(np.sin(np.linspace(0, 1, n + 1)), 1.0 / n) - (1 - math.cos(1)))
            for n in (10, 20)]
    assert 12 < errs[0] / errs[1] < 20


def test_zero_intervals_and_bad_rule():
    assert piece_weights(0, 0.1).tolist() == [0.0]
    with pytest.raises(ValueError):
        piece_weights(3, 0.1, "gauss")


@given(st.integers(3, 50), st.data())
def test_split_weights_integrate_linear(n_nodes, data):
    split = data.draw(st.integers(0, n_nodes - 1))
    w = split_weights(n_nodes, split)
    x = np.linspace(0, 1, n_nodes)
    assert float(w @ (2 * x + 1)) == pytest.approx(2.0, abs=1e-12)
