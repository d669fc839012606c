import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fuzzyfix.coverings import (MAX_BRUTE_FORCE, FiniteSubset, boundedness_witness,
                                common_cover_obstruction, greedy_separated_points, is_net,
                                min_net_bruteforce, separation_slack)
from fuzzyfix.fmetric import canonical_config

CFG = canonical_config()
ODD = FiniteSubset((1.0, 3.0, 5.0, 7.0, 9.0), CFG)
EPS = math.sqrt(2) / 3
R = 1 - 1 / math.sqrt(2)


def test_boundedness_certifies():
    b = boundedness_witness(ODD, 1.0)
    assert b.pair == (0, 4)
    assert b.certifies(CFG, ODD.points)
    assert b.beta == pytest.approx(0.5 ** 64)


def test_boundedness_single_point():
    b = boundedness_witness(FiniteSubset((2.0,), CFG), 1.0)
    assert b.beta == 1.0 and b.r == 0.5


def test_each_point_covers_only_itself():
    assert min_net_bruteforce(ODD, ODD.points, R, EPS) == ODD.points
    cert = is_net(ODD, ODD.points, R, EPS)
    assert cert.ok and cert.size == 5
    assert cert.assignment == {i: i for i in range(5)}


def test_missing_point_is_reported():
    res = is_net(ODD, (1.0, 3.0, 5.0, 7.0), R, EPS)
    assert not res.ok
    assert res.index == 4 and res.point == 9.0


def test_obstruction_blocks_all_pairs():
    obs = common_cover_obstruction(ODD, R, EPS)
    assert obs.all_blocked
    assert len(obs.pairs) == 10
    # a point between two odd numbers cannot cover both
    assert not is_net(FiniteSubset((1.0, 3.0), CFG), (2.0,), R, EPS).ok


def test_greedy_net_and_separation():
    g = greedy_separated_points(ODD, R, EPS)
    assert g.complete and g.size == 5 and g.certificate is not None
    assert separation_slack(CFG, g.points, R, EPS) >= 0


def test_greedy_budget():
    g = greedy_separated_points(ODD, R, EPS, budget=2)
    assert not g.complete and g.size == 2


def test_large_epsilon_one_point_suffices():
    best = min_net_bruteforce(ODD, ODD.points, 0.5, 1000.0)
    assert best is not None and len(best) == 1


def test_brute_force_limits():
    big = FiniteSubset(tuple(float(i) for i in range(MAX_BRUTE_FORCE + 1)), CFG)
    with pytest.raises(ValueError):
        min_net_bruteforce(big, big.points, 0.5, 1.0)
    assert min_net_bruteforce(ODD, (100.0,), R, EPS) is None
    with pytest.raises(ValueError):
        is_net(ODD, ODD.points, 0.0, EPS)
    with pytest.raises(ValueError):
        is_net(ODD, ODD.points, 0.5, 0.0)


@given(st.lists(st.floats(-5, 5), min_size=1, max_size=8, unique=True),
       st.floats(0.05, 0.95), st.floats(0.01, 10))
def test_greedy_always_covers_and_min_is_no_larger(points, r, eps):
    A = FiniteSubset(tuple(points), CFG)
    g = greedy_separated_points(A, r, eps)
    assert g.complete and is_net(A, g.points, r, eps).ok
    best = min_net_bruteforce(A, A.points, r, eps)
    assert best is not None and len(best) <= g.size
    assert is_net(A, best, r, eps).ok
