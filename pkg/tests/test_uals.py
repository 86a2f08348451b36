import json
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import linprog

from ualslab.core import MIXED, NATURAL, FinVec
from ualslab.uals import (
    INF,
    ConvexCombination,
    GapReport,
    OperatorModel,
    coordinate_codomain,
    minimax_gap,
    pigeonhole_witness,
    pointwise_gap,
    rationalize,
    residual_norm,
    slot_codomain,
    solve_lp,
    verify_case,
)
from ualslab.uals.cases import ell1_model, ell1_selector, greedy_set, rank_one_model, rank_one_selector, slot_model


# exact simplex --------------------------------------------------------------------------------
def test_simplex_matches_highs_on_random_programs():
    rng = np.random.Generator(np.random.PCG64(7))
    for _ in range(60):
        n, mu, me = int(rng.integers(1, 5)), int(rng.integers(0, 4)), int(rng.integers(0, 3))
        c = rng.integers(-5, 6, size=n)
        A_ub, b_ub = rng.integers(-4, 5, size=(mu, n)), rng.integers(-3, 8, size=mu)
        A_eq, b_eq = rng.integers(-4, 5, size=(me, n)), rng.integers(-3, 8, size=me)
        mine = solve_lp(c, A_ub.tolist(), b_ub.tolist(), A_eq.tolist(), b_eq.tolist())
        ref = linprog(c, A_ub=A_ub if mu else None, b_ub=b_ub if mu else None,
                      A_eq=A_eq if me else None, b_eq=b_eq if me else None, method="highs")
        expect = {0: "optimal", 2: "infeasible", 3: "unbounded"}[ref.status]
        assert mine.status == expect
        if expect == "optimal":
            assert abs(float(mine.value) - ref.fun) < 1e-9
            x = np.array([float(v) for v in mine.x])
            if mu:
                assert np.all(A_ub @ x <= b_ub + 1e-12)
            if me:
                assert np.allclose(A_eq @ x, b_eq)


def test_simplex_degenerate_cycling_example():
    # a classic program on which the largest-coefficient rule cycles
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9], [Fraction(1, 2), -90, Fraction(-1, 50), 3], [0, 0, 1, 0]]
    res = solve_lp(c, A, [0, 0, 1])
    assert res.status == "optimal" and res.value == Fraction(-1, 20)


def test_simplex_shape_errors():
    with pytest.raises(ValueError):
        solve_lp([1, 2], [[1]], [1])


# models ------------------------------------------------------------------------------------------
def test_convex_combination_validation():
    A, hull = ell1_model(4)
    with pytest.raises(ValueError):
        ConvexCombination(tuple(hull[:2]), (Fraction(1, 2), Fraction(1, 3)))
    with pytest.raises(ValueError):
        ConvexCombination(tuple(hull[:2]), (2, -1))
    with pytest.raises(ValueError):
        A.apply(FinVec(NATURAL, {100: 1}))
    assert rationalize([0.25, 0.75000000001]) == [Fraction(1, 4), Fraction(3, 4)]


def test_ell1_selector_exact_zero_gap():
    A, hull = ell1_model(6)
    for coeffs in ({1: 1}, {2: -1}, {1: Fraction(1, 3), 4: Fraction(-2, 3)}, {3: Fraction(1, 2), 5: Fraction(1, 2)}):
        x = FinVec(NATURAL, coeffs)
        assert residual_norm(A, ell1_selector(x, hull), x) == 0


def test_gap_methods_agree():
    A, hull = ell1_model(4)
    w = [FinVec(NATURAL, {3: Fraction(1, 2), 4: Fraction(s, 2)}) for s in (1, -1)]
    lp = minimax_gap(A, hull, w, method="lp")
    de = minimax_gap(A, hull, w, method="descent", seeds=5)
    assert lp.exact and lp.value == Fraction(1, 2)
    assert abs(float(de.value) - 0.5) < 1e-6
    # the returned combination attains the value
    assert max(residual_norm(A, lp.combination, x) for x in w) == lp.value


def test_pointwise_gap_lp_below_greedy_calx():
    n = 2
    cod = slot_codomain("Y", 2, INF)
    A, hull, sets = slot_model(n, 2, cod)
    x = FinVec(MIXED, {(n, "X", 1, 1): Fraction(2, 5), (n, "X", 2, 1): Fraction(3, 10),
                       (n, "X", 3, 2): Fraction(1, 5), (n, "X", 4, 1): Fraction(1, 10)})
    G = greedy_set(x, n, 2)
    assert G == frozenset({1, 2})
    greedy = residual_norm(A, ConvexCombination((hull[sets.index(G)],), (1,)), x)
    lp = pointwise_gap(A, hull, x, method="lp")
    assert lp.value <= greedy == Fraction(1, 5)


def test_float_lp_for_irrational_weights():
    # collinear slot residuals with an irrational l2 weight need the float LP
    n = 1
    cod = slot_codomain("Y", 2, 1)
    A, hull, _ = slot_model(n, 2, cod)
    x = FinVec(MIXED, {(1, "X", 1, 1): 1, (1, "X", 1, 2): 1})
    res = pointwise_gap(A, hull, x)
    assert res.method in ("lp", "lp-float") and res.value >= 0


def test_pigeonhole():
    ph = pigeonhole_witness([({1, 2}, Fraction(1, 2)), ({1, 3}, Fraction(1, 2))], 2)
    assert ph.coverages == (1, Fraction(1, 2), Fraction(1, 2), 0) and ph.slot == 2
    with pytest.raises(ValueError):
        pigeonhole_witness([({1}, 1)], 2)
    with pytest.raises(ValueError):
        pigeonhole_witness([({1, 2}, Fraction(1, 2))], 2)


def test_rank_one_selector_weights_are_convex():
    I, hull = rank_one_model()
    y = FinVec(NATURAL, {1: Fraction(-1, 3), 2: Fraction(1, 4)})
    comb = rank_one_selector(y, hull)
    assert sum(comb.weights) == 1 and residual_norm(I, comb, y) == 0


def test_operator_rule_check():
    cod = coordinate_codomain("l1", 1)
    good = OperatorModel("id", NATURAL, NATURAL, {1: FinVec(NATURAL, {1: 1})}, cod, lambda x: x)
    bad = OperatorModel("bad", NATURAL, NATURAL, {1: FinVec(NATURAL, {1: 2})}, cod, lambda x: x)
    assert good.check_rule() and not bad.check_rule()


# cases -------------------------------------------------------------------------------------------
@pytest.mark.parametrize("name,kw", [
    ("ell1", {"m": 10, "probes": 30, "samples": 20}),
    ("calx", {"n": 2, "d": 2, "probes": 30, "lp_probes": 5, "samples": 20}),
    ("mixed", {"n": 2, "probes": 30, "samples": 20}),
    ("rank-one", {"probes": 50, "samples": 20, "descents": 3}),
])
def test_cases_small(name, kw):
    rep = verify_case(name, **kw)
    assert rep.passed, rep.summary()
    doc = rep.to_json()
    assert doc["schema"] == "ualslab.gapreport/1" and doc["passed"]
    json.dumps(doc)


def test_case_errors():
    with pytest.raises(ValueError):
        verify_case("nope")
    with pytest.raises(ValueError):
        verify_case("mixed", p=3, q=2)
    with pytest.raises(ValueError):
        GapReport("x", {}, lower=Fraction(1), upper=Fraction(1, 2))
