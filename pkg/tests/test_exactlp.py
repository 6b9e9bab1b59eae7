"""Tests for the exact rational simplex solver.

Every solver outcome is pushed through ``LpCheck.assert_certified``, which
re-verifies the returned certificate against the original problem data
without sharing any code with the solver.  Optimal objective values are
additionally cross-checked against an independent vertex-enumeration oracle
on randomly generated boxed problems.
"""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import LpCheck, brute_force_lp_optimum

from fairdec.exactlp import LinearProgram, feasible, solve

F = Fraction


def check(lp: LinearProgram):
    result = solve(lp)
    LpCheck(lp, result).assert_certified()
    return result


class TestConstruction:
    def test_rejects_row_length_mismatch(self):
        with pytest.raises(ValueError):
            LinearProgram(2, [((1, 2, 3), "<=", 1)])

    def test_rejects_unknown_relation(self):
        with pytest.raises(ValueError):
            LinearProgram(2, [((1, 2), "<", 1)])

    def test_rejects_unknown_sense(self):
        with pytest.raises(ValueError):
            LinearProgram(1, [], objective=[1], sense="maximize")

    def test_rejects_float_data(self):
        with pytest.raises(TypeError):
            LinearProgram(1, [((0.5,), "<=", 1)])

    def test_accepts_string_rationals(self):
        lp = LinearProgram(1, [(("1/3",), "<=", "2/3")], objective=["0.5"])
        assert lp.objective == (F(1, 2),)


class TestHandPickedProblems:
    def test_two_constraint_minimum(self):
        lp = LinearProgram(
            2,
            [((1, 2), ">=", 3), ((3, 1), ">=", 4)],
            objective=[1, 1],
        )
        res = check(lp)
        assert res.status == "optimal"
        assert res.objective == 2
        assert res.solution == (F(1), F(1))

    def test_infeasible_via_lower_bounds(self):
        lp = LinearProgram(
            2,
            [((1, 1), "=", 1)],
            lower_bounds=["3/5", "3/5"],
        )
        res = check(lp)
        assert res.status == "infeasible"

    def test_cycling_prone_degenerate_problem(self):
        # A classic cycling trap for simplex without an anti-cycling rule:
        # three constraints all active at the origin.
        lp = LinearProgram(
            4,
            [
                (("1/4", -60, "-1/25", 9), "<=", 0),
                (("1/2", -90, "-1/50", 3), "<=", 0),
                ((0, 0, 1, 0), "<=", 1),
            ],
            objective=["-3/4", 150, "-1/50", 6],
        )
        res = check(lp)
        assert res.status == "optimal"
        assert res.objective == F(-1, 20)
        assert res.solution == (F(1, 25), F(0), F(1), F(0))

    def test_unbounded_gives_improving_ray(self):
        lp = LinearProgram(2, [((1, -1), "<=", 1)], objective=[-1, 0])
        res = check(lp)
        assert res.status == "unbounded"

    def test_no_rows_minimizes_at_lower_bounds(self):
        lp = LinearProgram(2, [], objective=[1, 1])
        res = check(lp)
        assert res.status == "optimal"
        assert res.objective == 0
        assert res.solution == (F(0), F(0))

    def test_no_rows_negative_cost_is_unbounded(self):
        res = check(LinearProgram(2, [], objective=[1, -1]))
        assert res.status == "unbounded"

    def test_negative_lower_bounds_shift_the_optimum(self):
        lp = LinearProgram(2, [], objective=[1, 1], lower_bounds=[-2, -3])
        res = check(lp)
        assert res.status == "optimal"
        assert res.objective == -5
        assert res.solution == (F(-2), F(-3))

    def test_max_sense(self):
        lp = LinearProgram(
            2,
            [((1, 2), "<=", 4), ((3, 1), "<=", 6)],
            objective=[1, 1],
            sense="max",
        )
        res = check(lp)
        assert res.status == "optimal"
        assert res.objective == F(14, 5)
        assert res.solution == (F(8, 5), F(6, 5))

    def test_equality_system_pins_the_point(self):
        lp = LinearProgram(
            2,
            [((1, 1), "=", 2), ((1, -1), "=", 0)],
            objective=[1, 0],
        )
        res = check(lp)
        assert res.status == "optimal"
        assert res.solution == (F(1), F(1))

    def test_zero_coefficient_row_is_dropped_when_satisfied(self):
        lp = LinearProgram(2, [((0, 0), "<=", 1)], objective=[1, 1])
        res = check(lp)
        assert res.status == "optimal"
        assert res.objective == 0

    def test_zero_coefficient_row_certifies_infeasibility(self):
        lp = LinearProgram(2, [((0, 0), ">=", 1)], objective=[1, 1])
        res = check(lp)
        assert res.status == "infeasible"

    def test_duplicated_equality_rows_are_harmless(self):
        lp = LinearProgram(
            2,
            [((1, 1), "=", 1), ((1, 1), "=", 1), ((2, 2), "=", 2)],
            objective=[0, 1],
        )
        res = check(lp)
        assert res.status == "optimal"
        assert res.objective == 0
        assert res.solution == (F(1), F(0))

    def test_contradictory_equalities(self):
        lp = LinearProgram(2, [((1, 1), "=", 1), ((1, 1), "=", 2)])
        res = check(lp)
        assert res.status == "infeasible"

    def test_negative_rhs_rows_get_flipped_internally(self):
        lp = LinearProgram(
            2,
            [((-1, -1), "<=", -3), ((1, 0), "<=", 2)],
            objective=[2, 1],
        )
        res = check(lp)
        assert res.status == "optimal"
        assert res.objective == 3
        assert res.solution == (F(0), F(3))

    def test_degenerate_optimum_with_many_tight_rows(self):
        lp = LinearProgram(
            2,
            [
                ((1, 1), "<=", 2),
                ((1, 0), "<=", 1),
                ((0, 1), "<=", 1),
                ((1, 1), ">=", 2),
            ],
            objective=[-1, -1],
        )
        res = check(lp)
        assert res.status == "optimal"
        assert res.objective == -2


class TestFeasibleProbe:
    def test_returns_witness(self):
        ok, witness = feasible(
            LinearProgram(2, [((1, 1), ">=", 1), ((1, -1), "=", 0)])
        )
        assert ok
        assert witness[0] == witness[1]
        assert witness[0] + witness[1] >= 1

    def test_reports_empty_region(self):
        ok, witness = feasible(
            LinearProgram(1, [((1,), "<=", 0), ((1,), ">=", 1)])
        )
        assert not ok
        assert witness is None


def random_boxed_lp(rng: random.Random) -> LinearProgram:
    n = rng.randint(1, 4)
    lbs = [F(rng.randint(-2, 1)) for _ in range(n)]
    rows = []
    for _ in range(rng.randint(1, 5)):
        coeffs = [F(rng.randint(-3, 3)) for _ in range(n)]
        rel = rng.choice(["<=", "=", ">="])
        rows.append((coeffs, rel, F(rng.randint(-4, 4))))
    for j in range(n):
        unit = [F(0)] * n
        unit[j] = F(1)
        rows.append((unit, "<=", lbs[j] + rng.randint(1, 5)))
    objective = [F(rng.randint(-3, 3)) for _ in range(n)]
    sense = rng.choice(["min", "max"])
    return LinearProgram(n, rows, objective=objective, sense=sense, lower_bounds=lbs)


@settings(max_examples=120)
@given(st.integers(0, 2**31 - 1))
def test_boxed_random_lps_match_vertex_enumeration(seed):
    lp = random_boxed_lp(random.Random(seed))
    res = check(lp)
    oracle = brute_force_lp_optimum(lp)
    if oracle is None:
        assert res.status == "infeasible"
    else:
        assert res.status == "optimal"
        assert res.objective == oracle


@settings(max_examples=120)
@given(st.integers(0, 2**31 - 1))
def test_unboxed_random_lps_always_certify(seed):
    """Without box rows any status can appear; the certificate must hold."""
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    rows = []
    for _ in range(rng.randint(0, 4)):
        coeffs = [F(rng.randint(-3, 3)) for _ in range(n)]
        rows.append((coeffs, rng.choice(["<=", "=", ">="]), F(rng.randint(-4, 4))))
    lp = LinearProgram(
        n,
        rows,
        objective=[F(rng.randint(-3, 3)) for _ in range(n)],
        sense=rng.choice(["min", "max"]),
        lower_bounds=[F(rng.randint(-2, 0)) for _ in range(n)],
    )
    check(lp)
