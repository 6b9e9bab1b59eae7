"""Shared test data and independent verification helpers.

The worked cases below (three- and four-agent instances with known
matrices, lotteries, and envy values) serve as golden data across the
suite.  Case names describe the preference structure, not provenance.
Everything numeric is an exact Fraction.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from types import SimpleNamespace

import pytest
from hypothesis import HealthCheck, settings

from fairdec.core import (
    AssignmentMatrix,
    DeterministicAssignment,
    Instance,
    Lottery,
    envy_matrix,
    matrix_of,
    validate_matrix,
)
from fairdec.exactlp import LinearProgram, LpResult

F = Fraction

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


def assignment(*objects: int) -> DeterministicAssignment:
    return DeterministicAssignment(objects)


def lottery(entries: list[tuple[str, tuple[int, ...]]]) -> Lottery:
    return Lottery([(DeterministicAssignment(objs), F(w)) for w, objs in entries])


def matrix(rows: list[list[str]]) -> AssignmentMatrix:
    return AssignmentMatrix([[F(x) for x in row] for row in rows])


def identical_instance(n: int) -> Instance:
    return Instance([tuple(range(n))] * n)


def cyclic_shift_lottery(n: int) -> Lottery:
    """Weight 1/n on each cyclic shift: agent i takes object (i+k) mod n."""
    return Lottery(
        [
            (DeterministicAssignment([(i + k) % n for i in range(n)]), F(1, n))
            for k in range(n)
        ]
    )


# --- Worked golden cases -------------------------------------------------


@pytest.fixture(scope="session")
def case_identical_three() -> SimpleNamespace:
    """Three agents with one shared ranking; cyclic vs. full-support mixing."""
    instance = identical_instance(3)
    cyclic = cyclic_shift_lottery(3)
    uniform = Lottery(
        [
            (DeterministicAssignment(p), F(1, 6))
            for p in itertools.permutations(range(3))
        ]
    )
    return SimpleNamespace(instance=instance, cyclic=cyclic, uniform=uniform)


@pytest.fixture(scope="session")
def case_unique_decomposition() -> SimpleNamespace:
    """A matrix whose support admits exactly two matchings, hence one lottery."""
    instance = Instance([(0, 1, 2), (0, 2, 1), (2, 0, 1)])
    m = matrix(
        [
            ["0", "1", "0"],
            ["9/10", "0", "1/10"],
            ["1/10", "0", "9/10"],
        ]
    )
    the_lottery = lottery([("9/10", (1, 0, 2)), ("1/10", (1, 2, 0))])
    return SimpleNamespace(instance=instance, matrix=m, lottery=the_lottery)


@pytest.fixture(scope="session")
def case_rotated_preferences() -> SimpleNamespace:
    """Each agent's ranking is a rotation of the previous agent's."""
    instance = Instance([(0, 1, 2), (1, 2, 0), (2, 0, 1)])
    the_lottery = lottery([("1/2", (0, 1, 2)), ("1/2", (2, 0, 1))])
    m = matrix(
        [
            ["1/2", "0", "1/2"],
            ["1/2", "1/2", "0"],
            ["0", "1/2", "1/2"],
        ]
    )
    return SimpleNamespace(instance=instance, lottery=the_lottery, matrix=m)


# Serial-dictatorship outcome for every priority order of the three-types
# case below, keyed by order (agent indices), value = objects per agent.
PRIORITY_ORDER_OUTCOMES: dict[tuple[int, ...], tuple[int, ...]] = {
    (0, 1, 2, 3): (0, 1, 2, 3),
    (3, 2, 1, 0): (3, 1, 0, 2),
    (1, 0, 2, 3): (1, 0, 2, 3),
    (3, 2, 0, 1): (1, 3, 0, 2),
    (0, 1, 3, 2): (0, 1, 3, 2),
    (2, 3, 1, 0): (3, 1, 0, 2),
    (1, 0, 3, 2): (1, 0, 3, 2),
    (2, 3, 0, 1): (1, 3, 0, 2),
    (0, 2, 1, 3): (0, 1, 2, 3),
    (3, 1, 2, 0): (3, 0, 1, 2),
    (1, 2, 0, 3): (1, 0, 2, 3),
    (3, 0, 2, 1): (0, 3, 1, 2),
    (0, 2, 3, 1): (0, 3, 2, 1),
    (1, 3, 2, 0): (3, 0, 1, 2),
    (1, 2, 3, 0): (3, 0, 2, 1),
    (0, 3, 2, 1): (0, 3, 1, 2),
    (0, 3, 1, 2): (0, 1, 3, 2),
    (2, 1, 3, 0): (3, 1, 0, 2),
    (1, 3, 0, 2): (1, 0, 3, 2),
    (2, 0, 3, 1): (1, 3, 0, 2),
    (2, 0, 1, 3): (1, 2, 0, 3),
    (3, 1, 0, 2): (1, 0, 3, 2),
    (2, 1, 0, 3): (2, 1, 0, 3),
    (3, 0, 1, 2): (0, 1, 3, 2),
}


@pytest.fixture(scope="session")
def case_three_types() -> SimpleNamespace:
    """Four agents, three distinct rankings; eating-rule matrix known exactly.

    The matrix admits an envy-bounded lottery (given explicitly) yet cannot
    be written as any distribution over priority orders that weighs every
    order equally with its reverse.
    """
    instance = Instance([(0, 1, 2, 3), (0, 1, 2, 3), (0, 2, 1, 3), (2, 0, 1, 3)])
    eating_matrix = matrix(
        [
            ["1/3", "5/12", "0", "1/4"],
            ["1/3", "5/12", "0", "1/4"],
            ["1/3", "1/12", "1/3", "1/4"],
            ["0", "1/12", "2/3", "1/4"],
        ]
    )
    bounded_witness = lottery(
        [
            ("1/12", (0, 1, 2, 3)),
            ("1/12", (0, 3, 1, 2)),
            ("1/12", (1, 0, 3, 2)),
            ("1/12", (3, 0, 2, 1)),
            ("1/6", (0, 1, 3, 2)),
            ("1/6", (1, 0, 2, 3)),
            ("1/6", (1, 3, 0, 2)),
            ("1/6", (3, 1, 0, 2)),
        ]
    )
    return SimpleNamespace(
        instance=instance,
        eating_matrix=eating_matrix,
        bounded_witness=bounded_witness,
        order_outcomes=PRIORITY_ORDER_OUTCOMES,
    )


@pytest.fixture(scope="session")
def case_two_types() -> SimpleNamespace:
    """Three agents share one ranking, the fourth holds a shifted one.

    ``q_sequence`` pins the per-round matchings so the decomposition comes
    out exactly as the known 18-assignment lottery; ``final_lottery`` lists
    it: every arrangement where agent 3 takes object 1 has weight 1/12,
    every arrangement where agent 3 takes object 2 or 3 has weight 1/24.
    """
    instance = Instance([(0, 1, 2, 3), (0, 1, 2, 3), (0, 1, 2, 3), (1, 2, 3, 0)])
    eating_matrix = matrix(
        [
            ["1/3", "1/6", "1/4", "1/4"],
            ["1/3", "1/6", "1/4", "1/4"],
            ["1/3", "1/6", "1/4", "1/4"],
            ["0", "1/2", "1/4", "1/4"],
        ]
    )
    q_sequence = [assignment(0, 2, 3, 1), assignment(0, 1, 2, 3), assignment(0, 1, 3, 2)]
    entries: list[tuple[DeterministicAssignment, Fraction]] = []
    for last_object, weight in ((1, F(1, 12)), (3, F(1, 24)), (2, F(1, 24))):
        rest = [o for o in range(4) if o != last_object]
        for perm in itertools.permutations(rest):
            entries.append((DeterministicAssignment(list(perm) + [last_object]), weight))
    final_lottery = Lottery(entries)
    return SimpleNamespace(
        instance=instance,
        eating_matrix=eating_matrix,
        q_sequence=q_sequence,
        final_lottery=final_lottery,
        first_type_probabilities=(F(1), F(1, 2), F(3, 4), F(3, 4)),
    )


@pytest.fixture(scope="session")
def case_duplicate_preferences() -> SimpleNamespace:
    """Two agents share a ranking but receive different rows."""
    instance = Instance([(0, 1, 2), (0, 1, 2), (2, 0, 1)])
    m = matrix(
        [
            ["2/5", "2/5", "1/5"],
            ["1/2", "2/5", "1/10"],
            ["1/10", "1/5", "7/10"],
        ]
    )
    witness = lottery(
        [
            ("2/5", (0, 1, 2)),
            ("3/10", (1, 0, 2)),
            ("1/10", (1, 2, 0)),
            ("1/5", (2, 0, 1)),
        ]
    )
    return SimpleNamespace(instance=instance, matrix=m, witness=witness)


@pytest.fixture(scope="session")
def case_forced_envy() -> SimpleNamespace:
    """Agent 0 always holds its third choice; every decomposition makes it
    envy each other agent with probability 2/3."""
    instance = Instance(
        [(0, 1, 2, 3), (0, 1, 3, 2), (0, 1, 3, 2), (0, 1, 3, 2)]
    )
    third = F(1, 3)
    m = AssignmentMatrix(
        [
            [F(0), F(0), F(1), F(0)],
            [third, third, F(0), third],
            [third, third, F(0), third],
            [third, third, F(0), third],
        ]
    )
    return SimpleNamespace(instance=instance, matrix=m, forced_envy=F(2, 3))


# --- Random generators (all seeded by the caller) ------------------------


def random_instance(rng: random.Random, n: int) -> Instance:
    perms = list(itertools.permutations(range(n)))
    return Instance([rng.choice(perms) for _ in range(n)])


def random_lottery(rng: random.Random, n: int, parts: int = 6) -> Lottery:
    perms = list(itertools.permutations(range(n)))
    picks = [rng.choice(perms) for _ in range(parts)]
    weights = [rng.randint(1, 9) for _ in picks]
    total = sum(weights)
    return Lottery(
        [(DeterministicAssignment(p), F(w, total)) for p, w in zip(picks, weights)]
    )


def random_bistochastic(rng: random.Random, n: int, parts: int = 6) -> AssignmentMatrix:
    return matrix_of(random_lottery(rng, n, parts))


def uniform_biased_bistochastic(
    rng: random.Random, n: int, base: int = 4, spread: int = 3
) -> AssignmentMatrix:
    """Convex combination of all n! permutations with near-equal weights.

    Useful for rejection sampling of envy-free-in-expectation matrices:
    weights close to uniform keep rows close together, so acceptance stays
    reasonable.
    """
    perms = list(itertools.permutations(range(n)))
    weights = [base + rng.randint(0, spread) for _ in perms]
    total = sum(weights)
    return matrix_of(
        Lottery(
            [
                (DeterministicAssignment(p), F(w, total))
                for p, w in zip(perms, weights)
            ]
        )
    )


# --- Independent verification helpers ------------------------------------


def assert_reconstructs(lot: Lottery, m: AssignmentMatrix) -> None:
    assert matrix_of(lot).rows == m.rows


def max_envy(instance: Instance, lot: Lottery) -> Fraction:
    return envy_matrix(instance, lot).max_entry()[0]


def assert_valid_lottery_for(instance: Instance, lot: Lottery) -> None:
    assert lot.n == instance.n
    assert sum(w for _, w in lot) == 1
    assert validate_matrix(matrix_of(lot))


@dataclass
class LpCheck:
    """Re-verifies an LpResult from first principles, independent of the solver."""

    lp: LinearProgram
    result: LpResult

    def row_activity(self, x, k):
        coeffs, _, _ = self.lp.rows[k]
        return sum(a * xj for a, xj in zip(coeffs, x))

    def assert_feasible_point(self, x) -> None:
        for j, lb in enumerate(self.lp.lower_bounds):
            assert x[j] >= lb
        for k, (_, rel, rhs) in enumerate(self.lp.rows):
            activity = self.row_activity(x, k)
            if rel == "<=":
                assert activity <= rhs
            elif rel == ">=":
                assert activity >= rhs
            else:
                assert activity == rhs

    def assert_certified(self) -> None:
        lp, res = self.lp, self.result
        cmin = list(lp.objective)
        if lp.sense == "max":
            cmin = [-c for c in cmin]
        if res.status == "optimal":
            assert res.solution is not None and res.objective is not None
            self.assert_feasible_point(res.solution)
            assert res.objective == sum(
                c * x for c, x in zip(lp.objective, res.solution)
            )
            cert = res.certificate
            y = cert.duals
            reduced = cert.reduced_costs
            for k, (coeffs, rel, rhs) in enumerate(lp.rows):
                if rel == "<=":
                    assert y[k] <= 0
                if rel == ">=":
                    assert y[k] >= 0
                assert y[k] * (self.row_activity(res.solution, k) - rhs) == 0
            for j in range(lp.num_vars):
                expected = cmin[j] - sum(
                    y[k] * lp.rows[k][0][j] for k in range(len(lp.rows))
                )
                assert reduced[j] == expected
                assert reduced[j] >= 0
                assert reduced[j] * (res.solution[j] - lp.lower_bounds[j]) == 0
            dual_total = sum(y[k] * lp.rows[k][2] for k in range(len(lp.rows)))
            dual_total += sum(
                r * lb for r, lb in zip(reduced, lp.lower_bounds)
            )
            assert sum(c * x for c, x in zip(cmin, res.solution)) == dual_total
        elif res.status == "infeasible":
            y = res.certificate.duals
            total = Fraction(0)
            combo = [Fraction(0)] * lp.num_vars
            for k, (coeffs, rel, rhs) in enumerate(lp.rows):
                if rel == "<=":
                    assert y[k] <= 0
                if rel == ">=":
                    assert y[k] >= 0
                total += y[k] * rhs
                for j, a in enumerate(coeffs):
                    combo[j] += y[k] * a
            for j, s in enumerate(combo):
                assert s <= 0
                total -= s * lp.lower_bounds[j]
            assert total > 0
        elif res.status == "unbounded":
            d = res.certificate.direction
            assert all(dj >= 0 for dj in d)
            assert any(dj != 0 for dj in d)
            for coeffs, rel, _ in lp.rows:
                along = sum(a * dj for a, dj in zip(coeffs, d))
                if rel == "<=":
                    assert along <= 0
                elif rel == ">=":
                    assert along >= 0
                else:
                    assert along == 0
            assert sum(c * dj for c, dj in zip(cmin, d)) < 0
        else:
            raise AssertionError(f"unknown status {res.status}")


def solve_linear_system(
    rows: list[list[Fraction]], rhs: list[Fraction]
) -> list[Fraction] | None:
    """Gaussian elimination over Fractions; None if singular."""
    n = len(rows)
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot_row is None:
            return None
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * p for v, p in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def brute_force_lp_optimum(lp: LinearProgram) -> Fraction | None:
    """Minimum of the objective over all vertices; None if no feasible vertex.

    Correct for pointed, bounded-feasible regions (every LP this is used on
    adds explicit box constraints).  Deliberately shares no code with the
    simplex implementation.
    """
    n = lp.num_vars
    cmin = list(lp.objective)
    if lp.sense == "max":
        cmin = [-c for c in cmin]
    candidates: list[tuple[list[Fraction], str]] = [
        (list(coeffs), "row") for coeffs, _, _ in lp.rows
    ]
    bound_rows = []
    for j in range(n):
        unit = [Fraction(0)] * n
        unit[j] = Fraction(1)
        bound_rows.append(unit)
    rhs_of_row = [rhs for _, _, rhs in lp.rows]
    all_rows = [list(coeffs) for coeffs, _, _ in lp.rows] + bound_rows
    all_rhs = rhs_of_row + list(lp.lower_bounds)
    best: Fraction | None = None
    for subset in itertools.combinations(range(len(all_rows)), n):
        x = solve_linear_system(
            [all_rows[i] for i in subset], [all_rhs[i] for i in subset]
        )
        if x is None:
            continue
        feasible_point = all(x[j] >= lp.lower_bounds[j] for j in range(n))
        if feasible_point:
            for coeffs, rel, rhs in lp.rows:
                activity = sum(a * xj for a, xj in zip(coeffs, x))
                ok = (
                    activity <= rhs
                    if rel == "<="
                    else activity >= rhs if rel == ">=" else activity == rhs
                )
                if not ok:
                    feasible_point = False
                    break
        if feasible_point:
            value = sum(c * xj for c, xj in zip(cmin, x))
            if best is None or value < best:
                best = value
    if best is None:
        return None
    return -best if lp.sense == "max" else best
