"""Predicate checkers for allocation rows, matrices, assignments, lotteries.

Stochastic-dominance comparisons are prefix-cumulative sums taken in an
agent's preference order.  Pareto optimality of a deterministic assignment
is decided by searching for a trading cycle; on small inputs the verdict is
re-derived by brute force inside the function, so a disagreement between
the two methods can never escape unnoticed.  SD-efficiency of a matrix is
decided by an exact linear program.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction
from itertools import permutations

from .core import (
    AssignmentMatrix,
    DeterministicAssignment,
    Instance,
    Lottery,
    as_rational,
    validate_matrix,
)
from .exactlp import LinearProgram, solve

__all__ = [
    "sd_dominates",
    "is_sd_ef",
    "is_weak_sd_ef",
    "equal_treatment_of_equals",
    "is_pareto_optimal",
    "is_ex_post_efficient",
    "is_sd_efficient",
]

BRUTE_FORCE_CUTOFF = 5


def sd_dominates(x: Sequence, y: Sequence, preference: Sequence[int]) -> bool:
    """Whether row x stochastically dominates row y under the given ranking.

    Rows are expected to be nonnegative and sum to 1.  True iff every
    prefix-cumulative of x, taken in preference order, is at least the
    matching prefix-cumulative of y.
    """
    xs = [as_rational(v) for v in x]
    ys = [as_rational(v) for v in y]
    if not (len(xs) == len(ys) == len(preference)):
        raise ValueError(
            f"mismatched lengths: {len(xs)}, {len(ys)}, {len(preference)}"
        )
    cx = cy = Fraction(0)
    for obj in preference:
        cx += xs[obj]
        cy += ys[obj]
        if cx < cy:
            return False
    return True


def _check_sizes(instance: Instance, m: AssignmentMatrix) -> None:
    if m.n != instance.n:
        raise ValueError(f"{m.n}x{m.n} matrix for {instance.n} agents")


def is_sd_ef(instance: Instance, m: AssignmentMatrix) -> bool:
    """Every agent's row dominates every other row under its own ranking."""
    _check_sizes(instance, m)
    return all(
        sd_dominates(m[i], m[j], instance.preferences[i])
        for i in range(instance.n)
        for j in range(instance.n)
        if i != j
    )


def is_weak_sd_ef(instance: Instance, m: AssignmentMatrix) -> bool:
    """No agent's row is strictly dominated by another agent's row."""
    _check_sizes(instance, m)
    for i in range(instance.n):
        for j in range(instance.n):
            if i == j or m[i] == m[j]:
                continue
            if sd_dominates(m[j], m[i], instance.preferences[i]):
                return False
    return True


def equal_treatment_of_equals(instance: Instance, m: AssignmentMatrix) -> bool:
    """Agents with identical preference lists receive identical rows."""
    _check_sizes(instance, m)
    for i in range(instance.n):
        for j in range(i + 1, instance.n):
            if instance.preferences[i] == instance.preferences[j] and m[i] != m[j]:
                return False
    return True


def _has_trading_cycle(instance: Instance, a: DeterministicAssignment) -> bool:
    n = instance.n
    adj = [
        [j for j in range(n) if j != i and instance.prefers(i, a[j], a[i])]
        for i in range(n)
    ]
    state = [0] * n  # 0 unvisited, 1 on stack, 2 done

    def walk(u: int) -> bool:
        state[u] = 1
        for v in adj[u]:
            if state[v] == 1 or (state[v] == 0 and walk(v)):
                return True
        state[u] = 2
        return False

    return any(state[u] == 0 and walk(u) for u in range(n))


def _dominated_by_some_assignment(
    instance: Instance, a: DeterministicAssignment
) -> bool:
    n = instance.n
    held = [instance.rank(i, a[i]) for i in range(n)]
    for p in permutations(range(n)):
        ranks = [instance.rank(i, p[i]) for i in range(n)]
        if all(r <= h for r, h in zip(ranks, held)) and ranks != held:
            return True
    return False


def is_pareto_optimal(instance: Instance, a: DeterministicAssignment) -> bool:
    """No reassignment helps some agent without hurting another.

    Decided by absence of a trading cycle: a directed cycle in the graph
    with an edge from each agent to every agent whose object it strictly
    prefers lets the cycle swap along itself, improving all of its members.
    Small inputs are re-checked against full enumeration.
    """
    if a.n != instance.n:
        raise ValueError(f"assignment of size {a.n} for {instance.n} agents")
    verdict = not _has_trading_cycle(instance, a)
    if instance.n <= BRUTE_FORCE_CUTOFF:
        assert verdict == (not _dominated_by_some_assignment(instance, a))
    return verdict


def is_ex_post_efficient(instance: Instance, lottery: Lottery) -> bool:
    """Every assignment in the support is Pareto optimal."""
    if lottery.n != instance.n:
        raise ValueError(f"lottery of size {lottery.n} for {instance.n} agents")
    return all(is_pareto_optimal(instance, a) for a, _ in lottery)


def is_sd_efficient(instance: Instance, m: AssignmentMatrix) -> bool:
    """No other bistochastic matrix dominates this one row by row."""
    return sd_improvement(instance, m) is None


def sd_improvement(instance: Instance, m: AssignmentMatrix) -> AssignmentMatrix | None:
    """A bistochastic matrix properly dominating ``m`` row by row, or None.

    Maximizes the total of all prefix-cumulatives over bistochastic
    matrices constrained to dominate ``m``; the input is efficient exactly
    when the optimum equals the total at ``m`` itself, since matching every
    prefix forces row equality.  Otherwise the maximizer improves some
    prefix strictly while staying feasible, so it is a certificate.
    """
    check = validate_matrix(m)
    if not check:
        raise ValueError(f"matrix is not bistochastic: {check.reason}")
    _check_sizes(instance, m)
    n = instance.n
    nv = n * n
    zero = [Fraction(0)] * nv
    rows = []
    for i in range(n):
        coeffs = list(zero)
        for j in range(n):
            coeffs[i * n + j] = Fraction(1)
        rows.append((coeffs, "=", Fraction(1)))
    for j in range(n):
        coeffs = list(zero)
        for i in range(n):
            coeffs[i * n + j] = Fraction(1)
        rows.append((coeffs, "=", Fraction(1)))
    for i in range(n):
        preference = instance.preferences[i]
        coeffs = list(zero)
        cumulative = Fraction(0)
        # The full-length prefix is implied by the row-sum row, so stop early.
        for t in range(n - 1):
            coeffs[i * n + preference[t]] = Fraction(1)
            cumulative += m[i][preference[t]]
            rows.append((list(coeffs), ">=", cumulative))
    weight = list(zero)
    for i in range(n):
        for obj in range(n):
            weight[i * n + obj] = Fraction(n - instance.rank(i, obj))
    result = solve(LinearProgram(nv, rows, objective=weight, sense="max"))
    assert result.status == "optimal"
    at_input = sum(
        weight[i * n + obj] * m[i][obj] for i in range(n) for obj in range(n)
    )
    if result.objective == at_input:
        return None
    return AssignmentMatrix(
        [result.solution[i * n : (i + 1) * n] for i in range(n)]
    )
