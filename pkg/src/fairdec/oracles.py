"""Exact LP oracles over the full space of deterministic assignments.

Each oracle enumerates all n! permutations as LP columns and solves with
the certified rational simplex, so answers are exact and every "yes"
comes with a witness that can be re-checked independently.  Enumeration
is capped (six agents, 720 columns, by default); larger inputs raise a
resource error rather than grinding.
"""

import itertools
from fractions import Fraction

from .core import (
    AssignmentMatrix,
    DeterministicAssignment,
    Instance,
    Lottery,
    validate_matrix,
)
from .errors import ResourceLimitError
from .exactlp import LinearProgram, feasible, solve
from .rules import serial_dictatorship

DEFAULT_ENUMERATION_CAP = 6

AgentOrder = tuple[int, ...]
OrderWeights = tuple[tuple[AgentOrder, Fraction], ...]


def _checked_permutations(
    instance: Instance, m: AssignmentMatrix, cap: int
) -> list[tuple[int, ...]]:
    if instance.n > cap:
        raise ResourceLimitError(
            f"{instance.n} agents exceed the enumeration cap of {cap}"
        )
    if m.n != instance.n:
        raise ValueError(
            f"matrix is {m.n}x{m.n} but the instance has {instance.n} agents"
        )
    verdict = validate_matrix(m)
    if not verdict:
        raise ValueError(f"matrix is not bistochastic: {verdict.reason}")
    return list(itertools.permutations(range(instance.n)))


def _reconstruction_rows(
    m: AssignmentMatrix,
    perms: list[tuple[int, ...]],
    extra_vars: int = 0,
) -> list[tuple[list[Fraction], str, Fraction]]:
    """One equality per (agent, object) cell tying the columns to ``m``."""
    n = m.n
    tail = [Fraction(0)] * extra_vars
    rows = []
    for i in range(n):
        for o in range(n):
            coeffs = [Fraction(int(perm[i] == o)) for perm in perms]
            rows.append((coeffs + tail, "=", m[i][o]))
    return rows


def _envy_indicator_rows(
    instance: Instance, perms: list[tuple[int, ...]]
) -> list[list[Fraction]]:
    """Coefficient vectors, one per ordered agent pair, marking envious outcomes."""
    rows = []
    for i in range(instance.n):
        for k in range(instance.n):
            if i == k:
                continue
            rows.append(
                [
                    Fraction(int(instance.prefers(i, perm[k], perm[i])))
                    for perm in perms
                ]
            )
    return rows


def _lottery_from(
    perms: list[tuple[int, ...]], weights: tuple[Fraction, ...]
) -> Lottery:
    return Lottery(
        (DeterministicAssignment(perm), w)
        for perm, w in zip(perms, weights)
        if w
    )


def ef_decomposable(
    instance: Instance,
    m: AssignmentMatrix,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[bool, Lottery | None]:
    """Decide whether ``m`` admits a lottery with all envy entries <= 1/2.

    Feasibility is checked over one nonnegative weight per permutation,
    with the matrix-reconstruction equalities and one bound per ordered
    agent pair.  On success the feasible point is returned as a witness
    lottery; on failure the witness is None.
    """
    perms = _checked_permutations(instance, m, cap)
    rows = _reconstruction_rows(m, perms)
    half = Fraction(1, 2)
    for coeffs in _envy_indicator_rows(instance, perms):
        rows.append((coeffs, "<=", half))
    ok, point = feasible(LinearProgram(len(perms), rows))
    if not ok:
        return False, None
    return True, _lottery_from(perms, point)


def minimax_envy(
    instance: Instance,
    m: AssignmentMatrix,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Fraction, Lottery]:
    """Smallest envy bound any decomposition of ``m`` can achieve.

    Minimizes a single bound variable over the same feasible region as
    :func:`ef_decomposable` with the fixed 1/2 replaced by the variable.
    The matrix always decomposes somehow, so an optimum always exists;
    the returned lottery attains it exactly.
    """
    perms = _checked_permutations(instance, m, cap)
    rows = _reconstruction_rows(m, perms, extra_vars=1)
    minus_one = Fraction(-1)
    for coeffs in _envy_indicator_rows(instance, perms):
        rows.append((coeffs + [minus_one], "<=", Fraction(0)))
    objective = [Fraction(0)] * len(perms) + [Fraction(1)]
    result = solve(LinearProgram(len(perms) + 1, rows, objective=objective))
    assert result.status == "optimal", result.status
    return result.objective, _lottery_from(perms, result.solution[:-1])


def reversal_symmetric_implementable(
    instance: Instance,
    m: AssignmentMatrix,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[bool, OrderWeights | None]:
    """Decide whether ``m`` arises from a priority distribution that weighs
    every agent order equally with its reverse.

    Each reversal pair of orders shares one LP variable (the common
    weight of both members), which encodes the symmetry structurally.
    The witness lists every order with positive weight; weights sum to 1
    and running serial dictatorship under them averages back to ``m``.
    """
    _checked_permutations(instance, m, cap)
    n = instance.n
    pairs: list[tuple[AgentOrder, ...]] = []
    seen: set[AgentOrder] = set()
    for order in itertools.permutations(range(n)):
        if order in seen:
            continue
        reverse = order[::-1]
        seen.add(order)
        seen.add(reverse)
        pairs.append((order,) if order == reverse else (order, reverse))
    outcomes = {
        order: serial_dictatorship(instance, order)
        for pair in pairs
        for order in pair
    }
    rows: list[tuple[list[Fraction], str, Fraction]] = []
    for i in range(n):
        for o in range(n):
            coeffs = [
                Fraction(sum(int(outcomes[order][i] == o) for order in pair))
                for pair in pairs
            ]
            rows.append((coeffs, "=", m[i][o]))
    rows.append(
        ([Fraction(len(pair)) for pair in pairs], "=", Fraction(1))
    )
    ok, point = feasible(LinearProgram(len(pairs), rows))
    if not ok:
        return False, None
    witness = tuple(
        (order, weight)
        for pair, weight in zip(pairs, point)
        if weight
        for order in pair
    )
    return True, witness
