"""Constructive decompositions of bistochastic matrices into lotteries.

Four procedures with different preconditions and guarantees:

* ``birkhoff``: generic peeling, works on any bistochastic matrix; no
  fairness guarantee beyond reconstructing the input.
* ``uniform_decomposition``: every assignment equally likely.
* ``decompose_three_agent``: three agents, envy-bounded output on any
  matrix whose rows dominate each other (a uniform layer is taken out
  first, and the remainder peels uniquely once a zero entry appears).
* ``decompose_two_type``: at most two distinct preference lists; builds a
  shift-and-reflect family around a support permutation each round, which
  symmetrizes the outcome within each preference group and bounds envy
  across groups.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from math import factorial

from .core import (
    AssignmentMatrix,
    DeterministicAssignment,
    Instance,
    Lottery,
    validate_matrix,
)
from .errors import PreconditionError, ResourceLimitError
from .matching import perfect_matching_on_support
from .properties import is_sd_ef, sd_dominates

__all__ = [
    "birkhoff",
    "uniform_decomposition",
    "decompose_three_agent",
    "TwoTypeStructure",
    "detect_two_type",
    "decompose_two_type",
    "claim1_diagnostic",
]


def _peel(rows, matching_chooser
          ) -> list[tuple[DeterministicAssignment, Fraction]]:
    """Strip weighted permutations off a nonnegative matrix until it is zero.

    Requires equal row and column sums (any common value); the weights
    returned sum to that value.
    """
    residual = [list(row) for row in rows]
    n = len(residual)
    parts: list[tuple[DeterministicAssignment, Fraction]] = []
    while any(v for row in residual for v in row):
        if matching_chooser is None:
            sigma = perfect_matching_on_support(residual)
        else:
            sigma = matching_chooser(tuple(tuple(row) for row in residual))
        if sigma is None or any(residual[i][sigma[i]] == 0 for i in range(n)):
            raise ValueError("no support matching on the current residual")
        alpha = min(residual[i][sigma[i]] for i in range(n))
        parts.append((sigma, alpha))
        for i in range(n):
            residual[i][sigma[i]] -= alpha
    return parts


def birkhoff(m: AssignmentMatrix, *, matching_chooser=None) -> Lottery:
    """Decompose a bistochastic matrix by repeated support-matching peels.

    The default peel takes the lexicographically smallest support matching
    every round, so the output is deterministic.  ``matching_chooser`` may
    override the selection (it receives the residual rows and must return
    a matching supported on them); any choice reconstructs the input
    exactly and uses at most n^2 - 2n + 2 peels.
    """
    check = validate_matrix(m)
    if not check:
        raise ValueError(f"matrix is not bistochastic: {check.reason}")
    return Lottery(_peel(m.rows, matching_chooser))


def uniform_decomposition(n: int, cap: int = 8) -> Lottery:
    """The lottery placing weight 1/n! on every deterministic assignment."""
    if n < 1:
        raise ValueError("need at least one agent")
    if n > cap:
        raise ResourceLimitError(f"{n}! assignments exceed the cap of {cap} agents")
    weight = Fraction(1, factorial(n))
    return Lottery(
        (DeterministicAssignment(p), weight) for p in permutations(range(n))
    )


def decompose_three_agent(instance: Instance, m: AssignmentMatrix) -> Lottery:
    """Envy-bounded decomposition for exactly three agents.

    Peels off a uniform layer of the minimum entry (half the minimum on
    each of the six assignments), leaving a matrix with a zero entry whose
    decomposition is forced.  The combined lottery keeps every pairwise
    envy probability at or below 1/2 provided the input rows dominate each
    other, which is why non-dominating input is rejected.
    """
    if instance.n != 3:
        raise ValueError(f"needs exactly three agents, got {instance.n}")
    check = validate_matrix(m)
    if not check:
        raise ValueError(f"matrix is not bistochastic: {check.reason}")
    if m.n != 3:
        raise ValueError(f"matrix size {m.n} does not match the instance")
    if not is_sd_ef(instance, m):
        raise PreconditionError(
            "sd-ef", "some row fails to dominate another row"
        )
    smallest = min(v for row in m.rows for v in row)
    half = smallest / 2
    parts = [(DeterministicAssignment(p), half) for p in permutations(range(3))]
    residual = [[v - smallest for v in row] for row in m.rows]
    parts.extend(_peel(residual, None))
    return Lottery(parts)


@dataclass(frozen=True)
class TwoTypeStructure:
    """Grouping of agents into at most two preference types.

    ``first_type`` is the group containing agent 0; with a single distinct
    preference list the highest-index agent is split off as the second
    type.  When built from a matrix, ``a[j]`` / ``b[j]`` hold the total
    probability of object j going to the first / second group.
    """

    r: int
    s: int
    first_type: tuple[int, ...]
    second_type: tuple[int, ...]
    first_preference: tuple[int, ...]
    second_preference: tuple[int, ...]
    a: tuple[Fraction, ...] | None = None
    b: tuple[Fraction, ...] | None = None

    def __post_init__(self) -> None:
        n = self.r + self.s
        if self.r < 1 or self.s < 1:
            raise ValueError("both types must be nonempty")
        if sorted(self.first_type + self.second_type) != list(range(n)):
            raise ValueError("types must partition the agents")
        if (self.a is None) != (self.b is None):
            raise ValueError("a and b must be given together")
        if self.a is not None:
            if len(self.a) != n or len(self.b) != n:
                raise ValueError("per-object masses must have length n")
            if any(aj + bj != 1 for aj, bj in zip(self.a, self.b)):
                raise ValueError("group masses of each object must sum to 1")
            if sum(self.a) != self.r:
                raise ValueError("first-group masses must sum to the group size")


def detect_two_type(
    instance: Instance, matrix: AssignmentMatrix | None = None
) -> TwoTypeStructure | None:
    """Group agents by preference list; None when there are three or more lists.

    With a matrix supplied, per-object group masses are filled in, after
    checking that rows agree within each group.
    """
    n = instance.n
    first_preference = instance.preferences[0]
    first = [i for i in range(n) if instance.preferences[i] == first_preference]
    rest = [i for i in range(n) if instance.preferences[i] != first_preference]
    if rest:
        second_preference = instance.preferences[rest[0]]
        if any(instance.preferences[i] != second_preference for i in rest):
            return None
        second = rest
    else:
        second_preference = first_preference
        second = [first.pop()]  # one list only: split off the last agent
    a = b = None
    if matrix is not None:
        if matrix.n != n:
            raise ValueError(f"matrix size {matrix.n} does not match the instance")
        for group in (first, second):
            rows = {matrix[i] for i in group}
            if len(rows) > 1:
                raise PreconditionError(
                    "type-rows-identical",
                    "agents sharing a preference list have differing rows",
                )
        a = tuple(sum(matrix[i][j] for i in first) for j in range(n))
        b = tuple(sum(matrix[i][j] for i in second) for j in range(n))
    return TwoTypeStructure(
        r=len(first),
        s=len(second),
        first_type=tuple(first),
        second_type=tuple(second),
        first_preference=first_preference,
        second_preference=second_preference,
        a=a,
        b=b,
    )


def claim1_diagnostic(structure: TwoTypeStructure) -> bool:
    """Prefix test on the first group's object masses, best objects first.

    With masses reordered by the first group's preference list, every
    prefix sum of (mass of the j-th best minus mass of the j-th worst)
    must be nonnegative.  Holds whenever the matrix rows dominate each
    other, and certifies the envy bound of the two-type decomposition.
    """
    if structure.a is None:
        raise ValueError("structure carries no per-object masses")
    ordered = [structure.a[obj] for obj in structure.first_preference]
    n = len(ordered)
    partial = Fraction(0)
    for t in range(n):
        partial += ordered[t] - ordered[n - 1 - t]
        if partial < 0:
            return False
    return True


def _as_assignment(value) -> DeterministicAssignment:
    if isinstance(value, DeterministicAssignment):
        return value
    return DeterministicAssignment(tuple(value))


def _shift_reflect_family(block: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All cyclic row-shifts of the block and of its reversal, duplicates kept."""
    k = len(block)
    variants = []
    for source in (block, block[::-1]):
        for c in range(k):
            variants.append(tuple(source[(pos + c) % k] for pos in range(k)))
    return variants


def _two_type_rounds(
    instance: Instance,
    m: AssignmentMatrix,
    structure: TwoTypeStructure,
    q_sequence,
    q_chooser,
):
    """Run the peeling rounds; yields (assignment, weight) with multiplicity."""
    n = instance.n
    order = structure.first_type + structure.second_type
    r, s = structure.r, structure.s
    row_one = list(m[structure.first_type[0]])
    row_two = list(m[structure.second_type[0]])
    pending = list(q_sequence or [])
    rounds = 0
    while any(row_one) or any(row_two):
        rounds += 1
        assert rounds <= n + 1, "peeling failed to terminate on schedule"
        full = [
            list(row_one) if i in structure.first_type else list(row_two)
            for i in range(n)
        ]
        if pending:
            q = _as_assignment(pending.pop(0))
            if any(full[i][q[i]] == 0 for i in range(n)):
                raise ValueError(
                    f"override assignment {q.objects} leaves the "
                    "support of the current residual"
                )
        elif q_chooser is not None:
            q = _as_assignment(q_chooser(full))
            if any(full[i][q[i]] == 0 for i in range(n)):
                raise ValueError("chosen assignment leaves the residual support")
        else:
            q = perfect_matching_on_support(full)
            assert q is not None
        top = _shift_reflect_family(tuple(q[i] for i in structure.first_type))
        bottom = _shift_reflect_family(tuple(q[i] for i in structure.second_type))
        sum_one = [0] * n
        sum_two = [0] * n
        for variant in top:
            sum_one[variant[0]] += 2 * s
        for variant in bottom:
            sum_two[variant[0]] += 2 * r
        alpha = min(
            [row_one[j] / sum_one[j] for j in range(n) if sum_one[j]]
            + [row_two[j] / sum_two[j] for j in range(n) if sum_two[j]]
        )
        for top_variant in top:
            for bottom_variant in bottom:
                objects = [0] * n
                for pos, obj in enumerate(top_variant + bottom_variant):
                    objects[order[pos]] = obj
                yield DeterministicAssignment(objects), alpha
        for j in range(n):
            row_one[j] -= alpha * sum_one[j]
            row_two[j] -= alpha * sum_two[j]


def decompose_two_type(
    instance: Instance,
    m: AssignmentMatrix,
    q_sequence=None,
    *,
    q_chooser=None,
) -> Lottery:
    """Envy-bounded decomposition when agents hold at most two preference lists.

    Each round picks a support permutation (the smallest one, unless
    ``q_sequence`` or ``q_chooser`` overrides it), fans it out into the
    family of cyclic shifts and reflections within each group, and
    subtracts the largest multiple of the family that fits in the
    residual.  Group-internal symmetry of the family is what caps envy
    between agents of the same group; prefix domination of the input caps
    it across groups.  At most n+1 rounds, so the support holds at most
    4rs(n+1) assignments.
    """
    probe = detect_two_type(instance)
    if probe is None:
        raise PreconditionError(
            "two-type", "agents hold three or more distinct preference lists"
        )
    check = validate_matrix(m)
    if not check:
        raise PreconditionError(
            "bistochastic", f"matrix is not bistochastic: {check.reason}"
        )
    if m.n != instance.n:
        raise ValueError(f"matrix size {m.n} does not match the instance")
    structure = detect_two_type(instance, matrix=m)
    # Rows agree within each group, so full SD envy-freeness reduces to
    # the two representative rows dominating each other.
    row_one = m[structure.first_type[0]]
    row_two = m[structure.second_type[0]]
    if not (
        sd_dominates(row_one, row_two, structure.first_preference)
        and sd_dominates(row_two, row_one, structure.second_preference)
    ):
        raise PreconditionError(
            "sd-ef", "some row fails to dominate another row"
        )
    assert claim1_diagnostic(structure)
    return Lottery(
        _two_type_rounds(instance, m, structure, q_sequence, q_chooser)
    )
