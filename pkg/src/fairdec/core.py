"""Domain model for random assignment with exact rational arithmetic.

An instance pairs n agents with n objects (n >= 2); every agent holds a
strict ranking of all objects.  Outcomes come in three shapes:

* :class:`DeterministicAssignment` -- a permutation giving each agent one
  object;
* :class:`Lottery` -- an explicit probability distribution over
  deterministic assignments;
* :class:`AssignmentMatrix` -- the marginal probabilities ``p[i][j]`` that
  agent ``i`` receives object ``j``.

All probabilities are :class:`fractions.Fraction` values.  Floats are
refused at the boundary (:func:`as_rational`) because binary floating
point cannot represent most decimal probabilities and would poison the
exact comparisons everything downstream relies on.

Agents and objects are 0-indexed throughout the library; 1-indexed labels
appear only in file formats and CLI output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

HALF = Fraction(1, 2)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ``value`` to an exact rational.

    Accepts Fractions, ints, and strings such as ``"2/3"`` or ``"0.4"``
    (decimal strings parse exactly: ``as_rational("0.4") == Fraction(2, 5)``).
    Floats raise ``TypeError``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError(
            f"refusing float {value!r}: pass a string, int, or Fraction instead"
        )
    if isinstance(value, (int, str)):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot interpret {type(value).__name__} as a rational")


@dataclass(frozen=True, init=False)
class Instance:
    """An assignment problem: ``preferences[i]`` ranks the objects best first.

    Each preference list must be a permutation of ``0..n-1`` where ``n`` is
    both the agent count and the object count.
    """

    preferences: tuple[tuple[int, ...], ...]

    def __init__(self, preferences: Iterable[Sequence[int]]) -> None:
        prefs = tuple(tuple(p) for p in preferences)
        n = len(prefs)
        if n < 2:
            raise ValueError("an instance needs at least two agents")
        expected = list(range(n))
        for i, pref in enumerate(prefs):
            if sorted(pref) != expected:
                raise ValueError(
                    f"agent {i}: preference list {pref} is not a permutation of 0..{n - 1}"
                )
        object.__setattr__(self, "preferences", prefs)
        ranks = []
        for pref in prefs:
            rank = [0] * n
            for position, obj in enumerate(pref):
                rank[obj] = position
            ranks.append(tuple(rank))
        object.__setattr__(self, "_ranks", tuple(ranks))

    @property
    def n(self) -> int:
        return len(self.preferences)

    def rank(self, agent: int, obj: int) -> int:
        """Position of ``obj`` in ``agent``'s ranking; 0 is the favourite."""
        return self._ranks[agent][obj]  # type: ignore[attr-defined]

    def prefers(self, agent: int, obj: int, over: int) -> bool:
        """True iff ``agent`` strictly ranks ``obj`` above ``over``."""
        ranks = self._ranks[agent]  # type: ignore[attr-defined]
        return ranks[obj] < ranks[over]

    def best(self, agent: int, available: Iterable[int]) -> int:
        """The agent's top-ranked object among ``available``."""
        ranks = self._ranks[agent]  # type: ignore[attr-defined]
        return min(available, key=ranks.__getitem__)


@dataclass(frozen=True, order=True, init=False)
class DeterministicAssignment:
    """A permutation outcome: agent ``i`` receives object ``objects[i]``."""

    objects: tuple[int, ...]

    def __init__(self, objects: Iterable[int]) -> None:
        objs = tuple(objects)
        if sorted(objs) != list(range(len(objs))):
            raise ValueError(f"{objs} does not give every agent a distinct object")
        object.__setattr__(self, "objects", objs)

    @property
    def n(self) -> int:
        return len(self.objects)

    def __getitem__(self, agent: int) -> int:
        return self.objects[agent]


@dataclass(frozen=True, init=False)
class AssignmentMatrix:
    """A square matrix of exact probabilities; rows are agents, columns objects.

    Construction checks only shape and entry type, so decomposition
    residuals (nonnegative, equal row/column sums below 1) can share the
    type.  Bistochasticity is a separate check: :func:`validate_matrix`.
    """

    rows: tuple[tuple[Fraction, ...], ...]

    def __init__(self, rows: Iterable[Iterable[RationalLike]]) -> None:
        converted = tuple(tuple(as_rational(x) for x in row) for row in rows)
        n = len(converted)
        if n == 0:
            raise ValueError("matrix must be non-empty")
        for i, row in enumerate(converted):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
        object.__setattr__(self, "rows", converted)

    @classmethod
    def uniform(cls, n: int) -> "AssignmentMatrix":
        """The n x n matrix with every entry 1/n."""
        value = Fraction(1, n)
        return cls([[value] * n for _ in range(n)])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, agent: int) -> tuple[Fraction, ...]:
        return self.rows[agent]


@dataclass(frozen=True)
class MatrixValidation:
    """Outcome of :func:`validate_matrix`; truthy iff the matrix is bistochastic.

    ``reason`` is a stable code (``"negative-entry"``, ``"row-sum"``,
    ``"column-sum"``) and ``detail`` a human-readable location.
    """

    ok: bool
    reason: str | None = None
    detail: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_matrix(matrix: AssignmentMatrix) -> MatrixValidation:
    """Check that ``matrix`` is bistochastic.

    Returns a truthy :class:`MatrixValidation` on success and a falsy one
    carrying a reason code otherwise.  Entry upper bounds need no separate
    check: nonnegative entries in a unit-sum row cannot exceed 1.
    """
    n = matrix.n
    for i, row in enumerate(matrix.rows):
        for j, entry in enumerate(row):
            if entry < 0:
                return MatrixValidation(
                    False, "negative-entry", f"entry ({i}, {j}) is {entry}"
                )
    for i, row in enumerate(matrix.rows):
        total = sum(row)
        if total != 1:
            return MatrixValidation(False, "row-sum", f"row {i} sums to {total}")
    for j in range(n):
        total = sum(matrix.rows[i][j] for i in range(n))
        if total != 1:
            return MatrixValidation(False, "column-sum", f"column {j} sums to {total}")
    return MatrixValidation(True)


@dataclass(frozen=True, init=False)
class Lottery:
    """A probability distribution over deterministic assignments.

    ``support`` holds ``(assignment, weight)`` pairs.  Construction merges
    duplicate assignments, drops zero weights, and sorts the support, so
    two lotteries describing the same distribution compare equal.  Weights
    must be nonnegative and sum to exactly 1.
    """

    support: tuple[tuple[DeterministicAssignment, Fraction], ...]

    def __init__(
        self, support: Iterable[tuple[DeterministicAssignment, RationalLike]]
    ) -> None:
        merged: dict[DeterministicAssignment, Fraction] = {}
        for assignment, weight in support:
            w = as_rational(weight)
            if w < 0:
                raise ValueError(f"negative weight {w} on {assignment.objects}")
            if w == 0:
                continue
            merged[assignment] = merged.get(assignment, Fraction(0)) + w
        if not merged:
            raise ValueError("lottery has no positive-weight entries")
        sizes = {a.n for a in merged}
        if len(sizes) != 1:
            raise ValueError("lottery mixes assignments of different sizes")
        total = sum(merged.values())
        if total != 1:
            raise ValueError(f"lottery weights sum to {total}, not 1")
        entries = tuple(sorted(merged.items()))
        object.__setattr__(self, "support", entries)

    @property
    def n(self) -> int:
        return self.support[0][0].n

    def __iter__(self) -> Iterator[tuple[DeterministicAssignment, Fraction]]:
        return iter(self.support)

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True, init=False)
class EnvyMatrix:
    """Pairwise envy probabilities under a lottery.

    ``entries[i][i2]`` is the probability that agent ``i`` strictly
    prefers the object drawn for ``i2`` to its own.  The diagonal is 0 and
    every entry lies in [0, 1].
    """

    entries: tuple[tuple[Fraction, ...], ...]

    def __init__(self, entries: Iterable[Iterable[RationalLike]]) -> None:
        converted = tuple(tuple(as_rational(x) for x in row) for row in entries)
        n = len(converted)
        for i, row in enumerate(converted):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
            if row[i] != 0:
                raise ValueError(f"diagonal entry ({i}, {i}) must be 0")
            for j, entry in enumerate(row):
                if not 0 <= entry <= 1:
                    raise ValueError(f"entry ({i}, {j}) = {entry} outside [0, 1]")
        object.__setattr__(self, "entries", converted)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, agent: int) -> tuple[Fraction, ...]:
        return self.entries[agent]

    def max_entry(self) -> tuple[Fraction, int, int]:
        """The largest envy probability and the ordered pair attaining it."""
        best = (Fraction(0), 0, 1 if self.n > 1 else 0)
        for i, row in enumerate(self.entries):
            for j, entry in enumerate(row):
                if i != j and entry > best[0]:
                    best = (entry, i, j)
        return best


def _check_sizes(instance: Instance, n: int) -> None:
    if instance.n != n:
        raise ValueError(f"instance has {instance.n} agents but outcome has {n}")


def envies(
    instance: Instance, assignment: DeterministicAssignment, i: int, i2: int
) -> bool:
    """True iff agent ``i`` strictly prefers ``i2``'s object to its own."""
    if i == i2:
        raise ValueError("envy is defined between two distinct agents")
    n = instance.n
    _check_sizes(instance, assignment.n)
    if not (0 <= i < n and 0 <= i2 < n):
        raise ValueError(f"agent index out of range for n={n}: ({i}, {i2})")
    return instance.prefers(i, assignment[i2], assignment[i])


def envy_matrix(instance: Instance, lottery: Lottery) -> EnvyMatrix:
    """Aggregate lottery weights into the pairwise envy-probability matrix."""
    n = instance.n
    _check_sizes(instance, lottery.n)
    # Accumulate integer numerators over the weights' common denominator;
    # exact, and far cheaper than repeated Fraction addition.
    den = 1
    for _, weight in lottery:
        den = lcm(den, weight.denominator)
    ranks = instance._ranks  # type: ignore[attr-defined]
    totals = [[0] * n for _ in range(n)]
    for assignment, weight in lottery:
        scaled = weight.numerator * (den // weight.denominator)
        objs = assignment.objects
        for i in range(n):
            rank_row = ranks[i]
            own = rank_row[objs[i]]
            row = totals[i]
            for i2 in range(n):
                if i2 != i and rank_row[objs[i2]] < own:
                    row[i2] += scaled
    return EnvyMatrix([[Fraction(v, den) for v in row] for row in totals])


def is_dec_ef(instance: Instance, lottery: Lottery) -> bool:
    """True iff every ordered pair's envy probability is at most 1/2."""
    matrix = envy_matrix(instance, lottery)
    return all(
        entry <= HALF for row in matrix.entries for entry in row
    )


def matrix_of(lottery: Lottery) -> AssignmentMatrix:
    """The assignment matrix of marginals induced by ``lottery``."""
    n = lottery.n
    den = 1
    for _, weight in lottery:
        den = lcm(den, weight.denominator)
    rows = [[0] * n for _ in range(n)]
    for assignment, weight in lottery:
        scaled = weight.numerator * (den // weight.denominator)
        for agent, obj in enumerate(assignment.objects):
            rows[agent][obj] += scaled
    return AssignmentMatrix([[Fraction(v, den) for v in row] for row in rows])
