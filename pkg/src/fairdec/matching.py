"""Perfect matchings on the positive support of a square matrix.

The decomposition routines repeatedly need a permutation that stays inside
the support of a (possibly scaled) nonnegative matrix.  The selection here
is deterministic: among all support matchings, the lexicographically
smallest assignment vector is returned, so decompositions are reproducible
across runs and platforms.
"""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from fractions import Fraction

from .core import DeterministicAssignment, as_rational

__all__ = ["perfect_matching_on_support", "iter_support_matchings"]


def _support_rows(m) -> list[list[bool]]:
    rows = m.rows if hasattr(m, "rows") else [list(row) for row in m]
    n = len(rows)
    if n == 0:
        raise ValueError("matrix is empty")
    support = []
    for row in rows:
        entries = [as_rational(v) if not isinstance(v, Fraction) else v for v in row]
        if len(entries) != n:
            raise ValueError(f"matrix is not square: {n} rows, a row of {len(entries)}")
        support.append([v > 0 for v in entries])
    return support


def _can_complete(
    support: Sequence[Sequence[bool]], start_agent: int, taken: list[bool]
) -> bool:
    """Whether agents start_agent..n-1 can be matched to the free objects."""
    n = len(support)
    owner = [-1] * n  # object -> agent among start_agent..n-1, or -1

    def augment(agent: int, seen: list[bool]) -> bool:
        for obj in range(n):
            if support[agent][obj] and not taken[obj] and not seen[obj]:
                seen[obj] = True
                if owner[obj] == -1 or augment(owner[obj], seen):
                    owner[obj] = agent
                    return True
        return False

    for agent in range(start_agent, n):
        if not augment(agent, [False] * n):
            return False
    return True


def perfect_matching_on_support(m) -> DeterministicAssignment | None:
    """Lexicographically smallest permutation supported on positive entries.

    Accepts an AssignmentMatrix or any square grid of nonnegative rationals.
    Returns ``None`` when the support admits no perfect matching (for
    instance after a row goes entirely to zero).
    """
    support = _support_rows(m)
    n = len(support)
    taken = [False] * n
    chosen: list[int] = []
    for agent in range(n):
        for obj in range(n):
            if not support[agent][obj] or taken[obj]:
                continue
            taken[obj] = True
            if _can_complete(support, agent + 1, taken):
                chosen.append(obj)
                break
            taken[obj] = False
        else:
            return None
    return DeterministicAssignment(chosen)


def iter_support_matchings(m) -> Iterator[DeterministicAssignment]:
    """All support matchings, in lexicographic order of assignment vector."""
    support = _support_rows(m)
    n = len(support)
    taken = [False] * n
    chosen: list[int] = []

    def extend(agent: int) -> Iterator[DeterministicAssignment]:
        if agent == n:
            yield DeterministicAssignment(chosen)
            return
        for obj in range(n):
            if support[agent][obj] and not taken[obj]:
                taken[obj] = True
                chosen.append(obj)
                yield from extend(agent + 1)
                chosen.pop()
                taken[obj] = False

    return extend(0)
