"""Assignment rules: serial dictatorship, Random Priority, Probabilistic Serial.

Random Priority averages serial dictatorship over every priority order, so
its output is a lottery.  Probabilistic Serial simulates simultaneous eating
at unit speed with exact rational clocks and returns only the resulting
assignment matrix; choosing a lottery that realizes the matrix is left to
the decomposers.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import NamedTuple

from .core import AssignmentMatrix, DeterministicAssignment, Instance, Lottery
from .errors import ResourceLimitError

__all__ = ["serial_dictatorship", "random_priority", "probabilistic_serial"]


def serial_dictatorship(
    instance: Instance, order: tuple[int, ...]
) -> DeterministicAssignment:
    """Let agents pick their favourite remaining object, one by one in order."""
    order = tuple(order)
    if sorted(order) != list(range(instance.n)):
        raise ValueError(f"order {order!r} is not a permutation of the agents")
    available = set(range(instance.n))
    objects: list[int] = [-1] * instance.n
    for agent in order:
        pick = instance.best(agent, available)
        objects[agent] = pick
        available.remove(pick)
    return DeterministicAssignment(objects)


def random_priority(instance: Instance, cap: int = 8) -> Lottery:
    """Uniform mixture of serial dictatorship over all priority orders.

    Exact enumeration of all n! orders; raises ResourceLimitError when the
    instance is larger than ``cap`` agents.
    """
    n = instance.n
    if n > cap:
        raise ResourceLimitError(
            f"{n} agents would need {n}! priority orders; cap is {cap}"
        )
    weight = Fraction(1, factorial(n))
    return Lottery(
        (serial_dictatorship(instance, order), weight)
        for order in permutations(range(n))
    )


class _EatingEvent(NamedTuple):
    clock: Fraction
    depleted: tuple[int, ...]
    total_eaten: Fraction


def _simulate_eating(
    instance: Instance,
) -> tuple[list[list[Fraction]], list[_EatingEvent]]:
    n = instance.n
    remaining = {obj: Fraction(1) for obj in range(n)}
    eaten = [[Fraction(0)] * n for _ in range(n)]
    clock = Fraction(0)
    events: list[_EatingEvent] = []
    while remaining:
        targets = [instance.best(i, remaining) for i in range(n)]
        eaters = Counter(targets)
        step = min(remaining[obj] / count for obj, count in eaters.items())
        clock += step
        for agent, obj in enumerate(targets):
            eaten[agent][obj] += step
        depleted = []
        for obj, count in eaters.items():
            remaining[obj] -= step * count
            if remaining[obj] == 0:
                depleted.append(obj)
        # Simultaneous depletions leave in one event, so the trace is
        # independent of dict iteration order.
        for obj in depleted:
            del remaining[obj]
        events.append(
            _EatingEvent(clock, tuple(sorted(depleted)), sum(map(sum, eaten)))
        )
    return eaten, events


def probabilistic_serial(instance: Instance) -> AssignmentMatrix:
    """Simultaneous eating at unit speed; entries are the masses eaten."""
    eaten, _ = _simulate_eating(instance)
    return AssignmentMatrix(eaten)
