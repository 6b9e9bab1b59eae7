"""Batch sweeps over whole preference-profile spaces.

Profiles can be enumerated raw ((n!)^n of them) or up to symmetry: the
checked statements are invariant under relabeling objects and reordering
agents, so one representative per orbit of that product group suffices.
A representative is the orbit's lexicographically smallest encoding
(preference lists sorted, minimized over object relabelings), and the
enumerator yields exactly the self-representative profiles.

Verifiers return a :class:`SearchReport` carrying counts, a histogram of
the extremal envy statistic, and a failure list that is empty exactly
when the sweep's claim holds.  The priority-rule sweep has a vectorized
integer engine (numpy) for the raw four-agent space; envy there is
counted as "how many of the n! orders", so it stays exact.
"""

import itertools
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .core import (
    AssignmentMatrix,
    Instance,
    envy_matrix,
    matrix_of,
)
from .errors import ResourceLimitError
from .oracles import minimax_envy
from .rules import probabilistic_serial, random_priority

ENUMERATION_LIMIT = 5

Profile = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class SearchFailure:
    """One profile whose output broke the checked property."""

    instance: Instance
    matrix: AssignmentMatrix
    property_name: str
    certificate: object


@dataclass(frozen=True)
class SearchReport:
    check: str
    profiles_examined: int
    canonical_classes: int | None
    failures: tuple[SearchFailure, ...]
    wall_time: float
    minimax_summary: tuple[tuple[Fraction, int], ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def canonical_form(profile: Profile) -> Profile:
    """Smallest encoding of the profile's symmetry orbit.

    Sorting the preference lists minimizes over agent order; the outer
    min runs over all object relabelings.
    """
    n = len(profile)
    best: Profile | None = None
    for relabel in itertools.permutations(range(n)):
        image = tuple(
            sorted(tuple(relabel[o] for o in pref) for pref in profile)
        )
        if best is None or image < best:
            best = image
    return best


def enumerate_profiles(n: int, canonicalize: bool = False) -> Iterator[Instance]:
    """Yield every preference profile on n agents and n objects.

    With ``canonicalize`` the stream is thinned to one representative
    per symmetry class (still in lexicographic order).
    """
    if n < 2:
        raise ValueError("profiles need at least two agents")
    if n > ENUMERATION_LIMIT:
        raise ResourceLimitError(
            f"enumerating profiles for n={n} exceeds the n<={ENUMERATION_LIMIT} limit"
        )
    perms = list(itertools.permutations(range(n)))
    if canonicalize:
        for profile in itertools.combinations_with_replacement(perms, n):
            if canonical_form(profile) == profile:
                yield Instance(profile)
    else:
        for profile in itertools.product(perms, repeat=n):
            yield Instance(profile)


def _sampled_profiles(n: int, sample: int, seed: int | None) -> list[Instance]:
    rng = random.Random(seed)
    perms = list(itertools.permutations(range(n)))
    return [
        Instance(tuple(rng.choice(perms) for _ in range(n)))
        for _ in range(sample)
    ]


def _gather_instances(
    n: int, canonicalize: bool, sample: int | None, seed: int | None
) -> tuple[list[Instance], int | None]:
    if sample is not None:
        return _sampled_profiles(n, sample, seed), None
    instances = list(enumerate_profiles(n, canonicalize))
    return instances, (len(instances) if canonicalize else None)


def _first_violation(
    instance: Instance, e, bound: Fraction
) -> tuple[int, int, Fraction] | None:
    for i in range(instance.n):
        for k in range(instance.n):
            if i != k and e[i][k] > bound:
                return (i, k, e[i][k])
    return None


def _ps_chunk(args) -> tuple[list[SearchFailure], list[tuple[Fraction, int]]]:
    instances, bound = args
    failures: list[SearchFailure] = []
    histogram: Counter[Fraction] = Counter()
    for instance in instances:
        m = probabilistic_serial(instance)
        value, _ = minimax_envy(instance, m)
        histogram[value] += 1
        if value > bound:
            failures.append(
                SearchFailure(instance, m, "ef-decomposable", value)
            )
    return failures, sorted(histogram.items())


def _rp_chunk(args) -> tuple[list[SearchFailure], list[tuple[Fraction, int]]]:
    instances, bound = args
    failures: list[SearchFailure] = []
    histogram: Counter[Fraction] = Counter()
    for instance in instances:
        lot = random_priority(instance)
        e = envy_matrix(instance, lot)
        worst = max(
            (e[i][k] for i in range(instance.n) for k in range(instance.n)),
            default=Fraction(0),
        )
        histogram[worst] += 1
        if worst > bound:
            violation = _first_violation(instance, e, bound)
            failures.append(
                SearchFailure(instance, matrix_of(lot), "dec-ef", violation)
            )
    return failures, sorted(histogram.items())


def _run_chunks(worker, instances, bound, jobs):
    if jobs <= 1 or len(instances) < 2 * jobs:
        return [worker((instances, bound))]
    chunks = [
        (instances[start::jobs], bound) for start in range(jobs)
    ]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, chunks))


def _merged_report(
    check: str,
    results,
    examined: int,
    classes: int | None,
    started: float,
) -> SearchReport:
    failures: list[SearchFailure] = []
    histogram: Counter[Fraction] = Counter()
    for chunk_failures, chunk_histogram in results:
        failures.extend(chunk_failures)
        histogram.update(dict(chunk_histogram))
    failures.sort(key=lambda f: f.instance.preferences)
    return SearchReport(
        check=check,
        profiles_examined=examined,
        canonical_classes=classes,
        failures=tuple(failures),
        wall_time=time.perf_counter() - started,
        minimax_summary=tuple(sorted(histogram.items())),
    )


def verify_ps_ef_decomposable(
    n: int,
    *,
    canonicalize: bool = True,
    sample: int | None = None,
    seed: int | None = None,
    jobs: int = 1,
    envy_bound: Fraction = Fraction(1, 2),
) -> SearchReport:
    """Sweep the eating rule's outputs for decompositions within the bound.

    For each profile the sweep solves one minimax-envy LP; the profile
    fails when the optimum exceeds ``envy_bound`` (the optimum then
    certifies that no decomposition meets it).  The LP values double as
    the report's histogram.
    """
    started = time.perf_counter()
    instances, classes = _gather_instances(n, canonicalize, sample, seed)
    results = _run_chunks(_ps_chunk, instances, envy_bound, jobs)
    return _merged_report(
        "ps-ef-decomposable", results, len(instances), classes, started
    )


def verify_rp_dec_ef(
    n: int,
    *,
    canonicalize: bool = False,
    sample: int | None = None,
    seed: int | None = None,
    jobs: int = 1,
    envy_bound: Fraction = Fraction(1, 2),
) -> SearchReport:
    """Sweep the priority rule's lotteries for envy within the bound.

    Raw sweeps (no canonicalization, no sampling) run on the vectorized
    integer engine when numpy is available; it counts, per ordered agent
    pair, the priority orders that leave the first agent envious, which
    matches the exact envy probabilities at denominator n!.  The engine
    is single-pass, so ``jobs`` only affects the pure-Python path.
    """
    started = time.perf_counter()
    if sample is None and not canonicalize:
        try:
            import numpy
        except ImportError:
            numpy = None
        if numpy is not None:
            if n > ENUMERATION_LIMIT:
                raise ResourceLimitError(
                    f"enumerating profiles for n={n} exceeds the "
                    f"n<={ENUMERATION_LIMIT} limit"
                )
            failures, histogram, examined = _rp_vector_sweep(n, envy_bound)
            return _merged_report(
                "rp-dec-ef", [(failures, histogram)], examined, None, started
            )
    instances, classes = _gather_instances(n, canonicalize, sample, seed)
    results = _run_chunks(_rp_chunk, instances, envy_bound, jobs)
    return _merged_report("rp-dec-ef", results, len(instances), classes, started)


def _rp_vector_sweep(
    n: int, bound: Fraction
) -> tuple[list[SearchFailure], list[tuple[Fraction, int]], int]:
    """Exact whole-space priority sweep on integer arrays.

    Every profile is a base-n! digit string; serial dictatorship under
    each order is replayed for all profiles at once via a (ranking,
    available-set) -> pick table.  Envy probabilities are order counts
    over n!, compared against ``floor(bound * n!)`` exactly.
    """
    import numpy as np

    perms = list(itertools.permutations(range(n)))
    count = len(perms)
    factorial = math.factorial(n)
    best_in_set = np.zeros((count, 1 << n), dtype=np.int8)
    rank = np.zeros((count, n), dtype=np.int8)
    for p_i, perm in enumerate(perms):
        for pos, obj in enumerate(perm):
            rank[p_i][obj] = pos
        for mask in range(1, 1 << n):
            best_in_set[p_i][mask] = next(o for o in perm if mask >> o & 1)
    total = count**n
    flat = np.arange(total)
    agent_pref = [
        (flat // count ** (n - 1 - agent)) % count for agent in range(n)
    ]
    pair_counts = {
        (i, k): np.zeros(total, dtype=np.int16)
        for i in range(n)
        for k in range(n)
        if i != k
    }
    outcome = [None] * n
    for order in itertools.permutations(range(n)):
        available = np.full(total, (1 << n) - 1, dtype=np.int16)
        for agent in order:
            pick = best_in_set[agent_pref[agent], available]
            outcome[agent] = pick
            available &= ~np.left_shift(1, pick)
        for i in range(n):
            own_rank = rank[agent_pref[i], outcome[i]]
            for k in range(n):
                if k != i:
                    pair_counts[(i, k)] += (
                        rank[agent_pref[i], outcome[k]] < own_rank
                    )
    threshold = math.floor(bound * factorial)
    if pair_counts:
        worst = np.maximum.reduce(list(pair_counts.values()))
    else:
        worst = np.zeros(total, dtype=np.int16)
    histogram = [
        (Fraction(value, factorial), int(times))
        for value, times in enumerate(np.bincount(worst, minlength=1))
        if times
    ]
    failures = []
    for index in np.nonzero(worst > threshold)[0]:
        profile = tuple(
            perms[int(agent_pref[agent][index])] for agent in range(n)
        )
        instance = Instance(profile)
        lot = random_priority(instance)
        violation = _first_violation(
            instance, envy_matrix(instance, lot), bound
        )
        failures.append(
            SearchFailure(instance, matrix_of(lot), "dec-ef", violation)
        )
    return failures, histogram, total
