"""Exact rational linear programming.

A dense two-phase simplex over :class:`fractions.Fraction` with Bland's
anti-cycling pivot rule.  Problem sizes in this library stay small (at
most a few dozen rows and a few hundred columns, from enumerating
permutations up to n = 6), so a dense tableau is the right tool; there is
no floating point anywhere.

Every terminal status is certified and the certificate is re-checked by
exact substitution before the result is returned:

* ``optimal``   -- dual values and reduced costs satisfying feasibility,
  sign conditions, complementary slackness, and strong duality;
* ``infeasible`` -- a Farkas vector built from the phase-one duals;
* ``unbounded`` -- an improving ray.

Certificate conventions are stated for the minimization form; a
maximization problem is solved by negating the objective, and its
certificate refers to the negated (minimized) objective.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from fairdec.core import RationalLike, as_rational

RELATIONS = ("<=", "=", ">=")

Row = tuple[tuple[Fraction, ...], str, Fraction]


@dataclass(frozen=True, init=False)
class LinearProgram:
    """``min/max objective . x`` subject to ``rows`` and ``x >= lower_bounds``.

    Each row is ``(coefficients, relation, rhs)`` with relation one of
    ``"<="``, ``"="``, ``">="``.  Lower bounds default to 0 for every
    variable; there are no implicit upper bounds.
    """

    num_vars: int
    rows: tuple[Row, ...]
    objective: tuple[Fraction, ...]
    sense: str
    lower_bounds: tuple[Fraction, ...]

    def __init__(
        self,
        num_vars: int,
        rows: Iterable[tuple[Sequence[RationalLike], str, RationalLike]],
        objective: Sequence[RationalLike] | None = None,
        sense: str = "min",
        lower_bounds: Sequence[RationalLike] | None = None,
    ) -> None:
        if num_vars < 1:
            raise ValueError("num_vars must be at least 1")
        if sense not in ("min", "max"):
            raise ValueError(f"unknown sense {sense!r}")
        converted_rows = []
        for k, (coeffs, rel, rhs) in enumerate(rows):
            if rel not in RELATIONS:
                raise ValueError(f"row {k}: unknown relation {rel!r}")
            cvec = tuple(as_rational(c) for c in coeffs)
            if len(cvec) != num_vars:
                raise ValueError(
                    f"row {k}: {len(cvec)} coefficients for {num_vars} variables"
                )
            converted_rows.append((cvec, rel, as_rational(rhs)))
        if objective is None:
            obj = (Fraction(0),) * num_vars
        else:
            obj = tuple(as_rational(c) for c in objective)
            if len(obj) != num_vars:
                raise ValueError("objective length does not match num_vars")
        if lower_bounds is None:
            lbs = (Fraction(0),) * num_vars
        else:
            lbs = tuple(as_rational(c) for c in lower_bounds)
            if len(lbs) != num_vars:
                raise ValueError("lower_bounds length does not match num_vars")
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "rows", tuple(converted_rows))
        object.__setattr__(self, "objective", obj)
        object.__setattr__(self, "sense", sense)
        object.__setattr__(self, "lower_bounds", lbs)


@dataclass(frozen=True)
class OptimalityCertificate:
    """Dual values (one per input row) and reduced costs (one per variable).

    Stated for the minimization form: duals are <= 0 on "<=" rows, >= 0 on
    ">=" rows, free on "=" rows; reduced costs are nonnegative; both
    satisfy complementary slackness against the returned solution and
    ``min_objective == duals . rhs + reduced_costs . lower_bounds``.
    """

    duals: tuple[Fraction, ...]
    reduced_costs: tuple[Fraction, ...]


@dataclass(frozen=True)
class FarkasCertificate:
    """A vector proving infeasibility.

    With ``y = duals``: the sign conditions of the optimality certificate
    hold, ``s = sum_k y_k * row_k <= 0`` componentwise, and
    ``y . rhs - s . lower_bounds > 0``; no x can satisfy all rows.
    """

    duals: tuple[Fraction, ...]


@dataclass(frozen=True)
class RayCertificate:
    """An improving feasible direction proving unboundedness.

    ``direction >= 0`` keeps lower bounds satisfied, each "<=" row has
    ``row . direction <= 0`` (resp. ``= 0`` and ``>= 0`` for "=" and ">="
    rows), and the minimized objective strictly decreases along it.
    """

    direction: tuple[Fraction, ...]


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    solution: tuple[Fraction, ...] | None = None
    objective: Fraction | None = None
    certificate: object | None = None


class _CertificateBroken(AssertionError):
    pass


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise _CertificateBroken(f"internal solver error: {message}")


def _verify_optimal(
    lp: LinearProgram,
    x: list[Fraction],
    y: list[Fraction],
    cmin: list[Fraction],
) -> OptimalityCertificate:
    reduced = list(cmin)
    for yk, (coeffs, _, _) in zip(y, lp.rows):
        if yk:
            for j, a in enumerate(coeffs):
                reduced[j] -= yk * a
    for j, lb in enumerate(lp.lower_bounds):
        _require(x[j] >= lb, f"variable {j} below its lower bound")
        _require(reduced[j] >= 0, f"negative reduced cost on variable {j}")
        _require(
            reduced[j] * (x[j] - lb) == 0,
            f"complementary slackness broken on variable {j}",
        )
    dual_value = Fraction(0)
    for k, (coeffs, rel, rhs) in enumerate(lp.rows):
        activity = sum(a * xj for a, xj in zip(coeffs, x) if a)
        if rel == "<=":
            _require(activity <= rhs, f"row {k} violated")
            _require(y[k] <= 0, f"dual sign broken on row {k}")
        elif rel == ">=":
            _require(activity >= rhs, f"row {k} violated")
            _require(y[k] >= 0, f"dual sign broken on row {k}")
        else:
            _require(activity == rhs, f"row {k} violated")
        _require(
            y[k] * (activity - rhs) == 0,
            f"complementary slackness broken on row {k}",
        )
        dual_value += y[k] * rhs
    dual_value += sum(r * lb for r, lb in zip(reduced, lp.lower_bounds) if r)
    primal_value = sum(c * xj for c, xj in zip(cmin, x) if c)
    _require(primal_value == dual_value, "strong duality gap")
    return OptimalityCertificate(tuple(y), tuple(reduced))


def _verify_farkas(lp: LinearProgram, y: list[Fraction]) -> FarkasCertificate:
    combination = [Fraction(0)] * lp.num_vars
    total = Fraction(0)
    for yk, (coeffs, rel, rhs) in zip(y, lp.rows):
        if rel == "<=":
            _require(yk <= 0, "Farkas sign broken on a <= row")
        elif rel == ">=":
            _require(yk >= 0, "Farkas sign broken on a >= row")
        if yk:
            for j, a in enumerate(coeffs):
                combination[j] += yk * a
            total += yk * rhs
    for j, s in enumerate(combination):
        _require(s <= 0, f"Farkas combination positive on variable {j}")
        total -= s * lp.lower_bounds[j]
    _require(total > 0, "Farkas certificate does not separate")
    return FarkasCertificate(tuple(y))


def _verify_ray(
    lp: LinearProgram, d: list[Fraction], cmin: list[Fraction]
) -> RayCertificate:
    for j, dj in enumerate(d):
        _require(dj >= 0, f"ray component {j} negative")
    for k, (coeffs, rel, _) in enumerate(lp.rows):
        along = sum(a * dj for a, dj in zip(coeffs, d) if a)
        if rel == "<=":
            _require(along <= 0, f"ray escapes <= row {k}")
        elif rel == ">=":
            _require(along >= 0, f"ray escapes >= row {k}")
        else:
            _require(along == 0, f"ray escapes = row {k}")
    _require(sum(c * dj for c, dj in zip(cmin, d) if c) < 0, "ray does not improve")
    return RayCertificate(tuple(d))


class _Tableau:
    """Simplex working state over the standardized system A z = b, z >= 0."""

    def __init__(self, lp: LinearProgram, cmin: list[Fraction]) -> None:
        self.lp = lp
        nv = lp.num_vars
        shifted = []  # (orig_index, coeffs list, rel, shifted rhs)
        self.zero_row_farkas: list[Fraction] | None = None
        for k, (coeffs, rel, rhs) in enumerate(lp.rows):
            adj = rhs - sum(a * lb for a, lb in zip(coeffs, lp.lower_bounds) if a)
            if any(coeffs):
                shifted.append((k, list(coeffs), rel, adj))
                continue
            # All-zero row: either vacuous or immediately infeasible.
            violated = (
                (rel == "<=" and adj < 0)
                or (rel == ">=" and adj > 0)
                or (rel == "=" and adj != 0)
            )
            if violated and self.zero_row_farkas is None:
                y = [Fraction(0)] * len(lp.rows)
                y[k] = Fraction(-1) if rel == "<=" else (
                    Fraction(1) if rel == ">=" or adj > 0 else Fraction(-1)
                )
                self.zero_row_farkas = y
        m = len(shifted)
        slack_of: dict[int, int] = {}
        n_slack = 0
        for r, (_, _, rel, _) in enumerate(shifted):
            if rel != "=":
                slack_of[r] = nv + n_slack
                n_slack += 1
        self.num_structural = nv
        self.first_artificial = nv + n_slack
        self.A: list[list[Fraction]] = []
        self.b: list[Fraction] = []
        self.basis: list[int] = []
        self.orig_index: list[int] = []
        self.flipped: list[bool] = []
        # Designated column per tableau row: equals the unit vector of that
        # row in the standardized system; its final reduced cost yields the
        # row's dual value.
        self.designated: list[int] = []
        art_rows = []
        for r, (k, coeffs, rel, adj) in enumerate(shifted):
            flip = adj < 0
            row = [(-a if flip else a) for a in coeffs]
            row.extend([Fraction(0)] * n_slack)
            if rel != "=":
                sign = Fraction(1) if rel == "<=" else Fraction(-1)
                row[slack_of[r]] = -sign if flip else sign
            self.A.append(row)
            self.b.append(-adj if flip else adj)
            self.orig_index.append(k)
            self.flipped.append(flip)
            if rel != "=" and row[slack_of[r]] == 1:
                self.basis.append(slack_of[r])
                self.designated.append(slack_of[r])
            else:
                art_rows.append(r)
                self.basis.append(-1)  # patched below
                self.designated.append(-1)
        for i, r in enumerate(art_rows):
            col = self.first_artificial + i
            for r2 in range(m):
                self.A[r2].append(Fraction(1) if r2 == r else Fraction(0))
            self.basis[r] = col
            self.designated[r] = col
        self.num_cols = self.first_artificial + len(art_rows)
        self.cost2 = list(cmin) + [Fraction(0)] * (self.num_cols - nv)
        self.cost1 = [Fraction(0)] * self.num_cols
        for r in range(m):
            if self.basis[r] >= self.first_artificial:
                for j in range(self.num_cols):
                    self.cost1[j] -= self.A[r][j]
        for r in range(m):
            col = self.basis[r]
            self.cost1[col] = Fraction(0)
            # Slack basis columns have zero phase-2 cost already; structural
            # columns never start basic, so cost2 needs no initial sweep.

    def pivot(self, r: int, j: int) -> None:
        row = self.A[r]
        v = row[j]
        if v != 1:
            inv = 1 / v
            self.A[r] = row = [x * inv for x in row]
            self.b[r] *= inv
        br = self.b[r]
        for r2, other in enumerate(self.A):
            if r2 == r:
                continue
            f = other[j]
            if f:
                self.A[r2] = [x - f * y for x, y in zip(other, row)]
                self.b[r2] -= f * br
        for cost in (self.cost1, self.cost2):
            f = cost[j]
            if f:
                for jj in range(self.num_cols):
                    if row[jj]:
                        cost[jj] -= f * row[jj]
        self.basis[r] = j

    def run(self, cost: list[Fraction], entering_limit: int) -> int | None:
        """Bland iterations; returns the entering column on unboundedness."""
        while True:
            entering = -1
            for j in range(entering_limit):
                if cost[j] < 0:
                    entering = j
                    break
            if entering < 0:
                return None
            leaving = -1
            best: Fraction | None = None
            for r, row in enumerate(self.A):
                arj = row[entering]
                if arj > 0:
                    ratio = self.b[r] / arj
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[r] < self.basis[leaving])
                    ):
                        best = ratio
                        leaving = r
            if leaving < 0:
                return entering
            self.pivot(leaving, entering)

    def drop_redundant_rows(self) -> None:
        r = 0
        while r < len(self.A):
            if self.basis[r] < self.first_artificial:
                r += 1
                continue
            pivot_col = next(
                (
                    j
                    for j in range(self.first_artificial)
                    if self.A[r][j] != 0
                ),
                None,
            )
            if pivot_col is None:
                # The row is a linear combination of the others; its dual is 0.
                del self.A[r], self.b[r], self.basis[r]
                del self.orig_index[r], self.flipped[r], self.designated[r]
            else:
                self.pivot(r, pivot_col)
                r += 1


def solve(lp: LinearProgram) -> LpResult:
    """Solve ``lp`` exactly; the result's certificate is verified before return."""
    cmin = list(lp.objective)
    if lp.sense == "max":
        cmin = [-c for c in cmin]
    tab = _Tableau(lp, cmin)

    if tab.zero_row_farkas is not None:
        return LpResult(
            status="infeasible",
            certificate=_verify_farkas(lp, tab.zero_row_farkas),
        )

    tab.run(tab.cost1, tab.first_artificial)
    phase_one_total = sum(
        tab.b[r] for r in range(len(tab.A)) if tab.basis[r] >= tab.first_artificial
    )
    if phase_one_total > 0:
        y = [Fraction(0)] * len(lp.rows)
        for r, k in enumerate(tab.orig_index):
            col = tab.designated[r]
            reduced = tab.cost1[col]
            y_hat = (1 - reduced) if col >= tab.first_artificial else -reduced
            y[k] = -y_hat if tab.flipped[r] else y_hat
        return LpResult(status="infeasible", certificate=_verify_farkas(lp, y))

    tab.drop_redundant_rows()
    escape = tab.run(tab.cost2, tab.first_artificial)
    if escape is not None:
        d = [Fraction(0)] * tab.num_structural
        if escape < tab.num_structural:
            d[escape] = Fraction(1)
        for r, col in enumerate(tab.basis):
            if col < tab.num_structural and tab.A[r][escape]:
                d[col] = -tab.A[r][escape]
        return LpResult(status="unbounded", certificate=_verify_ray(lp, d, cmin))

    x = list(lp.lower_bounds)
    for r, col in enumerate(tab.basis):
        if col < tab.num_structural:
            x[col] += tab.b[r]
    y = [Fraction(0)] * len(lp.rows)
    for r, k in enumerate(tab.orig_index):
        y_hat = -tab.cost2[tab.designated[r]]
        y[k] = -y_hat if tab.flipped[r] else y_hat
    certificate = _verify_optimal(lp, x, y, cmin)
    value = sum(c * xj for c, xj in zip(lp.objective, x) if c)
    return LpResult(
        status="optimal",
        solution=tuple(x),
        objective=value,
        certificate=certificate,
    )


def feasible(lp: LinearProgram) -> tuple[bool, tuple[Fraction, ...] | None]:
    """Phase one only: whether any point satisfies the rows, and one if so."""
    probe = LinearProgram(
        lp.num_vars, lp.rows, objective=None, sense="min", lower_bounds=lp.lower_bounds
    )
    result = solve(probe)
    if result.status == "optimal":
        return True, result.solution
    return False, None
