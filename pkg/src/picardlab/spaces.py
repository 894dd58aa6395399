"""Quasi-ordered metric spaces at desk scale, plus selfmaps and the six
pairwise distance quantities attached to a map and a pair of points.

Two flavors are supported:

* ``FiniteSpace`` -- an explicit point set 0..n-1 with an exact rational
  distance matrix and a boolean quasi-order matrix.  Every check on such a
  space is exhaustive and bit-exact.
* ``IntervalSpace`` -- a closed real interval with the absolute-value metric
  and either the usual order or the amorphous (all-pairs) relation.  Checks
  are grid-sampled and reported as evidence, never as proof.

A quasi-order is a reflexive transitive relation; antisymmetry is not
assumed anywhere.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

from .report import (
    CheckResult,
    Status,
    ValidationReport,
    failed,
    passed,
    sampled,
    vacuous,
)

DEFAULT_TOL = 1e-9

ORDER_USUAL = "usual"
ORDER_AMORPHOUS = "amorphous"


@dataclass(frozen=True)
class ScanConfig:
    """Sampling plan for grid checks on continuous spaces: a deterministic
    equispaced sweep plus seeded uniform draws."""

    equispaced: int = 257
    random: int = 64
    seed: int = 0

    def samples(self, lo: float, hi: float) -> list[float]:
        if self.equispaced < 2:
            pts = [lo]
        else:
            step = (hi - lo) / (self.equispaced - 1)
            pts = [lo + step * i for i in range(self.equispaced)]
            pts[-1] = hi
        rng = random.Random(self.seed)
        pts += [rng.uniform(lo, hi) for _ in range(self.random)]
        return pts


@dataclass(frozen=True)
class FiniteSpace:
    """Finite point set with exact rational distances and a quasi-order."""

    dist: tuple[tuple[Fraction, ...], ...]
    leq: tuple[tuple[bool, ...], ...]

    @property
    def n(self) -> int:
        return len(self.dist)

    @property
    def points(self) -> range:
        return range(self.n)

    def d(self, x: int, y: int) -> Fraction:
        return self.dist[x][y]

    def le(self, x: int, y: int) -> bool:
        return self.leq[x][y]

    def point_eq(self, x: int, y: int) -> bool:
        return x == y

    def contains(self, x) -> bool:
        return isinstance(x, int) and 0 <= x < self.n

    def to_json(self) -> dict:
        return {
            "points": self.n,
            "dist": [[str(v) for v in row] for row in self.dist],
            "leq": [[1 if v else 0 for v in row] for row in self.leq],
        }

    @staticmethod
    def from_json(data: dict) -> "FiniteSpace":
        n = data["points"]
        dist = data["dist"]
        leq = data["leq"]
        if len(dist) != n or len(leq) != n:
            raise ValueError(f"matrix size does not match point count {n}")
        return finite_space(
            [[Fraction(str(v)) for v in row] for row in dist],
            [[bool(v) for v in row] for row in leq],
        )


def finite_space(dist_rows: Sequence[Sequence], leq_rows: Sequence[Sequence]) -> FiniteSpace:
    """Build a FiniteSpace, rejecting structurally malformed input
    (non-square matrices, negative entries) before any axiom audit."""
    n = len(dist_rows)
    if len(leq_rows) != n:
        raise ValueError("distance and order matrices disagree on point count")
    dist: list[tuple[Fraction, ...]] = []
    for i, row in enumerate(dist_rows):
        if len(row) != n:
            raise ValueError(f"distance matrix is not square: row {i} has {len(row)} entries")
        vals = tuple(v if isinstance(v, Fraction) else Fraction(str(v)) for v in row)
        for j, v in enumerate(vals):
            if v < 0:
                raise ValueError(f"negative distance entry at ({i}, {j}): {v}")
        dist.append(vals)
    leq = []
    for i, row in enumerate(leq_rows):
        if len(row) != n:
            raise ValueError(f"order matrix is not square: row {i} has {len(row)} entries")
        leq.append(tuple(bool(v) for v in row))
    return FiniteSpace(tuple(dist), tuple(leq))


def line_space(positions: Sequence, leq_rows: Sequence[Sequence] | None = None,
               order: str = "chain") -> FiniteSpace:
    """Embed points on the rational line; the metric axioms hold by
    construction.  Default order is the chain induced by position."""
    pos = [p if isinstance(p, Fraction) else Fraction(str(p)) for p in positions]
    n = len(pos)
    dist = [[abs(pos[i] - pos[j]) for j in range(n)] for i in range(n)]
    if leq_rows is not None:
        leq = leq_rows
    elif order == "chain":
        leq = [[pos[i] <= pos[j] for j in range(n)] for i in range(n)]
    elif order == "antichain":
        leq = [[i == j for j in range(n)] for i in range(n)]
    else:
        raise ValueError(f"unknown order preset {order!r}")
    return finite_space(dist, leq)


@dataclass(frozen=True)
class IntervalSpace:
    """Closed real interval [lower, upper] with metric |x - y|.

    ``order`` selects the usual <= or the amorphous relation (every pair
    related).  Point equality is up to ``tol``; closedness of the interval
    supplies completeness for ascending Cauchy sequences.
    """

    lower: float
    upper: float
    order: str = ORDER_USUAL
    tol: float = DEFAULT_TOL

    def d(self, x: float, y: float) -> float:
        return abs(x - y)

    def le(self, x: float, y: float) -> bool:
        if self.order == ORDER_AMORPHOUS:
            return True
        return x <= y + self.tol

    def point_eq(self, x: float, y: float) -> bool:
        return abs(x - y) <= self.tol

    def contains(self, x: float) -> bool:
        return self.lower - self.tol <= x <= self.upper + self.tol

    def clamp(self, x: float) -> float:
        return min(max(x, self.lower), self.upper)

    def grid(self, scan: ScanConfig | None = None) -> list[float]:
        return (scan or ScanConfig()).samples(self.lower, self.upper)

    def to_json(self) -> dict:
        return {"interval": [self.lower, self.upper], "order": self.order}

    @staticmethod
    def from_json(data: dict) -> "IntervalSpace":
        lo, hi = data["interval"]
        return IntervalSpace(float(lo), float(hi), data.get("order", ORDER_USUAL))


Space = Union[FiniteSpace, IntervalSpace]


def is_finite(space: Space) -> bool:
    return isinstance(space, FiniteSpace)


@dataclass(frozen=True)
class TableMap:
    """Selfmap of a finite space given as an explicit table."""

    table: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.table[x]

    def to_json(self) -> dict:
        return {"kind": "table", "table": list(self.table)}


def table_map(entries: Sequence[int], n: int | None = None) -> TableMap:
    table = tuple(int(v) for v in entries)
    size = len(table) if n is None else n
    if len(table) != size:
        raise ValueError(f"selfmap table has {len(table)} entries for {size} points")
    for i, v in enumerate(table):
        if not 0 <= v < size:
            raise ValueError(f"selfmap sends {i} outside the point set: {v}")
    return TableMap(table)


@dataclass(frozen=True)
class ExprMap:
    """Selfmap of an interval given by a closed-form expression in t."""

    body: str

    def __post_init__(self):
        from .exprs import compile_expr
        object.__setattr__(self, "_fn", compile_expr(self.body, ("t",)))

    def __call__(self, x):
        return self._fn(x)

    @property
    def descriptor(self) -> dict:
        return {"kind": "expr", "body": self.body}

    def to_json(self) -> dict:
        return self.descriptor


Selfmap = Union[TableMap, ExprMap, Callable]


@dataclass(frozen=True)
class SixDistances:
    """The six distances attached to a selfmap T and a point pair (x, y):

    m1 = d(Tx, Ty), m2 = d(x, y), m3 = d(x, Tx),
    m4 = d(y, Ty),  m5 = d(x, Ty), m6 = d(Tx, y).
    """

    m1: object
    m2: object
    m3: object
    m4: object
    m5: object
    m6: object

    def as_tuple(self) -> tuple:
        return (self.m1, self.m2, self.m3, self.m4, self.m5, self.m6)

    def tail(self) -> tuple:
        """The five-tuple (m2..m6), i.e. the profile with m1 dropped."""
        return (self.m2, self.m3, self.m4, self.m5, self.m6)


def six_distances(space: Space, t: Selfmap, x, y) -> SixDistances:
    """Compute the six distances for (x, y); the triangle-inequality
    consequences m5 <= m2+m4, m6 <= m2+m3, m1 <= m3+m2+m4 are asserted on
    every evaluation (a failure indicates a broken metric)."""
    tx, ty = t(x), t(y)
    m = SixDistances(
        space.d(tx, ty), space.d(x, y), space.d(x, tx),
        space.d(y, ty), space.d(x, ty), space.d(tx, y),
    )
    slack = 0 if is_finite(space) else 1e-12 * (1.0 + float(m.m2 + m.m3 + m.m4))
    if m.m5 > m.m2 + m.m4 + slack or m.m6 > m.m2 + m.m3 + slack \
            or m.m1 > m.m3 + m.m2 + m.m4 + slack:
        raise ArithmeticError(f"triangle inequality broken for pair ({x}, {y}): {m}")
    return m


def validate_space(space: Space) -> ValidationReport:
    """Audit the metric and quasi-order axioms.

    Finite spaces are checked exhaustively and exactly; every violated axiom
    is reported with a witness pair or triple.  Interval spaces validate
    their endpoints and order flag; completeness is recorded as a note
    (finite spaces trivially, intervals by closedness).
    """
    report = ValidationReport()
    if is_finite(space):
        n = space.n
        for x in range(n):
            if space.dist[x][x] != 0:
                report.add("metric/zero-self-distance", x)
        for x in range(n):
            for y in range(x + 1, n):
                if space.dist[x][y] != space.dist[y][x]:
                    report.add("metric/symmetry", (x, y))
                if space.dist[x][y] <= 0:
                    report.add("metric/positivity", (x, y))
        for x in range(n):
            for y in range(n):
                dxy = space.dist[x][y]
                for z in range(n):
                    if space.dist[x][z] > dxy + space.dist[y][z]:
                        report.add("metric/triangle", (x, y, z))
        for x in range(n):
            if not space.leq[x][x]:
                report.add("order/reflexivity", x)
        for x in range(n):
            for y in range(n):
                if not space.leq[x][y]:
                    continue
                for z in range(n):
                    if space.leq[y][z] and not space.leq[x][z]:
                        report.add("order/transitivity", (x, y, z))
        report.notes.append("finite space: complete (every sequence is eventually constant)")
        return report

    if not (math.isfinite(space.lower) and math.isfinite(space.upper)):
        report.add("interval/finite-endpoints", (space.lower, space.upper))
    elif space.lower >= space.upper:
        report.add("interval/nonempty", (space.lower, space.upper))
    if space.order not in (ORDER_USUAL, ORDER_AMORPHOUS):
        report.add("interval/order-flag", space.order)
    report.notes.append("closed interval: complete; metric |x-y| satisfies all axioms")
    return report


def validate_selfmap(space: Space, t: Selfmap, scan: ScanConfig | None = None) -> CheckResult:
    """Totality plus range containment; exhaustive on finite spaces,
    sampled on intervals."""
    if is_finite(space):
        for x in space.points:
            y = t(x)
            if not space.contains(y):
                return failed("selfmap", witness=(x, y))
        return passed("selfmap", points=space.n)
    for x in space.grid(scan):
        y = t(x)
        if not space.contains(y):
            return failed("selfmap", witness=(x, y))
    return sampled("selfmap")


def is_increasing(space: Space, t: Selfmap, scan: ScanConfig | None = None) -> CheckResult:
    """Does x <= y imply Tx <= Ty?  Exhaustive over all ordered pairs on
    finite spaces; on intervals, a sampled grid of ordered pairs (never
    reported as proven)."""
    if is_finite(space):
        for x in space.points:
            for y in space.points:
                if space.le(x, y) and not space.le(t(x), t(y)):
                    return failed("increasing", witness=(x, y))
        return passed("increasing", pairs=space.n * space.n)
    if space.order == ORDER_AMORPHOUS:
        return passed("increasing", reason="amorphous order relates every pair")
    pts = sorted(space.grid(scan))
    for i, x in enumerate(pts):
        tx = t(x)
        for y in pts[i:]:
            if not space.le(tx, t(y)):
                return failed("increasing", witness=(x, y))
    return sampled("increasing", pairs=len(pts) * (len(pts) + 1) // 2)


def in_start_set(space: Space, t: Selfmap, x) -> bool:
    """Membership in {x : x <= Tx}, the admissible iteration starts."""
    return space.le(x, t(x))


def start_set(space: Space, t: Selfmap, scan: ScanConfig | None = None):
    """The start set {x : x <= Tx}.  Exact enumeration on finite spaces; a
    grid scan of passing samples on intervals."""
    if is_finite(space):
        return tuple(x for x in space.points if in_start_set(space, t, x))
    return [x for x in space.grid(scan) if in_start_set(space, t, x)]


def fixed_points(space: FiniteSpace, t: Selfmap) -> tuple[int, ...]:
    """Exact fixed-point enumeration (finite spaces only)."""
    if not is_finite(space):
        raise TypeError("exact fixed-point enumeration needs a finite space; "
                        "use is_fixed_point or find_fixed_point_candidates")
    return tuple(x for x in space.points if t(x) == x)


def is_fixed_point(space: Space, t: Selfmap, x, tol: float = DEFAULT_TOL) -> bool:
    if is_finite(space):
        return t(x) == x
    return space.d(x, t(x)) <= tol


def find_fixed_point_candidates(space: Space, t: Selfmap, tol: float = DEFAULT_TOL,
                                scan: ScanConfig | None = None) -> list:
    """Scan for near-fixed points and merge nearby hits (evidence only on
    intervals; exact on finite spaces)."""
    if is_finite(space):
        return list(fixed_points(space, t))
    hits = [x for x in space.grid(scan) if space.d(x, t(x)) <= 10 * tol]
    hits.sort()
    merged: list[float] = []
    for x in hits:
        if not merged or abs(x - merged[-1]) > max(100 * tol, 1e-6):
            merged.append(x)
    return merged


def is_order_singleton(fixset: Sequence, space: Space) -> CheckResult:
    """True iff no two distinct comparable points live in ``fixset``."""
    pts = list(fixset)
    for i, z in enumerate(pts):
        for w in pts:
            if space.point_eq(z, w):
                continue
            if space.le(z, w):
                return failed("order-singleton", witness=(z, w))
    if not pts:
        return vacuous("order-singleton")
    status = Status.PASS if is_finite(space) else Status.SAMPLED_PASS
    return CheckResult("order-singleton", status, detail={"points": len(pts)})


def is_self_closed_on(space: Space, seq: Sequence, limit, tol: float = DEFAULT_TOL) -> CheckResult:
    """For an ascending convergent sequence, check that every term sits
    below the limit.  Non-ascending input is rejected outright; convergence
    is the caller's assertion (sanity-checked within tol on the last term)."""
    terms = list(seq)
    for i in range(len(terms) - 1):
        if not space.le(terms[i], terms[i + 1]):
            raise ValueError(f"sequence is not ascending at index {i}")
    detail = {}
    if terms and not is_finite(space):
        detail["last_gap"] = space.d(terms[-1], limit)
    for i, x in enumerate(terms):
        if not space.le(x, limit):
            return failed("self-closed", witness=i, **detail)
    status = Status.PASS if is_finite(space) else Status.SAMPLED_PASS
    return CheckResult("self-closed", status, detail=detail)


def self_closed_status(space: Space) -> CheckResult:
    """Whether ascending convergent sequences stay below their limits.

    Finite spaces: any convergent sequence is eventually constant at its
    limit, so transitivity of the (validated) order settles the question
    exactly.  Intervals declare the property: it holds for the usual order
    on the reals (monotone limits) and trivially for the amorphous relation.
    """
    if is_finite(space):
        rep = validate_space(space)
        bad = [v for v in rep.violations if v.axiom.startswith("order/")]
        if bad:
            return failed("self-closed-order", witness=bad[0].witness)
        return passed("self-closed-order",
                      reason="ascending chains are eventually constant; transitivity closes them")
    if space.order == ORDER_AMORPHOUS:
        return passed("self-closed-order", reason="amorphous order relates every pair")
    return passed("self-closed-order", reason="usual order on the reals is closed under ascending limits")
