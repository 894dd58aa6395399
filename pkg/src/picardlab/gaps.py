"""Executable gap extraction for semi-Cauchy, non-Cauchy sequences.

Given a sequence whose consecutive steps vanish but which is not Cauchy at
some scale b taken from a descending candidate set, the extractor builds
the double-minimal rank pairs

    m(j) = the smallest m >= j from which some later point exceeds
           distance b,
    n(j) = the smallest such later rank for m(j),

together with the threshold rank j_b past which every step is below b/3
and the 2x2 table u_j(p, q) = d(x_{m(j)+p}, x_{n(j)+q}).  The verifier
re-checks every structural invariant exactly on the prefix (rank ordering,
strict gap, minimality, the sandwich bound u_j(0,0) <= b + r_{n(j)-1}, the
step-perturbation bounds) and certifies the limit claims u_j(0,0) -> b+ and
u_j(p,q) -> b with finite tail statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .report import PropertyReport, failed, passed

DEFAULT_TAIL_TOL = 1e-3
MIN_WITNESS_RANKS = 50


@dataclass
class SeqWithMetric:
    """A finite point sequence with a distance oracle.

    ``dist=None`` selects the absolute-difference metric on numeric points,
    which enables a vectorized scan path; any callable d(x, y) works for
    the generic path.
    """

    points: list
    dist: Callable | None = None
    name: str = "seq"

    def __len__(self) -> int:
        return len(self.points)

    def prefix(self, n: int) -> "SeqWithMetric":
        return SeqWithMetric(list(self.points[:n]), self.dist, self.name)

    def d(self, i: int, j: int) -> float:
        if self.dist is None:
            return abs(self.points[i] - self.points[j])
        return self.dist(self.points[i], self.points[j])

    def step_lengths(self) -> np.ndarray:
        if self.dist is None:
            x = np.asarray(self.points, dtype=float)
            return np.abs(np.diff(x))
        return np.array([self.d(i, i + 1) for i in range(len(self.points) - 1)])

    @staticmethod
    def from_json(data: dict) -> "SeqWithMetric":
        kind = data.get("kind", "explicit")
        if kind == "walk01":
            return SeqWithMetric(walk_zero_one(int(data["N"])), None, "walk01")
        if kind == "explicit":
            pts = [float(v) for v in data["points"]]
            n = int(data.get("N", len(pts)))
            return SeqWithMetric(pts[:n], None, "explicit")
        raise ValueError(f"unknown sequence kind {kind!r}")


def walk_zero_one(n_points: int) -> list[float]:
    """Oscillating walk on [0, 1]: leg k sweeps the whole interval in k
    equal steps of length 1/k, alternating direction.  Steps vanish while
    the oscillation amplitude stays 1, so the walk is semi-Cauchy but not
    Cauchy."""
    pts = [0.0]
    k = 1
    up = True
    while len(pts) < n_points:
        for i in range(1, k + 1):
            pts.append(i / k if up else 1.0 - i / k)
            if len(pts) == n_points:
                break
        up = not up
        k += 1
    return pts


@dataclass
class GapWitness:
    """Ranks and distance tables extracted at level b, for j = 0..horizon."""

    b: float
    j_b: int
    horizon: int
    m: list[int]
    n: list[int]
    u00: list[float]
    u01: list[float]
    u10: list[float]
    u11: list[float]
    theta: list[float]
    limit_unverified: bool = False

    def tail_stats(self) -> dict:
        """Residuals |u - b| over the last decile of computed ranks."""
        k = len(self.u00)
        cut = max(self.j_b, k - max(1, k // 10))
        stats = {}
        for label, tbl in (("u00", self.u00), ("u01", self.u01),
                           ("u10", self.u10), ("u11", self.u11)):
            res = [abs(v - self.b) for v in tbl[cut:]]
            stats[label] = {"max": max(res), "mean": sum(res) / len(res)}
        stats["overshoot_mean"] = sum(v - self.b for v in self.u00[cut:]) / (k - cut)
        return stats

    def to_dict(self) -> dict:
        return {
            "kind": "gap-witness",
            "b": self.b,
            "j_b": self.j_b,
            "horizon": self.horizon,
            "theta": list(self.theta),
            "limit_unverified": self.limit_unverified,
            "tail_stats": self.tail_stats(),
            "ranks": len(self.m),
        }


@dataclass
class NoGap:
    """Every candidate level admitted a Cauchy tail within the prefix (or
    left too little evidence to certify a gap)."""

    reasons: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"kind": "no-gap", "reasons": {str(k): v for k, v in self.reasons.items()}}


def _make_first_hit(seq: SeqWithMetric, b: float) -> Callable[[int], int | None]:
    n_pts = len(seq)
    if seq.dist is None:
        x = np.asarray(seq.points, dtype=float)
        chunk = 512

        def first_hit(m: int) -> int | None:
            xm = x[m]
            start = m + 1
            while start < n_pts:
                stop = min(start + chunk, n_pts)
                seg = np.abs(x[start:stop] - xm) > b
                idx = int(np.argmax(seg))
                if seg[idx]:
                    return start + idx
                start = stop
            return None

        return first_hit

    def first_hit(m: int) -> int | None:
        for n in range(m + 1, n_pts):
            if seq.d(m, n) > b:
                return n
        return None

    return first_hit


def _threshold_rank(r: np.ndarray, b: float) -> int | None:
    """Smallest j with r_i < b/3 for every i >= j, or None."""
    above = np.nonzero(r >= b / 3.0)[0]
    if len(above) == 0:
        return 0
    j_b = int(above[-1]) + 1
    return j_b if j_b <= len(r) else None


def extract_gap(seq: SeqWithMetric, theta: Sequence[float], N: int | None = None,
                min_ranks: int = MIN_WITNESS_RANKS) -> GapWitness | NoGap:
    """Search the candidate levels (largest first) for one at which the
    prefix is provably not Cauchy, and build the full rank construction.

    Raises ``ValueError`` when the prefix violates the standing hypotheses:
    a zero step anywhere, or steps that never fall below b/3 for any
    candidate level (the vanishing-step screening).
    """
    if N is not None:
        seq = seq.prefix(N)
    n_pts = len(seq)
    if n_pts < 3:
        raise ValueError("prefix too short to analyze")
    r = seq.step_lengths()
    zero = np.nonzero(r <= 0)[0]
    if len(zero):
        raise ValueError(f"consecutive points coincide at index {int(zero[0])}")

    levels = sorted((float(b) for b in theta), reverse=True)
    if not levels or levels[-1] <= 0:
        raise ValueError("candidate levels must be positive")

    reasons: dict[float, str] = {}
    screening_failures = 0
    for b in levels:
        j_b = _threshold_rank(r, b)
        if j_b is None or j_b > n_pts // 2:
            reasons[b] = "steps do not vanish below b/3 within the prefix"
            screening_failures += 1
            continue
        scan = _make_first_hit(seq, b)
        memo: dict[int, int | None] = {}

        def first_hit(m: int) -> int | None:
            if m not in memo:
                memo[m] = scan(m)
            return memo[m]

        m_list: list[int] = []
        n_list: list[int] = []
        m_ptr = 0
        ended = "prefix-exhausted"
        for j in range(n_pts - 1):
            m = max(j, m_ptr)
            hit = None
            while m <= n_pts - 2:
                hit = first_hit(m)
                if hit is not None:
                    break
                m += 1
            if hit is None:
                ended = "tail-cauchy"
                break
            if hit > n_pts - 2:
                # the minimal pair exists but its table needs a point
                # beyond the prefix
                break
            m_ptr = m
            m_list.append(m)
            n_list.append(hit)
        if len(m_list) < min_ranks:
            reasons[b] = ("tail is Cauchy at this level within the prefix"
                          if ended == "tail-cauchy"
                          else f"only {len(m_list)} usable ranks inside the prefix")
            continue

        horizon = len(m_list) - 1
        if seq.dist is None:
            x = np.asarray(seq.points, dtype=float)
            ma = np.asarray(m_list)
            na = np.asarray(n_list)
            tables = {
                (p, q): np.abs(x[ma + p] - x[na + q]).tolist()
                for p in (0, 1) for q in (0, 1)
            }
        else:
            tables = {
                (p, q): [seq.d(m + p, n + q) for m, n in zip(m_list, n_list)]
                for p in (0, 1) for q in (0, 1)
            }
        return GapWitness(
            b=b, j_b=j_b, horizon=horizon, m=m_list, n=n_list,
            u00=tables[(0, 0)], u01=tables[(0, 1)],
            u10=tables[(1, 0)], u11=tables[(1, 1)],
            theta=levels,
            limit_unverified=(horizon - j_b) < 100,
        )

    if screening_failures == len(levels):
        raise ValueError("steps do not vanish: the sequence fails the "
                         "semi-Cauchy screening at every candidate level")
    return NoGap(reasons)


def verify_witness(seq: SeqWithMetric, w: GapWitness,
                   tail_tol: float = DEFAULT_TAIL_TOL) -> PropertyReport:
    """Re-check every witness invariant directly against the sequence.

    Structural checks are exact; the two limit claims are certified with
    tail statistics: u_j(0,0) stays strictly above b with last-decile mean
    overshoot below tail_tol, and every |u_j(p,q) - b| on the last decile
    is below tail_tol.
    """
    report = PropertyReport(f"gap-witness[b={w.b}]")
    b = w.b
    n_pts = len(seq)
    r = seq.step_lengths()
    m = w.m
    n = w.n
    k = len(m)
    slack = 1e-12

    res = None
    for j in range(k):
        if not (j <= m[j] < n[j] and n[j] <= n_pts - 2):
            res = failed("ranks", witness=j)
            break
    report.add(res or passed("ranks", count=k))

    res = None
    for j in range(k):
        if not w.u00[j] > b:
            res = failed("gap-exceeds-level", witness=j, value=w.u00[j])
            break
        if abs(seq.d(m[j], n[j]) - w.u00[j]) > slack:
            res = failed("gap-exceeds-level", witness=j, reason="table mismatch")
            break
    report.add(res or passed("gap-exceeds-level"))

    res = None
    for j in range(k):
        if j >= w.j_b:
            if n[j] - m[j] < 2:
                res = failed("post-threshold-shape", witness=j)
                break
            if seq.d(m[j], n[j] - 1) > b:
                res = failed("post-threshold-shape", witness=j,
                             value=seq.d(m[j], n[j] - 1))
                break
    report.add(res or passed("post-threshold-shape"))

    res = None
    for i in range(w.j_b, min(len(r), n_pts - 1)):
        if not r[i] < b / 3.0:
            res = failed("threshold-rank", witness=i, value=float(r[i]))
            break
    report.add(res or passed("threshold-rank", j_b=w.j_b))

    # minimality of m(j): every candidate below m(j) must be gap-free
    res = None
    checked: set[int] = set()
    fast = seq.dist is None
    x = np.asarray(seq.points, dtype=float) if fast else None
    for j in range(k):
        for m_prime in range(j, m[j]):
            if m_prime in checked:
                continue
            checked.add(m_prime)
            if fast:
                worst = float(np.max(np.abs(x[m_prime + 1:] - x[m_prime])))
            else:
                worst = max(seq.d(m_prime, t) for t in range(m_prime + 1, n_pts))
            if worst > b:
                res = failed("m-minimality", witness=(j, m_prime), value=worst)
                break
        if res:
            break
    report.add(res or passed("m-minimality", re_verified=len(checked)))

    # minimality of n(j): no earlier rank past m(j) already exceeds b
    res = None
    for j in range(k):
        if fast:
            span = np.abs(x[m[j] + 1:n[j]] - x[m[j]])
            bad = len(span) and float(np.max(span)) > b
        else:
            bad = any(seq.d(m[j], t) > b for t in range(m[j] + 1, n[j]))
        if bad:
            res = failed("n-minimality", witness=j)
            break
    report.add(res or passed("n-minimality"))

    res = None
    for j in range(w.j_b, k):
        if not (b < w.u00[j] <= b + float(r[n[j] - 1]) + slack):
            res = failed("sandwich", witness=j, value=w.u00[j],
                         bound=b + float(r[n[j] - 1]))
            break
    report.add(res or passed("sandwich"))

    res = None
    for j in range(k):
        cap = float(r[m[j]]) + float(r[n[j]]) + slack
        for tbl in (w.u01, w.u10, w.u11):
            if abs(tbl[j] - w.u00[j]) > cap:
                res = failed("perturbation-bounds", witness=j,
                             delta=abs(tbl[j] - w.u00[j]), cap=cap)
                break
        if res:
            break
    report.add(res or passed("perturbation-bounds"))

    cut = max(w.j_b, k - max(1, k // 10))
    overshoot = [w.u00[j] - b for j in range(cut, k)]
    mean_overshoot = sum(overshoot) / len(overshoot)
    if all(v > 0 for v in overshoot) and mean_overshoot <= tail_tol:
        report.add(passed("one-sided-limit", mean_overshoot=mean_overshoot))
    else:
        report.add(failed("one-sided-limit", mean_overshoot=mean_overshoot,
                          tail_tol=tail_tol))

    worst = 0.0
    for tbl in (w.u00, w.u01, w.u10, w.u11):
        worst = max(worst, max(abs(tbl[j] - b) for j in range(cut, k)))
    if worst <= tail_tol:
        report.add(passed("table-limits", worst_residual=worst))
    else:
        report.add(failed("table-limits", worst_residual=worst, tail_tol=tail_tol))
    return report
