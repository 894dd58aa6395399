"""Scalar comparison functions on the nonnegative half-line and their
semantic checkers: regressivity, Matkowski iteration decay, right limsup
estimates, Boyd-Wong admissibility, sequence compatibility, and the
max-based altering functions used by explicit contraction bounds.

Checks that quantify over all reals or all sequences are necessarily
sampled; their results carry ``SAMPLED_PASS`` and document the generator.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .exprs import compile_expr
from .report import CheckResult, PropertyReport, Status, failed, passed, sampled, vacuous

STRICT_MARGIN = 1e-9

# eps-grid for "almost" (cofinal) properties: 1, 0.1, ..., 1e-6
EPS_GRID: tuple[float, ...] = tuple(10.0 ** -k for k in range(7))


@dataclass(frozen=True)
class ScalarFn:
    """A named evaluable function R+ -> R+.

    ``claims_increasing``/``claims_continuous`` are declared structural
    flags; checkers treat them as check targets, not assumptions.
    """

    name: str
    fn: Callable
    claims_increasing: bool = False
    claims_continuous: bool = False
    descriptor: dict | None = field(default=None, compare=False)

    def __call__(self, t):
        v = self.fn(t)
        if v < 0:
            raise ValueError(f"{self.name} produced a negative value at t={t}: {v}")
        return v

    def to_json(self) -> dict:
        if self.descriptor is None:
            raise ValueError(f"{self.name} has no serializable descriptor")
        return dict(self.descriptor)


def linear(alpha) -> ScalarFn:
    """t -> alpha*t with exact rational alpha (floats are read via str, so
    linear(0.9) really is 9/10 and stays exact on Fraction inputs)."""
    a = alpha if isinstance(alpha, Fraction) else Fraction(str(alpha))
    if a < 0:
        raise ValueError(f"negative slope: {alpha}")
    return ScalarFn(
        f"linear({a})", lambda t: a * t,
        claims_increasing=True, claims_continuous=True,
        descriptor={"kind": "linear", "alpha": str(a)},
    )


def identity_fn() -> ScalarFn:
    return ScalarFn("identity", lambda t: t, claims_increasing=True,
                    claims_continuous=True, descriptor={"kind": "linear", "alpha": "1"})


def expr_fn(body: str, **flags) -> ScalarFn:
    return ScalarFn(f"expr({body})", compile_expr(body, ("t",)),
                    descriptor={"kind": "expr", "body": body}, **flags)


def table_fn(knots: Sequence[Sequence], extrapolate: str = "last") -> ScalarFn:
    """Piecewise-linear interpolation through sorted (t, value) knots;
    ``extrapolate="last"`` holds endpoint values outside the knot range."""
    pts = sorted((Fraction(str(t)), Fraction(str(v))) for t, v in knots)
    if len(pts) < 1:
        raise ValueError("table needs at least one knot")
    if extrapolate != "last":
        raise ValueError(f"unknown extrapolation mode {extrapolate!r}")

    def fn(t):
        if t <= pts[0][0]:
            return pts[0][1]
        for (t0, v0), (t1, v1) in zip(pts, pts[1:]):
            if t <= t1:
                if t1 == t0:
                    return v1
                return v0 + (v1 - v0) * (t - t0) / (t1 - t0)
        return pts[-1][1]

    return ScalarFn(
        f"table({len(pts)} knots)", fn,
        descriptor={"kind": "table",
                    "knots": [[str(t), str(v)] for t, v in pts],
                    "extrapolate": extrapolate},
    )


def scalar_from_json(data: dict) -> ScalarFn:
    kind = data.get("kind")
    if kind == "linear":
        return linear(data["alpha"])
    if kind == "expr":
        return expr_fn(data["body"])
    if kind == "table":
        return table_fn(data["knots"], data.get("extrapolate", "last"))
    raise ValueError(f"unknown scalar function kind {kind!r}")


# Built-in family exercised by the regression suites.  "identity" is the
# canonical negative control: it fails every decay property.
BUILTIN_SCALARS: dict[str, ScalarFn] = {
    "half": linear("1/2"),
    "quarter": linear("1/4"),
    "ninety": linear("9/10"),
    "saturating": ScalarFn("t/(1+t)", compile_expr("t/(1+t)", ("t",)),
                           claims_increasing=True, claims_continuous=True,
                           descriptor={"kind": "expr", "body": "t/(1+t)"}),
    "identity": identity_fn(),
}


def positive_grid(count: int = 257, rand: int = 64, hi: float = 10.0,
                  seed: int = 0) -> list[float]:
    """Default positive sample grid: ``count`` equispaced points on (0, hi]
    plus ``rand`` seeded uniforms on [hi/1000, hi]."""
    pts = [hi * i / count for i in range(1, count + 1)]
    rng = random.Random(seed)
    pts += [rng.uniform(hi * 1e-3, hi) for _ in range(rand)]
    return pts


def check_regressive(f: ScalarFn, grid: Sequence[float] | None = None,
                     margin: float = STRICT_MARGIN) -> CheckResult:
    """f(0) = 0 exactly and f(t) < t at every sampled t > 0."""
    if f(0) != 0:
        return failed("regressive", witness=0.0, value=float(f(0)))
    for t in grid if grid is not None else positive_grid():
        if not f(t) < t - margin:
            return failed("regressive", witness=t, value=float(f(t)))
    return sampled("regressive")


def check_increasing(f: ScalarFn, grid: Sequence[float] | None = None) -> CheckResult:
    """Sampled monotonicity of a scalar function on consecutive grid points."""
    pts = sorted(grid if grid is not None else positive_grid())
    pts = [0.0] + pts
    prev_t, prev_v = pts[0], f(pts[0])
    for t in pts[1:]:
        v = f(t)
        if v < prev_v - 1e-12:
            return failed("increasing-fn", witness=(prev_t, t),
                          values=(float(prev_v), float(v)))
        prev_t, prev_v = t, v
    return sampled("increasing-fn")


def check_matkowski(f: ScalarFn, t_samples: Sequence[float] | None = None,
                    n_max: int = 100_000, eps: float = 1e-8) -> CheckResult:
    """Iterate f from each sample until the iterate drops below eps.

    Precondition: f regressive and increasing (checked first; a failing
    precondition fails the whole check).  An iterate that fails to strictly
    decrease can never reach 0 for an increasing regressive f, so the
    sample fails immediately with that witness.
    """
    pre = check_regressive(f)
    if not pre.ok:
        return failed("matkowski", witness=pre.witness, reason="not regressive")
    mono = check_increasing(f)
    if not mono.ok:
        return failed("matkowski", witness=mono.witness, reason="not increasing")
    samples = list(t_samples) if t_samples is not None else [0.1, 0.5, 1.0, 2.0, 5.0, 10.0]
    counts: dict[float, int] = {}
    for t0 in samples:
        x, n = t0, 0
        while x >= eps:
            nxt = f(x)
            if nxt >= x:
                return failed("matkowski", witness=t0, stalled_at=float(x), steps=n)
            x = nxt
            n += 1
            if n > n_max:
                return failed("matkowski", witness=t0, steps=n, iterate=float(x))
        counts[t0] = n
    return sampled("matkowski", counts=counts, eps=eps)


def right_limsup_envelope(f: ScalarFn, s: float, delta0: float = 1e-2,
                          levels: int = 21, per_level: int = 33) -> list[float]:
    """Shrinking-window sup envelope for limsup_{t -> s+} f(t).

    Level k samples 33 points of the window (s, s + d * 2^-k] with
    d = min(delta0, s/4); the true sups decrease as the window shrinks
    and converge to the right limsup, so the finest level (the last entry)
    is the limit estimate.  The window scales with s so that the
    estimator's resolution stays below the admissibility gap of
    near-identity functions (which shrinks like s^2) at small s.
    """
    if s <= 0:
        raise ValueError("right limsup is defined for s > 0")
    d = min(delta0, s / 4.0)
    env: list[float] = []
    for k in range(levels):
        delta = d * 2.0 ** -k
        env.append(max(float(f(s + delta * i / per_level))
                       for i in range(1, per_level + 1)))
    return env


def right_limsup(f: ScalarFn, s: float, **kw) -> float:
    return right_limsup_envelope(f, s, **kw)[-1]


def q_value(f: ScalarFn, s: float) -> float:
    """max(f(s), right limsup at s): the one-sided dominating value."""
    return max(float(f(s)), right_limsup(f, s))


def check_boyd_wong_admissible(f: ScalarFn, grid: Sequence[float] | None = None,
                               margin: float = STRICT_MARGIN) -> CheckResult:
    """Q(s) < s at every sampled s > 0, with strictness margin on doubles."""
    pre = check_regressive(f)
    if not pre.ok:
        return failed("boyd-wong", witness=pre.witness, reason="not regressive")
    worst = None
    for s in grid if grid is not None else positive_grid():
        q = q_value(f, s)
        if not q < s - margin:
            return failed("boyd-wong", witness=s, q=q)
        gap = s - q
        if worst is None or gap < worst[1]:
            worst = (s, gap)
    return sampled("boyd-wong", tightest=worst)


def check_almost_bw_admissible(f: ScalarFn, eps_grid: Sequence[float] = EPS_GRID,
                               max_halvings: int = 60) -> CheckResult:
    """For each eps, geometric search below eps for a witness s with
    Q(s) < s."""
    pre = check_regressive(f)
    if not pre.ok:
        return failed("almost-boyd-wong", witness=pre.witness, reason="not regressive")
    witnesses: dict[float, float] = {}
    for eps in eps_grid:
        s = eps / 2.0
        found = None
        for _ in range(max_halvings):
            if s <= 0:
                break
            if q_value(f, s) < s:
                found = s
                break
            s /= 2.0
        if found is None:
            return failed("almost-boyd-wong", witness=eps)
        witnesses[eps] = found
    return sampled("almost-boyd-wong", witnesses=witnesses)


def check_compatible_psi(f: ScalarFn, trials: int = 64, seed: int = 0,
                         max_steps: int = 100_000, target: float = 1e-4,
                         r0_max: float = 10.0) -> CheckResult:
    """Sampled test of sequence compatibility: every generated sequence with
    r_n <= f(r_{n-1}) must fall below ``target`` within ``max_steps``.

    Generator: r0 uniform in (0, r0_max]; updates r_n = u_n * f(r_{n-1})
    with u_n uniform in (0, 1], plus extremal trials pinned at u_n = 1 from
    fixed large starts.  This samples a necessary condition only.
    """
    pre = check_regressive(f)
    if not pre.ok:
        return failed("compatible-psi", witness=pre.witness, reason="not regressive")
    longest = 0
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        extremal = trial < 2
        r = (r0_max, 1.0)[trial] if extremal else r0_max * (1.0 - rng.random())
        r0, n = r, 0
        tail: list[float] = [r]
        while r >= target and n < max_steps:
            u = 1.0 if extremal else 1.0 - rng.random()
            r = u * float(f(r))
            n += 1
            tail.append(r)
            if len(tail) > 8:
                tail.pop(0)
        longest = max(longest, n)
        if r >= target:
            return failed("compatible-psi", witness={"r0": r0, "tail": tail},
                          trial=trial, steps=n)
    return sampled("compatible-psi", trials=trials, longest_run=longest, target=target)


def lemma_41_suite(f: ScalarFn) -> PropertyReport:
    """Cross-checker consistency: Boyd-Wong admissibility must imply
    sequence compatibility.  A BW-pass with a compatibility failure cannot
    be a property of f, so it is flagged as a high-severity checker bug."""
    report = PropertyReport(f"bw-implies-compatible[{f.name}]")
    bw = report.add(check_boyd_wong_admissible(f))
    if not bw.ok:
        report.add(vacuous("compatible-psi", reason="Boyd-Wong check failed; implication is vacuous"))
        return report
    comp = report.add(check_compatible_psi(f))
    if not comp.ok:
        report.findings.append(
            f"HIGH: {f.name} passes the Boyd-Wong sampler but fails the "
            "compatibility sampler; this contradicts the implication and "
            "indicates a checker bug")
    return report


def eval_L(t1, t2, t3, t4):
    """max of four nonnegative reals (the basic 4-variable altering map)."""
    for v in (t1, t2, t3, t4):
        if v < 0:
            raise ValueError(f"negative argument: {v}")
    return max(t1, t2, t3, t4)


def eval_Lstar(t1, t2, t3, t4, t5):
    """max{t1, t2, t3, (t4+t5)/2}: the 5-variable combiner used by the
    explicit contraction bound.  Exact on rationals."""
    for v in (t1, t2, t3, t4, t5):
        if v < 0:
            raise ValueError(f"negative argument: {v}")
    return eval_L(t1, t2, t3, (t4 + t5) / 2)


@dataclass(frozen=True)
class AlteringFn:
    """Candidate altering function R+^k -> R+; continuity, coordinatewise
    monotonicity and vanishing-exactly-at-zero are check targets."""

    name: str
    arity: int
    fn: Callable

    def __call__(self, *args):
        if len(args) != self.arity:
            raise TypeError(f"{self.name} expects {self.arity} arguments")
        return self.fn(*args)


L_MAX4 = AlteringFn("max4", 4, eval_L)
LSTAR5 = AlteringFn("max-avg5", 5, eval_Lstar)


def check_altering(g: AlteringFn, seed: int = 0, bases: int = 48) -> CheckResult:
    """Sampled audit of the altering properties: zero exactly at the origin,
    positivity at nonzero points, coordinatewise monotone, and a shrinking
    continuity modulus."""
    k = g.arity
    if g(*([0.0] * k)) != 0:
        return failed("altering/zero-at-origin", witness=[0.0] * k,
                      value=float(g(*([0.0] * k))))
    rng = random.Random(seed)
    points = [[rng.uniform(0.0, 3.0) for _ in range(k)] for _ in range(bases)]
    for i in range(k):
        axis = [0.0] * k
        axis[i] = 1.0
        points.append(axis)
    for p in points:
        if any(v > 0 for v in p) and not g(*p) > 0:
            return failed("altering/positivity", witness=p, value=float(g(*p)))
        base = g(*p)
        for i in range(k):
            for h in (0.25, 1.0):
                q = list(p)
                q[i] += h
                if g(*q) < base - 1e-12:
                    return failed("altering/monotone", witness=(p, i, h))
    # continuity modulus: perturbations shrink geometrically; the observed
    # oscillation must shrink with them
    for p in points[:8]:
        base = g(*p)
        for m in range(4, 24, 4):
            delta = 2.0 ** -m
            osc = max(abs(g(*[max(v + delta * rng.choice((-1, 1)), 0.0) for v in p]) - base)
                      for _ in range(8))
            if m >= 20 and osc > 1e-4:
                return failed("altering/continuity", witness=p, oscillation=osc)
    return sampled("altering", arity=k)
