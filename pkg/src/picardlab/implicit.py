"""Six-variable implicit contraction certificates F: R+^6 -> R, their
semantic checkers, and the generalized set-valued variant F: R+^6 -> S with
a distinguished subset P and a locality radius.

The checkers realize asymptotic conditions with finite proxies:

* sequence conditions (compatibility) run adversarial chains -- a bisection
  search for the largest admissible next term, plus random admissible
  choices -- and demand decay below a threshold within a step budget;
* limsup-positivity conditions generate coordinate sequences approaching a
  target (one coordinate strictly from the right, or pinned exactly) and
  take the max of F over the tail quarter of each sequence;
* lower semicontinuity compares F at an anchor against the tail min along
  shrinking perturbations.

Everything is seeded and pure given (descriptor, seed).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .exprs import compile_expr
from .report import CheckResult, PropertyReport, Status, failed, passed, sampled, vacuous
from .scalars import (
    EPS_GRID,
    STRICT_MARGIN,
    ScalarFn,
    eval_Lstar,
    positive_grid,
    scalar_from_json,
)

VARS6 = ("t1", "t2", "t3", "t4", "t5", "t6")

# property-cache keys recognized by the pipelines
PROP_COMPATIBLE = "compatible"
PROP_NORMAL34 = "normal34"
PROP_ALMOST_2RIGHT = "almost2right"
PROP_POINT4 = "point4"
PROP_LSC = "lsc"
PROP_NORMAL236 = "normal236"
PROP_DEC2TO6 = "dec2to6"
PROP_ALMOST_COMPATIBLE = "almost_compatible"
PROP_PSI_COMPATIBLE = "psi_compatible"


@dataclass
class ImplicitF:
    """An evaluable six-variable certificate with a property cache.

    Cache entries are only ever written by the corresponding checker (via
    :func:`ensure_property`); ``psi`` is set when the certificate was built
    from a scalar bound and enables the scalar-aware checks.
    """

    name: str
    fn: Callable
    psi: ScalarFn | None = None
    descriptor: dict | None = None
    props: dict[str, CheckResult] = field(default_factory=dict)

    def __call__(self, t1, t2, t3, t4, t5, t6):
        return self.fn(t1, t2, t3, t4, t5, t6)

    def eval_tuple(self, t: Sequence) -> float:
        return self.fn(*t)

    def cached(self, key: str) -> CheckResult | None:
        return self.props.get(key)

    def to_json(self) -> dict:
        if self.descriptor is None:
            raise ValueError(f"{self.name} has no serializable descriptor")
        return dict(self.descriptor)


def f_from_psi(psi: ScalarFn) -> ImplicitF:
    """The closed-form certificate F(t1..t6) = t1 - psi(max{t2, t3, t4,
    (t5+t6)/2}) induced by a scalar bound psi (expected regressive)."""
    def fn(t1, t2, t3, t4, t5, t6):
        return t1 - psi(eval_Lstar(t2, t3, t4, t5, t6))

    desc = None
    if psi.descriptor is not None:
        desc = {"kind": "from_psi", "psi": dict(psi.descriptor)}
    return ImplicitF(f"from_psi[{psi.name}]", fn, psi=psi, descriptor=desc)


def implicit_from_expr(body: str) -> ImplicitF:
    return ImplicitF(f"expr6({body})", compile_expr(body, VARS6),
                     descriptor={"kind": "expr6", "body": body})


def implicit_from_json(data: dict) -> ImplicitF:
    kind = data.get("kind")
    if kind == "from_psi":
        return f_from_psi(scalar_from_json(data["psi"]))
    if kind == "expr6":
        return implicit_from_expr(data["body"])
    raise ValueError(f"unknown implicit certificate kind {kind!r}")


def ensure_property(f: ImplicitF, key: str, runner: Callable[[], CheckResult]) -> CheckResult:
    """Run ``runner`` unless the cache already holds a decided result."""
    cached = f.props.get(key)
    if cached is not None and cached.status != Status.UNCHECKED:
        return cached
    result = runner()
    f.props[key] = result
    return result


# ---------------------------------------------------------------------------
# coordinate sequence families


@dataclass(frozen=True)
class SeqFamily:
    """Generator of six-coordinate sequences approaching ``target``.

    ``mode="right"``: coordinate ``j`` (1-based) approaches target[j] strictly
    from above; ``mode="point"``: it is pinned to target[j] exactly.  The
    remaining coordinates approach their targets at rate ~c/n from a random
    side, with rates scaled to the target magnitude so small targets are not
    swamped, and clamped so every term stays strictly positive whenever the
    target coordinate is positive or approached from above.
    """

    target: tuple[float, float, float, float, float, float]
    j: int
    mode: str  # "right" | "point"
    count: int = 8
    length: int = 400
    seed: int = 0
    scale: float | None = None

    def _scale(self) -> float:
        if self.scale is not None:
            return self.scale
        pos = [w for w in self.target if w > 0]
        return max(pos) if pos else 1.0

    def sequences(self) -> list[list[tuple[float, ...]]]:
        if not 1 <= self.j <= 6:
            raise ValueError(f"coordinate index out of range: {self.j}")
        if self.mode not in ("right", "point"):
            raise ValueError(f"unknown mode {self.mode!r}")
        sc = self._scale()
        out = []
        for k in range(self.count):
            rng = random.Random((self.seed * 1_000_003 + k) ^ 0x5EED)
            rates = [rng.uniform(0.05, 1.0) * sc for _ in range(6)]
            signs = []
            for i in range(6):
                w = self.target[i]
                if i == self.j - 1:
                    signs.append(+1)
                elif w <= 0:
                    signs.append(+1)
                else:
                    signs.append(rng.choice((-1, +1)))
            # cap downward rates so w - c/(n+1) stays positive from n=1 on
            for i in range(6):
                if signs[i] < 0:
                    rates[i] = min(rates[i], 0.9 * self.target[i])
            seq = []
            for n in range(1, self.length + 1):
                term = []
                for i in range(6):
                    w = self.target[i]
                    if i == self.j - 1 and self.mode == "point":
                        term.append(w)
                    else:
                        term.append(w + signs[i] * rates[i] / (n + 1))
                seq.append(tuple(term))
            out.append(seq)
        return out

    def membership(self) -> CheckResult:
        """Generator self-test: positivity, the j-side condition, and
        convergence of every coordinate toward the target."""
        sc = self._scale()
        wj = self.target[self.j - 1]
        for k, seq in enumerate(self.sequences()):
            for n, term in enumerate(seq):
                if self.mode == "right" and not term[self.j - 1] > wj:
                    return failed("seq-family", witness=(k, n, term))
                if self.mode == "point" and term[self.j - 1] != wj:
                    return failed("seq-family", witness=(k, n, term))
                if any(v < 0 for v in term) or (self.mode == "right" and min(term) <= 0):
                    return failed("seq-family", witness=(k, n, term))
            last = seq[-1]
            if any(abs(last[i] - self.target[i]) > 1.1 * sc / self.length for i in range(6)):
                return failed("seq-family", witness=(k, "slow-convergence", last))
        return passed("seq-family", count=self.count, length=self.length)


def make_j_right(target: Sequence[float], j: int, count: int = 8, length: int = 400,
                 seed: int = 0, scale: float | None = None) -> SeqFamily:
    return SeqFamily(tuple(float(w) for w in target), j, "right", count, length, seed, scale)


def make_j_point(target: Sequence[float], j: int, count: int = 8, length: int = 400,
                 seed: int = 0, scale: float | None = None) -> SeqFamily:
    return SeqFamily(tuple(float(w) for w in target), j, "point", count, length, seed, scale)


def _tail_max(values: Sequence[float]) -> float:
    tail = values[3 * len(values) // 4:]
    return max(tail)


# ---------------------------------------------------------------------------
# adversarial chains for the sequence conditions


@dataclass(frozen=True)
class ChainConfig:
    trials: int = 200
    max_steps: int = 100_000
    target: float = 1e-4
    growth: float = 1.25
    bisect_iters: int = 25
    proposals: int = 12
    r0_max: float = 10.0
    r_cap: float = 1e9


def _admissible_s(f: ImplicitF, r_prev: float, r_next: float,
                  rng: random.Random | None) -> float | None:
    """Find s with |s - r_prev| <= r_next making F(r_next, r_prev, r_prev,
    r_next, s, 0) <= 0, probing the band endpoints first."""
    lo = max(0.0, r_prev - r_next)
    hi = r_prev + r_next
    probes = [hi, lo, 0.5 * (lo + hi)]
    if rng is not None:
        probes += [rng.uniform(lo, hi), rng.uniform(lo, hi)]
    for s in probes:
        if f(r_next, r_prev, r_prev, r_next, s, 0.0) <= 0.0:
            return s
    return None


def _largest_admissible(f: ImplicitF, r_prev: float, cfg: ChainConfig,
                        rng: random.Random | None) -> tuple[float, float] | None:
    """Bisection for the largest r_next admitting some admissible s."""
    hi = min(cfg.growth * r_prev, cfg.r_cap)
    s = _admissible_s(f, r_prev, hi, rng)
    if s is not None:
        return hi, s
    lo = None
    for frac in (0.5, 0.25, 0.1, 0.01, 1e-4, 1e-8):
        cand = frac * r_prev
        s = _admissible_s(f, r_prev, cand, rng)
        if s is not None:
            lo, s_lo = cand, s
            break
    if lo is None:
        return None
    for _ in range(cfg.bisect_iters):
        mid = 0.5 * (lo + hi)
        s = _admissible_s(f, r_prev, mid, rng)
        if s is not None:
            lo, s_lo = mid, s
        else:
            hi = mid
    return lo, s_lo


def _random_admissible(f: ImplicitF, r_prev: float, cfg: ChainConfig,
                       rng: random.Random) -> tuple[float, float] | None:
    cap = min(cfg.growth * r_prev, cfg.r_cap)
    for _ in range(cfg.proposals):
        cand = cap * (1.0 - rng.random())
        s = _admissible_s(f, r_prev, cand, rng)
        if s is not None:
            # resample s uniformly in the band, keeping admissibility
            lo, hi = max(0.0, r_prev - cand), r_prev + cand
            for _ in range(20):
                s_try = rng.uniform(lo, hi)
                if f(cand, r_prev, r_prev, cand, s_try, 0.0) <= 0.0:
                    s = s_try
                    break
            return cand, s
    return _largest_admissible(f, r_prev, cfg, rng)


def check_compatible_F(f: ImplicitF, trials: int = 200, seed: int = 0,
                       max_steps: int = 100_000, target: float = 1e-4,
                       cfg: ChainConfig | None = None) -> CheckResult:
    """Sampled sequence compatibility for F.

    Generates coupled chains (r_n) in (0, inf) and (s_n) in [0, inf) with
    F(r_n, r_{n-1}, r_{n-1}, r_n, s_{n-1}, 0) <= 0 and |s_{n-1} - r_{n-1}|
    <= r_n at every step; the first two trials run the bisection-extremal
    chain from fixed large starts, the rest pick random admissible steps.
    A chain that cannot be extended counts as vacuous for that trial;
    a chain still above ``target`` after ``max_steps`` is a failure.
    """
    cfg = cfg or ChainConfig(trials=trials, max_steps=max_steps, target=target)
    vacuous_trials = 0
    longest = 0
    for trial in range(trials):
        rng = random.Random(seed * 1_000_003 + trial)
        extremal = trial < 2
        r = (1.0, 5.0)[trial] if extremal else cfg.r0_max * (1.0 - rng.random())
        r0, n = r, 0
        tail: list[float] = [r]
        dead = False
        while r >= target and n < max_steps:
            step = (_largest_admissible(f, r, cfg, None) if extremal
                    else _random_admissible(f, r, cfg, rng))
            if step is None:
                vacuous_trials += 1
                dead = True
                break
            r = step[0]
            n += 1
            tail.append(r)
            if len(tail) > 8:
                tail.pop(0)
        longest = max(longest, n)
        if not dead and r >= target:
            return failed("compatible-F", witness={"r0": r0, "tail": tail},
                          trial=trial, steps=n)
    return sampled("compatible-F", trials=trials, vacuous_trials=vacuous_trials,
                   longest_run=longest, target=target)


def check_almost_compatible(f: ImplicitF, trials: int = 64, seed: int = 0,
                            max_steps: int = 100_000, target: float = 1e-4,
                            cfg: ChainConfig | None = None) -> CheckResult:
    """Like compatibility but with the fifth argument pinned to the extreme
    r_n + r_{n-1}: chains satisfying F(r_n, r_{n-1}, r_{n-1}, r_n,
    r_n + r_{n-1}, 0) <= 0 must decay."""
    cfg = cfg or ChainConfig(trials=trials, max_steps=max_steps, target=target)

    def admissible(r_prev: float, cand: float) -> bool:
        return f(cand, r_prev, r_prev, cand, cand + r_prev, 0.0) <= 0.0

    def largest(r_prev: float) -> float | None:
        hi = min(cfg.growth * r_prev, cfg.r_cap)
        if admissible(r_prev, hi):
            return hi
        lo = None
        for frac in (0.5, 0.25, 0.1, 0.01, 1e-4, 1e-8):
            if admissible(r_prev, frac * r_prev):
                lo = frac * r_prev
                break
        if lo is None:
            return None
        for _ in range(cfg.bisect_iters):
            mid = 0.5 * (lo + hi)
            if admissible(r_prev, mid):
                lo = mid
            else:
                hi = mid
        return lo

    vacuous_trials = 0
    for trial in range(trials):
        rng = random.Random(seed * 999_983 + trial)
        extremal = trial < 2
        r = (1.0, 5.0)[trial] if extremal else cfg.r0_max * (1.0 - rng.random())
        r0, n = r, 0
        dead = False
        while r >= target and n < max_steps:
            if extremal:
                nxt = largest(r)
            else:
                nxt = None
                cap = min(cfg.growth * r, cfg.r_cap)
                for _ in range(cfg.proposals):
                    cand = cap * (1.0 - rng.random())
                    if admissible(r, cand):
                        nxt = cand
                        break
                if nxt is None:
                    nxt = largest(r)
            if nxt is None:
                vacuous_trials += 1
                dead = True
                break
            r = nxt
            n += 1
        if not dead and r >= target:
            return failed("almost-compatible", witness={"r0": r0, "r": r},
                          trial=trial, steps=n)
    return sampled("almost-compatible", trials=trials, vacuous_trials=vacuous_trials)


# ---------------------------------------------------------------------------
# pointwise positivity and limsup-positivity


def check_34_normal(f: ImplicitF, grid: Sequence[float] | None = None,
                    margin: float = STRICT_MARGIN) -> CheckResult:
    """Strict positivity of F(r, r, 0, 0, r, r) for r > 0 (kills duplicate
    comparable fixed points)."""
    for r in grid if grid is not None else positive_grid():
        v = f(r, r, 0.0, 0.0, r, r)
        if not v > margin:
            return failed("34-normal", witness=r, value=float(v))
    return sampled("34-normal")


def check_236_normal(f: ImplicitF, grid: Sequence[float] | None = None,
                     margin: float = STRICT_MARGIN) -> CheckResult:
    """Strict positivity of F(r, 0, 0, r, r, 0) for r > 0."""
    for r in grid if grid is not None else positive_grid():
        v = f(r, 0.0, 0.0, r, r, 0.0)
        if not v > margin:
            return failed("236-normal", witness=r, value=float(v))
    return sampled("236-normal")


def _level_scale(b: float) -> float:
    """Approach-rate scale for positivity checks at level b.

    The positivity gap of certificates built from near-identity bounds
    shrinks like b^2, while family approach-noise shrinks only like
    scale/length; quadratic scaling keeps the noise below any such gap at
    every level (and equals b for b >= 1, where rates of order b are the
    natural choice)."""
    return b * min(1.0, b)


def _level_margin(margin: float, b: float) -> float:
    """Strictness margin proportional to the squared level, capped at the
    absolute margin (used as-is for b >= 1)."""
    return margin * min(1.0, b * b)


def check_2_right_lim_positive_at(f: ImplicitF, b: float, count: int = 8,
                                  length: int = 400, seed: int = 0,
                                  margin: float = STRICT_MARGIN) -> CheckResult:
    """At target (b, b, 0, 0, b, b) with the second coordinate approaching
    strictly from above, the tail max of F along every generated sequence
    must exceed the level margin (finite proxy for limsup F > 0)."""
    if b <= 0:
        raise ValueError("positivity level b must be positive")
    fam = make_j_right((b, b, 0.0, 0.0, b, b), j=2, count=count, length=length,
                       seed=seed, scale=_level_scale(b))
    eff = _level_margin(margin, b)
    worst = math.inf
    for k, seq in enumerate(fam.sequences()):
        tm = _tail_max([float(f(*term)) for term in seq])
        if not tm > eff:
            return failed("2-right-lim-positive", witness={"b": b, "family": k},
                          tail_max=tm)
        worst = min(worst, tm)
    return sampled("2-right-lim-positive", b=b, tail_bound=worst)


def check_almost_2_right(f: ImplicitF, eps_grid: Sequence[float] = EPS_GRID,
                         count: int = 4, length: int = 400, seed: int = 0,
                         max_halvings: int = 40,
                         margin: float = STRICT_MARGIN) -> CheckResult:
    """Cofinality of the positivity levels: below each eps, geometric search
    finds some b where the 2-right check passes.  The discovered levels are
    reported (they seed threshold sets for gap extraction downstream)."""
    thetas: dict[float, float] = {}
    for eps in eps_grid:
        b = eps / 2.0
        found = None
        for _ in range(max_halvings):
            if b <= 0:
                break
            res = check_2_right_lim_positive_at(f, b, count=count, length=length,
                                                seed=seed, margin=margin)
            if res.ok:
                found = b
                break
            b /= 2.0
        if found is None:
            return failed("almost-2-right", witness=eps, thetas=thetas)
        thetas[eps] = found
    return sampled("almost-2-right", thetas=thetas)


def check_4_point_lim_positive(f: ImplicitF, b_grid: Sequence[float] | None = None,
                               count: int = 4, length: int = 400, seed: int = 0,
                               margin: float = STRICT_MARGIN) -> CheckResult:
    """At every sampled b the tail max of F along 4-pinned sequences toward
    (b, 0, 0, b, b, 0) must exceed the margin."""
    if b_grid is None:
        b_grid = [1e-3 * (10.0 / 1e-3) ** (i / 63.0) for i in range(64)]
    worst = math.inf
    for b in b_grid:
        fam = make_j_point((b, 0.0, 0.0, b, b, 0.0), j=4, count=count,
                           length=length, seed=seed, scale=_level_scale(b))
        eff = _level_margin(margin, b)
        for k, seq in enumerate(fam.sequences()):
            tm = _tail_max([float(f(*term)) for term in seq])
            if not tm > eff:
                return failed("4-point-lim-positive", witness={"b": b, "family": k},
                              tail_max=tm)
            worst = min(worst, tm)
    return sampled("4-point-lim-positive", levels=len(list(b_grid)), tail_bound=worst)


# ---------------------------------------------------------------------------
# lower semicontinuity and monotonicity


def _lsc_anchors(rng: random.Random, extra: int) -> list[tuple[float, ...]]:
    anchors: list[tuple[float, ...]] = []
    for v in (0.5, 1.0, 1.5):
        anchors.append((v, v, 0.0, 0.0, v, v))
        anchors.append((v, 0.0, 0.0, v, v, 0.0))
        anchors.append((v,) * 6)
    for _ in range(extra):
        anchors.append(tuple(rng.uniform(0.0, 2.5) for _ in range(6)))
    return anchors


def check_lsc(f: ImplicitF, seed: int = 0, random_anchors: int = 24,
              length: int = 400, tol: float = 1e-7) -> CheckResult:
    """Sampled lower semicontinuity: along every perturbation sequence
    shrinking into an anchor a, the running min of F over the tail must not
    drop below F(a) - tol.

    Perturbation amplitudes decay geometrically from 1e-4 down to 1e-12 so
    tail terms are numerically distinct from the anchor yet close enough
    that a continuous F moves by far less than tol; a genuine one-sided jump
    persists at every amplitude and is caught in the tail.
    """
    rng = random.Random(seed)
    directions = []
    for i in range(6):
        e = [0.0] * 6
        e[i] = 1.0
        directions.append(tuple(e))
        e2 = [0.0] * 6
        e2[i] = -1.0
        directions.append(tuple(e2))
    for _ in range(6):
        d = [rng.choice((-1.0, 0.0, 1.0)) for _ in range(6)]
        if any(d):
            directions.append(tuple(d))
    amps = [1e-4 * (1e-8) ** (n / length) for n in range(length)]
    for a in _lsc_anchors(rng, random_anchors):
        base = float(f(*a))
        for d in directions:
            vals = []
            for amp in amps:
                term = tuple(max(a[i] + d[i] * amp, 0.0) for i in range(6))
                vals.append(float(f(*term)))
            tail_min = min(vals[3 * len(vals) // 4:])
            if tail_min < base - tol:
                return failed("lsc", witness={"anchor": a, "direction": d},
                              value=base, tail_min=tail_min)
    return sampled("lsc", anchors=9 + random_anchors)


def check_2to6_decreasing(f: ImplicitF, samples: int = 192, seed: int = 0,
                          slack: float = STRICT_MARGIN) -> CheckResult:
    """With the first argument held fixed, F must be coordinatewise
    decreasing in each of the remaining five arguments (sampled bumps)."""
    rng = random.Random(seed)
    for _ in range(samples):
        base = [rng.uniform(0.0, 3.0) for _ in range(6)]
        v0 = f(*base)
        for i in range(1, 6):
            for h in (0.1, 0.7):
                bumped = list(base)
                bumped[i] += h
                if f(*bumped) > v0 + slack:
                    return failed("2to6-decreasing", witness=(tuple(base), i, h))
    return sampled("2to6-decreasing", samples=samples)


def check_psi_compatible(f: ImplicitF, psi: ScalarFn, samples: int = 2048,
                         seed: int = 0, slack: float = STRICT_MARGIN) -> CheckResult:
    """Whenever F(u, v, v, u, u+v, 0) <= 0 for sampled u, v > 0, the scalar
    bound u <= psi(v) must follow."""
    rng = random.Random(seed)
    pairs = [(rng.uniform(1e-6, 5.0), rng.uniform(1e-6, 5.0)) for _ in range(samples)]
    for v in positive_grid(count=33, rand=0):
        bound = float(psi(v))
        for u in (0.999 * bound, bound, 1.5 * bound + 1e-9):
            if u > 0:
                pairs.append((u, v))
    checked = 0
    for u, v in pairs:
        if f(u, v, v, u, u + v, 0.0) <= 0.0:
            checked += 1
            if not u <= float(psi(v)) + slack:
                return failed("psi-compatible", witness=(u, v), bound=float(psi(v)))
    if checked == 0:
        return vacuous("psi-compatible")
    return sampled("psi-compatible", satisfied_pairs=checked)


# ---------------------------------------------------------------------------
# generalized set-valued certificates


P_REGISTRY: dict[str, Callable] = {
    # nonnegative half-line, with a hair of slack for float boundaries
    "nonneg": lambda v: v >= -1e-12,
    "positive": lambda v: v > 0,
}


@dataclass(frozen=True)
class GeneralizedSP:
    """Certificate into an opaque codomain S with distinguished subset P.

    Only membership in P is ever consulted, so S is represented by values
    plus the predicate ``in_p``.  The locality radius ``a`` must satisfy
    0 < a(r) < r (validated on a sample of radii at construction)."""

    name: str
    fn: Callable
    in_p: Callable
    a: Callable
    descriptor: dict | None = field(default=None, compare=False)

    def __post_init__(self):
        for r in (1e-3, 0.1, 1.0, 10.0):
            ar = self.a(r)
            if not 0 < ar < r:
                raise ValueError(f"locality radius must satisfy 0 < a(r) < r; "
                                 f"a({r}) = {ar}")

    def __call__(self, t1, t2, t3, t4, t5, t6):
        return self.fn(t1, t2, t3, t4, t5, t6)

    def to_json(self) -> dict:
        if self.descriptor is None:
            raise ValueError(f"{self.name} has no serializable descriptor")
        return dict(self.descriptor)


def sp_from_json(data: dict) -> GeneralizedSP:
    pname = data.get("P", "nonneg")
    if pname not in P_REGISTRY:
        raise ValueError(f"unknown membership predicate {pname!r}")
    fdesc = data["F"]
    body = fdesc["body"] if isinstance(fdesc, dict) else str(fdesc)
    fn = compile_expr(body, VARS6)
    a_fn = scalar_from_json(data["a"])
    return GeneralizedSP(f"sp({body})", fn, P_REGISTRY[pname], a_fn,
                         descriptor={"kind": "sp", "P": pname,
                                     "F": {"kind": "expr6", "body": body},
                                     "a": a_fn.to_json()})


_OFF = 1e-12  # interior offset for open box endpoints


def _box_points(lo: float, hi: float, closed_lo: bool, closed_hi: bool,
                rng: random.Random, count: int) -> list[float]:
    span = hi - lo
    eps = _OFF * max(1.0, abs(lo), abs(hi)) + _OFF * span
    a = lo if closed_lo else lo + eps
    b = hi if closed_hi else hi - eps
    if b < a:
        return [a]
    pts = [a, b, 0.5 * (a + b)]
    pts += [rng.uniform(a, b) for _ in range(count)]
    return pts


def check_sp_conditions(cert: GeneralizedSP, r_grid: Sequence[float] | None = None,
                        samples: int = 5, seed: int = 0) -> PropertyReport:
    """Audit the two global and three local membership conditions of a
    generalized certificate on sampled boxes, using the certificate's own
    locality radius.  Box endpoints follow the stated open/closed sides."""
    report = PropertyReport(f"sp-conditions[{cert.name}]")
    rng = random.Random(seed)
    if r_grid is None:
        r_grid = [0.05 * (100.0) ** (i / 15.0) for i in range(16)]

    # global: diagonal profile must escape P
    res = None
    for w in positive_grid(count=65, rand=16, seed=seed):
        if cert.in_p(cert(w, w, 0.0, 0.0, w, w)):
            res = failed("sp-f01", witness=w)
            break
    report.add(res or sampled("sp-f01"))

    # global: membership on the chain profile forces u <= v
    res = None
    for _ in range(512):
        u = rng.uniform(1e-6, 5.0)
        v = rng.uniform(1e-6, 5.0)
        for p in (0.0, 0.5 * (u + v), u + v):
            if cert.in_p(cert(u, v, v, u, p, 0.0)) and not u <= v + 1e-12:
                res = failed("sp-f02", witness=(u, v, p))
                break
        if res:
            break
    report.add(res or sampled("sp-f02"))

    # local boxes around each sampled radius
    res3 = res4 = res5 = None
    for r in r_grid:
        ar = cert.a(r)
        band = _box_points(r, r + ar, True, False, rng, samples)          # [r, r+a(r))
        wide = _box_points(r - ar, r + ar, False, False, rng, samples)    # (r-a(r), r+a(r))
        small = _box_points(0.0, ar, False, False, rng, samples)          # (0, a(r))
        if res3 is None:
            for u in band:
                for v in band:
                    if u > v:
                        continue
                    for p in (0.0, u, u + v):
                        if cert.in_p(cert(u, v, v, u, p, 0.0)):
                            res3 = failed("sp-f03", witness=(r, u, v, p))
                            break
                    if res3:
                        break
                if res3:
                    break
        if res4 is None:
            for _ in range(64):
                t = rng.choice(wide)
                p = rng.choice(wide)
                q = rng.choice(wide)
                u = rng.choice(band)
                v = rng.choice(small)
                w = rng.choice(small)
                if cert.in_p(cert(t, u, v, w, p, q)):
                    res4 = failed("sp-f04", witness=(r, t, u, v, w, p, q))
                    break
        if res5 is None:
            for _ in range(64):
                t = rng.choice(wide)
                p = rng.choice(wide)
                u = rng.choice(small)
                v = rng.choice(small)
                q = rng.choice(small)
                if cert.in_p(cert(t, u, v, r, p, q)):
                    res5 = failed("sp-f05", witness=(r, t, u, v, p, q))
                    break
    report.add(res3 or sampled("sp-f03"))
    report.add(res4 or sampled("sp-f04"))
    report.add(res5 or sampled("sp-f05"))
    return report
