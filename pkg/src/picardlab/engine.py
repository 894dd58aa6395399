"""Picard iteration engine: orbit traces, contraction verification over
point pairs, and the staged theorem pipelines.

Each pipeline runs hypothesis checks in order, short-circuits on the first
blocking failure with a structured reason, then iterates, classifies the
orbit, accepts or rejects the limit as a fixed point, and (where the
certificate warrants it) audits order-uniqueness of the fixed-point set.
Verdicts record every stage.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .implicit import (
    GeneralizedSP,
    ImplicitF,
    PROP_ALMOST_2RIGHT,
    PROP_COMPATIBLE,
    PROP_LSC,
    PROP_NORMAL34,
    PROP_NORMAL236,
    PROP_POINT4,
    check_2_right_lim_positive_at,
    check_34_normal,
    check_236_normal,
    check_almost_2_right,
    check_compatible_F,
    check_4_point_lim_positive,
    check_lsc,
    check_sp_conditions,
    ensure_property,
    f_from_psi,
)
from .report import CheckResult, Status, failed, passed, sampled, vacuous
from .scalars import (
    ScalarFn,
    check_almost_bw_admissible,
    check_compatible_psi,
    check_increasing,
    check_matkowski,
    check_regressive,
    eval_Lstar,
)
from .spaces import (
    DEFAULT_TOL,
    ScanConfig,
    Selfmap,
    Space,
    find_fixed_point_candidates,
    fixed_points,
    in_start_set,
    is_finite,
    is_increasing,
    is_order_singleton,
    six_distances,
    validate_space,
)

PAIR_SLACK = 1e-12


@dataclass(frozen=True)
class PhiContraction:
    """Explicit certificate: d(Tx, Ty) <= phi(d(x, y)) on comparable pairs."""

    phi: ScalarFn

    def to_json(self) -> dict:
        return {"kind": "phi", "fn": self.phi.to_json()}


@dataclass(frozen=True)
class PsiContraction:
    """Explicit certificate: d(Tx, Ty) <= psi(max{m2, m3, m4, (m5+m6)/2})
    on comparable distinct pairs."""

    psi: ScalarFn

    def to_json(self) -> dict:
        return {"kind": "psi", "fn": self.psi.to_json()}


Certificate = object  # PhiContraction | PsiContraction | ImplicitF | GeneralizedSP


@dataclass
class PipelineConfig:
    max_iter: int = 1_000_000
    tol: float = DEFAULT_TOL
    seed: int = 0
    scan: ScanConfig = field(default_factory=ScanConfig)
    trials: int = 200
    multi_start: int = 16
    families: int = 4     # sequence families per positivity level
    seq_length: int = 400
    declared_continuous: bool = False
    fp_factor: float = 10.0  # fixed-point acceptance is fp_factor * tol

    def to_json(self) -> dict:
        return {"max_iter": self.max_iter, "tol": self.tol, "seed": self.seed,
                "trials": self.trials, "multi_start": self.multi_start}

    @staticmethod
    def from_json(data: dict) -> "PipelineConfig":
        cfg = PipelineConfig()
        cfg.max_iter = int(data.get("max_iter", cfg.max_iter))
        cfg.tol = float(data.get("tol", cfg.tol))
        cfg.seed = int(data.get("seed", cfg.seed))
        cfg.trials = int(data.get("trials", cfg.trials))
        cfg.multi_start = int(data.get("multi_start", cfg.multi_start))
        if "scan" in data:
            cfg.scan = ScanConfig(**data["scan"])
        return cfg


@dataclass
class OrbitTrace:
    """Record of one Picard orbit: points x_n = T^n x0, consecutive
    distances r_n = d(x_n, x_{n+1}), skip distances s_n = d(x_n, x_{n+2}),
    and classification flags.  The triangle bound |s_{n-1} - r_{n-1}| <= r_n
    is asserted on construction."""

    x0: object
    points: list
    r: list
    s: list
    ascending: bool
    x0_in_start_set: bool
    converged: bool
    terminated_at_fixed_point: bool
    cycle_detected: bool = False
    limit_candidate: object = None
    semi_cauchy: bool | None = None
    cauchy_estimate: bool | None = None

    def __len__(self) -> int:
        return len(self.points)

    def to_dict(self) -> dict:
        from .report import jsonable
        return {
            "x0": jsonable(self.x0),
            "points": jsonable(self.points),
            "r": jsonable(self.r),
            "s": jsonable(self.s),
            "ascending": self.ascending,
            "x0_in_start_set": self.x0_in_start_set,
            "converged": self.converged,
            "terminated_at_fixed_point": self.terminated_at_fixed_point,
            "cycle_detected": self.cycle_detected,
            "limit_candidate": jsonable(self.limit_candidate),
            "semi_cauchy": self.semi_cauchy,
            "cauchy_estimate": self.cauchy_estimate,
        }


def _assert_skip_bound(space: Space, r: Sequence, s: Sequence) -> None:
    slack = 0 if is_finite(space) else 1e-12
    for n in range(1, len(r)):
        lhs = abs(s[n - 1] - r[n - 1])
        if lhs > r[n] + slack * (1.0 + float(lhs)):
            raise ArithmeticError(
                f"skip-distance bound broken at n={n}: |s-r|={lhs} > r_n={r[n]}")


def trace_from_points(space: Space, t: Selfmap, points: Sequence,
                      tol: float = DEFAULT_TOL) -> OrbitTrace:
    """Build a trace (with all derived quantities) from a raw point path."""
    pts = list(points)
    r = [space.d(pts[i], pts[i + 1]) for i in range(len(pts) - 1)]
    s = [space.d(pts[i], pts[i + 2]) for i in range(len(pts) - 2)]
    _assert_skip_bound(space, r, s)
    ascending = all(space.le(pts[i], pts[i + 1]) for i in range(len(pts) - 1))
    last = pts[-1]
    fixed = (t(last) == last) if is_finite(space) else space.d(last, t(last)) <= 10 * tol
    return OrbitTrace(
        x0=pts[0], points=pts, r=r, s=s, ascending=ascending,
        x0_in_start_set=in_start_set(space, t, pts[0]),
        converged=bool(r and float(r[-1]) <= tol) or len(pts) == 1 or fixed,
        terminated_at_fixed_point=fixed, limit_candidate=last,
    )


def picard_orbit(space: Space, t: Selfmap, x0, max_iter: int = 1_000_000,
                 tol: float = DEFAULT_TOL) -> OrbitTrace:
    """Iterate T from x0 until the step repeats (finite: exactly; interval:
    step size <= tol) or the budget runs out.  A revisited non-consecutive
    point on a finite space is a cycle: the trace is flagged non-convergent
    rather than raising."""
    pts = [x0]
    cycle = False
    converged = False
    if is_finite(space):
        seen = {x0: 0}
        cur = x0
        for _ in range(max_iter):
            nxt = t(cur)
            if nxt == cur:
                converged = True
                break
            if nxt in seen:
                pts.append(nxt)
                cycle = True
                break
            pts.append(nxt)
            seen[nxt] = len(pts) - 1
            cur = nxt
    else:
        cur = x0
        for _ in range(max_iter):
            nxt = space.clamp(t(cur))
            pts.append(nxt)
            if space.d(cur, nxt) <= tol:
                converged = True
                break
            cur = nxt
    trace = trace_from_points(space, t, pts, tol=tol)
    trace.cycle_detected = cycle
    trace.converged = converged
    if cycle:
        trace.terminated_at_fixed_point = False
        trace.limit_candidate = None
    return trace


def classify_cauchy(space: Space, trace: OrbitTrace, window: int = 32,
                    tol: float = 1e-6) -> tuple[bool, bool]:
    """Set and return the semi-Cauchy / Cauchy-estimate flags: the tail of
    consecutive distances below tol, and the max pairwise distance within
    the tail window below tol."""
    if len(trace.points) < window:
        raise ValueError(f"trace length {len(trace.points)} is below the window {window}")
    tail_r = trace.r[-(window - 1):] if trace.r else []
    semi = all(float(v) < tol for v in tail_r)
    tail_pts = trace.points[-window:]
    cauchy = True
    for i in range(len(tail_pts)):
        for j in range(i + 1, len(tail_pts)):
            if float(space.d(tail_pts[i], tail_pts[j])) >= tol:
                cauchy = False
                break
        if not cauchy:
            break
    trace.semi_cauchy = semi
    trace.cauchy_estimate = cauchy
    return semi, cauchy


# ---------------------------------------------------------------------------
# contraction verification


def all_pairs(space: Space, scan: ScanConfig | None = None) -> list[tuple]:
    """Every ordered point pair on finite spaces; all ordered pairs of grid
    samples on intervals."""
    if is_finite(space):
        return [(x, y) for x in space.points for y in space.points]
    pts = space.grid(scan)
    return [(x, y) for x in pts for y in pts]


def verify_contraction_on_pairs(space: Space, t: Selfmap, cert: Certificate,
                                pairs: Sequence[tuple],
                                slack: float | None = None) -> CheckResult:
    """Check the certificate's defining inequality (or membership) on every
    pair that its own guard admits; the first violation is the witness.

    Guards: phi-certificates need x <= y; psi- and implicit certificates
    need x <= y and x != y; generalized certificates need Tx != Ty and
    ignore the order entirely.  Comparisons are exact on finite spaces and
    allow float roundoff slack on intervals.
    """
    if slack is None:
        slack = 0 if is_finite(space) else PAIR_SLACK
    checked = 0
    if isinstance(cert, PhiContraction):
        name = "contraction-phi"
        for x, y in pairs:
            if not space.le(x, y):
                continue
            checked += 1
            lhs = space.d(t(x), t(y))
            rhs = cert.phi(space.d(x, y))
            if not lhs <= rhs + slack:
                return failed(name, witness=(x, y), lhs=float(lhs), rhs=float(rhs))
    elif isinstance(cert, PsiContraction):
        name = "contraction-psi"
        for x, y in pairs:
            if space.point_eq(x, y) or not space.le(x, y):
                continue
            checked += 1
            m = six_distances(space, t, x, y)
            rhs = cert.psi(eval_Lstar(*m.tail()))
            if not m.m1 <= rhs + slack:
                return failed(name, witness=(x, y), lhs=float(m.m1), rhs=float(rhs))
    elif isinstance(cert, ImplicitF):
        name = "contraction-implicit"
        for x, y in pairs:
            if space.point_eq(x, y) or not space.le(x, y):
                continue
            checked += 1
            v = cert.eval_tuple(six_distances(space, t, x, y).as_tuple())
            if not v <= slack:
                return failed(name, witness=(x, y), value=float(v))
    elif isinstance(cert, GeneralizedSP):
        name = "contraction-sp"
        for x, y in pairs:
            if space.point_eq(t(x), t(y)):
                continue
            checked += 1
            m = six_distances(space, t, x, y)
            if not cert.in_p(cert(*m.as_tuple())):
                return failed(name, witness=(x, y))
    else:
        raise TypeError(f"unknown certificate type: {type(cert).__name__}")
    if checked == 0:
        return vacuous(name)
    status = Status.PASS if is_finite(space) else Status.SAMPLED_PASS
    return CheckResult(name, status, detail={"pairs": checked})


# ---------------------------------------------------------------------------
# verdicts and shared pipeline stages


@dataclass
class PicardVerdict:
    theorem: str
    stages: list[CheckResult] = field(default_factory=list)
    trace: OrbitTrace | None = None
    extra_traces: list[OrbitTrace] = field(default_factory=list)
    fixed_point: object = None
    order_unique: bool | None = None

    @property
    def failed_stage(self) -> CheckResult | None:
        for stage in self.stages:
            if not stage.ok and stage.blocking:
                return stage
        return None

    @property
    def ok(self) -> bool:
        """Picard conclusion established: hypotheses verified (at their
        exact or sampled level) and the orbit limit accepted as fixed."""
        return self.failed_stage is None and self.fixed_point is not None

    @property
    def global_ok(self) -> bool:
        return self.ok and self.order_unique is True

    def reason(self) -> str:
        stage = self.failed_stage
        return "ok" if stage is None else f"failed at stage {stage.name!r}"

    def to_dict(self) -> dict:
        from .report import jsonable
        return {
            "theorem": self.theorem,
            "ok": self.ok,
            "global_ok": self.global_ok,
            "reason": self.reason(),
            "stages": [s.to_dict() for s in self.stages],
            "fixed_point": jsonable(self.fixed_point),
            "order_unique": self.order_unique,
            "trace": self.trace.to_dict() if self.trace else None,
            "extra_starts": [tr.to_dict() for tr in self.extra_traces],
        }


def _stage_space(space: Space) -> CheckResult:
    rep = validate_space(space)
    if rep.ok:
        return passed("space-axioms") if is_finite(space) else \
            CheckResult("space-axioms", Status.PASS, detail={"notes": rep.notes})
    v = rep.violations[0]
    return failed("space-axioms", witness=(v.axiom, v.witness),
                  violations=len(rep.violations))


def _stage_start(space: Space, t: Selfmap, x0) -> CheckResult:
    if in_start_set(space, t, x0):
        return passed("start-point")
    return failed("start-point", witness=x0)


def _orbit_stages(space: Space, t: Selfmap, x0, config: PipelineConfig,
                  verdict: PicardVerdict) -> None:
    trace = picard_orbit(space, t, x0, config.max_iter, config.tol)
    verdict.trace = trace
    if trace.cycle_detected:
        verdict.stages.append(failed("orbit", witness=trace.points[-8:],
                                     reason="cycle detected"))
        return
    if not trace.converged:
        verdict.stages.append(failed("orbit", reason="iteration budget exhausted",
                                     steps=len(trace.points) - 1))
        return
    verdict.stages.append(passed("orbit", steps=len(trace.points) - 1))
    z = trace.limit_candidate
    if is_finite(space):
        accepted = t(z) == z
        residual = space.d(z, t(z))
    else:
        residual = space.d(z, t(z))
        accepted = residual <= config.fp_factor * config.tol
    if accepted:
        verdict.fixed_point = z
        verdict.stages.append(passed("fixed-point", residual=float(residual)))
    else:
        verdict.stages.append(failed("fixed-point", witness=z, residual=float(residual)))


def _residual_replay(space: Space, f: ImplicitF, trace: OrbitTrace,
                     slack: float | None = None) -> CheckResult:
    """Re-check the defining inequality along consecutive orbit pairs:
    F(r_n, r_{n-1}, r_{n-1}, r_n, s_{n-1}, 0) <= 0 whenever the points
    involved are distinct."""
    if slack is None:
        slack = 0 if is_finite(space) else PAIR_SLACK
    checked = 0
    pts, r, s = trace.points, trace.r, trace.s
    for n in range(1, len(s) + 1):
        if space.point_eq(pts[n - 1], pts[n]) or not space.le(pts[n - 1], pts[n]):
            continue
        zero = r[0] * 0
        v = f.eval_tuple((r[n], r[n - 1], r[n - 1], r[n], s[n - 1], zero))
        checked += 1
        if not v <= slack:
            return failed("orbit-residuals", witness=n, value=float(v))
    if checked == 0:
        return vacuous("orbit-residuals")
    return passed("orbit-residuals", steps=checked)


def _uniqueness_stage(space: Space, t: Selfmap, config: PipelineConfig,
                      discovered: Sequence) -> tuple[CheckResult, bool]:
    """Order-uniqueness of the fixed-point set: exact enumeration on finite
    spaces; on intervals, evidence from the limits of multi-start orbits
    (slow maps stop within a residual band, so limits of the same attractor
    are first merged at a clustering radius above the step tolerance)."""
    if is_finite(space):
        fixset = fixed_points(space, t)
        res = is_order_singleton(fixset, space)
        res.detail.setdefault("fixed_points", list(fixset))
        return res, res.ok

    limits = [z for z in discovered if z is not None]
    for start in _multi_start_points(space, config):
        tr = picard_orbit(space, t, start, config.max_iter, config.tol)
        if tr.terminated_at_fixed_point:
            limits.append(tr.limit_candidate)
    # the step-size stopping rule localizes a fixed point only to O(sqrt(tol))
    # for maps with quadratic residual decay, so that is the honest
    # identification resolution for discovered limits
    radius = max(10 * config.tol ** 0.5, 100 * config.tol)
    clusters: list[float] = []
    for z in sorted(limits):
        if not clusters or z - clusters[-1] > radius:
            clusters.append(z)
    res = is_order_singleton(clusters, space)
    res.detail.setdefault("fixed_points", [float(z) for z in clusters])
    res.detail["resolution"] = radius
    res.detail["evidence"] = ("order-uniqueness checked among fixed points "
                              "discovered by multi-start orbits only")
    return res, res.ok


def _multi_start_points(space: Space, config: PipelineConfig) -> list:
    if is_finite(space):
        return list(space.points)
    k = max(2, config.multi_start)
    return [space.lower + (space.upper - space.lower) * i / (k - 1) for i in range(k)]


# ---------------------------------------------------------------------------
# pipelines


def run_matkowski(space: Space, t: Selfmap, phi: ScalarFn, x0,
                  config: PipelineConfig | None = None) -> PicardVerdict:
    """Explicit pipeline: increasing T with d(Tx,Ty) <= phi(d(x,y)) for an
    increasing regressive phi whose iterates vanish, on a space whose order
    is self-closed (or with T declared order-continuous).  The conclusion
    audited is global: fixed point reached and order-unique."""
    config = config or PipelineConfig()
    v = PicardVerdict("t1")
    v.stages.append(_stage_space(space))
    if v.failed_stage:
        return v
    v.stages.append(_rename(check_regressive(phi), "phi-regressive"))
    v.stages.append(_rename(check_increasing(phi), "phi-increasing"))
    v.stages.append(_rename(check_matkowski(phi), "phi-matkowski"))
    if v.failed_stage:
        return v

    from .spaces import self_closed_status
    closed = self_closed_status(space)
    if config.declared_continuous:
        closed = passed("self-closed-or-continuous",
                        reason="map declared order-continuous",
                        declared=True)
    else:
        closed = _rename(closed, "self-closed-or-continuous")
    v.stages.append(closed)
    v.stages.append(is_increasing(space, t, config.scan))
    v.stages.append(_stage_start(space, t, x0))
    if v.failed_stage:
        return v
    v.stages.append(verify_contraction_on_pairs(
        space, t, PhiContraction(phi), all_pairs(space, config.scan)))
    if v.failed_stage:
        return v
    _orbit_stages(space, t, x0, config, v)
    if v.failed_stage:
        return v
    if config.declared_continuous and v.trace is not None and not is_finite(space):
        v.stages.append(_orbit_continuity_evidence(space, t, v.trace, config))
    res, unique = _uniqueness_stage(space, t, config, [v.fixed_point])
    v.stages.append(res)
    v.order_unique = unique
    return v


def _orbit_continuity_evidence(space: Space, t: Selfmap, trace: OrbitTrace,
                               config: PipelineConfig) -> CheckResult:
    """Necessary evidence for declared order-continuity: images of the tail
    of the orbit must approach the image of the limit."""
    z = trace.limit_candidate
    tz = t(z)
    tail = trace.points[-8:]
    gaps = [float(space.d(t(x), tz)) for x in tail]
    ok = gaps[-1] <= 1e3 * config.tol + 1e-12
    res = sampled("continuity-evidence", gaps=gaps) if ok else \
        failed("continuity-evidence", witness=gaps)
    res.detail["blocking"] = False
    return res


def _rename(res: CheckResult, name: str) -> CheckResult:
    res.name = name
    return res


def run_implicit(space: Space, t: Selfmap, f: ImplicitF, x0,
                 config: PipelineConfig | None = None,
                 _hypotheses: dict | None = None) -> PicardVerdict:
    """Implicit pipeline: six-variable certificate F with F(profile) <= 0 on
    comparable distinct pairs; requires the compatibility, cofinal 2-right
    positivity, and 4-point positivity properties of F, with (3,4)-normality
    adding the order-uniqueness conclusion.

    ``_hypotheses`` lets a batch driver reuse the instance-level stages
    (space axioms, monotonicity, contraction table) across starts.
    """
    config = config or PipelineConfig()
    v = PicardVerdict("t2")
    hyp = _hypotheses if _hypotheses is not None else {}

    def stage(key: str, runner: Callable[[], CheckResult]) -> CheckResult:
        if key not in hyp:
            hyp[key] = runner()
        v.stages.append(hyp[key])
        return hyp[key]

    stage("space", lambda: _stage_space(space))
    if v.failed_stage:
        return v
    stage("increasing", lambda: is_increasing(space, t, config.scan))
    v.stages.append(_stage_start(space, t, x0))
    if v.failed_stage:
        return v

    seed = config.seed
    trials = config.trials
    fams, length = config.families, config.seq_length
    v.stages.append(_rename(ensure_property(
        f, PROP_COMPATIBLE, lambda: check_compatible_F(f, trials=trials, seed=seed)),
        "cert-compatible"))
    v.stages.append(_rename(ensure_property(
        f, PROP_ALMOST_2RIGHT,
        lambda: check_almost_2_right(f, count=fams, length=length, seed=seed)),
        "cert-almost-2-right"))
    v.stages.append(_rename(ensure_property(
        f, PROP_POINT4,
        lambda: check_4_point_lim_positive(f, count=fams, length=length, seed=seed)),
        "cert-4-point"))
    if v.failed_stage:
        return v

    stage("contraction", lambda: verify_contraction_on_pairs(
        space, t, f, all_pairs(space, config.scan)))
    if v.failed_stage:
        return v

    _orbit_stages(space, t, x0, config, v)
    if v.failed_stage:
        return v
    v.stages.append(_residual_replay(space, f, v.trace))

    normal = ensure_property(f, PROP_NORMAL34, lambda: check_34_normal(f))
    normal = _rename(CheckResult(normal.name, normal.status, normal.witness,
                                 dict(normal.detail, blocking=False)), "cert-34-normal")
    v.stages.append(normal)
    if normal.ok:
        res, unique = _uniqueness_stage(space, t, config, [v.fixed_point])
        v.stages.append(res)
        v.order_unique = unique
    return v


def run_psi_explicit(space: Space, t: Selfmap, psi: ScalarFn, x0,
                     config: PipelineConfig | None = None,
                     _hypotheses: dict | None = None) -> PicardVerdict:
    """Explicit pipeline with the combined bound d(Tx,Ty) <=
    psi(max{m2,m3,m4,(m5+m6)/2}): verifies the scalar-level properties
    (sequence compatibility, cofinal one-sided admissibility), then runs
    the implicit pipeline on the induced certificate."""
    config = config or PipelineConfig()
    v = PicardVerdict("t3")
    v.stages.append(_rename(check_regressive(psi), "psi-regressive"))
    if v.failed_stage:
        return v
    v.stages.append(_rename(check_compatible_psi(psi, seed=config.seed),
                            "psi-compatible"))
    v.stages.append(_rename(check_almost_bw_admissible(psi), "psi-almost-boyd-wong"))
    if v.failed_stage:
        return v
    inner = run_implicit(space, t, f_from_psi(psi), x0, config, _hypotheses)
    v.stages.extend(inner.stages)
    v.trace = inner.trace
    v.extra_traces = inner.extra_traces
    v.fixed_point = inner.fixed_point
    v.order_unique = inner.order_unique
    v.theorem = "t3"
    return v


def run_lsc_implicit(space: Space, t: Selfmap, f: ImplicitF, x0,
                     config: PipelineConfig | None = None) -> PicardVerdict:
    """Global pipeline: lower semicontinuous compatible F that is positive
    on both diagonal profiles; order-uniqueness is mandatory."""
    config = config or PipelineConfig()
    v = PicardVerdict("t4")
    v.stages.append(_stage_space(space))
    if v.failed_stage:
        return v
    seed = config.seed
    v.stages.append(_rename(ensure_property(
        f, PROP_LSC, lambda: check_lsc(f, seed=seed)), "cert-lsc"))
    v.stages.append(_rename(ensure_property(
        f, PROP_NORMAL34, lambda: check_34_normal(f)), "cert-34-normal"))
    v.stages.append(_rename(ensure_property(
        f, PROP_NORMAL236, lambda: check_236_normal(f)), "cert-236-normal"))
    v.stages.append(_rename(ensure_property(
        f, PROP_COMPATIBLE, lambda: check_compatible_F(f, trials=config.trials, seed=seed)),
        "cert-compatible"))
    if v.failed_stage:
        return v
    v.stages.append(is_increasing(space, t, config.scan))
    v.stages.append(_stage_start(space, t, x0))
    if v.failed_stage:
        return v
    v.stages.append(verify_contraction_on_pairs(space, t, f, all_pairs(space, config.scan)))
    if v.failed_stage:
        return v
    _orbit_stages(space, t, x0, config, v)
    if v.failed_stage:
        return v
    v.stages.append(_residual_replay(space, f, v.trace))
    res, unique = _uniqueness_stage(space, t, config, [v.fixed_point])
    v.stages.append(res)
    v.order_unique = unique
    return v


def run_sp_implicit(space: Space, t: Selfmap, cert: GeneralizedSP, x0,
                    config: PipelineConfig | None = None) -> PicardVerdict:
    """Unordered pipeline for the generalized certificate: membership
    conditions audited on their boxes, contraction on pairs with Tx != Ty,
    then orbits from x0 and a batch of other starts must all reach the same
    fixed point."""
    config = config or PipelineConfig()
    v = PicardVerdict("t5")
    v.stages.append(_stage_space(space))
    if v.failed_stage:
        return v
    sp = check_sp_conditions(cert, seed=config.seed)
    merged = passed("sp-conditions") if sp.ok else failed(
        "sp-conditions",
        witness=[c.to_dict() for c in sp.checks.values() if not c.ok][:1])
    merged.detail["checks"] = {k: c.status.value for k, c in sp.checks.items()}
    v.stages.append(merged)
    if v.failed_stage:
        return v
    v.stages.append(verify_contraction_on_pairs(space, t, cert,
                                                all_pairs(space, config.scan)))
    if v.failed_stage:
        return v
    _orbit_stages(space, t, x0, config, v)
    if v.failed_stage:
        return v

    limits = [v.fixed_point]
    for start in _multi_start_points(space, config):
        tr = picard_orbit(space, t, start, config.max_iter, config.tol)
        v.extra_traces.append(tr)
        if tr.cycle_detected or not tr.terminated_at_fixed_point:
            v.stages.append(failed("global-convergence", witness=start))
            return v
        limits.append(tr.limit_candidate)
    spread = max(float(space.d(a, b)) for a in limits for b in limits)
    if spread <= config.fp_factor * config.tol:
        v.stages.append(passed("unique-limit", starts=len(limits), spread=spread))
        v.order_unique = True
    else:
        v.stages.append(failed("unique-limit", witness=limits, spread=spread))
        v.order_unique = False
    return v


THEOREM_RUNNERS: dict[str, Callable] = {
    "t1": run_matkowski,
    "t2": run_implicit,
    "t3": run_psi_explicit,
    "t4": run_lsc_implicit,
    "t5": run_sp_implicit,
}
