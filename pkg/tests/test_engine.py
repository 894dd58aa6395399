import math

import pytest

from picardlab.engine import (
    PhiContraction,
    PipelineConfig,
    PsiContraction,
    all_pairs,
    classify_cauchy,
    picard_orbit,
    run_implicit,
    run_lsc_implicit,
    run_matkowski,
    run_psi_explicit,
    run_sp_implicit,
    trace_from_points,
    verify_contraction_on_pairs,
)
from picardlab.gaps import walk_zero_one
from picardlab.implicit import GeneralizedSP, f_from_psi, implicit_from_expr
from picardlab.oracle import brute_force, random_instance
from picardlab.scalars import BUILTIN_SCALARS, ScalarFn, linear
from picardlab.spaces import IntervalSpace, ScanConfig, line_space, six_distances, table_map

UNIT = IntervalSpace(0.0, 1.0)
UNIT_AMORPHOUS = IntervalSpace(0.0, 1.0, "amorphous")
HALVE_UP = lambda x: (x + 1) / 2  # noqa: E731

FAST = PipelineConfig(trials=40, families=2, seq_length=200)


# --- orbits -------------------------------------------------------------------


def test_orbit_halving_toward_one_matches_closed_form():
    trace = picard_orbit(UNIT, HALVE_UP, 0.0, tol=1e-9)
    for n, x in enumerate(trace.points[:-1]):
        assert x == pytest.approx(1 - 2.0 ** -n, abs=1e-12)
    # step size halves each iteration: r_n = 2^-(n+1), so convergence
    # lands at ceil(log2(1/tol))
    assert trace.converged and trace.terminated_at_fixed_point
    steps = len(trace.points) - 1
    assert abs(steps - math.ceil(math.log2(1e9))) <= 1
    assert trace.ascending and trace.x0_in_start_set
    assert trace.limit_candidate == pytest.approx(1.0, abs=1e-8)


def test_orbit_constant_map_finite():
    sp = line_space([0, 1, 2])
    trace = picard_orbit(sp, table_map([2, 2, 2]), 0)
    assert trace.points == [0, 2]
    assert trace.terminated_at_fixed_point and not trace.cycle_detected


def test_orbit_cycle_flagged_not_raised():
    sp = line_space([0, 1])
    trace = picard_orbit(sp, table_map([1, 0]), 0)
    assert trace.cycle_detected and not trace.converged
    assert trace.limit_candidate is None


def test_orbit_slow_rational_map():
    trace = picard_orbit(UNIT_AMORPHOUS, lambda x: x / (1 + x), 1.0,
                         max_iter=200_000, tol=1e-9)
    # closed form x_n = 1/(1+n)
    for n, x in enumerate(trace.points[:6]):
        assert x == pytest.approx(1 / (1 + n), rel=1e-9)
    assert trace.converged
    assert trace.limit_candidate < 1e-4


def test_trace_skip_bound_holds_on_walk():
    pts = walk_zero_one(300)
    trace = trace_from_points(UNIT, lambda x: x, pts)  # bound asserted inside
    assert len(trace.r) == 299


# --- Cauchy classification ------------------------------------------------------


def test_classify_geometric_trace():
    trace = picard_orbit(UNIT, HALVE_UP, 0.0, tol=1e-12)
    semi, cauchy = classify_cauchy(UNIT, trace, window=10, tol=1e-6)
    assert semi and cauchy


def test_classify_oscillating_walk():
    pts = walk_zero_one(3000)
    trace = trace_from_points(UNIT, lambda x: x, pts)
    semi, cauchy = classify_cauchy(UNIT, trace, window=500, tol=0.05)
    assert semi is True          # late steps are ~1/k, far below 0.05
    assert cauchy is False       # the tail still sweeps the whole interval


def test_classify_constant_trace():
    sp = line_space([0, 1])
    trace = picard_orbit(sp, table_map([0, 1]), 0)
    trace.points = [0] * 8
    trace.r = [sp.d(0, 0)] * 7
    trace.s = [sp.d(0, 0)] * 6
    semi, cauchy = classify_cauchy(sp, trace, window=8, tol=1e-9)
    assert semi and cauchy


def test_classify_needs_window():
    trace = picard_orbit(UNIT, HALVE_UP, 0.0)
    with pytest.raises(ValueError, match="window"):
        classify_cauchy(UNIT, trace, window=10_000)


# --- contraction verification ----------------------------------------------------


def test_phi_contraction_equality_case():
    res = verify_contraction_on_pairs(UNIT, HALVE_UP, PhiContraction(linear("1/2")),
                                      all_pairs(UNIT, ScanConfig(33, 8)))
    assert res.ok


def test_implicit_contraction_tight_bound_fails_with_witness():
    # d(Tx,Ty) = d(x,y)/2 but the combined bound 0.4*max{...} dips below it
    # wherever the profile max fails to beat 1.25*d(x,y)
    f = f_from_psi(linear("2/5"))
    res = verify_contraction_on_pairs(UNIT, HALVE_UP, f,
                                      all_pairs(UNIT, ScanConfig(33, 8)))
    assert not res.ok
    x, y = res.witness
    assert f(*six_distances(UNIT, HALVE_UP, x, y).as_tuple()) > 0


def test_sp_guard_empty_for_constant_map():
    # a constant map sends every pair to equal images, so the guard
    # Tx != Ty admits nothing
    sp = line_space([0, 1, 2])
    const = table_map([1, 1, 1])
    cert = GeneralizedSP("any", lambda *t: -1.0, lambda v: v >= 0, lambda r: r / 2)
    res = verify_contraction_on_pairs(sp, const, cert, all_pairs(sp))
    assert res.status.value == "vacuous-pass"


def test_finite_contraction_exact_no_slack():
    # identity bound gives equality F = 0 <= 0 exactly on rationals
    sp = line_space([0, 1])
    res = verify_contraction_on_pairs(sp, table_map([0, 0]), f_from_psi(linear("1/2")),
                                      all_pairs(sp))
    assert res.ok and res.status.value == "pass"


# --- pipelines ---------------------------------------------------------------------


def test_implicit_pipeline_on_interval():
    v = run_implicit(UNIT, HALVE_UP, f_from_psi(linear("3/5")), 0.0, FAST)
    assert v.ok, v.reason()
    assert v.fixed_point == pytest.approx(1.0, abs=1e-8)
    assert v.order_unique is True
    stage_names = [s.name for s in v.stages]
    assert "orbit-residuals" in stage_names


def test_implicit_pipeline_single_point_space():
    sp = line_space([0])
    v = run_implicit(sp, table_map([0]), f_from_psi(linear("1/2")), 0, FAST)
    assert v.ok and v.fixed_point == 0 and v.order_unique is True


def test_implicit_pipeline_short_circuits_on_monotonicity():
    sp = line_space([0, 1])
    v = run_implicit(sp, table_map([1, 0]), f_from_psi(linear("1/2")), 0, FAST)
    assert not v.ok
    assert v.failed_stage.name == "increasing"
    assert v.failed_stage.witness == (0, 1)
    assert v.trace is None  # no orbit ran


def test_matkowski_pipeline_global_verdict():
    v = run_matkowski(UNIT, HALVE_UP, linear("1/2"), 0.0, PipelineConfig())
    assert v.ok and v.global_ok
    assert v.fixed_point == pytest.approx(1.0, abs=1e-8)


def test_matkowski_pipeline_rejects_identity_bound():
    v = run_matkowski(UNIT, HALVE_UP, BUILTIN_SCALARS["identity"], 0.0)
    assert not v.ok
    assert v.failed_stage.name in ("phi-regressive", "phi-matkowski")


def test_matkowski_agrees_with_oracle_on_random_instances():
    for seed in (3, 11, 29):
        inst = random_instance(7, 0.4, "1/2", seed=seed)
        oracle = brute_force(inst)
        for x in oracle.start_set:
            v = run_matkowski(inst.space, inst.tmap, linear("1/2"), x, FAST)
            if v.ok:
                out = oracle.orbits[x]
                assert not out.cycle and out.terminal == v.fixed_point


def test_psi_pipeline_standard_example():
    v = run_psi_explicit(UNIT, HALVE_UP, linear("3/5"), 0.0, FAST)
    assert v.ok and v.fixed_point == pytest.approx(1.0, abs=1e-8)
    assert len(v.trace.points) - 1 <= 40


def test_psi_pipeline_saturating_on_amorphous_interval():
    # |x/(1+x) - y/(1+y)| = |x-y| / ((1+x)(1+y)) <= psi(|x-y|) with
    # psi(t) = t/(1+t), so the combined bound holds a fortiori
    v = run_psi_explicit(UNIT_AMORPHOUS, lambda x: x / (1 + x),
                         BUILTIN_SCALARS["saturating"], 1.0,
                         PipelineConfig(trials=20, families=2, seq_length=200,
                                        max_iter=200_000))
    assert v.ok, v.reason()
    assert v.fixed_point == pytest.approx(0.0, abs=1e-4)


def test_psi_pipeline_rejects_non_regressive():
    v = run_psi_explicit(UNIT, HALVE_UP, BUILTIN_SCALARS["identity"], 0.0, FAST)
    assert not v.ok and v.failed_stage.name == "psi-regressive"


def test_psi_and_implicit_traces_identical():
    cfg = FAST
    v3 = run_psi_explicit(UNIT, HALVE_UP, linear("3/5"), 0.0, cfg)
    v2 = run_implicit(UNIT, HALVE_UP, f_from_psi(linear("3/5")), 0.0, cfg)
    assert v3.trace.points == v2.trace.points
    assert v3.trace.r == v2.trace.r


def test_lsc_pipeline_standard_example():
    v = run_lsc_implicit(UNIT, HALVE_UP, f_from_psi(linear("1/2")), 0.0, FAST)
    assert v.ok and v.global_ok
    assert v.fixed_point == pytest.approx(1.0, abs=1e-8)


def test_lsc_pipeline_rejects_zero_certificate():
    v = run_lsc_implicit(UNIT, HALVE_UP, implicit_from_expr("0*t1"), 0.0, FAST)
    assert not v.ok
    assert v.failed_stage.name in ("cert-34-normal", "cert-236-normal")


def test_lsc_pipeline_rejects_jumping_bound():
    step = ScalarFn("jump-up", lambda t: 0.0 if t <= 1 else 0.9 * t,
                    claims_increasing=True)
    v = run_lsc_implicit(UNIT, HALVE_UP, f_from_psi(step), 0.0, FAST)
    assert not v.ok and v.failed_stage.name == "cert-lsc"


def test_sp_pipeline_unique_fixed_point_from_many_starts():
    cert = GeneralizedSP("half-gap", lambda t1, t2, *rest: 0.5 * t2 - t1,
                         lambda v: v >= -1e-12, lambda r: r / 4)
    v = run_sp_implicit(UNIT_AMORPHOUS, lambda x: x / 2, cert, 1.0,
                        PipelineConfig(multi_start=16))
    assert v.ok and v.order_unique is True
    assert v.fixed_point == pytest.approx(0.0, abs=1e-8)
    assert len(v.extra_traces) == 16
    for tr in v.extra_traces:
        assert tr.limit_candidate == pytest.approx(0.0, abs=1e-7)


def test_sp_pipeline_rejects_identity_bound():
    cert = GeneralizedSP("ident-gap", lambda t1, t2, *rest: t2 - t1,
                         lambda v: v >= -1e-12, lambda r: r / 4)
    v = run_sp_implicit(UNIT_AMORPHOUS, lambda x: x / 2, cert, 1.0)
    assert not v.ok and v.failed_stage.name == "sp-conditions"


def test_sp_pipeline_finite_agrees_with_oracle():
    sp = line_space([0, 1, 2, 4], order="antichain")
    t = table_map([0, 0, 1, 1])
    cert = GeneralizedSP("half-gap", lambda t1, t2, *rest: 0.5 * t2 - t1,
                         lambda v: v >= -1e-12, lambda r: r / 4)
    v = run_sp_implicit(sp, t, cert, 2, PipelineConfig())
    from picardlab.oracle import InstanceBundle
    rep = brute_force(InstanceBundle(space=sp, tmap=t, certificate=cert))
    if v.ok:
        assert rep.orbits[2].terminal == v.fixed_point
        assert rep.picard_ok


def test_verdict_json_shape():
    v = run_implicit(UNIT, HALVE_UP, f_from_psi(linear("3/5")), 0.0, FAST)
    d = v.to_dict()
    assert d["ok"] and d["theorem"] == "t2"
    assert {"stages", "fixed_point", "trace"} <= set(d)
