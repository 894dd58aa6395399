from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from picardlab.implicit import (
    GeneralizedSP,
    SeqFamily,
    check_2_right_lim_positive_at,
    check_2to6_decreasing,
    check_34_normal,
    check_236_normal,
    check_almost_2_right,
    check_almost_compatible,
    check_compatible_F,
    check_4_point_lim_positive,
    check_lsc,
    check_psi_compatible,
    check_sp_conditions,
    ensure_property,
    f_from_psi,
    implicit_from_expr,
    implicit_from_json,
    make_j_point,
    make_j_right,
    sp_from_json,
)
from picardlab.scalars import BUILTIN_SCALARS, ScalarFn, eval_Lstar, linear, q_value

HALF = BUILTIN_SCALARS["half"]
SAT = BUILTIN_SCALARS["saturating"]
F_HALF = f_from_psi(HALF)
F_SAT = f_from_psi(SAT)
F_ZERO = implicit_from_expr("0*t1")
F_NEG = implicit_from_expr("0*t1 - 1")

# increasing step bound: 0 up to 1, then 0.9t (jumps up at 1, so the induced
# certificate is not lower semicontinuous there)
STEP_PSI = ScalarFn("jump-up", lambda t: 0.0 if t <= 1 else 0.9 * t,
                    claims_increasing=True)
F_STEP = f_from_psi(STEP_PSI)


# --- construction ------------------------------------------------------------


def test_f_from_psi_closed_form_values():
    assert F_HALF(1, 1, 0, 0, 1, 1) == 0.5           # r - psi(r) at r=1
    assert F_HALF(1, 2, 0, 0, 0, 0) == 0             # 1 - psi(2)
    assert F_HALF(0, 0, 0, 0, 0, 0) == 0             # psi(0) = 0
    assert f_from_psi(linear("1"))(1, 1, 0, 0, 1, 1) == 0  # identity bound


@given(*(st.floats(0, 100) for _ in range(6)))
def test_f_from_psi_matches_formula_everywhere(t1, t2, t3, t4, t5, t6):
    lhs = F_HALF(t1, t2, t3, t4, t5, t6)
    assert lhs == t1 - float(HALF(eval_Lstar(t2, t3, t4, t5, t6)))


def test_f_from_psi_exact_on_fractions():
    v = F_HALF(*(Fraction(k, 3) for k in (1, 2, 0, 0, 1, 1)))
    assert isinstance(v, Fraction)
    assert v == Fraction(1, 3) - Fraction(1, 2) * Fraction(2, 3)


def test_implicit_descriptor_roundtrip():
    again = implicit_from_json(F_HALF.to_json())
    assert again(1, 1, 0, 0, 1, 1) == F_HALF(1, 1, 0, 0, 1, 1)
    expr = implicit_from_json({"kind": "expr6", "body": "t1 - 0.5*t2"})
    assert expr(1, 4, 0, 0, 0, 0) == -1


# --- sequence compatibility ---------------------------------------------------


def test_compatible_from_half_bound():
    assert check_compatible_F(F_HALF, trials=64, seed=0).ok


def test_compatible_rejects_always_satisfied_certificate():
    # F <= 0 everywhere lets the adversarial chain keep r large forever
    res = check_compatible_F(F_NEG, trials=3, seed=0, max_steps=3000)
    assert not res.ok
    assert min(res.witness["tail"]) >= 1e-4


def test_compatible_saturating_decays_harmonically():
    res = check_compatible_F(F_SAT, trials=8, seed=0)
    assert res.ok
    # extremal chain from 1.0 follows r0/(1+n r0): ~1e4 steps to 1e-4
    assert res.detail["longest_run"] >= 5000


# --- pointwise normality ------------------------------------------------------


def test_34_normal_values_and_negatives():
    res = check_34_normal(F_HALF)
    assert res.ok
    assert F_HALF(1, 1, 0, 0, 1, 1) == 0.5
    assert not check_34_normal(F_ZERO).ok
    assert not check_34_normal(f_from_psi(linear("1"))).ok  # value 0 at every r


def test_236_normal():
    assert check_236_normal(F_HALF).ok
    assert F_HALF(1, 0, 0, 1, 1, 0) == 0.5
    assert not check_236_normal(F_ZERO).ok


# --- coordinate families -------------------------------------------------------


def test_j_right_family_membership():
    fam = make_j_right((1, 1, 0, 0, 1, 1), j=2, count=4, length=128, seed=3)
    assert fam.membership().ok
    for seq in fam.sequences():
        for term in seq:
            assert term[1] > 1.0
            assert all(v > 0 for v in term)


def test_j_point_family_pins_coordinate():
    fam = make_j_point((2, 0, 0, 2, 2, 0), j=4, count=3, length=64, seed=1)
    assert fam.membership().ok
    for seq in fam.sequences():
        assert all(term[3] == 2.0 for term in seq)


def test_family_detector_catches_side_violation():
    class Corrupt(SeqFamily):
        def sequences(self):
            seqs = super().sequences()
            bad = list(seqs[0])
            term = list(bad[5])
            term[self.j - 1] = self.target[self.j - 1]  # lands ON the target
            bad[5] = tuple(term)
            seqs[0] = bad
            return seqs

    fam = Corrupt((1, 1, 0, 0, 1, 1), j=2, mode="right", count=2, length=32, seed=0)
    res = fam.membership()
    assert not res.ok and res.witness[0] == 0


def test_family_invalid_arguments():
    with pytest.raises(ValueError):
        make_j_right((1,) * 6, j=7).sequences()
    with pytest.raises(ValueError):
        SeqFamily((1,) * 6, j=2, mode="sideways").sequences()


# --- limsup positivity ----------------------------------------------------------


def test_2_right_positive_at_one_for_half_bound():
    res = check_2_right_lim_positive_at(F_HALF, 1.0, seed=5)
    assert res.ok
    # tail values approach 1 - psi(1+) = 0.5
    assert res.detail["tail_bound"] >= 0.45


def test_2_right_fails_for_zero_certificate():
    assert not check_2_right_lim_positive_at(F_ZERO, 1.0).ok
    assert not check_2_right_lim_positive_at(F_ZERO, 0.25).ok


def test_2_right_saturating_bound():
    res = check_2_right_lim_positive_at(F_SAT, 0.3, seed=2)
    assert res.ok
    expected = 0.3 - q_value(SAT, 0.3)  # = 0.3 - 0.3/1.3
    assert res.detail["tail_bound"] >= expected - 0.01


def test_almost_2_right_collects_levels():
    res = check_almost_2_right(F_HALF, seed=4)
    assert res.ok
    thetas = res.detail["thetas"]
    assert set(thetas) == {10.0 ** -k for k in range(7)}
    for eps, b in thetas.items():
        assert 0 < b < eps


def test_4_point_values():
    res = check_4_point_lim_positive(F_HALF, seed=6)
    assert res.ok
    assert not check_4_point_lim_positive(F_ZERO, b_grid=[1.0]).ok
    # eventual value at b=2 for the saturating bound: 2 - psi(2) = 4/3
    fam = make_j_point((2, 0, 0, 2, 2, 0), j=4, count=1, length=400, seed=0)
    tail = [F_SAT(*term) for term in fam.sequences()[0][-100:]]
    assert min(tail) == pytest.approx(4 / 3, abs=0.05)
    assert check_4_point_lim_positive(F_SAT, b_grid=[2.0], seed=0).ok


# --- lower semicontinuity and monotonicity ---------------------------------------


def test_lsc_continuous_bound_passes():
    assert check_lsc(F_HALF, seed=0).ok


def test_lsc_detects_upward_jump():
    res = check_lsc(F_STEP, seed=0)
    assert not res.ok
    anchor = res.witness["anchor"]
    # the jump lives where the inner combiner crosses 1
    assert eval_Lstar(*anchor[1:]) == pytest.approx(1.0, abs=1e-6)


def test_2to6_decreasing_for_increasing_bound():
    assert check_2to6_decreasing(F_HALF, seed=1).ok
    assert check_2to6_decreasing(F_STEP, seed=1).ok  # still increasing in the bound


def test_2to6_decreasing_fails_on_dented_bound():
    dent = ScalarFn("dent", lambda t: t / 2 if t <= 1 else (0.5 - 0.4 * (t - 1)
                                                            if t <= 2 else 0.1 * (t - 1)))
    res = check_2to6_decreasing(f_from_psi(dent), seed=1)
    assert not res.ok


def test_almost_compatible():
    assert check_almost_compatible(F_HALF, trials=16, seed=0).ok
    res = check_almost_compatible(F_NEG, trials=2, seed=0, max_steps=2000)
    assert not res.ok


def test_psi_compatible_half():
    res = check_psi_compatible(F_HALF, HALF, seed=0)
    assert res.ok and res.detail["satisfied_pairs"] > 0


def test_dec_plus_psi_compatible_implies_almost_compatible():
    # consistency across checkers for increasing bounds
    for psi in (HALF, SAT):
        f = f_from_psi(psi)
        if check_2to6_decreasing(f, seed=3).ok and check_psi_compatible(f, psi, seed=3).ok:
            assert check_almost_compatible(f, trials=8, seed=3).ok


def test_property_suite_for_builtin_bounds():
    # bounds passing the scalar-level checks must pass the induced
    # certificate suite
    from picardlab.scalars import check_almost_bw_admissible, check_compatible_psi
    for name in ("half", "quarter", "ninety", "saturating"):
        psi = BUILTIN_SCALARS[name]
        assert check_compatible_psi(psi, trials=8, seed=1).ok
        assert check_almost_bw_admissible(psi).ok
        f = f_from_psi(psi)
        assert check_compatible_F(f, trials=16, seed=1).ok, name
        assert check_34_normal(f).ok, name
        assert check_almost_2_right(f, count=2, length=200, seed=1).ok, name
        assert check_4_point_lim_positive(f, count=2, length=200, seed=1).ok, name


def test_property_cache_single_writer():
    f = f_from_psi(HALF)
    calls = []

    def runner():
        calls.append(1)
        return check_34_normal(f)

    a = ensure_property(f, "normal34", runner)
    b = ensure_property(f, "normal34", runner)
    assert a is b and len(calls) == 1


# --- generalized set-valued certificates -----------------------------------------


def half_sp(a=lambda r: r / 4):
    # F(t1..t6) = psi(t2) - t1 with psi = t/2, membership = nonnegative
    return GeneralizedSP("half-gap", lambda t1, t2, t3, t4, t5, t6: 0.5 * t2 - t1,
                         lambda v: v >= -1e-12, a)


def test_sp_conditions_pass_for_half_bound():
    report = check_sp_conditions(half_sp(), seed=0)
    assert report.ok, report.to_dict()


def test_sp_identity_bound_fails_diagonal():
    ident = GeneralizedSP("identity-gap", lambda t1, t2, t3, t4, t5, t6: t2 - t1,
                          lambda v: v >= -1e-12, lambda r: r / 4)
    report = check_sp_conditions(ident, seed=0)
    assert not report.checks["sp-f01"].ok  # value 0 on the diagonal is in P


def test_sp_radius_invariant_rejected():
    with pytest.raises(ValueError, match="a\\(r\\)"):
        GeneralizedSP("bad", lambda *a: -1.0, lambda v: v >= 0, lambda r: r)


def test_sp_descriptor_roundtrip():
    cert = sp_from_json({"kind": "sp", "P": "nonneg",
                         "F": {"kind": "expr6", "body": "0.5*t2 - t1"},
                         "a": {"kind": "linear", "alpha": "1/4"}})
    assert cert.in_p(cert(0.4, 1.0, 0, 0, 0, 0))
    assert not cert.in_p(cert(0.6, 1.0, 0, 0, 0, 0))
    again = sp_from_json(cert.to_json())
    assert again(0.6, 1.0, 0, 0, 0, 0) == cert(0.6, 1.0, 0, 0, 0, 0)
