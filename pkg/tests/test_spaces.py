from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from picardlab.spaces import (
    FiniteSpace,
    IntervalSpace,
    ScanConfig,
    finite_space,
    fixed_points,
    in_start_set,
    is_fixed_point,
    is_increasing,
    is_order_singleton,
    is_self_closed_on,
    line_space,
    self_closed_status,
    six_distances,
    start_set,
    table_map,
    validate_space,
)

CHAIN = [[1, 1, 1], [0, 1, 1], [0, 0, 1]]


def test_valid_line_space():
    sp = line_space([0, 1, 2])
    assert validate_space(sp).ok


def test_triangle_violation_has_witness():
    sp = finite_space([[0, 1, 5], [1, 0, 1], [5, 1, 0]], CHAIN)
    rep = validate_space(sp)
    assert not rep.ok
    assert any(v.axiom == "metric/triangle" and v.witness == (0, 1, 2)
               for v in rep.violations)


def test_missing_reflexivity_witness():
    leq = [[1, 1, 1], [0, 1, 1], [0, 0, 0]]
    sp = finite_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]], leq)
    rep = validate_space(sp)
    assert any(v.axiom == "order/reflexivity" and v.witness == 2
               for v in rep.violations)


def test_symmetry_and_positivity_violations():
    sp = finite_space([[0, 1], [2, 0]], [[1, 0], [0, 1]])
    axioms = {v.axiom for v in validate_space(sp).violations}
    assert "metric/symmetry" in axioms
    sp2 = finite_space([[0, 0], [0, 0]], [[1, 0], [0, 1]])
    axioms2 = {v.axiom for v in validate_space(sp2).violations}
    assert "metric/positivity" in axioms2


def test_malformed_matrices_rejected_before_axioms():
    with pytest.raises(ValueError, match="square"):
        finite_space([[0, 1, 2], [1, 0]], [[1, 0], [0, 1]])
    with pytest.raises(ValueError, match="negative"):
        finite_space([[0, -1], [-1, 0]], [[1, 0], [0, 1]])
    with pytest.raises(ValueError, match="point count"):
        finite_space([[0]], [[1, 0], [0, 1]])


def test_space_json_roundtrip():
    sp = line_space([Fraction(1, 3), 1, 2])
    again = FiniteSpace.from_json(sp.to_json())
    assert again == sp
    iv = IntervalSpace(0.0, 2.0, "amorphous")
    assert IntervalSpace.from_json(iv.to_json()) == iv


# --- six distances ---------------------------------------------------------


def test_six_distances_interval_halving_map():
    iv = IntervalSpace(0.0, 1.0)
    m = six_distances(iv, lambda x: (x + 1) / 2, 0.0, 1.0)
    assert m.as_tuple() == (0.5, 1.0, 0.5, 0.0, 1.0, 0.5)


def test_six_distances_fixed_identity_pair():
    sp = line_space([0, 1])
    m = six_distances(sp, table_map([0, 1]), 0, 0)
    assert m.as_tuple() == (0, 0, 0, 0, 0, 0)


def test_six_distances_matches_raw_matrix_lookup():
    # independent oracle: read the six entries straight off the matrix
    sp = line_space([0, 1, 2, 3])
    t = table_map([0, 0, 1, 2])  # shift toward 0
    x, y = 0, 3
    tx, ty = t(x), t(y)
    expected = (sp.dist[tx][ty], sp.dist[x][y], sp.dist[x][tx],
                sp.dist[y][ty], sp.dist[x][ty], sp.dist[tx][y])
    assert six_distances(sp, t, x, y).as_tuple() == expected
    assert expected == (2, 3, 0, 1, 2, 3)


@given(st.lists(st.integers(0, 60), min_size=2, max_size=7, unique=True),
       st.integers(0, 10_000))
def test_six_distances_triangle_consequences(raw, seed):
    import random
    sp = line_space(sorted(raw))
    rng = random.Random(seed)
    t = table_map([rng.randrange(sp.n) for _ in range(sp.n)])
    for x in sp.points:
        for y in sp.points:
            m = six_distances(sp, t, x, y)
            assert m.m5 <= m.m2 + m.m4
            assert m.m6 <= m.m2 + m.m3
            assert m.m1 <= m.m3 + m.m2 + m.m4


# --- monotonicity, start set, fixed points ---------------------------------


def test_increasing_affine_interval():
    iv = IntervalSpace(0.0, 1.0)
    assert is_increasing(iv, lambda x: (x + 1) / 2).ok


def test_increasing_swap_fails_with_witness():
    sp = line_space([0, 1])
    res = is_increasing(sp, table_map([1, 0]))
    assert not res.ok and res.witness == (0, 1)


def test_increasing_sampled_on_rational_map():
    iv = IntervalSpace(0.0, 1.0)
    res = is_increasing(iv, lambda x: x / (1 + x), ScanConfig(65, 16))
    assert res.status.value == "sampled-pass"


def test_start_set_interval_full_and_singleton():
    iv = IntervalSpace(0.0, 1.0)
    grid = ScanConfig(65, 0)
    assert len(start_set(iv, lambda x: (x + 1) / 2, grid)) == 65
    only = start_set(iv, lambda x: x / 2, grid)
    assert only == [0.0]


def test_start_set_matches_enumeration():
    import random
    rng = random.Random(5)
    sp = line_space(sorted(rng.sample(range(40), 6)))
    t = table_map([rng.randrange(6) for _ in range(6)])
    expected = tuple(x for x in sp.points if sp.leq[x][t(x)])
    assert start_set(sp, t) == expected
    for x in sp.points:
        assert in_start_set(sp, t, x) == (x in expected)


def test_fixed_points_and_candidates():
    iv = IntervalSpace(0.0, 1.0)
    assert is_fixed_point(iv, lambda x: (x + 1) / 2, 1.0)
    assert not is_fixed_point(iv, lambda x: (x + 1) / 2, 0.5)
    sp = line_space([0, 1, 2])
    assert fixed_points(sp, table_map([0, 0, 2])) == (0, 2)


def test_order_singleton_antichain_vs_chain():
    anti = line_space([0, 1, 2], order="antichain")
    fix = fixed_points(anti, table_map([0, 1, 2]))
    assert fix == (0, 1, 2)
    assert is_order_singleton(fix, anti).ok

    chain = line_space([0, 1])
    res = is_order_singleton(fixed_points(chain, table_map([0, 1])), chain)
    assert not res.ok and res.witness == (0, 1)


# --- self-closed order ------------------------------------------------------


def test_self_closed_monotone_real_sequence():
    iv = IntervalSpace(0.0, 1.0)
    seq = [1 - 2.0 ** -n for n in range(20)]
    assert is_self_closed_on(iv, seq, 1.0).ok


def test_self_closed_amorphous_always():
    iv = IntervalSpace(0.0, 1.0, "amorphous")
    assert is_self_closed_on(iv, [0.9, 0.5, 0.1][::-1], 0.0 or 1.0).ok
    assert self_closed_status(iv).ok


def test_self_closed_missing_pair_fails():
    leq = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]  # 2 unrelated to the others
    sp = finite_space([[0, 1, 2], [1, 0, 1], [2, 1, 0]], leq)
    res = is_self_closed_on(sp, [0, 0], 2)
    assert not res.ok and res.witness == 0


def test_self_closed_rejects_non_ascending():
    iv = IntervalSpace(0.0, 1.0)
    with pytest.raises(ValueError, match="ascending"):
        is_self_closed_on(iv, [0.5, 0.1], 1.0)


def test_self_closed_status_finite_from_transitivity():
    assert self_closed_status(line_space([0, 3, 7])).ok


# --- invariants from random line embeddings ---------------------------------


@given(st.lists(st.integers(0, 100), min_size=2, max_size=8, unique=True))
def test_line_embeddings_always_validate(raw):
    assert validate_space(line_space(sorted(raw))).ok


def test_perturbed_axioms_each_rejected():
    base = [[Fraction(v) for v in row] for row in [[0, 1, 3], [1, 0, 2], [3, 2, 0]]]
    ok = finite_space(base, CHAIN)
    assert validate_space(ok).ok

    broken = [row[:] for row in base]
    broken[0][2] = Fraction(99)  # breaks triangle + symmetry
    axioms = {v.axiom for v in validate_space(finite_space(broken, CHAIN)).violations}
    assert "metric/triangle" in axioms and "metric/symmetry" in axioms

    broken = [row[:] for row in base]
    broken[1][1] = Fraction(1)
    axioms = {v.axiom for v in validate_space(finite_space(broken, CHAIN)).violations}
    assert "metric/zero-self-distance" in axioms

    no_trans = [[1, 1, 0], [0, 1, 1], [0, 0, 1]]
    axioms = {v.axiom for v in validate_space(finite_space(base, no_trans)).violations}
    assert "order/transitivity" in axioms


def test_start_set_contains_reflexive_fixed_points():
    import random
    rng = random.Random(11)
    for _ in range(20):
        n = rng.randint(1, 7)
        sp = line_space(sorted(rng.sample(range(50), n)))
        t = table_map([rng.randrange(n) for _ in range(n)])
        starts = set(start_set(sp, t))
        for z in fixed_points(sp, t):
            assert z in starts  # z <= Tz = z by reflexivity
