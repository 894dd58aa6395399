"""picardlab: fixed-point certificates and Picard pipelines on
quasi-ordered metric spaces, cross-validated by brute-force oracles."""

__version__ = "0.1.0"

from .engine import (
    OrbitTrace,
    PhiContraction,
    PicardVerdict,
    PipelineConfig,
    PsiContraction,
    THEOREM_RUNNERS,
    classify_cauchy,
    picard_orbit,
    run_implicit,
    run_lsc_implicit,
    run_matkowski,
    run_psi_explicit,
    run_sp_implicit,
    verify_contraction_on_pairs,
)
from .gaps import GapWitness, NoGap, SeqWithMetric, extract_gap, verify_witness, walk_zero_one
from .implicit import (
    GeneralizedSP,
    ImplicitF,
    SeqFamily,
    check_34_normal,
    check_236_normal,
    check_2_right_lim_positive_at,
    check_2to6_decreasing,
    check_almost_2_right,
    check_almost_compatible,
    check_compatible_F,
    check_4_point_lim_positive,
    check_lsc,
    check_psi_compatible,
    check_sp_conditions,
    f_from_psi,
    implicit_from_expr,
    make_j_point,
    make_j_right,
)
from .oracle import (
    InstanceBundle,
    OracleReport,
    brute_force,
    fuzz_batch,
    pipeline_agreement,
    random_instance,
)
from .report import CheckResult, PropertyReport, Status, ValidationReport
from .scalars import (
    AlteringFn,
    BUILTIN_SCALARS,
    ScalarFn,
    check_almost_bw_admissible,
    check_altering,
    check_boyd_wong_admissible,
    check_compatible_psi,
    check_matkowski,
    check_regressive,
    eval_L,
    eval_Lstar,
    expr_fn,
    lemma_41_suite,
    linear,
    q_value,
    right_limsup,
    table_fn,
)
from .spaces import (
    FiniteSpace,
    IntervalSpace,
    ScanConfig,
    SixDistances,
    TableMap,
    finite_space,
    fixed_points,
    is_increasing,
    is_order_singleton,
    is_self_closed_on,
    line_space,
    six_distances,
    start_set,
    table_map,
    validate_space,
)
