"""Command-line front door.

Subcommands: validate, check-cert, run, oracle, fuzz, extract-gap.
Exit codes: 0 on full agreement/pass, 1 on any failed check, 2 on input
errors (malformed JSON reports line and column).  Human-readable summary
goes to stdout; --json writes the machine report.  PICARDLAB_SEED
overrides the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .engine import (
    PhiContraction,
    PipelineConfig,
    PsiContraction,
    THEOREM_RUNNERS,
)
from .gaps import GapWitness, SeqWithMetric, extract_gap, verify_witness
from .implicit import (
    GeneralizedSP,
    ImplicitF,
    check_2to6_decreasing,
    check_34_normal,
    check_236_normal,
    check_almost_2_right,
    check_compatible_F,
    check_4_point_lim_positive,
    check_lsc,
    check_psi_compatible,
    check_sp_conditions,
)
from .oracle import (
    InfeasibleInstance,
    InstanceBundle,
    brute_force,
    certificate_from_json,
    fuzz_batch,
    pipeline_agreement,
)
from .report import PropertyReport, dumps
from .scalars import (
    ScalarFn,
    check_almost_bw_admissible,
    check_boyd_wong_admissible,
    check_compatible_psi,
    check_matkowski,
    check_regressive,
    lemma_41_suite,
)
from .spaces import FiniteSpace, IntervalSpace, validate_space


class InputError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"malformed JSON in {path}: {exc.msg} at line {exc.lineno}, "
            f"column {exc.colno}") from None


def _emit(args, payload: dict) -> None:
    if getattr(args, "json", None):
        Path(args.json).write_text(dumps(payload) + "\n")


def _default_seed(args) -> int:
    env = os.environ.get("PICARDLAB_SEED")
    if args.seed is not None:
        return args.seed
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"PICARDLAB_SEED must be an integer, got {env!r}")
    return 0


def _space_from_json(data: dict):
    return IntervalSpace.from_json(data) if "interval" in data else FiniteSpace.from_json(data)


def cmd_validate(args) -> int:
    data = _load_json(args.space)
    try:
        space = _space_from_json(data)
    except (ValueError, KeyError) as exc:
        raise InputError(f"malformed space: {exc}") from None
    report = validate_space(space)
    for v in report.violations:
        print(f"VIOLATION {v.axiom}: witness {v.witness}")
    for note in report.notes:
        print(f"note: {note}")
    print("VALID" if report.ok else f"INVALID ({len(report.violations)} violations)")
    _emit(args, {"schema": 1, "command": "validate", "report": report.to_dict()})
    return 0 if report.ok else 1


def _scalar_suite(fn: ScalarFn, seed: int, trials: int) -> PropertyReport:
    report = PropertyReport(f"scalar-suite[{fn.name}]")
    report.add(check_regressive(fn))
    report.add(check_matkowski(fn))
    report.add(check_boyd_wong_admissible(fn))
    report.add(check_almost_bw_admissible(fn))
    report.add(check_compatible_psi(fn, trials=trials, seed=seed))
    lemma = lemma_41_suite(fn)
    report.findings.extend(lemma.findings)
    return report


def _implicit_suite(f: ImplicitF, seed: int, trials: int) -> PropertyReport:
    report = PropertyReport(f"implicit-suite[{f.name}]")
    report.add(check_compatible_F(f, trials=trials, seed=seed))
    report.add(check_34_normal(f))
    report.add(check_almost_2_right(f, seed=seed))
    report.add(check_4_point_lim_positive(f, seed=seed))
    report.add(check_lsc(f, seed=seed))
    report.add(check_236_normal(f))
    report.add(check_2to6_decreasing(f, seed=seed))
    if f.psi is not None:
        report.add(check_psi_compatible(f, f.psi, seed=seed))
    return report


def cmd_check_cert(args) -> int:
    data = _load_json(args.cert)
    seed = _default_seed(args)
    try:
        cert = certificate_from_json(data)
    except (ValueError, KeyError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
    if isinstance(cert, (PhiContraction, PsiContraction)):
        fn = cert.phi if isinstance(cert, PhiContraction) else cert.psi
        report = _scalar_suite(fn, seed, args.trials)
    elif isinstance(cert, ImplicitF):
        report = _implicit_suite(cert, seed, args.trials)
    elif isinstance(cert, GeneralizedSP):
        report = check_sp_conditions(cert, seed=seed)
    else:  # pragma: no cover - certificate_from_json already rejects
        raise InputError(f"unsupported certificate type {type(cert).__name__}")
    for name, check in report.checks.items():
        mark = "ok " if check.ok else "FAIL"
        print(f"{mark} {name} [{check.status.value}]"
              + (f" witness={check.witness}" if not check.ok else ""))
    for finding in report.findings:
        print(f"finding: {finding}")
    _emit(args, {"schema": 1, "command": "check-cert", "report": report.to_dict()})
    return 0 if report.ok else 1


def cmd_run(args) -> int:
    data = _load_json(args.instance)
    try:
        inst = InstanceBundle.from_json(data)
    except (ValueError, KeyError) as exc:
        raise InputError(f"malformed instance: {exc}") from None
    theorem = args.theorem or inst.theorem
    if theorem not in THEOREM_RUNNERS:
        raise InputError(f"unknown theorem tag {theorem!r}")
    if args.seed is not None or os.environ.get("PICARDLAB_SEED"):
        inst.config.seed = _default_seed(args)
    runner = THEOREM_RUNNERS[theorem]
    cert = inst.certificate
    if theorem == "t1":
        if not isinstance(cert, PhiContraction):
            raise InputError("theorem t1 needs a certificate of kind 'phi'")
        verdict = runner(inst.space, inst.tmap, cert.phi, inst.x0, inst.config)
    elif theorem == "t3":
        if not isinstance(cert, PsiContraction):
            raise InputError("theorem t3 needs a certificate of kind 'psi'")
        verdict = runner(inst.space, inst.tmap, cert.psi, inst.x0, inst.config)
    elif theorem in ("t2", "t4"):
        if not isinstance(cert, ImplicitF):
            raise InputError(f"theorem {theorem} needs an implicit certificate")
        verdict = runner(inst.space, inst.tmap, cert, inst.x0, inst.config)
    else:
        if not isinstance(cert, GeneralizedSP):
            raise InputError("theorem t5 needs a certificate of kind 'sp'")
        verdict = runner(inst.space, inst.tmap, cert, inst.x0, inst.config)
    for stage in verdict.stages:
        mark = "ok " if stage.ok else "FAIL"
        print(f"{mark} {stage.name} [{stage.status.value}]")
    print(f"verdict: {verdict.reason()}")
    if verdict.fixed_point is not None:
        print(f"fixed point: {verdict.fixed_point}")
    if verdict.order_unique is not None:
        print(f"order-unique: {verdict.order_unique}")
    _emit(args, {"schema": 1, "command": "run", "verdict": verdict.to_dict()})
    return 0 if verdict.ok else 1


def cmd_oracle(args) -> int:
    data = _load_json(args.instance)
    try:
        inst = InstanceBundle.from_json(data)
        if args.compare:
            result = pipeline_agreement(inst)
            report = result.oracle
        else:
            result = None
            report = brute_force(inst)
    except (TypeError, ValueError, KeyError) as exc:
        raise InputError(str(exc)) from None
    print(f"fixed points: {report.fixed_points}")
    print(f"start set: {report.start_set}")
    print(f"increasing: {report.increasing.status.value}")
    print(f"contraction: {report.contraction.status.value}"
          + ("" if report.contraction.ok else f" witness={report.contraction.witness}"))
    print(f"order-singleton: {report.order_singleton.status.value}")
    print(f"picard: {'ok' if report.picard_ok else 'FAIL'}")
    if result is not None:
        print(f"pipeline agreement: {result.agrees}")
    payload = result.to_dict() if result is not None else report.to_dict()
    _emit(args, {"schema": 1, "command": "oracle", "report": payload})
    ok = report.picard_ok and (result is None or result.agrees)
    return 0 if ok else 1


def cmd_fuzz(args) -> int:
    seed = _default_seed(args)
    try:
        report = fuzz_batch(args.n, args.count, seed=seed, density=args.density,
                            contraction_factor=args.factor)
    except (InfeasibleInstance, ValueError) as exc:
        raise InputError(str(exc)) from None
    print(f"instances: {report.count}")
    print(f"agreements: {report.agreements}/{report.count}")
    print(f"audited (all hypotheses verified): {report.audited}, "
          f"audit failures: {len(report.audit_failures)}")
    if report.infeasible:
        print(f"infeasible instances: {report.infeasible}")
    if report.disagreements:
        print(f"disagreements at: {report.disagreements}")
    _emit(args, {"schema": 1, "command": "fuzz", "report": report.to_dict()})
    return 0 if report.all_agree and not report.audit_failures else 1


def cmd_extract_gap(args) -> int:
    data = _load_json(args.seq)
    try:
        seq = SeqWithMetric.from_json(data)
        theta = [float(v) for v in args.theta]
        outcome = extract_gap(seq, theta, N=args.n)
    except (ValueError, KeyError) as exc:
        raise InputError(str(exc)) from None
    if isinstance(outcome, GapWitness):
        print(f"gap level b={outcome.b}, threshold rank j_b={outcome.j_b}, "
              f"horizon {outcome.horizon}")
        verification = verify_witness(seq if args.n is None else seq.prefix(args.n),
                                      outcome, tail_tol=args.tail_tol)
        for name, check in verification.checks.items():
            mark = "ok " if check.ok else "FAIL"
            print(f"{mark} {name} [{check.status.value}]")
        stats = outcome.tail_stats()
        print(f"tail residuals: {stats}")
        _emit(args, {"schema": 1, "command": "extract-gap",
                     "witness": outcome.to_dict(),
                     "verification": verification.to_dict()})
        return 0 if verification.ok else 1
    print("no gap: every candidate level admits a Cauchy tail within the prefix")
    for level, reason in outcome.reasons.items():
        print(f"  b={level}: {reason}")
    _emit(args, {"schema": 1, "command": "extract-gap", "witness": outcome.to_dict()})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="picardlab",
        description="Fixed-point certificates and Picard pipelines on "
                    "quasi-ordered metric spaces, with brute-force oracles.")
    parser.add_argument("--version", action="version", version=f"picardlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="audit the axioms of a space file")
    p.add_argument("space")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("check-cert", help="run the property suite of a certificate")
    p.add_argument("cert")
    p.add_argument("--grid", type=int, default=257, help="equispaced grid size")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json")
    p.set_defaults(fn=cmd_check_cert)

    p = sub.add_parser("run", help="run a theorem pipeline on an instance")
    p.add_argument("instance")
    p.add_argument("--theorem", choices=sorted(THEOREM_RUNNERS), default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--json")
    p.set_defaults(fn=cmd_run)

    p = sub.add_parser("oracle", help="brute-force a finite instance")
    p.add_argument("instance")
    p.add_argument("--compare", action="store_true",
                   help="also run the pipeline and record agreement")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("fuzz", help="random instances, pipeline-vs-oracle agreement")
    p.add_argument("--n", type=int, default=12, help="max instance size")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--density", type=float, default=0.3)
    p.add_argument("--factor", default="1/2", help="linear contraction slope")
    p.add_argument("--json")
    p.set_defaults(fn=cmd_fuzz)

    p = sub.add_parser("extract-gap", help="extract and verify a Cauchy gap witness")
    p.add_argument("seq")
    p.add_argument("--theta", nargs="+", required=True)
    p.add_argument("--n", type=int, default=None, help="analysis prefix length")
    p.add_argument("--tail-tol", type=float, default=1e-3)
    p.add_argument("--json")
    p.set_defaults(fn=cmd_extract_gap)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
