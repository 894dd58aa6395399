"""Brute-force oracle for finite instances, a seeded random instance
generator, and the oracle-vs-pipeline agreement driver used for fuzzing.

All oracle arithmetic is exact: positions and distances are rationals, the
certificates evaluate in Fraction arithmetic, and no float ever enters a
finite-space computation.  Reports are deterministic functions of
(instance, seed, config) and serialize to byte-identical JSON.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .engine import (
    PhiContraction,
    PipelineConfig,
    PsiContraction,
    all_pairs,
    run_implicit,
    verify_contraction_on_pairs,
)
from .implicit import ImplicitF, f_from_psi, implicit_from_json, sp_from_json
from .report import CheckResult, Status, failed, jsonable, passed, vacuous
from .scalars import linear, scalar_from_json
from .spaces import (
    ExprMap,
    FiniteSpace,
    IntervalSpace,
    TableMap,
    finite_space,
    fixed_points,
    is_increasing,
    is_order_singleton,
    start_set,
    table_map,
    validate_space,
)

MAX_ORACLE_POINTS = 20
SCHEMA_VERSION = 1


class InfeasibleInstance(RuntimeError):
    """Raised when no monotone selfmap could be generated within the retry
    budget."""


def certificate_from_json(data: dict):
    kind = data.get("kind")
    if kind == "phi":
        return PhiContraction(scalar_from_json(data["fn"]))
    if kind == "psi":
        return PsiContraction(scalar_from_json(data["fn"]))
    if kind in ("from_psi", "expr6"):
        return implicit_from_json(data)
    if kind == "sp":
        return sp_from_json(data)
    raise ValueError(f"unknown certificate kind {kind!r}")


def certificate_to_json(cert) -> dict:
    return cert.to_json()


@dataclass
class InstanceBundle:
    """A finite (or interval) space, a selfmap, a certificate, and the
    pipeline configuration, as one serializable unit."""

    space: object
    tmap: object
    certificate: object
    theorem: str = "t2"
    x0: object = 0
    config: PipelineConfig = field(default_factory=PipelineConfig)
    seed: int = 0

    def to_json(self) -> dict:
        cfg = self.config.to_json()
        cfg["theorem"] = self.theorem
        cfg["x0"] = jsonable(self.x0)
        return {
            "schema": SCHEMA_VERSION,
            "space": self.space.to_json(),
            "map": (self.tmap.to_json() if isinstance(self.tmap, TableMap)
                    else self.tmap_descriptor()),
            "certificate": certificate_to_json(self.certificate),
            "config": cfg,
            "seed": self.seed,
        }

    def tmap_descriptor(self) -> dict:
        desc = getattr(self.tmap, "descriptor", None)
        if desc is None:
            raise ValueError("selfmap has no serializable descriptor")
        return dict(desc)

    @staticmethod
    def from_json(data: dict) -> "InstanceBundle":
        if data.get("schema", SCHEMA_VERSION) != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {data.get('schema')!r}")
        sdata = data["space"]
        space = (IntervalSpace.from_json(sdata) if "interval" in sdata
                 else FiniteSpace.from_json(sdata))
        mdata = data["map"]
        if mdata.get("kind") == "table" or "table" in mdata:
            tmap = table_map(mdata["table"],
                             space.n if isinstance(space, FiniteSpace) else None)
        elif mdata.get("kind") == "expr":
            tmap = ExprMap(mdata["body"])
        else:
            raise ValueError(f"unknown selfmap kind {mdata.get('kind')!r}")
        cfg_data = data.get("config", {})
        cfg = PipelineConfig.from_json(cfg_data)
        x0 = cfg_data.get("x0", 0)
        return InstanceBundle(
            space=space, tmap=tmap,
            certificate=certificate_from_json(data["certificate"]),
            theorem=cfg_data.get("theorem", "t2"), x0=x0,
            config=cfg, seed=int(data.get("seed", 0)),
        )


@dataclass
class OrbitOutcome:
    start: int
    terminal: int | None
    steps: int
    cycle: bool

    def to_dict(self) -> dict:
        return {"start": self.start, "terminal": self.terminal,
                "steps": self.steps, "cycle": self.cycle}


@dataclass
class OracleReport:
    """Exhaustive ground truth for one finite instance."""

    fixed_points: list[int]
    start_set: list[int]
    increasing: CheckResult
    contraction: CheckResult
    orbits: dict[int, OrbitOutcome]
    order_singleton: CheckResult
    picard_ok: bool
    agreement: bool | None = None

    @property
    def hypotheses_ok(self) -> bool:
        return self.increasing.ok and self.contraction.ok

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "fixed_points": list(self.fixed_points),
            "start_set": list(self.start_set),
            "increasing": self.increasing.to_dict(),
            "contraction": self.contraction.to_dict(),
            "orbits": {str(k): v.to_dict() for k, v in sorted(self.orbits.items())},
            "order_singleton": self.order_singleton.to_dict(),
            "picard_ok": self.picard_ok,
            "agreement": self.agreement,
        }


def _follow(space: FiniteSpace, t, start: int) -> OrbitOutcome:
    seen = {start: 0}
    cur = start
    for step in range(space.n + 1):
        nxt = t(cur)
        if nxt == cur:
            return OrbitOutcome(start, cur, step, cycle=False)
        if nxt in seen:
            return OrbitOutcome(start, None, step + 1, cycle=True)
        seen[nxt] = step + 1
        cur = nxt
    return OrbitOutcome(start, None, space.n + 1, cycle=True)


def brute_force(inst: InstanceBundle) -> OracleReport:
    """Exact enumeration of everything the theorem pipelines claim: fixed
    points, admissible starts, the guarded contraction table over all
    pairs, per-start orbit terminals (cycles reported, never hidden), and
    order-uniqueness of the fixed-point set."""
    space = inst.space
    if not isinstance(space, FiniteSpace):
        raise TypeError("the brute-force oracle runs on finite spaces only")
    vr = validate_space(space)
    if not vr.ok:
        raise ValueError(f"instance space violates axioms: {vr.violations[0].axiom}")
    t = inst.tmap
    fixed = list(fixed_points(space, t))
    starts = list(start_set(space, t))
    orbits = {x: _follow(space, t, x) for x in space.points}
    picard_ok = all(not orbits[x].cycle for x in starts)
    return OracleReport(
        fixed_points=fixed,
        start_set=starts,
        increasing=is_increasing(space, t),
        contraction=verify_contraction_on_pairs(space, t, inst.certificate,
                                                all_pairs(space)),
        orbits=orbits,
        order_singleton=is_order_singleton(fixed, space),
        picard_ok=picard_ok,
    )


def random_instance(n: int, density: float = 0.3, contraction_factor="1/2",
                    seed: int = 0, retries: int = 100) -> InstanceBundle:
    """Generate a seeded finite instance: points embedded at distinct
    rational line positions (metric axioms hold by construction), order =
    reflexive-transitive closure of a random DAG on the position-sorted
    indices, and a selfmap built monotone by order-respecting assignment
    contracted toward a random sink.  Retries with fresh draws when the
    assignment gets stuck; reports infeasibility after the budget."""
    if not 1 <= n <= MAX_ORACLE_POINTS:
        raise ValueError(f"point count must be within 1..{MAX_ORACLE_POINTS}")
    factor = Fraction(str(contraction_factor))
    rng = random.Random(seed)
    for _ in range(retries):
        raw = rng.sample(range(8 * n), n)
        positions = sorted(Fraction(v, 2) for v in raw)
        leq = [[i == j for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < density:
                    leq[i][j] = True
        for k in range(n):  # transitive closure
            for i in range(n):
                if leq[i][k]:
                    for j in range(n):
                        if leq[k][j]:
                            leq[i][j] = True
        sink = rng.randrange(n)
        table: list[int | None] = [None] * n
        ok = True
        for x in range(n):
            target = positions[sink] + factor * (positions[x] - positions[sink])
            cands = [y for y in range(n)
                     if all(leq[table[p]][y] for p in range(x) if leq[p][x])]
            if not cands:
                ok = False
                break
            cands.sort(key=lambda y: (abs(positions[y] - target),
                                      abs(positions[y] - positions[sink]), y))
            table[x] = cands[0]
        if not ok:
            continue
        space = finite_space(
            [[abs(positions[i] - positions[j]) for j in range(n)] for i in range(n)],
            leq)
        tmap = table_map([int(v) for v in table], n)
        inc = is_increasing(space, tmap)
        if not inc.ok:
            continue
        return InstanceBundle(
            space=space, tmap=tmap,
            certificate=f_from_psi(linear(factor)),
            theorem="t2", x0=0, seed=seed,
        )
    raise InfeasibleInstance(
        f"no monotone selfmap found after {retries} attempts (n={n}, density={density})")


@dataclass
class AgreementResult:
    oracle: OracleReport
    verdicts: dict[int, object]
    agrees: bool
    theorem_audit: CheckResult

    def to_dict(self) -> dict:
        return {
            "oracle": self.oracle.to_dict(),
            "verdicts": {str(k): v.to_dict() for k, v in sorted(self.verdicts.items())},
            "agrees": self.agrees,
            "theorem_audit": self.theorem_audit.to_dict(),
        }


def pipeline_agreement(inst: InstanceBundle,
                       shared_cert: ImplicitF | None = None) -> AgreementResult:
    """Run the theorem pipeline from every admissible start and compare
    with the oracle.

    Agreement: whenever the pipeline claims a fixed point, the oracle orbit
    from the same start must terminate at exactly that point; a pipeline
    that rejects its hypotheses claims nothing and agrees vacuously.

    The theorem audit covers instances whose hypothesis checks all pass:
    every admissible start must reach a fixed point within n steps, and the
    fixed-point set must contain no distinct comparable pair.
    """
    report = brute_force(inst)
    cert = shared_cert if shared_cert is not None else inst.certificate
    hypotheses: dict = {}
    verdicts: dict[int, object] = {}
    agrees = True
    all_ok = True
    for x in report.start_set:
        v = run_implicit(inst.space, inst.tmap, cert, x, inst.config, hypotheses)
        verdicts[x] = v
        outcome = report.orbits[x]
        if v.ok:
            if outcome.cycle or outcome.terminal != v.fixed_point:
                agrees = False
        else:
            all_ok = False
    if report.start_set and all_ok and report.hypotheses_ok:
        n = inst.space.n
        bounded = all(report.orbits[x].steps <= n and not report.orbits[x].cycle
                      for x in report.start_set)
        if bounded and report.order_singleton.ok:
            audit = passed("theorem-audit", starts=len(report.start_set))
        else:
            audit = failed("theorem-audit",
                           witness={"bounded": bounded,
                                    "order_singleton": report.order_singleton.ok})
    else:
        audit = vacuous("theorem-audit", reason="hypotheses not fully verified")
    report.agreement = agrees
    return AgreementResult(report, verdicts, agrees, audit)


@dataclass
class FuzzReport:
    count: int
    agreements: int
    audited: int
    audit_failures: list[int]
    disagreements: list[int]
    infeasible: list[int]

    @property
    def all_agree(self) -> bool:
        return not self.disagreements and not self.infeasible

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "count": self.count,
            "agreements": self.agreements,
            "audited": self.audited,
            "audit_failures": list(self.audit_failures),
            "disagreements": list(self.disagreements),
            "infeasible": list(self.infeasible),
        }


def fuzz_batch(n: int, count: int, seed: int = 0, density: float = 0.3,
               contraction_factor="1/2") -> FuzzReport:
    """Generate ``count`` seeded instances with sizes up to n and compare
    the pipeline against the oracle on each.  The certificate is shared
    across instances so its sampled property cache is computed once."""
    shared = f_from_psi(linear(Fraction(str(contraction_factor))))
    agreements = 0
    audited = 0
    audit_failures: list[int] = []
    disagreements: list[int] = []
    infeasible: list[int] = []
    for i in range(count):
        inst_seed = seed * 1_000_003 + i
        size = random.Random(inst_seed ^ 0xBEEF).randint(1, n)
        try:
            inst = random_instance(size, density, contraction_factor, seed=inst_seed)
        except InfeasibleInstance:
            infeasible.append(i)
            continue
        result = pipeline_agreement(inst, shared_cert=shared)
        if result.agrees:
            agreements += 1
        else:
            disagreements.append(i)
        if result.theorem_audit.status != Status.VACUOUS:
            audited += 1
            if not result.theorem_audit.ok:
                audit_failures.append(i)
    return FuzzReport(count, agreements, audited, audit_failures,
                      disagreements, infeasible)
