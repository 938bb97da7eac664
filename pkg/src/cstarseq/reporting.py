"""Run configuration, deterministic JSON reports and the audit battery.

Reports are byte-stable: keys are emitted sorted, floats are formatted with
the shortest round-trip representation, and wall-clock time is kept out of
the serialized payload (it goes to the human-readable table only).

Exit-code contract for runs:

* 0 -- every requested verdict decided, no violations;
* 1 -- an audit violation or criteria conflict was detected;
* 2 -- invalid configuration;
* 3 -- strict mode and at least one verdict came back Unknown.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import convergence as cv
from .convergence import (
    Index,
    Point,
    VerdictBundle,
    cauchy_criteria_cross_check,
    counterexample_audit,
    i_cauchy_def_verdict,
    i_cauchy_ek_verdict,
    i_cauchy_pair_verdict,
    i_convergence_verdict,
    i_star_cauchy_verdict,
    implication_audit,
    istar_witness_from_ap,
)
from .errors import ConfigError, CstarSeqError, UnsupportedOperationError
from .ideals import (
    Decision,
    IN,
    NOT_IN,
    SetDescription,
    UNKNOWN,
    IdealDescriptor,
    ideal_by_name,
)
from .metrics import CstarMetric, metric_by_name, verify_axioms
from .norms import (
    discrete_metric_homogeneity_witness,
    induce_metric,
    invariance_audit,
    make_real_abs_norm,
    make_scaled_diag_norm,
    norm_by_name,
    norm_convergence_verdict,
    verify_norm_axioms,
)
from .sequences import SequenceScenario, scenario_by_name

DEFAULT_WINDOW = 4096
WINDOW_ENV_VAR = "CSTAR_SEQ_WINDOW"
MAX_WINDOW = 1 << 20

_QUESTIONS = (
    "i_convergence",
    "i_cauchy_definition",
    "i_cauchy_pair",
    "i_cauchy_ek",
    "i_star_cauchy",
)

_SCENARIO_NAMES = ("harmonic", "block-harmonic", "alternating", "constant:0")
_METRIC_NAMES = ("diag", "reciprocal", "scaled", "discrete",
                 "induced:scaled-diag", "induced:real-abs")
_IDEAL_NAMES = ("fin", "density0", "block")


def default_window() -> int:
    raw = os.environ.get(WINDOW_ENV_VAR)
    if raw is None:
        return DEFAULT_WINDOW
    try:
        value = int(raw)
    except ValueError as exc:
        raise ConfigError(
            f"{WINDOW_ENV_VAR} must be an integer, got {raw!r}", field="window"
        ) from exc
    if not (16 <= value <= MAX_WINDOW):
        raise ConfigError(
            f"{WINDOW_ENV_VAR} must be in [16, {MAX_WINDOW}]", field="window"
        )
    return value


@dataclass(frozen=True)
class RunConfig:
    scenario: str = "harmonic"
    metric: str = "diag"
    ideal: str = "fin"
    eps_list: tuple = (0.1, 0.01)
    window: Optional[int] = None
    limit: Optional[float] = None
    questions: tuple = _QUESTIONS
    strict: bool = False
    metric_params: dict = field(default_factory=dict)

    def validated(self) -> "RunConfig":
        if self.scenario.split(":", 1)[0] not in (
            "harmonic", "block-harmonic", "alternating", "constant"
        ):
            raise ConfigError(f"unknown scenario {self.scenario!r}",
                              field="scenario")
        base = self.metric.split(":", 1)
        if base[0] == "induced":
            if len(base) != 2 or base[1] not in ("scaled-diag", "real-abs"):
                raise ConfigError(f"unknown induced norm in {self.metric!r}",
                                  field="metric")
        elif base[0] not in ("diag", "reciprocal", "scaled", "discrete"):
            raise ConfigError(f"unknown metric {self.metric!r}", field="metric")
        if self.ideal not in _IDEAL_NAMES:
            raise ConfigError(f"unknown ideal {self.ideal!r}", field="ideal")
        if not self.eps_list or any(e <= 0 for e in self.eps_list):
            raise ConfigError("eps_list must be nonempty and positive",
                              field="eps_list")
        window = self.window if self.window is not None else default_window()
        if not (16 <= window <= MAX_WINDOW):
            raise ConfigError(f"window must be in [16, {MAX_WINDOW}]",
                              field="window")
        unknown_q = [q for q in self.questions if q not in _QUESTIONS]
        if unknown_q:
            raise ConfigError(f"unknown questions {unknown_q}",
                              field="questions")
        return RunConfig(
            scenario=self.scenario, metric=self.metric, ideal=self.ideal,
            eps_list=tuple(float(e) for e in self.eps_list), window=window,
            limit=self.limit, questions=tuple(self.questions),
            strict=self.strict, metric_params=dict(self.metric_params),
        )

    def to_json(self):
        return {
            "scenario": self.scenario,
            "metric": self.metric,
            "ideal": self.ideal,
            "eps_list": list(self.eps_list),
            "window": self.window,
            "limit": self.limit,
            "questions": list(self.questions),
            "strict": self.strict,
        }


def build_metric(name: str, **params) -> CstarMetric:
    """Metric registry including the induced metrics."""
    if name.startswith("induced:"):
        return induce_metric(norm_by_name(name.split(":", 1)[1], **params))
    return metric_by_name(name, **params)


# ---------------------------------------------------------------------------
# Deterministic JSON


def _format_float(x: float) -> str:
    if x != x:
        return "NaN"
    if x in (float("inf"), float("-inf")):
        return '"Infinity"' if x > 0 else '"-Infinity"'
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def stable_dumps(obj, indent: int = 0) -> str:
    """json.dumps replacement with sorted keys and fixed float formatting,
    so byte-identical inputs give byte-identical documents."""
    pad = " " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _format_float(obj)
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        out = out.replace("\n", "\\n").replace("\t", "\\t")
        return f'"{out}"'
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [stable_dumps(v, indent + 2) for v in obj]
        inner = ",\n".join(f"{pad}  {item}" for item in items)
        return f"[\n{inner}\n{pad}]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for k in sorted(obj, key=str):
            items.append(
                f'{pad}  "{k}": {stable_dumps(obj[k], indent + 2)}'
            )
        inner = ",\n".join(items)
        return f"{{\n{inner}\n{pad}}}"
    if hasattr(obj, "to_json"):
        return stable_dumps(obj.to_json(), indent)
    raise ConfigError(f"cannot serialize {type(obj).__name__}")


# ---------------------------------------------------------------------------
# Runs


@dataclass(frozen=True)
class RunReport:
    config: RunConfig
    cells: tuple
    conflicts: tuple
    unknown_count: int
    exit_code: int
    wall_seconds: float  # excluded from the JSON payload on purpose

    def to_json(self):
        return {
            "config": self.config.to_json(),
            "cells": [c for c in self.cells],
            "conflicts": [c for c in self.conflicts],
            "unknown_count": self.unknown_count,
            "exit_code": self.exit_code,
        }

    def table(self) -> str:
        lines = [
            f"scenario={self.config.scenario} metric={self.config.metric} "
            f"ideal={self.config.ideal} window={self.config.window}",
            f"{'question':<22} {'eps':>8} {'decision':<8} certificate",
            "-" * 78,
        ]
        for cell in self.cells:
            lines.append(
                f"{cell['question']:<22} {cell['epsilon']:>8g} "
                f"{cell['decision']:<8} {cell['certificate'][:44]}"
            )
        lines.append("-" * 78)
        lines.append(
            f"unknown={self.unknown_count} conflicts={len(self.conflicts)} "
            f"exit={self.exit_code} wall={self.wall_seconds:.3f}s"
        )
        return "\n".join(lines)


def _question_bundle(
    q: str, s: SequenceScenario, m: CstarMetric, ideal: IdealDescriptor,
    limit: Optional[float], eps: float, window: int,
) -> Optional[VerdictBundle]:
    if q == "i_convergence":
        if limit is None:
            return None
        return i_convergence_verdict(s, m, limit, ideal, eps, window)
    if q == "i_cauchy_definition":
        return i_cauchy_def_verdict(s, m, ideal, eps, window)
    if q == "i_cauchy_pair":
        return i_cauchy_pair_verdict(s, m, ideal, eps, window)
    if q == "i_cauchy_ek":
        return i_cauchy_ek_verdict(s, m, ideal, eps, window)
    if q == "i_star_cauchy":
        witness = SetDescription.full(window)
        return i_star_cauchy_verdict(s, m, ideal, witness, eps, window)
    raise ConfigError(f"unknown question {q!r}", field="questions")


def run(config: RunConfig) -> RunReport:
    t0 = time.monotonic()
    cfg = config.validated()
    s = scenario_by_name(cfg.scenario)
    m = build_metric(cfg.metric, **cfg.metric_params)
    ideal = ideal_by_name(cfg.ideal)
    limit = cfg.limit if cfg.limit is not None else s.nominal_limit

    cells = []
    unknown = 0
    conflicts = []
    for eps in cfg.eps_list:
        by_criterion: dict[str, Decision] = {}
        for q in cfg.questions:
            bundle = _question_bundle(q, s, m, ideal, limit, eps, cfg.window)
            if bundle is None:
                continue
            if bundle.decision is UNKNOWN:
                unknown += 1
            if q.startswith("i_cauchy"):
                by_criterion[q] = bundle.decision
            cells.append({
                "question": q,
                "epsilon": eps,
                "decision": bundle.decision.value,
                "certificate": bundle.verdict.certificate,
                "witness_index": bundle.witness_index,
                "cut_index": bundle.cut_index,
            })
        if IN in by_criterion.values() and NOT_IN in by_criterion.values():
            conflicts.append({
                "epsilon": eps,
                "decisions": {k: d.value for k, d in by_criterion.items()},
            })

    if conflicts:
        code = 1
    elif cfg.strict and unknown:
        code = 3
    else:
        code = 0
    return RunReport(
        config=cfg,
        cells=tuple(cells),
        conflicts=tuple(conflicts),
        unknown_count=unknown,
        exit_code=code,
        wall_seconds=time.monotonic() - t0,
    )


# ---------------------------------------------------------------------------
# Full audit battery


def _claim(name: str, ok: bool, detail: str = "") -> dict:
    return {"claim": name, "status": "PASS" if ok else "FAIL",
            "detail": detail}


def audit_paper(window: Optional[int] = None) -> dict:
    """Re-derive every audited claim and report one PASS/FAIL line each."""
    t0 = time.monotonic()
    n = window if window is not None else max(default_window(), 8192)
    claims: list[dict] = []

    fin = IdealDescriptor.fin()
    blk = IdealDescriptor.block()
    d0 = IdealDescriptor.density_zero()
    harmonic = scenario_by_name("harmonic")
    block_seq = scenario_by_name("block-harmonic")

    # -- linear diagonal metric: the harmonic sequence is Cauchy.
    from .metrics import make_diag_metric
    for alpha in (0.5, 2.0):
        m = make_diag_metric(alpha)
        for eps in (0.1, 0.01):
            b = i_cauchy_def_verdict(harmonic, m, fin, eps, n)
            claims.append(_claim(
                f"diag(alpha={alpha:g}) harmonic Fin-Cauchy at eps={eps:g}",
                b.decision is IN,
                f"witness n0={b.witness_index}",
            ))
    m05 = make_diag_metric(0.5)
    b = i_cauchy_def_verdict(harmonic, m05, fin, 0.1, n)
    claims.append(_claim(
        "diag(alpha=0.5) eps=0.1 witness n0=11 with offenders {1..5}",
        b.witness_index == 11 and b.witness_set.window == frozenset(range(1, 6)),
        f"n0={b.witness_index} window={sorted(b.witness_set.window)}",
    ))

    # -- reciprocal metric: the harmonic sequence is not Cauchy.
    from .metrics import default_function_f, make_reciprocal_function_metric
    mr = make_reciprocal_function_metric(default_function_f(2.0, 64))
    for eps in (0.1, 0.5, 1.0):
        b = i_cauchy_def_verdict(harmonic, mr, fin, eps, n)
        claims.append(_claim(
            f"reciprocal metric defeats Fin-Cauchy at eps={eps:g}",
            b.decision is NOT_IN, b.verdict.certificate[:60],
        ))

    # -- criteria equivalence.
    cc = cauchy_criteria_cross_check(harmonic, m05, fin, (1.0, 0.1, 0.01), n)
    claims.append(_claim("three Cauchy criteria agree (harmonic, Fin)",
                         cc["consistent"]))

    # -- block sequence: pair-form witness is the union of blocks 1..21.
    from .metrics import make_scaled_function_metric
    ms = make_scaled_function_metric(default_function_f(2.0, 64))
    pb = i_cauchy_pair_verdict(block_seq, ms, blk, 0.2, n)
    claims.append(_claim(
        "block sequence pair witness D = blocks 1..21 at eps=0.2",
        pb.decision is IN and pb.cut_index == 21,
        f"cut={pb.cut_index}",
    ))

    # -- counterexample: I-Cauchy without I*-Cauchy for the block ideal.
    ce = counterexample_audit(10, max(n, 8192), ms)
    claims.append(_claim(
        "block counterexample reproduced for l=1..10",
        ce["reproduced"], ce["conclusion"],
    ))
    claims.append(_claim(
        "AP witness construction refuses the block ideal",
        ce["ap_witness_unsupported"],
    ))

    # -- implications hold over the scenario grid.
    from .metrics import make_discrete_metric
    scen = [harmonic, block_seq, scenario_by_name("constant:0"),
            scenario_by_name("alternating")]
    mets = [m05, ms, make_discrete_metric()]
    imp = implication_audit(scen, (fin, d0, blk), mets, (0.1, 0.5), n)
    claims.append(_claim(
        "one-way implications and B(2eps) within A(eps) hold on the grid",
        imp["consistent"], f"{len(imp['rows'])} rows",
    ))

    # -- metric axioms.
    pts = (-1.0, -0.25, 0.0, 0.5, 2.0)
    for metric in (m05, ms, make_discrete_metric()):
        rep = verify_axioms(metric, pts)
        claims.append(_claim(f"metric axioms hold: {metric.name}",
                             rep.all_pass()))
    # The reciprocal construction is asserted as a metric without proof and
    # 1/|x - y| is not subadditive on the reals; only positivity,
    # definiteness and symmetry are expected to hold, and the sampled
    # triangle status is reported verbatim.
    rep = verify_axioms(mr, pts)
    claims.append(_claim(
        f"metric axioms I-II hold (triangle sample-checked): {mr.name}",
        rep.axiom_i_pass and rep.axiom_ii_pass,
        f"sampled triangle status: "
        f"{'holds' if rep.axiom_iii_pass else 'violated on samples'}",
    ))

    # -- normed structure.
    nd = make_scaled_diag_norm(1.0, 2.0)
    na = make_real_abs_norm()
    for nrm in (nd, na):
        rep = verify_norm_axioms(nrm, pts)
        claims.append(_claim(f"norm axioms hold: {nrm.name}", rep.all_pass()))
    for nrm in (nd, na):
        dm = induce_metric(nrm)
        rep = verify_axioms(dm, pts)
        inv = invariance_audit(dm, pts)
        claims.append(_claim(
            f"induced metric is a translation-invariant homogeneous metric: "
            f"{dm.name}",
            rep.all_pass() and inv.translation_pass and inv.homogeneity_pass,
        ))
    wd = discrete_metric_homogeneity_witness()
    claims.append(_claim(
        "discrete metric is not induced by any norm (homogeneity fails)",
        wd["fails_homogeneity"],
        f"D(2,0) norm {wd['lhs_norm']:g} vs 2 D(1,0) norm {wd['rhs_norm']:g}",
    ))
    nc = norm_convergence_verdict(harmonic, nd, 0.0, 0.01, n)
    claims.append(_claim(
        "harmonic norm convergence witness n0=201 at eps=0.01",
        nc.decision is IN and nc.witness_index == 201,
        f"n0={nc.witness_index}",
    ))

    # -- AP witness route for Fin.
    try:
        w = istar_witness_from_ap(harmonic, m05, fin, n)
        b = i_star_cauchy_verdict(harmonic, m05, fin, w, 0.1, n)
        ap_ok = b.decision is IN
    except CstarSeqError:
        ap_ok = False
    claims.append(_claim("AP route yields an I*-Cauchy witness for Fin",
                         ap_ok))

    failed = [c for c in claims if c["status"] == "FAIL"]
    return {
        "window": n,
        "claims": claims,
        "failed": len(failed),
        "total": len(claims),
        "all_pass": not failed,
        "wall_seconds": time.monotonic() - t0,  # stripped before serializing
    }


def audit_lines(report: dict) -> str:
    lines = []
    for c in report["claims"]:
        detail = f"  ({c['detail']})" if c["detail"] else ""
        lines.append(f"[{c['status']}] {c['claim']}{detail}")
    lines.append(
        f"{report['total'] - report['failed']}/{report['total']} claims pass"
    )
    return "\n".join(lines)


def audit_json(report: dict) -> str:
    payload = {k: v for k, v in report.items() if k != "wall_seconds"}
    return stable_dumps(payload)


def list_scenarios() -> dict:
    return {
        "scenarios": list(_SCENARIO_NAMES),
        "metrics": list(_METRIC_NAMES),
        "ideals": list(_IDEAL_NAMES),
        "questions": list(_QUESTIONS),
    }
