"""C*-algebra valued metrics on the real line.

Every built-in metric factors through the separation ``g = |x - y|``: the
distance element is a fixed algebra element scaled by a function of g, and
the distance norm is ``h(g)`` for a simple profile h (linear, reciprocal or
discrete).  The profile is recorded on the metric so the convergence engines
can reason about whole tails of a sequence analytically; the closed-form
norm is cross-checked against the operator norm of the assembled element.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Callable, Optional, Sequence

import numpy as np

from . import algebra
from .algebra import (
    AlgebraDescriptor,
    AlgebraElement,
    DEFAULT_TOL,
    ToleranceProfile,
    const_function,
    is_positive,
    matrix_algebra,
    op_norm,
    precedes,
)
from .errors import DomainError, InternalConsistencyError, PreconditionError


class GapKind(enum.Enum):
    LINEAR = "linear"          # h(g) = scale * g
    RECIPROCAL = "reciprocal"  # h(g) = scale / g for g > 0, h(0) = 0
    DISCRETE = "discrete"      # h(g) = level for g > 0, h(0) = 0


ALL = "all"
NONE = "none"
MIXED = "mixed"


@dataclass(frozen=True)
class GapProfile:
    """Distance norm as a function of the separation |x - y|."""

    kind: GapKind
    scale: float = 1.0

    def norm_of_gap(self, g: float) -> float:
        if self.kind is GapKind.LINEAR:
            return self.scale * g
        if g == 0.0:
            return 0.0
        if self.kind is GapKind.RECIPROCAL:
            return self.scale / g
        return self.scale

    def norm_of_gaps(self, gaps: np.ndarray) -> np.ndarray:
        gaps = np.asarray(gaps, dtype=float)
        if self.kind is GapKind.LINEAR:
            return self.scale * gaps
        if self.kind is GapKind.RECIPROCAL:
            with np.errstate(divide="ignore"):
                out = np.where(gaps > 0.0, self.scale / np.where(gaps > 0, gaps, 1.0), 0.0)
            return out
        return np.where(gaps > 0.0, self.scale, 0.0)

    def offends(self, g: float, eps: float) -> bool:
        """Does a pair at separation g violate the eps bound (norm >= eps)?"""
        return self.norm_of_gap(g) >= eps

    def interval_status(
        self, glo: float, ghi: float, eps: float, zero_attainable: bool
    ) -> str:
        """Whether *every* / *no* / some separation in [glo, ghi] offends.

        ``zero_attainable`` marks that the separation can be exactly zero
        (identical points), where the norm is zero by definiteness.
        The answer is conservative: boundary configurations fall to MIXED.
        """
        if glo > ghi:
            raise DomainError("empty gap interval")
        if self.kind is GapKind.LINEAR:
            if self.scale * glo >= eps:
                return ALL
            if self.scale * ghi < eps:
                return NONE
            return MIXED
        if self.kind is GapKind.RECIPROCAL:
            cut = self.scale / eps
            zero_possible = zero_attainable and glo <= 0.0
            if ghi <= cut and glo >= 0.0 and not zero_possible and ghi > 0.0:
                return ALL
            if glo > cut or ghi == 0.0:
                return NONE
            return MIXED
        # discrete
        if self.scale < eps or ghi == 0.0:
            return NONE
        zero_possible = zero_attainable and glo <= 0.0
        if not zero_possible and self.scale >= eps:
            return ALL
        return MIXED


@dataclass(frozen=True, eq=False)
class CstarMetric:
    """A C*-algebra valued metric d : R x R -> A."""

    algebra: AlgebraDescriptor
    name: str
    eval_fn: Callable[[float, float], AlgebraElement]
    norm_formula: Optional[Callable[[float, float], float]] = None
    gap_profile: Optional[GapProfile] = None

    def eval(self, x: float, y: float) -> AlgebraElement:
        return self.eval_fn(x, y)

    def to_json(self):
        return {"name": self.name}


def distance_norm(
    m: CstarMetric, x: float, y: float, tol: ToleranceProfile = DEFAULT_TOL
) -> float:
    """||d(x, y)||, with the closed-form value asserted against the
    operator norm of the assembled element when both are available."""
    value = op_norm(m.eval(x, y))
    if m.norm_formula is not None:
        formula = m.norm_formula(x, y)
        if abs(value - formula) > tol.norm_tol * (1.0 + max(abs(value), abs(formula))):
            raise InternalConsistencyError(
                f"metric {m.name!r}: operator norm {value} disagrees with "
                f"closed form {formula} at ({x}, {y})"
            )
    return value


def distance_norm_fast(m: CstarMetric, x: float, y: float) -> float:
    """Closed-form distance norm when available, operator norm otherwise."""
    if m.norm_formula is not None:
        return m.norm_formula(x, y)
    return op_norm(m.eval(x, y))


# ---------------------------------------------------------------------------
# Built-in metrics


def make_diag_metric(alpha: float) -> CstarMetric:
    """d(x, y) = diag(|x-y|, alpha |x-y|) in M_2; norm = max(1, alpha)|x-y|."""
    if alpha < 0:
        raise DomainError("alpha must be nonnegative")
    desc = matrix_algebra(2, "real")
    slope = max(1.0, alpha)

    def ev(x: float, y: float) -> AlgebraElement:
        g = abs(x - y)
        return AlgebraElement(desc, np.diag([g, alpha * g]).astype(complex))

    return CstarMetric(
        algebra=desc,
        name=f"diag(alpha={alpha:g})",
        eval_fn=ev,
        norm_formula=lambda x, y: slope * abs(x - y),
        gap_profile=GapProfile(GapKind.LINEAR, slope),
    )


def _check_function_scale(f: AlgebraElement, positive: bool) -> float:
    if f.descriptor.kind != algebra.FUNCTION:
        raise PreconditionError("f must live in a function algebra")
    norm_f = op_norm(f)
    if norm_f <= 1.0:
        raise PreconditionError("||f|| must exceed 1")
    values = f.entries
    if np.max(np.abs(values.imag)) > 1e-12:
        raise PreconditionError("f must be real-valued on the grid")
    if positive and np.min(values.real) <= 0.0:
        raise PreconditionError("f must be positive-valued on the grid")
    if not positive and np.min(values.real) < 0.0:
        raise PreconditionError("f must be nonnegative on the grid")
    return norm_f


def make_reciprocal_function_metric(f: AlgebraElement) -> CstarMetric:
    """d(x, y) = f / |x - y| for x != y, zero for x = y (||f|| > 1)."""
    norm_f = _check_function_scale(f, positive=True)
    desc = f.descriptor

    def ev(x: float, y: float) -> AlgebraElement:
        if x == y:
            return desc.zero()
        return AlgebraElement(desc, f.entries / abs(x - y))

    def formula(x: float, y: float) -> float:
        return 0.0 if x == y else norm_f / abs(x - y)

    return CstarMetric(
        algebra=desc,
        name=f"reciprocal(|f|={norm_f:g})",
        eval_fn=ev,
        norm_formula=formula,
        gap_profile=GapProfile(GapKind.RECIPROCAL, norm_f),
    )


def make_scaled_function_metric(f: AlgebraElement) -> CstarMetric:
    """d(x, y) = |x - y| f with ||f|| > 1 and nonnegative samples."""
    norm_f = _check_function_scale(f, positive=False)
    desc = f.descriptor

    def ev(x: float, y: float) -> AlgebraElement:
        return AlgebraElement(desc, abs(x - y) * f.entries)

    return CstarMetric(
        algebra=desc,
        name=f"scaled(|f|={norm_f:g})",
        eval_fn=ev,
        norm_formula=lambda x, y: abs(x - y) * norm_f,
        gap_profile=GapProfile(GapKind.LINEAR, norm_f),
    )


def make_discrete_metric() -> CstarMetric:
    """d(x, y) = identity matrix for x != y, zero for x = y."""
    desc = matrix_algebra(2, "real")

    def ev(x: float, y: float) -> AlgebraElement:
        return desc.identity() if x != y else desc.zero()

    return CstarMetric(
        algebra=desc,
        name="discrete",
        eval_fn=ev,
        norm_formula=lambda x, y: 1.0 if x != y else 0.0,
        gap_profile=GapProfile(GapKind.DISCRETE, 1.0),
    )


# ---------------------------------------------------------------------------
# Axiom verification


@dataclass(frozen=True)
class MetricAxiomReport:
    axiom_i_pass: bool       # positivity and definiteness
    axiom_ii_pass: bool      # symmetry
    axiom_iii_pass: bool     # triangle inequality
    worst_violation: float
    witness_triples: tuple

    def all_pass(self) -> bool:
        return self.axiom_i_pass and self.axiom_ii_pass and self.axiom_iii_pass

    def to_json(self):
        return {
            "axiom_i_pass": self.axiom_i_pass,
            "axiom_ii_pass": self.axiom_ii_pass,
            "axiom_iii_pass": self.axiom_iii_pass,
            "worst_violation": self.worst_violation,
            "witness_triples": [list(w) for w in self.witness_triples],
        }


def verify_axioms(
    m: CstarMetric,
    samples: Sequence[float],
    tol: ToleranceProfile = DEFAULT_TOL,
) -> MetricAxiomReport:
    """Exhaustively check the three metric axioms over the sample points.

    Failures are reported, not raised; witnesses carry the offending points.
    """
    pts = sorted(set(float(s) for s in samples))
    if len(pts) < 3:
        raise PreconditionError("need at least 3 distinct sample points")

    ok_i = ok_ii = ok_iii = True
    worst = 0.0
    witnesses: list[tuple] = []

    for x in pts:
        dxx = m.eval(x, x)
        n = op_norm(dxx)
        if n > tol.norm_tol:
            ok_i = False
            worst = max(worst, n)
            witnesses.append((x, x))
    for x, y in combinations(pts, 2):
        dxy = m.eval(x, y)
        if not is_positive(dxy, tol):
            ok_i = False
            witnesses.append((x, y))
        if op_norm(dxy) <= tol.norm_tol:
            ok_i = False  # definiteness: distinct points, zero distance
            witnesses.append((x, y))
        dyx = m.eval(y, x)
        dev = float(np.max(np.abs(dxy.entries - dyx.entries)))
        if dev > tol.norm_tol * (1.0 + op_norm(dxy)):
            ok_ii = False
            worst = max(worst, dev)
            witnesses.append((x, y))
    for x, y, z in permutations(pts, 3):
        lhs = m.eval(x, y)
        rhs = m.eval(x, z) + m.eval(z, y)
        if not precedes(lhs, rhs, tol):
            ok_iii = False
            slack = op_norm(lhs) - op_norm(rhs)
            worst = max(worst, slack)
            witnesses.append((x, y, z))

    return MetricAxiomReport(
        axiom_i_pass=ok_i,
        axiom_ii_pass=ok_ii,
        axiom_iii_pass=ok_iii,
        worst_violation=worst,
        witness_triples=tuple(witnesses[:10]),
    )


# ---------------------------------------------------------------------------
# Registry used by the CLI


def default_function_f(value: float = 2.0, grid_size: int = 64) -> AlgebraElement:
    return const_function(value, grid_size)


def metric_by_name(name: str, **params) -> CstarMetric:
    """Construct a built-in metric from its configuration name."""
    if name == "diag":
        return make_diag_metric(float(params.get("alpha", 0.5)))
    if name == "reciprocal":
        f = params.get("f")
        f = f if isinstance(f, AlgebraElement) else default_function_f()
        return make_reciprocal_function_metric(f)
    if name == "scaled":
        f = params.get("f")
        f = f if isinstance(f, AlgebraElement) else default_function_f()
        return make_scaled_function_metric(f)
    if name == "discrete":
        return make_discrete_metric()
    raise DomainError(f"unknown metric {name!r}")
