"""Ideals on the natural numbers with certificate-backed membership.

Subsets of N are represented at desk scale as a finite window over
``[1..N]`` plus a *tail certificate* describing the set beyond the window.
Ideal membership is decided three-valued (In / NotIn / Unknown) from the
certificate alone, so every In/NotIn answer names the rule that justifies
it and Unknown is the honest fallback when the window cannot decide.

The dyadic block partition Delta_j = {2^(j-1) (2s - 1) : s >= 1} drives the
counterexample ideal: sets that meet only finitely many blocks.

Certificate semantics (all "up to a finite symmetric difference"):

* ``FINITE``     -- the set equals its window part; nothing beyond N.
* ``COFINITE``   -- the complement is finite.
* ``BLOCK_BOUNDED(J)``   -- the set equals the union of the blocks in J.
* ``BLOCK_COBOUNDED(J)`` -- the set equals the union of the blocks *not* in J
  (the complement of a block-bounded set).
* ``BLOCK_UNBOUNDED``    -- the set meets infinitely many blocks (weaker than
  cobounded; its complement is not derivable).
* ``INFINITE``   -- the set is infinite, structure unknown.
* ``UNKNOWN``    -- no tail information.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError, PreconditionError, UnsupportedOperationError


# ---------------------------------------------------------------------------
# Dyadic block partition


def block_index(n: int) -> int:
    """The unique j with n in Delta_j: trailing binary zeros of n, plus 1."""
    if n < 1:
        raise DomainError("block_index requires n >= 1")
    return (n & -n).bit_length()


def block_members(j: int, n_max: int) -> list[int]:
    """Elements of Delta_j = {2^(j-1)(2s-1)} inside [1..n_max]."""
    if j < 1 or n_max < 1:
        raise DomainError("block_members requires j >= 1 and n_max >= 1")
    start = 1 << (j - 1)
    step = 1 << j
    return list(range(start, n_max + 1, step))


def max_block_index(n_max: int) -> int:
    """Largest j whose block meets [1..n_max]."""
    return int(n_max).bit_length()


# ---------------------------------------------------------------------------
# Tail certificates and set descriptions


class TailKind(enum.Enum):
    FINITE = "finite"
    COFINITE = "cofinite"
    BLOCK_BOUNDED = "block_bounded"
    BLOCK_COBOUNDED = "block_cobounded"
    BLOCK_UNBOUNDED = "block_unbounded"
    INFINITE = "infinite"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class TailCertificate:
    kind: TailKind
    blocks: frozenset = frozenset()

    @staticmethod
    def finite() -> "TailCertificate":
        return TailCertificate(TailKind.FINITE)

    @staticmethod
    def cofinite() -> "TailCertificate":
        return TailCertificate(TailKind.COFINITE)

    @staticmethod
    def block_bounded(blocks: Iterable[int]) -> "TailCertificate":
        js = frozenset(int(j) for j in blocks)
        if not js:
            return TailCertificate(TailKind.FINITE)
        return TailCertificate(TailKind.BLOCK_BOUNDED, js)

    @staticmethod
    def block_cobounded(blocks: Iterable[int]) -> "TailCertificate":
        js = frozenset(int(j) for j in blocks)
        if not js:
            return TailCertificate(TailKind.COFINITE)
        return TailCertificate(TailKind.BLOCK_COBOUNDED, js)

    @staticmethod
    def block_unbounded() -> "TailCertificate":
        return TailCertificate(TailKind.BLOCK_UNBOUNDED)

    @staticmethod
    def infinite() -> "TailCertificate":
        return TailCertificate(TailKind.INFINITE)

    @staticmethod
    def unknown() -> "TailCertificate":
        return TailCertificate(TailKind.UNKNOWN)

    def complement(self) -> "TailCertificate":
        k = self.kind
        if k is TailKind.FINITE:
            return TailCertificate.cofinite()
        if k is TailKind.COFINITE:
            return TailCertificate.finite()
        if k is TailKind.BLOCK_BOUNDED:
            return TailCertificate.block_cobounded(self.blocks)
        if k is TailKind.BLOCK_COBOUNDED:
            return TailCertificate.block_bounded(self.blocks)
        return TailCertificate.unknown()

    def to_json(self):
        return {"kind": self.kind.value, "blocks": sorted(self.blocks)}


@dataclass(frozen=True)
class SetDescription:
    """A subset of N: exact window over [1..size] plus a tail certificate."""

    window: frozenset
    size: int
    tail: TailCertificate

    def __post_init__(self):
        if self.size < 1:
            raise DomainError("window size must be >= 1")
        bad = [n for n in self.window if not (1 <= n <= self.size)]
        if bad:
            raise DomainError(f"window members outside [1..{self.size}]: {bad[:5]}")

    @staticmethod
    def from_members(members: Iterable[int], size: int,
                     tail: TailCertificate) -> "SetDescription":
        return SetDescription(frozenset(int(n) for n in members), size, tail)

    @staticmethod
    def empty(size: int) -> "SetDescription":
        return SetDescription(frozenset(), size, TailCertificate.finite())

    @staticmethod
    def full(size: int) -> "SetDescription":
        return SetDescription(
            frozenset(range(1, size + 1)), size, TailCertificate.cofinite()
        )

    def complement(self) -> "SetDescription":
        window = frozenset(range(1, self.size + 1)) - self.window
        return SetDescription(window, self.size, self.tail.complement())

    def union(self, other: "SetDescription") -> "SetDescription":
        if self.size != other.size:
            raise DomainError("window sizes differ")
        return SetDescription(
            self.window | other.window,
            self.size,
            _union_tail(self.tail, other.tail),
        )

    def intersection(self, other: "SetDescription") -> "SetDescription":
        if self.size != other.size:
            raise DomainError("window sizes differ")
        return SetDescription(
            self.window & other.window,
            self.size,
            _intersection_tail(self.tail, other.tail),
        )

    def minus(self, other: "SetDescription") -> "SetDescription":
        return self.intersection(other.complement())

    def to_json(self):
        return {
            "window": run_length_encode(self.window),
            "size": self.size,
            "tail": self.tail.to_json(),
        }


def run_length_encode(members: Iterable[int]) -> list[list[int]]:
    """Sorted members as inclusive [start, end] intervals."""
    runs = []
    for n in sorted(members):
        if runs and n == runs[-1][1] + 1:
            runs[-1][1] = n
        else:
            runs.append([n, n])
    return runs


def _union_tail(a: TailCertificate, b: TailCertificate) -> TailCertificate:
    ka, kb = a.kind, b.kind
    if TailKind.COFINITE in (ka, kb):
        return TailCertificate.cofinite()
    if ka is TailKind.FINITE:
        return b
    if kb is TailKind.FINITE:
        return a
    if ka is kb is TailKind.BLOCK_BOUNDED:
        return TailCertificate.block_bounded(a.blocks | b.blocks)
    if ka is kb is TailKind.BLOCK_COBOUNDED:
        return TailCertificate.block_cobounded(a.blocks & b.blocks)
    if {ka, kb} == {TailKind.BLOCK_BOUNDED, TailKind.BLOCK_COBOUNDED}:
        bounded, cobounded = (a, b) if ka is TailKind.BLOCK_BOUNDED else (b, a)
        return TailCertificate.block_cobounded(cobounded.blocks - bounded.blocks)
    if TailKind.UNKNOWN in (ka, kb):
        return TailCertificate.unknown()
    # Remaining combinations involve BLOCK_UNBOUNDED or INFINITE: the union
    # is at least infinite; block-unboundedness survives union.
    if TailKind.BLOCK_UNBOUNDED in (ka, kb) or TailKind.BLOCK_COBOUNDED in (ka, kb):
        return TailCertificate.block_unbounded()
    return TailCertificate.infinite()


def _intersection_tail(a: TailCertificate, b: TailCertificate) -> TailCertificate:
    ka, kb = a.kind, b.kind
    if TailKind.FINITE in (ka, kb):
        return TailCertificate.finite()
    if ka is TailKind.COFINITE:
        return b
    if kb is TailKind.COFINITE:
        return a
    if ka is kb is TailKind.BLOCK_BOUNDED:
        return TailCertificate.block_bounded(a.blocks & b.blocks)
    if ka is kb is TailKind.BLOCK_COBOUNDED:
        return TailCertificate.block_cobounded(a.blocks | b.blocks)
    if {ka, kb} == {TailKind.BLOCK_BOUNDED, TailKind.BLOCK_COBOUNDED}:
        bounded, cobounded = (a, b) if ka is TailKind.BLOCK_BOUNDED else (b, a)
        return TailCertificate.block_bounded(bounded.blocks - cobounded.blocks)
    return TailCertificate.unknown()


def block_elements(j: int, n_max: int) -> SetDescription:
    """Delta_j as a set description with a single-block certificate."""
    return SetDescription.from_members(
        block_members(j, n_max), n_max, TailCertificate.block_bounded([j])
    )


def block_union(js: Iterable[int], n_max: int) -> SetDescription:
    js = sorted(set(int(j) for j in js))
    members: set[int] = set()
    for j in js:
        members.update(block_members(j, n_max))
    return SetDescription.from_members(
        members, n_max, TailCertificate.block_bounded(js)
    )


# ---------------------------------------------------------------------------
# Ideals and verdicts


class Decision(enum.Enum):
    IN = "in"
    NOT_IN = "not_in"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Verdict:
    decision: Decision
    certificate: str

    def to_json(self):
        return {"decision": self.decision.value, "certificate": self.certificate}


IN = Decision.IN
NOT_IN = Decision.NOT_IN
UNKNOWN = Decision.UNKNOWN


class IdealKind(enum.Enum):
    FIN = "fin"
    DENSITY_ZERO = "density0"
    BLOCK = "block"


class ApStatus(enum.Enum):
    HAS_AP = "has_ap"
    LACKS_AP = "lacks_ap"
    UNKNOWN_AP = "unknown_ap"


@dataclass(frozen=True)
class IdealDescriptor:
    """One of the built-in admissible, nontrivial ideals on N.

    The AP flag is metadata: Fin and DensityZero carry it, the block ideal
    is marked as lacking it (the counterexample audit demonstrates why).
    """

    kind: IdealKind
    ap: ApStatus

    @staticmethod
    def fin() -> "IdealDescriptor":
        return IdealDescriptor(IdealKind.FIN, ApStatus.HAS_AP)

    @staticmethod
    def density_zero() -> "IdealDescriptor":
        return IdealDescriptor(IdealKind.DENSITY_ZERO, ApStatus.HAS_AP)

    @staticmethod
    def block() -> "IdealDescriptor":
        return IdealDescriptor(IdealKind.BLOCK, ApStatus.LACKS_AP)

    @property
    def name(self) -> str:
        return self.kind.value

    def has_ap(self) -> bool:
        return self.ap is ApStatus.HAS_AP


def ideal_by_name(name: str) -> IdealDescriptor:
    table = {
        "fin": IdealDescriptor.fin,
        "density0": IdealDescriptor.density_zero,
        "block": IdealDescriptor.block,
    }
    if name not in table:
        raise DomainError(f"unknown ideal {name!r}")
    return table[name]()


_FIN_RULES = {
    TailKind.FINITE: (IN, "fin/finite: finite sets belong to every admissible ideal"),
    TailKind.COFINITE: (NOT_IN, "fin/cofinite: a cofinite member would force N into I"),
    TailKind.BLOCK_BOUNDED: (NOT_IN, "fin/block-bounded: each Delta_j is infinite"),
    TailKind.BLOCK_COBOUNDED: (NOT_IN, "fin/block-cobounded: infinitely many blocks"),
    TailKind.BLOCK_UNBOUNDED: (NOT_IN, "fin/block-unbounded: the set is infinite"),
    TailKind.INFINITE: (NOT_IN, "fin/infinite: infinite sets are not in Fin"),
    TailKind.UNKNOWN: (UNKNOWN, "fin/unknown-tail"),
}

_BLOCK_RULES = {
    TailKind.FINITE: (IN, "block/finite: finite sets meet finitely many blocks"),
    TailKind.COFINITE: (NOT_IN, "block/cofinite: meets every block"),
    TailKind.BLOCK_BOUNDED: (IN, "block/block-bounded: finitely many blocks met"),
    TailKind.BLOCK_COBOUNDED: (NOT_IN, "block/block-cobounded: meets all but "
                                       "finitely many blocks"),
    TailKind.BLOCK_UNBOUNDED: (NOT_IN, "block/block-unbounded: meets infinitely "
                                       "many blocks"),
    TailKind.INFINITE: (UNKNOWN, "block/infinite: block structure unknown"),
    TailKind.UNKNOWN: (UNKNOWN, "block/unknown-tail"),
}

_DENSITY_RULES = {
    TailKind.FINITE: (IN, "density0/finite: finite sets have density zero"),
    TailKind.COFINITE: (NOT_IN, "density0/cofinite: density one"),
    TailKind.BLOCK_BOUNDED: (UNKNOWN, "density0/block-bounded: outside the "
                                      "decidable fragment"),
    TailKind.BLOCK_COBOUNDED: (UNKNOWN, "density0/block-cobounded: outside the "
                                        "decidable fragment"),
    TailKind.BLOCK_UNBOUNDED: (UNKNOWN, "density0/block-unbounded"),
    TailKind.INFINITE: (UNKNOWN, "density0/infinite"),
    TailKind.UNKNOWN: (UNKNOWN, "density0/unknown-tail"),
}

_RULES = {
    IdealKind.FIN: _FIN_RULES,
    IdealKind.BLOCK: _BLOCK_RULES,
    IdealKind.DENSITY_ZERO: _DENSITY_RULES,
}


def membership(ideal: IdealDescriptor, s: SetDescription) -> Verdict:
    """Does the described set belong to the ideal?  Decided from the tail
    certificate via a fixed, conflict-free rule table."""
    decision, rule = _RULES[ideal.kind][s.tail.kind]
    return Verdict(decision, rule)


def filter_membership(ideal: IdealDescriptor, s: SetDescription) -> Verdict:
    """Membership of ``s`` in the dual filter F(I): s in F(I) iff N \\ s in I."""
    comp = s.complement()
    if comp.tail.kind is TailKind.UNKNOWN and s.tail.kind is not TailKind.UNKNOWN:
        return Verdict(UNKNOWN, "filter/complement-tail-underivable")
    v = membership(ideal, comp)
    return Verdict(v.decision, "filter via complement: " + v.certificate)


# ---------------------------------------------------------------------------
# Property (AP) machinery


def ap_decompose(
    ideal: IdealDescriptor, a_sets: Sequence[SetDescription]
) -> tuple[list[SetDescription], Verdict]:
    """Replace disjoint ideal sets A_j by B_j with finite symmetric
    differences and union still in the ideal.

    For the AP ideals implemented here every certified-In input is finite, so
    the empty-set replacement B_j = {} is always valid: A_j delta B_j = A_j
    is finite and the union is empty.
    """
    if not ideal.has_ap():
        raise UnsupportedOperationError(
            f"ideal {ideal.name!r} does not have property (AP)"
        )
    seen: set[int] = set()
    for a in a_sets:
        if a.window & seen:
            raise PreconditionError("input windows are not pairwise disjoint")
        seen |= a.window
        v = membership(ideal, a)
        if v.decision is not IN:
            raise PreconditionError(
                f"every input must be certified In; got {v.decision.value} "
                f"({v.certificate})"
            )
    size = a_sets[0].size if a_sets else 1
    b_sets = [SetDescription.empty(a.size) for a in a_sets]
    union = SetDescription.empty(size)
    for b in b_sets:
        union = union.union(b)
    return b_sets, membership(ideal, union)


def ap_lemma_witness(
    ideal: IdealDescriptor, p_sets: Sequence[SetDescription]
) -> SetDescription:
    """Given P_i in F(I) and an AP ideal, produce P in F(I) with every
    P \\ P_i finite.

    Standard route: A_i = complement of P_i (disjointified), B_i from
    ap_decompose, P = complement of the union of the B_i.
    """
    if not ideal.has_ap():
        raise UnsupportedOperationError(
            f"ideal {ideal.name!r} does not have property (AP)"
        )
    if not p_sets:
        raise PreconditionError("need at least one filter set")
    size = p_sets[0].size
    for p in p_sets:
        v = filter_membership(ideal, p)
        if v.decision is not IN:
            raise PreconditionError(
                f"every P_i must be certified in F(I); got {v.decision.value}"
            )
    a_sets = [p.complement() for p in p_sets]
    disjoint: list[SetDescription] = []
    covered = SetDescription.empty(size)
    for a in a_sets:
        disjoint.append(a.minus(covered))
        covered = covered.union(a)
    b_sets, _ = ap_decompose(ideal, disjoint)
    b_union = SetDescription.empty(size)
    for b in b_sets:
        b_union = b_union.union(b)
    return b_union.complement()
