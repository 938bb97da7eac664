"""Convergence lab: A(eps) sets, verdict engines, audits.

Window-level claims are checked against brute-force oracles that assemble
the distance elements independently (LAPACK operator norms, explicit
formulas derived in the test file) rather than through the gap profiles.
"""

import numpy as np
import pytest

from cstarseq.convergence import (
    Index,
    Point,
    a_epsilon_set,
    cauchy_criteria_cross_check,
    counterexample_audit,
    i_cauchy_def_verdict,
    i_cauchy_ek_verdict,
    i_cauchy_pair_verdict,
    i_convergence_verdict,
    i_star_cauchy_verdict,
    i_star_convergence_verdict,
    implication_audit,
    istar_witness_from_ap,
)
from cstarseq.errors import (
    DomainError,
    PreconditionError,
    UnsupportedOperationError,
)
from cstarseq.ideals import (
    Decision,
    IdealDescriptor,
    SetDescription,
    TailKind,
    block_union,
    filter_membership,
)
from cstarseq.metrics import (
    default_function_f,
    make_diag_metric,
    make_discrete_metric,
    make_reciprocal_function_metric,
    make_scaled_function_metric,
)
from cstarseq.sequences import (
    make_alternating,
    make_block_harmonic,
    make_constant,
    make_harmonic,
    scenario_by_name,
)

FIN = IdealDescriptor.fin()
BLK = IdealDescriptor.block()
D0 = IdealDescriptor.density_zero()

HARMONIC = make_harmonic()
BLOCK_SEQ = make_block_harmonic()


def oracle_window(norms: np.ndarray, eps: float) -> frozenset:
    """Brute-force offender enumeration from a vector of distance norms."""
    return frozenset(int(i) + 1 for i in np.nonzero(norms >= eps)[0])


def oracle_diag_norms(alpha, xs, c):
    """Largest singular value of diag(g, alpha g), assembled via LAPACK on a
    subsample and by the max formula on the rest."""
    out = np.maximum(1.0, alpha) * np.abs(xs - c)
    for i in range(0, len(xs), max(1, len(xs) // 37)):
        m = np.diag([abs(xs[i] - c), alpha * abs(xs[i] - c)])
        assert abs(np.linalg.norm(m, 2) - out[i]) < 1e-12
    return out


class TestAEpsilonSet:
    def test_window_matches_bruteforce_harmonic(self):
        n = 512
        xs = 1.0 / np.arange(1, n + 1)
        for alpha in (0.5, 2.0):
            m = make_diag_metric(alpha)
            for eps in (0.5, 0.1, 0.01):
                for center in (0.0, 1.0 / 7):
                    a = a_epsilon_set(HARMONIC, m, Point(center), eps, n)
                    want = oracle_window(
                        oracle_diag_norms(alpha, xs, center), eps)
                    assert a.window == want

    def test_index_center_resolution(self):
        m = make_diag_metric(1.0)
        a_idx = a_epsilon_set(HARMONIC, m, Index(7), 0.1, 256)
        a_pt = a_epsilon_set(HARMONIC, m, Point(1.0 / 7), 0.1, 256)
        assert a_idx.window == a_pt.window

    def test_tail_certificate_harmonic_finite(self):
        m = make_diag_metric(0.5)
        a = a_epsilon_set(HARMONIC, m, Point(0.0), 0.01, 4096)
        assert a.tail.kind is TailKind.FINITE

    def test_tail_certificate_reciprocal_cofinite(self):
        m = make_reciprocal_function_metric(default_function_f(2.0, 64))
        a = a_epsilon_set(HARMONIC, m, Index(4), 0.5, 1024)
        assert a.tail.kind is TailKind.COFINITE

    def test_tail_certificate_block(self):
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        a = a_epsilon_set(BLOCK_SEQ, m, Point(0.0), 0.5, 1024)
        assert a.tail.kind is TailKind.BLOCK_BOUNDED
        # offending blocks: 2/j >= 0.5 iff j <= 4
        assert a.tail.blocks == frozenset({1, 2, 3, 4})

    def test_invalid_inputs(self):
        m = make_diag_metric(1.0)
        with pytest.raises(DomainError):
            a_epsilon_set(HARMONIC, m, Point(0.0), 0.0, 64)
        with pytest.raises(DomainError):
            a_epsilon_set(HARMONIC, m, Index(0), 0.1, 64)


class TestIConvergence:
    def test_harmonic_converges_under_fin(self):
        m = make_diag_metric(0.5)
        for k in range(1, 11):
            b = i_convergence_verdict(HARMONIC, m, 0.0, FIN, 1.0 / k, 2048)
            assert b.decision is Decision.IN

    def test_wrong_limit_fails(self):
        m = make_diag_metric(0.5)
        b = i_convergence_verdict(HARMONIC, m, 0.5, FIN, 0.1, 2048)
        assert b.decision is Decision.NOT_IN

    def test_block_sequence_converges_under_block_ideal_only(self):
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        assert i_convergence_verdict(
            BLOCK_SEQ, m, 0.0, BLK, 0.5, 1024).decision is Decision.IN
        assert i_convergence_verdict(
            BLOCK_SEQ, m, 0.0, FIN, 0.5, 1024).decision is Decision.NOT_IN

    def test_constant_sequence(self):
        m = make_diag_metric(2.0)
        s = make_constant(3.0)
        assert i_convergence_verdict(
            s, m, 3.0, FIN, 1e-6, 256).decision is Decision.IN


class TestICauchyDefinition:
    def test_harmonic_witness_values(self):
        # With norm max(1, alpha) |1/n - 1/n0| the analytic first good
        # center is n0 = ceil(slope/eps) + 1.
        for alpha, eps, expect_n0 in ((0.5, 0.1, 11), (2.0, 0.01, 201)):
            m = make_diag_metric(alpha)
            b = i_cauchy_def_verdict(HARMONIC, m, FIN, eps, 4096)
            assert b.decision is Decision.IN
            assert b.witness_index == expect_n0

    def test_witness_set_matches_bruteforce(self):
        m = make_diag_metric(0.5)
        b = i_cauchy_def_verdict(HARMONIC, m, FIN, 0.1, 4096)
        xs = 1.0 / np.arange(1, 4097)
        want = oracle_window(
            oracle_diag_norms(0.5, xs, 1.0 / b.witness_index), 0.1)
        assert b.witness_set.window == want

    def test_reciprocal_universal_notin(self):
        m = make_reciprocal_function_metric(default_function_f(2.0, 64))
        for eps in (0.1, 0.5, 1.0):
            b = i_cauchy_def_verdict(HARMONIC, m, FIN, eps, 1024)
            assert b.decision is Decision.NOT_IN

    def test_block_sequence_fin_vs_block(self):
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        assert i_cauchy_def_verdict(
            BLOCK_SEQ, m, BLK, 0.3, 1024).decision is Decision.IN
        assert i_cauchy_def_verdict(
            BLOCK_SEQ, m, FIN, 0.3, 1024).decision is Decision.NOT_IN

    def test_alternating_threshold(self):
        m = make_diag_metric(1.0)
        assert i_cauchy_def_verdict(
            make_alternating(), m, FIN, 0.5, 512).decision is Decision.NOT_IN
        assert i_cauchy_def_verdict(
            make_alternating(), m, FIN, 2.5, 512).decision is Decision.IN


class TestICauchyPair:
    def test_block_cut_oracle(self):
        # Independent derivation of the cut: D = Delta_1 u ... u Delta_J
        # works as soon as pairwise norms off D stay below eps, i.e.
        # 2 * (1/(J+1) - 0) < eps at the worst pair; the smallest J with
        # envelope(J) < eps / (2 * scale) gives 1/J < 0.2/4 = 0.05 -> J=21.
        eps, scale = 0.2, 2.0
        j = 1
        while 1.0 / j >= eps / (2.0 * scale):
            j += 1
        assert j == 21
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        b = i_cauchy_pair_verdict(BLOCK_SEQ, m, BLK, eps, 8192)
        assert b.decision is Decision.IN
        assert b.cut_index == 21
        assert b.witness_set.window == block_union(range(1, 22), 8192).window

    def test_pair_witness_really_works(self):
        # Off D = blocks 1..21, every index has block >= 22 and the value
        # 1/j sits in (0, 1/22]; the worst pair norm is below eps.
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        b = i_cauchy_pair_verdict(BLOCK_SEQ, m, BLK, 0.2, 2048)
        off_blocks = [j for j in range(22, 200)]
        vals = np.array([BLOCK_SEQ.generator(2 ** (j - 1))
                         for j in off_blocks])
        worst = 2.0 * (vals.max() - vals.min())
        assert worst < 0.2
        assert b.decision is Decision.IN

    def test_harmonic_empty_witness(self):
        m = make_diag_metric(0.5)
        b = i_cauchy_pair_verdict(HARMONIC, m, FIN, 2.0, 512)
        assert b.decision is Decision.IN
        assert b.witness_set.window == frozenset()

    def test_block_sequence_not_pair_cauchy_under_fin(self):
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        b = i_cauchy_pair_verdict(BLOCK_SEQ, m, FIN, 0.3, 1024)
        assert b.decision is Decision.NOT_IN

    def test_reciprocal_not_pair_cauchy(self):
        m = make_reciprocal_function_metric(default_function_f(2.0, 64))
        b = i_cauchy_pair_verdict(HARMONIC, m, FIN, 0.5, 512)
        assert b.decision is Decision.NOT_IN


class TestICauchyEk:
    def test_agrees_with_definition_on_harmonic(self):
        m = make_diag_metric(0.5)
        for eps in (1.0, 0.1, 0.01):
            d = i_cauchy_def_verdict(HARMONIC, m, FIN, eps, 2048).decision
            e = i_cauchy_ek_verdict(HARMONIC, m, FIN, eps, 2048).decision
            assert d is e is Decision.IN

    def test_k_set_window_oracle(self):
        # Independent derivation: E_k(eps) = {n : 2 |1/n - 1/k| >= eps} is
        # cofinite (hence outside Fin) exactly when the tail value
        # 2 (1/k - 0) exceeds eps, i.e. k < 2/eps; with eps = 0.1 the
        # strict offenders are k = 1..19 (k = 20 sits on the boundary and
        # may stay undecided, which cannot flip the finite-tail verdict).
        m = make_diag_metric(2.0)
        b = i_cauchy_ek_verdict(HARMONIC, m, FIN, 0.1, 1024)
        assert frozenset(range(1, 20)) <= b.witness_set.window
        assert b.witness_set.window <= frozenset(range(1, 21))
        assert b.witness_set.tail.kind is TailKind.FINITE
        assert b.decision is Decision.IN

    def test_reciprocal_k_is_cofinite(self):
        m = make_reciprocal_function_metric(default_function_f(2.0, 64))
        b = i_cauchy_ek_verdict(HARMONIC, m, FIN, 0.5, 512)
        assert b.decision is Decision.NOT_IN
        assert b.witness_set.tail.kind is TailKind.COFINITE

    def test_block_sequence_under_block_ideal(self):
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        b = i_cauchy_ek_verdict(BLOCK_SEQ, m, BLK, 0.3, 1024)
        assert b.decision is Decision.IN


class TestCrossCheck:
    GRID_EPS = (1.0, 0.1, 0.01)

    def test_no_conflicts_on_core_grid(self):
        mets = [make_diag_metric(0.5), make_diag_metric(2.0),
                make_scaled_function_metric(default_function_f(2.0, 64)),
                make_discrete_metric()]
        for s in (HARMONIC, BLOCK_SEQ, make_constant(0.0)):
            for ideal in (FIN, BLK, D0):
                for m in mets:
                    rep = cauchy_criteria_cross_check(
                        s, m, ideal, self.GRID_EPS, 1024)
                    assert rep["consistent"], rep["conflicts"]


class TestIStar:
    def test_full_witness_harmonic(self):
        m = make_diag_metric(0.5)
        b = i_star_cauchy_verdict(
            HARMONIC, m, FIN, SetDescription.full(1024), 0.1, 1024)
        assert b.decision is Decision.IN
        assert b.cut_index is not None

    def test_witness_must_be_in_filter(self):
        m = make_diag_metric(0.5)
        bad = SetDescription(frozenset({1}), 1024,
                             __import__("cstarseq").TailCertificate.finite())
        b = i_star_cauchy_verdict(HARMONIC, m, FIN, bad, 0.1, 1024)
        assert b.decision is Decision.NOT_IN

    def test_block_witness_defeated(self):
        # Excluding blocks 1..l leaves blocks l+1, l+2 whose fixed gap
        # 2 (1/(l+1) - 1/(l+2)) = 2/((l+1)(l+2)) defeats eps0.
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        for l in (1, 4, 9):
            eps0 = 2.0 / (3.0 * (l + 1) * (l + 2))
            w = block_union(range(1, l + 1), 2048).complement()
            assert filter_membership(BLK, w).decision is Decision.IN
            b = i_star_cauchy_verdict(BLOCK_SEQ, m, BLK, w, eps0, 2048)
            assert b.decision is Decision.NOT_IN

    def test_i_star_convergence(self):
        m = make_diag_metric(0.5)
        full = SetDescription.full(1024)
        assert i_star_convergence_verdict(
            HARMONIC, m, FIN, 0.0, full, 0.1, 1024).decision is Decision.IN
        assert i_star_convergence_verdict(
            HARMONIC, m, FIN, 0.7, full, 0.1, 1024).decision is Decision.NOT_IN

    def test_alternating_istar_not_cauchy(self):
        m = make_diag_metric(1.0)
        full = SetDescription.full(512)
        b = i_star_cauchy_verdict(make_alternating(), m, FIN, full, 0.5, 512)
        assert b.decision is Decision.NOT_IN


class TestApWitnessRoute:
    def test_fin_witness_certifies_istar(self):
        m = make_diag_metric(0.5)
        w = istar_witness_from_ap(HARMONIC, m, FIN, 2048)
        assert filter_membership(FIN, w).decision is Decision.IN
        for k in range(1, 11):
            b = i_star_cauchy_verdict(HARMONIC, m, FIN, w, 1.0 / k, 2048)
            assert b.decision is Decision.IN

    def test_block_ideal_refused(self):
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        with pytest.raises(UnsupportedOperationError):
            istar_witness_from_ap(BLOCK_SEQ, m, BLK, 2048)

    def test_non_cauchy_input_refused(self):
        m = make_reciprocal_function_metric(default_function_f(2.0, 64))
        with pytest.raises(PreconditionError):
            istar_witness_from_ap(HARMONIC, m, FIN, 1024)


class TestCounterexampleAudit:
    def test_reproduction(self):
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        rep = counterexample_audit(10, 8192, m)
        assert rep["reproduced"]
        assert rep["ap_witness_unsupported"]
        for entry in rep["entries"]:
            l = entry["l"]
            assert entry["expected_gap"] == pytest.approx(
                2.0 / ((l + 1) * (l + 2)), rel=1e-15)
            for pair in entry["pairs"]:
                assert pair["gap_matches_formula"]
                assert pair["exceeds_eps0"]

    def test_gap_values_against_direct_evaluation(self):
        # Oracle: pick explicit members of blocks l+1 and l+2 and evaluate
        # the metric element norm through LAPACK-free sup over samples.
        s = make_block_harmonic()
        for l in (1, 5, 10):
            m_idx, n_idx = 2 ** l, 2 ** (l + 1)
            gap = 2.0 * abs(s.generator(m_idx) - s.generator(n_idx))
            assert gap == pytest.approx(2.0 / ((l + 1) * (l + 2)), rel=1e-12)
            assert gap > 2.0 / (3.0 * (l + 1) * (l + 2))

    def test_window_too_small_rejected(self):
        m = make_scaled_function_metric(default_function_f(2.0, 64))
        with pytest.raises(DomainError):
            counterexample_audit(10, 1024, m)


class TestImplicationAudit:
    def test_grid_consistent(self):
        scens = [HARMONIC, BLOCK_SEQ, make_constant(0.0)]
        mets = [make_diag_metric(0.5), make_diag_metric(2.0),
                make_scaled_function_metric(default_function_f(2.0, 64)),
                make_discrete_metric()]
        rep = implication_audit(scens, (FIN, BLK), mets, (1.0, 0.1, 0.01),
                                1024)
        assert rep["consistent"], rep["violations"]

    def test_row_shape(self):
        rep = implication_audit([HARMONIC], [FIN],
                                [make_diag_metric(0.5)], [0.1], 256)
        row = rep["rows"][0]
        assert row["i_convergence"] == "in"
        assert row["proof_inclusion_b2eps_in_aeps"] is True
