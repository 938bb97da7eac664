"""Metric layer: gap profiles, built-in metrics, axiom verification."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cstarseq.algebra import const_function, function_element, op_norm
from cstarseq.errors import (
    DomainError,
    InternalConsistencyError,
    PreconditionError,
)
from cstarseq.metrics import (
    ALL,
    CstarMetric,
    GapKind,
    GapProfile,
    MIXED,
    NONE,
    distance_norm,
    default_function_f,
    make_diag_metric,
    make_discrete_metric,
    make_reciprocal_function_metric,
    make_scaled_function_metric,
    metric_by_name,
    verify_axioms,
)

finite = st.floats(min_value=-50.0, max_value=50.0,
                   allow_nan=False, allow_infinity=False)


class TestGapProfile:
    def test_linear(self):
        gp = GapProfile(GapKind.LINEAR, 2.0)
        assert gp.norm_of_gap(0.3) == pytest.approx(0.6)
        assert gp.offends(0.05, 0.1)
        assert not gp.offends(0.049, 0.1)

    def test_reciprocal(self):
        gp = GapProfile(GapKind.RECIPROCAL, 2.0)
        assert gp.norm_of_gap(0.0) == 0.0
        assert gp.norm_of_gap(4.0) == pytest.approx(0.5)
        assert np.allclose(gp.norm_of_gaps(np.array([0.0, 1.0, 4.0])),
                           [0.0, 2.0, 0.5])

    def test_discrete(self):
        gp = GapProfile(GapKind.DISCRETE, 1.0)
        assert gp.norm_of_gap(0.0) == 0.0
        assert gp.norm_of_gap(7.0) == 1.0

    @settings(max_examples=200, deadline=None)
    @given(
        st.sampled_from([GapKind.LINEAR, GapKind.RECIPROCAL, GapKind.DISCRETE]),
        st.floats(min_value=0.0, max_value=4.0),
        st.floats(min_value=0.0, max_value=4.0),
        st.floats(min_value=0.01, max_value=3.0),
        st.booleans(),
    )
    def test_interval_status_sound_against_sampling(
        self, kind, a, b, eps, zero_ok
    ):
        glo, ghi = min(a, b), max(a, b)
        gp = GapProfile(kind, 1.5)
        status = gp.interval_status(glo, ghi, eps, zero_attainable=zero_ok)
        gaps = [g for g in np.linspace(glo, ghi, 17) if g > 0.0 or zero_ok]
        if glo == 0.0 and not zero_ok:
            gaps = [g for g in gaps if g > 0.0]
            if ghi > 0.0:
                gaps.append(min(ghi, 1e-9))
        offenders = [g for g in gaps if gp.offends(g, eps)]
        if status == ALL:
            assert len(offenders) == len(gaps)
        elif status == NONE:
            assert not offenders
        # MIXED makes no claim.

    def test_empty_interval_rejected(self):
        with pytest.raises(DomainError):
            GapProfile(GapKind.LINEAR).interval_status(1.0, 0.5, 0.1, False)


class TestBuiltinMetrics:
    def test_diag_metric_norm_oracle(self):
        # Oracle: assemble the diagonal matrix and take the largest
        # singular value via LAPACK directly.
        for alpha in (0.5, 2.0):
            m = make_diag_metric(alpha)
            for x, y in [(1.0, 0.5), (-1.0, 2.0), (0.1, 0.1)]:
                want = float(np.linalg.norm(
                    np.diag([abs(x - y), alpha * abs(x - y)]), 2))
                assert distance_norm(m, x, y) == pytest.approx(want, abs=1e-12)

    def test_diag_rejects_negative_alpha(self):
        with pytest.raises(DomainError):
            make_diag_metric(-1.0)

    def test_reciprocal_metric_norm(self):
        m = make_reciprocal_function_metric(const_function(2.0, 8))
        assert distance_norm(m, 1.0, 1.0) == 0.0
        assert distance_norm(m, 0.0, 0.5) == pytest.approx(4.0)

    def test_reciprocal_requires_norm_above_one(self):
        with pytest.raises(PreconditionError):
            make_reciprocal_function_metric(const_function(0.5, 8))

    def test_reciprocal_requires_positive_samples(self):
        with pytest.raises(PreconditionError):
            make_reciprocal_function_metric(function_element([2.0, 0.0]))

    def test_scaled_metric_norm(self):
        m = make_scaled_function_metric(const_function(2.0, 8))
        assert distance_norm(m, 0.25, 0.0) == pytest.approx(0.5)

    def test_discrete_metric(self):
        m = make_discrete_metric()
        assert distance_norm(m, 1.0, 1.0) == 0.0
        assert distance_norm(m, 1.0, 5.0) == pytest.approx(1.0)

    def test_formula_cross_check_catches_mismatch(self):
        base = make_diag_metric(1.0)
        broken = CstarMetric(
            algebra=base.algebra, name="broken", eval_fn=base.eval_fn,
            norm_formula=lambda x, y: 3.0 * abs(x - y) + 1.0,
        )
        with pytest.raises(InternalConsistencyError):
            distance_norm(broken, 0.0, 1.0)

    def test_registry(self):
        assert metric_by_name("diag", alpha=2.0).name == "diag(alpha=2)"
        assert metric_by_name("discrete").gap_profile.kind is GapKind.DISCRETE
        with pytest.raises(DomainError):
            metric_by_name("nope")

    @settings(max_examples=100, deadline=None)
    @given(finite, finite)
    def test_gap_profile_agrees_with_distance_norm(self, x, y):
        for m in (make_diag_metric(0.5), make_diag_metric(2.0),
                  make_discrete_metric()):
            gp = m.gap_profile
            assert gp.norm_of_gap(abs(x - y)) == pytest.approx(
                distance_norm(m, x, y), rel=1e-9, abs=1e-12
            )


class TestAxiomVerification:
    PTS = (-1.0, -0.25, 0.0, 0.5, 2.0)

    def test_diag_and_scaled_and_discrete_pass(self):
        for m in (make_diag_metric(0.5), make_diag_metric(2.0),
                  make_scaled_function_metric(const_function(2.0, 8)),
                  make_discrete_metric()):
            rep = verify_axioms(m, self.PTS)
            assert rep.all_pass(), (m.name, rep.witness_triples)

    def test_reciprocal_triangle_fails_and_is_reported(self):
        m = make_reciprocal_function_metric(const_function(2.0, 8))
        rep = verify_axioms(m, self.PTS)
        assert rep.axiom_i_pass and rep.axiom_ii_pass
        assert not rep.axiom_iii_pass
        assert rep.witness_triples  # violations come with witnesses

    def test_degenerate_metric_detected(self):
        base = make_discrete_metric()
        broken = CstarMetric(
            algebra=base.algebra, name="zero",
            eval_fn=lambda x, y: base.algebra.zero(),
        )
        rep = verify_axioms(broken, self.PTS)
        assert not rep.axiom_i_pass  # definiteness fails

    def test_needs_three_points(self):
        with pytest.raises(PreconditionError):
            verify_axioms(make_discrete_metric(), (0.0, 1.0))
