"""Measure kernel: golden values, oracle equivalence, and bounds."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from faultchain.errors import InputError
from faultchain.infotheory import (INTERDEPENDENT, REDUNDANT, EntropyConfig,
                                   conditional_mutual_information,
                                   correlation_ratio, entropy,
                                   mutual_information, relevance_class,
                                   symmetric_uncertainty)
from faultchain.spectrum import build_stats

from oracles import cmi_oracle, entropy_oracle, mi_oracle

GINI = EntropyConfig(phi_name="gini")


@st.composite
def paired_columns(draw, k=2, max_n=30):
    n = draw(st.integers(min_value=1, max_value=max_n))
    cols = [draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
            for _ in range(k)]
    return [np.array(c, dtype=np.uint8) for c in cols]


class TestEntropy:
    def test_fair_binary_column(self):
        assert entropy([1, 0] * 6) == pytest.approx(1.0)

    def test_constant_column(self):
        assert entropy([1] * 9) == 0.0

    def test_golden_s6_column(self, golden):
        h = entropy(golden.coverage.column("S6"))
        assert h == pytest.approx(0.918, abs=1e-3)

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            entropy([])

    def test_custom_base(self):
        cfg = EntropyConfig(base=np.e)
        assert entropy([1, 0], cfg) == pytest.approx(np.log(2))


class TestMutualInformation:
    def test_self_information_is_entropy(self, golden):
        col = golden.coverage.column("S9")
        assert mutual_information(col, col) == pytest.approx(entropy(col))

    def test_independent_columns(self):
        x = [0, 0, 1, 1]
        y = [0, 1, 0, 1]
        assert mutual_information(x, y) == pytest.approx(0.0, abs=1e-12)

    def test_golden_s6_vs_outcome(self, golden):
        mi = mutual_information(golden.coverage.column("S6"),
                                golden.coverage.outcome_column())
        assert mi == pytest.approx(0.459, abs=1e-3)

    def test_length_mismatch(self):
        with pytest.raises(InputError):
            mutual_information([0, 1], [0, 1, 1])


class TestConditionalMutualInformation:
    def test_constant_condition_equals_mi(self, golden):
        x = golden.coverage.column("S9")
        out = golden.coverage.outcome_column()
        z = np.zeros_like(x)
        assert conditional_mutual_information(x, out, z) == pytest.approx(
            mutual_information(x, out))

    def test_golden_s13_given_s6_is_zero(self, golden):
        cov = golden.coverage
        cmi = conditional_mutual_information(
            cov.column("S13"), cov.outcome_column(), cov.column("S6"))
        assert cmi == pytest.approx(0.0, abs=1e-12)

    def test_golden_s15_given_s9(self, golden):
        cov = golden.coverage
        cmi = conditional_mutual_information(
            cov.column("S15"), cov.outcome_column(), cov.column("S9"))
        assert cmi == pytest.approx(0.689, abs=1e-3)


class TestSymmetricUncertainty:
    def test_golden_relevance_row(self, golden):
        cov = golden.coverage
        out = cov.outcome_column()
        expected = {"S6": 0.48, "S9": 0.34, "S11": 0.12, "S13": 0.23,
                    "S15": 0.34}
        for s, value in expected.items():
            assert symmetric_uncertainty(cov.column(s), out) == pytest.approx(
                value, abs=0.01), s

    def test_identical_columns(self):
        col = [1, 0, 1, 1, 0]
        assert symmetric_uncertainty(col, col) == pytest.approx(1.0)

    def test_independent_columns(self):
        assert symmetric_uncertainty([0, 0, 1, 1], [0, 1, 0, 1]) == \
            pytest.approx(0.0, abs=1e-12)

    def test_both_constant_returns_zero(self):
        assert symmetric_uncertainty([1, 1], [0, 0]) == 0.0


class TestCorrelationRatio:
    def test_golden_second_iteration(self, golden):
        expected = {"S9": -0.12, "S11": 0.15, "S13": -0.23, "S15": -0.12}
        for s, value in expected.items():
            record = correlation_ratio(s, "S6", golden.coverage)
            assert record.cr == pytest.approx(value, abs=0.01), s

    def test_golden_third_iteration(self, golden):
        expected = {"S11": 0.08, "S13": 0.18, "S15": 0.41}
        for s, value in expected.items():
            record = correlation_ratio(s, "S9", golden.coverage)
            assert record.cr == pytest.approx(value, abs=0.01), s

    def test_reused_pair_cell(self, golden):
        # derived value, frozen from an independent computation
        record = correlation_ratio("S6", "S9", golden.coverage)
        assert record.cr == pytest.approx(-0.1205, abs=1e-3)
        assert record.kind == REDUNDANT

    def test_constant_conditioner_boundary(self, golden):
        cov = golden.coverage
        record = correlation_ratio("S9", "S1", cov)  # S1 covered everywhere
        assert record.cr == pytest.approx(0.0, abs=1e-12)
        assert record.kind == INTERDEPENDENT

    def test_same_statement_rejected(self, golden):
        with pytest.raises(InputError):
            correlation_ratio("S6", "S6", golden.coverage)


class TestRelevanceClass:
    def test_golden_classes(self, golden):
        stats = build_stats(golden.coverage)
        assert relevance_class(stats, "S6") == 1
        assert relevance_class(stats, "S9") == 1
        assert relevance_class(stats, "S15") == 1
        assert relevance_class(stats, "S11") == -1
        assert relevance_class(stats, "S13") == -1

    def test_all_failing_no_passing_coverage(self, golden):
        stats = build_stats(golden.slices)
        assert relevance_class(stats, "S9") == 1   # covers exactly the failures
        assert relevance_class(stats, "S6") == -1  # covers nothing

    def test_duplication_invariance(self, golden):
        from faultchain.spectrum import SliceSpectrum
        cov = golden.coverage
        k = 3
        dup = SliceSpectrum(
            cov.statements,
            [f"{t}#{i}" for i in range(k) for t in cov.tests],
            np.vstack([cov.matrix] * k),
            list(cov.verdicts) * k, cov.mode)
        stats = build_stats(cov)
        dup_stats = build_stats(dup)
        for s in cov.statements:
            assert relevance_class(stats, s) == relevance_class(dup_stats, s)


class TestOracleEquivalence:
    def test_against_joint_histograms(self):
        rng = np.random.default_rng(17)
        for _ in range(300):
            n = int(rng.integers(1, 21))
            x, y, z = (rng.integers(0, 2, n, dtype=np.uint8) for _ in range(3))
            assert entropy(x) == pytest.approx(
                entropy_oracle(x.tolist()), abs=1e-12)
            assert mutual_information(x, y) == pytest.approx(
                mi_oracle(x.tolist(), y.tolist()), abs=1e-12)
            assert conditional_mutual_information(x, y, z) == pytest.approx(
                cmi_oracle(x.tolist(), y.tolist(), z.tolist()), abs=1e-12)


class TestProperties:
    @settings(max_examples=60, deadline=None)
    @given(paired_columns(k=2))
    def test_mi_nonnegative_and_symmetric(self, cols):
        x, y = cols
        mi_xy = mutual_information(x, y)
        mi_yx = mutual_information(y, x)
        assert mi_xy >= 0.0
        assert mi_xy == pytest.approx(mi_yx, abs=1e-10)

    @settings(max_examples=60, deadline=None)
    @given(paired_columns(k=3))
    def test_cmi_nonnegative(self, cols):
        x, y, z = cols
        assert conditional_mutual_information(x, y, z) >= 0.0

    @settings(max_examples=60, deadline=None)
    @given(paired_columns(k=2))
    def test_u_bounds(self, cols):
        x, y = cols
        assert 0.0 <= symmetric_uncertainty(x, y) <= 1.0

    @settings(max_examples=60, deadline=None)
    @given(paired_columns(k=2, max_n=20), st.booleans())
    def test_gini_phi_stays_bounded(self, cols, flip):
        x, y = cols
        if flip:
            x, y = y, x
        assert 0.0 <= symmetric_uncertainty(x, y, GINI) <= 1.0
