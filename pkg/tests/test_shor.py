import pytest

from shorsim import (FactoringOutcome, ideal_success_fraction, postprocess_outcome,
                     run_full_pipeline)
from shorsim.errors import PreconditionError
from shorsim.noise import NoiseModel
from shorsim.numtheory import OrderProfile

P15_2 = OrderProfile.compute(2, 15)
P15_4 = OrderProfile.compute(4, 15)


class TestPostprocess:
    def test_order2_success(self):
        out = postprocess_outcome("10", 2, P15_4)
        assert out.classification == "success"
        assert out.candidate_order == 2
        assert out.factors == (3, 5)

    def test_order2_expected_failure(self):
        out = postprocess_outcome("00", 2, P15_4)
        assert out.classification == "expected-failure"
        assert out.candidate_order is None

    def test_order4_taxonomy(self):
        assert postprocess_outcome("000", 3, P15_2).classification == "expected-failure"
        ok = postprocess_outcome("010", 3, P15_2)
        assert ok.classification == "success" and ok.candidate_order == 4
        # phase 1/2 suggests order 2, but 2**2 mod 15 != 1: no valid factors
        bad = postprocess_outcome("100", 3, P15_2)
        assert bad.classification == "trivial-factors"
        assert bad.candidate_order == 2 and bad.factors is None
        ok2 = postprocess_outcome("110", 3, P15_2)
        assert ok2.classification == "success" and ok2.factors == (3, 5)

    def test_bad_bitstring(self):
        with pytest.raises(PreconditionError):
            postprocess_outcome("012", 3, P15_2)
        with pytest.raises(PreconditionError):
            postprocess_outcome("01", 3, P15_2)

    def test_success_invariant(self):
        out = postprocess_outcome("10", 2, P15_4)
        assert out.factors[0] * out.factors[1] == 15


class TestPipeline:
    def test_order2_success_fraction(self):
        stats = run_full_pipeline(15, 4, shots=10_000, seed=7)
        sigma = stats.errors["success"]
        assert abs(stats.success_fraction - 0.5) <= 3 * sigma
        for bits, _, outcome in stats.outcomes:
            if outcome.classification == "success":
                assert outcome.factors == (3, 5)

    def test_order4_success_fraction(self):
        stats = run_full_pipeline(15, 2, shots=10_000, seed=7)
        assert abs(stats.success_fraction - 0.5) <= 3 * stats.errors["success"]
        assert set(stats.fractions) == {"success", "expected-failure", "trivial-factors"}
        assert stats.fractions["trivial-factors"] > 0.2  # the 100 outcome

    def test_default_widths_match_compiled_circuits(self):
        assert run_full_pipeline(15, 4, shots=16, seed=0).n == 2
        assert run_full_pipeline(15, 2, shots=16, seed=0).n == 3

    def test_single_shot_deterministic(self):
        a = run_full_pipeline(15, 2, shots=1, seed=3)
        b = run_full_pipeline(15, 2, shots=1, seed=3)
        assert a.outcomes == b.outcomes
        assert sum(count for _, count, _ in a.outcomes) == 1

    def test_ideal_fraction_is_exactly_half(self):
        assert ideal_success_fraction(15, 4, 2) == pytest.approx(0.5)
        assert ideal_success_fraction(15, 2, 3) == pytest.approx(0.5)

    def test_noisy_pipeline_still_reports(self):
        stats = run_full_pipeline(15, 2, noise=NoiseModel.preset("preset-paper"),
                                  shots=2000, seed=5)
        assert sum(stats.fractions.values()) == pytest.approx(1.0)

    def test_other_coprime_works(self):
        stats = run_full_pipeline(15, 7, shots=4000, seed=11)
        assert abs(stats.success_fraction - 0.5) <= 3 * stats.errors["success"] + 0.05
        for _, _, outcome in stats.outcomes:
            if outcome.classification == "success":
                assert outcome.factors == (3, 5)


def test_factoring_outcome_invariant():
    with pytest.raises(AssertionError):
        FactoringOutcome("10", 2, "success", None)
