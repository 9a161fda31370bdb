"""Unit tests for decay profiles, counterexamples and hypothesis reports"""

import logging
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import pytest

from src.config import config
from src.experiments.counterexample import (
    COROLLARY_CAVEAT,
    build_counterexample,
    corollary_hypotheses,
)
from src.experiments.profiles import DecayProfile, decay_profile, free_product_mixing_check
from src.groups.core import Budget, InternalConsistencyError, InvalidInputError

E1 = "((1,0),0)"


@pytest.mark.unit
class TestDecayProfile:
    """Test exact samples of ‖E_B(xλ_h y)‖₂²"""

    def test_wreath_profile_is_supported_at_identity(self, wreath, lam, budget):
        x = lam(wreath, "({0:1},0)")
        profile = decay_profile(wreath, x, x, budget)
        assert profile.exceptional == (((), 0),)
        assert dict(profile.samples)[((), 0)] == 1

    def test_cache_stats_are_logged(self, wreath, lam, budget, caplog):
        caplog.set_level(logging.DEBUG, logger="src.experiments.profiles")
        x = lam(wreath, "({0:1},0)")
        decay_profile(wreath, x, x, budget)
        assert f"Ball cache for {wreath.G.name}" in caplog.text
        assert "'cached_balls'" in caplog.text

    def test_wreath_profile_is_stable_in_radius(self, wreath, lam):
        x = lam(wreath, "({0:1},0)")
        small = decay_profile(wreath, x, x, Budget(radius=4))
        large = decay_profile(wreath, x, x, Budget(radius=8))
        assert small.exceptional == large.exceptional

    def test_rotation_profile_is_periodic(self, rotation4, lam):
        x = lam(rotation4, E1)
        profile = decay_profile(rotation4, x, x, Budget(radius=20))
        assert len(profile.samples) == 41
        for h, value in profile.samples:
            assert value == (1 if h[1] % 4 == 2 else 0)

    def test_rotation_exceptional_order(self, rotation4, lam, budget):
        x = lam(rotation4, E1)
        assert decay_profile(rotation4, x, x, budget).exceptional == (((0, 0), 2), ((0, 0), -2))

    def test_free_product_profiles(self, free_zz, lam):
        for left, right in (("b^-1", "b"), ("a b", "b^-1 a")):
            profile = decay_profile(free_zz, lam(free_zz, left), lam(free_zz, right), Budget(radius=20))
            assert len(profile.samples) == 41
            assert profile.exceptional == ((),)

    def test_tsv_has_one_row_per_sample(self, wreath, lam, small_budget):
        x = lam(wreath, "({0:1},0)")
        profile = decay_profile(wreath, x, x, small_budget)
        rows = profile.to_tsv().splitlines()
        assert rows[0] == "index\th\tnumerator\tdenominator"
        assert len(rows) == len(profile.samples) + 1
        assert rows[1].startswith("0\t")
        assert rows[1].endswith("\t1\t1")

    def test_x_inside_k_rejected(self, wreath, lam, budget):
        with pytest.raises(InvalidInputError, match="orthogonal to L\\(K\\)"):
            decay_profile(wreath, lam(wreath, "({},1)"), lam(wreath, "({0:1},0)"), budget)

    def test_x_from_another_group_rejected(self, wreath, rotation4, lam, budget):
        with pytest.raises(InvalidInputError, match="does not live"):
            decay_profile(wreath, lam(rotation4, E1), lam(wreath, "({0:1},0)"), budget)


@pytest.mark.unit
class TestDecayWorkers:
    """Test the thread pool path"""

    def test_pool_matches_serial(self, rotation4, lam, budget, mocker):
        pool = mocker.patch(
            "src.experiments.profiles.ThreadPoolExecutor", wraps=ThreadPoolExecutor
        )
        x = lam(rotation4, E1)
        serial = decay_profile(rotation4, x, x, budget, workers=1)
        threaded = decay_profile(rotation4, x, x, budget, workers=2)
        pool.assert_called_once_with(max_workers=2)
        assert threaded.samples == serial.samples

    def test_workers_default_to_config(self, rotation4, lam, budget, mocker):
        mocker.patch.object(config, "WORKERS", 3)
        pool = mocker.patch(
            "src.experiments.profiles.ThreadPoolExecutor", wraps=ThreadPoolExecutor
        )
        x = lam(rotation4, E1)
        decay_profile(rotation4, x, x, budget)
        pool.assert_called_once_with(max_workers=3)


@pytest.mark.unit
class TestFreeProductMixing:
    """Test the boundary-cancellation prediction"""

    def test_prediction_holds(self, free_zz, lam, budget):
        profile = free_product_mixing_check(free_zz, lam(free_zz, "b a"), lam(free_zz, "a b^-1"), budget)
        assert profile.exceptional == (free_zz.G.parse("a^-2"),)

    def test_needs_free_product(self, wreath, lam, budget):
        x = lam(wreath, "({0:1},0)")
        with pytest.raises(InvalidInputError, match="not a free product"):
            free_product_mixing_check(wreath, x, x, budget)

    def test_support_words_need_second_factor(self, free_zz, lam, budget):
        with pytest.raises(InvalidInputError, match="no G₂-letter"):
            free_product_mixing_check(free_zz, lam(free_zz, "a"), lam(free_zz, "b"), budget)

    def test_stray_value_is_reported(self, free_zz, lam, budget, mocker):
        G = free_zz.G
        x, y = lam(free_zz, "b"), lam(free_zz, "b^-1")
        stray = G.parse("a^7")
        mocker.patch(
            "src.experiments.profiles.decay_profile",
            return_value=DecayProfile(x, y, ((stray, Fraction(1)),), (stray,)),
        )
        with pytest.raises(InternalConsistencyError, match="boundary-cancellation"):
            free_product_mixing_check(free_zz, x, y, budget)


@pytest.mark.unit
class TestCounterexample:
    """Test the finite-orbit element of the normalizer algebra"""

    def test_rotation_counterexample(self, rotation4, budget):
        report = build_counterexample(rotation4, (1, 0), budget)
        assert len(report.x) == 4
        assert report.norm2 == 4
        assert report.norm == "2.000000"
        assert report.selfadjoint and report.orthogonal_to_K and report.commutes_with_H_generators

    def test_off_axis_orbit(self, rotation4, budget):
        report = build_counterexample(rotation4, (1, 1), budget)
        assert len(report.F) == 4
        assert report.norm2 == len(report.x)

    def test_instance_id_is_recorded(self, rotation4, budget):
        assert build_counterexample(rotation4, (1, 0), budget, "rotation4").instance == "rotation4"

    def test_normalizer_must_hold(self, trivial_action, budget):
        with pytest.raises(InvalidInputError, match="normalizer"):
            build_counterexample(trivial_action, (1, 0), budget)

    def test_orbit_must_close(self, wreath, budget):
        with pytest.raises(InvalidInputError, match="did not close"):
            build_counterexample(wreath, ((0, 1),), budget)

    def test_a0_must_be_nontrivial(self, rotation4, budget):
        with pytest.raises(InvalidInputError, match="A\\*"):
            build_counterexample(rotation4, (0, 0), budget)


@pytest.mark.unit
class TestCorollaryHypotheses:
    def test_wreath_is_licensed(self, wreath, budget):
        report = corollary_hypotheses(wreath, budget)
        assert report.conclusion_licensed
        assert report.caveat == COROLLARY_CAVEAT
        assert report.notes == ()

    def test_rotation_is_not_licensed(self, rotation4, budget):
        report = corollary_hypotheses(rotation4, budget)
        assert not report.conclusion_licensed
        assert report.normalizer_verdict.holds
        assert any("strictly" in note for note in report.notes)

    def test_trivial_action_notes_normalizer(self, trivial_action, budget):
        report = corollary_hypotheses(trivial_action, budget)
        assert not report.conclusion_licensed
        assert any("normalizer check" in note for note in report.notes)

    def test_needs_semidirect_triple(self, free_zz, budget):
        with pytest.raises(InvalidInputError):
            corollary_hypotheses(free_zz, budget)
