"""Unit tests for verdict dispatch"""

import pytest

from src.certs.actions import StabilizerReport
from src.certs.closed_forms import CLOSED_FORM_RULES
from src.certs.decide import (
    CorpusEvidence,
    CosetStabilizer,
    MalnormalScan,
    MalnormalViolation,
    ProductEvidence,
    decide,
    malnormality_scan,
    product_ss_witness,
    standard_corpus,
    verify_coset_stabilizer,
    verify_stabilizer_report,
)
from src.certs.verdict import CLOSED_FORM, FAILS, GENERIC, HOLDS, SS, ST, UNDETERMINED
from src.certs.witnesses import INVARIANT_SET
from src.groups.constructions import IntegerLattice
from src.groups.core import (
    Budget,
    Certified,
    InternalConsistencyError,
    InvalidInputError,
    RefutedWithin,
    Triple,
    generated_subgroup,
)
from src.instances.registry import INSTANCE_REGISTRY, build_instance

DELTA0 = ((0, 1),)


@pytest.mark.unit
class TestStandardCorpus:
    def test_wreath_corpus(self, wreath):
        corpus = standard_corpus(wreath)
        # five elements of ball_G(2) lie outside K
        assert len(corpus) == 5 + 10 + 10
        assert all(not wreath.K.contains(f) for F in corpus for f in F)

    def test_max_size(self, wreath):
        assert all(len(F) == 1 for F in standard_corpus(wreath, max_size=1))


@pytest.mark.unit
class TestDecideSS:
    """Test (SS) verdicts per family"""

    def test_rotation_fails_by_invariant_set(self, rotation4, budget):
        verdict = decide(rotation4, SS, budget)
        assert (verdict.status, verdict.method, verdict.rule) == (FAILS, CLOSED_FORM, "finite-order-matrix")
        assert isinstance(verdict.certificate, RefutedWithin)
        assert verdict.certificate.rule == INVARIANT_SET
        assert verdict.certificate.evidence == (((1, 0), 0), ((0, 1), 0), ((-1, 0), 0), ((0, -1), 0))

    def test_finite_quotient_fails(self, finite_wreath, budget):
        assert decide(finite_wreath, SS, budget).fails

    def test_wreath_holds(self, wreath, budget):
        verdict = decide(wreath, SS, budget)
        assert verdict.status == HOLDS
        assert verdict.method == CLOSED_FORM
        assert isinstance(verdict.certificate, CorpusEvidence)
        assert verdict.certificate.certificates

    def test_abelian_line_fails(self, z2_line, budget):
        verdict = decide(z2_line, SS, budget)
        assert verdict.fails
        assert verdict.certificate.rule == "abelian"
        assert verdict.certificate.evidence == ((0, 1), (0, -1))

    def test_free_factor_holds(self, free_zz, small_budget):
        assert decide(free_zz, SS, small_budget).holds

    def test_product_holds_with_combined_witnesses(self, prod_wreath, small_budget):
        verdict = decide(prod_wreath, SS, small_budget)
        assert verdict.holds
        assert isinstance(verdict.certificate, ProductEvidence)
        assert all(v.holds for v in verdict.certificate.factors)

    def test_lowercase_condition_accepted(self, wreath, small_budget):
        assert decide(wreath, "ss", small_budget).condition == SS

    def test_unknown_condition_rejected(self, wreath, budget):
        with pytest.raises(InvalidInputError, match="SS or ST"):
            decide(wreath, "wSS", budget)

    def test_untagged_triple_is_undetermined(self, small_budget):
        Z2 = IntegerLattice(2)
        H = generated_subgroup(Z2, lambda g: g[1] == 0, [(1, 0)], "line")
        verdict = decide(Triple(Z2, H, H, name="plain"), SS, small_budget)
        assert verdict.status == UNDETERMINED
        assert verdict.method == GENERIC

    def test_closed_form_contradiction_is_reported(self, z2_line, small_budget, mocker):
        mocker.patch.object(CLOSED_FORM_RULES["abelian"], "ss_holds", return_value=True)
        with pytest.raises(InternalConsistencyError):
            decide(z2_line, SS, small_budget)


@pytest.mark.unit
class TestDecideST:
    """Test (ST) verdicts per family"""

    def test_rotation_fails_with_periodic_stabilizer(self, rotation4, budget):
        verdict = decide(rotation4, ST, budget)
        assert verdict.fails
        assert isinstance(verdict.certificate, StabilizerReport)
        assert verdict.certificate.a == (1, 0)
        assert verdict.certificate.period == 4
        assert verdict.certificate.members == (((0, 0), 0), ((0, 0), 4), ((0, 0), -4))

    def test_finite_quotient_period(self, finite_wreath, budget):
        assert decide(finite_wreath, ST, budget).certificate.period == 3

    def test_wreath_holds(self, wreath, budget):
        verdict = decide(wreath, ST, budget)
        assert verdict.holds
        assert all(s.complete for s in verdict.certificate.certificates)

    def test_malnormal_factor_holds_by_scan(self, f2_cyclic, small_budget):
        verdict = decide(f2_cyclic, ST, small_budget)
        assert verdict.holds
        assert isinstance(verdict.certificate, MalnormalScan)

    def test_abelian_line_has_coset_stabilizer(self, z2_line, budget):
        verdict = decide(z2_line, ST, budget)
        assert verdict.certificate == CosetStabilizer((0, 1), (1, 0), budget.radius)

    def test_product_fails(self, prod_wreath, budget):
        verdict = decide(prod_wreath, ST, budget)
        assert verdict.fails
        assert isinstance(verdict.certificate, CosetStabilizer)


@pytest.mark.unit
class TestImplication:
    """ST ⇒ SS on every built-in instance"""

    @pytest.mark.parametrize("instance_id", sorted(INSTANCE_REGISTRY))
    def test_st_implies_ss(self, instance_id, small_budget):
        T = build_instance(instance_id)
        if decide(T, ST, small_budget).holds:
            assert decide(T, SS, small_budget).holds


@pytest.mark.unit
class TestMalnormality:
    def test_rotation_violation(self, rotation4, budget):
        verdict = malnormality_scan(rotation4, budget)
        assert verdict.fails
        assert verdict.certificate == MalnormalViolation(((1, 0), 0), ((0, 0), 4))

    def test_abelian_violation(self, z2_line, budget):
        assert malnormality_scan(z2_line, budget).certificate == MalnormalViolation((0, 1), (1, 0))

    def test_free_factor_is_malnormal(self, free_zz, small_budget):
        verdict = malnormality_scan(free_zz, small_budget)
        assert verdict.status == HOLDS
        assert verdict.method == CLOSED_FORM
        assert verdict.certificate.largest_intersection == 1

    def test_element_cap_is_undetermined(self, free_zz):
        verdict = malnormality_scan(free_zz, Budget(radius=4, element_cap=10))
        assert verdict.status == UNDETERMINED


@pytest.mark.unit
class TestProductWitness:
    def test_combined_witness(self, prod_wreath, budget):
        outcome = product_ss_witness(prod_wreath, [((DELTA0, 0), ((), 0))], budget)
        assert isinstance(outcome, Certified)
        assert outcome.certificate.h == (((), 1), ((), 0))

    def test_needs_product_triple(self, wreath, budget):
        with pytest.raises(InvalidInputError, match="not a product"):
            product_ss_witness(wreath, [(DELTA0, 0)], budget)


@pytest.mark.unit
class TestCertificateReplay:
    def test_coset_stabilizer_replay(self, z2_line):
        assert verify_coset_stabilizer(z2_line, CosetStabilizer((0, 1), (1, 0), 5))
        assert not verify_coset_stabilizer(z2_line, CosetStabilizer((0, 1), (0, 0), 5))
        assert not verify_coset_stabilizer(z2_line, CosetStabilizer((1, 0), (1, 0), 5))

    def test_stabilizer_report_replay(self, rotation4):
        members = (((0, 0), 0), ((0, 0), 4))
        assert verify_stabilizer_report(rotation4, StabilizerReport((1, 0), members, True, 4))
        assert not verify_stabilizer_report(rotation4, StabilizerReport((1, 0), members, True, 3))
        assert not verify_stabilizer_report(rotation4, StabilizerReport((0, 0), (), True))
