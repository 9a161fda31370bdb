"""Unit tests for the exact group-algebra calculus"""

from fractions import Fraction

import pytest

from src.algebra.coefficients import IMAG, ONE, ZERO, Coefficient
from src.algebra.element import (
    AlgebraElement,
    adjoint,
    cond_exp,
    convolve,
    norm2,
    render_norm2,
    trace,
)
from src.algebra.identities import (
    commutator,
    commuting_square_check,
    commuting_square_product_check,
    wahp_defect,
)
from src.groups.constructions import IntegerGroup, IntegerLattice
from src.groups.core import InternalConsistencyError, InvalidInputError
from src.groups.free_product import free_product
from src.instances.registry import INSTANCE_REGISTRY, build_instance


@pytest.mark.unit
class TestCoefficients:
    """Test Gaussian-rational arithmetic"""

    def test_multiplication(self):
        product = Coefficient(Fraction(1), Fraction(2)) * Coefficient(Fraction(3), Fraction(4))
        assert product == Coefficient(Fraction(-5), Fraction(10))

    def test_i_squared(self):
        assert IMAG * IMAG == -ONE

    def test_conjugate_and_abs2(self):
        c = Coefficient(Fraction(3), Fraction(-4))
        assert c.conjugate() == Coefficient(Fraction(3), Fraction(4))
        assert c.abs2() == 25

    def test_mixed_with_integers(self):
        assert 2 * ONE + 1 == Coefficient(Fraction(3))

    def test_zero_is_falsy(self):
        assert not ZERO
        assert ONE

    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            Coefficient.of(0.5)

    def test_string_forms(self):
        assert str(Coefficient(Fraction(1, 2))) == "1/2"
        assert str(IMAG) == "1i"
        assert str(Coefficient(Fraction(1), Fraction(-2))) == "1-2i"

    def test_json(self):
        c = Coefficient(Fraction(-1, 2), Fraction(3))
        assert c.to_json() == [[-1, 2], [3, 1]]
        assert Coefficient.from_json(c.to_json()) == c


@pytest.mark.unit
class TestAlgebraElement:
    """Test construction, access and linear structure"""

    @pytest.fixture
    def Z(self):
        return IntegerGroup()

    def test_zero_coefficients_are_not_stored(self, Z):
        x = AlgebraElement.from_terms(Z, [(1, 1), (1, -1), (2, 3)])
        assert x.support == (2,)
        assert len(x) == 1

    def test_coefficient_defaults_to_zero(self, Z):
        assert AlgebraElement.delta(Z, 1).coefficient(5) == ZERO

    def test_add_and_subtract(self, Z):
        x = AlgebraElement.delta(Z, 1)
        y = AlgebraElement.delta(Z, 2, 3)
        assert (x + y - x) == y
        assert (x - x).is_zero

    def test_scale(self, Z):
        assert AlgebraElement.delta(Z, 1).scale(IMAG).coefficient(1) == IMAG

    def test_groups_must_match(self, Z):
        with pytest.raises(InvalidInputError, match="different groups"):
            AlgebraElement.delta(Z, 1) + AlgebraElement.delta(IntegerGroup(), 1)

    def test_convolution_shifts(self, Z):
        x = AlgebraElement.from_terms(Z, [(0, 1), (1, 1)])
        square = convolve(x, x)
        assert square == AlgebraElement.from_terms(Z, [(0, 1), (1, 2), (2, 1)])
        assert x * x == square

    def test_convolution_is_noncommutative_in_free_product(self, free_zz, lam):
        a, b = lam(free_zz, "a"), lam(free_zz, "b")
        assert not commutator(a, b).is_zero

    def test_adjoint_inverts_and_conjugates(self, Z):
        x = AlgebraElement.delta(Z, 2, IMAG)
        assert adjoint(x) == AlgebraElement.delta(Z, -2, -IMAG)

    def test_trace_reads_identity(self, Z):
        x = AlgebraElement.from_terms(Z, [(0, 5), (1, 1)])
        assert trace(x) == Coefficient(Fraction(5))

    def test_norm2_is_exact(self, Z):
        x = AlgebraElement.from_terms(Z, [(0, Fraction(1, 2)), (1, IMAG)])
        assert norm2(x) == Fraction(5, 4)

    def test_render_norm2(self):
        assert render_norm2(Fraction(4)) == "2.000000"

    def test_json_uses_canonical_order(self, free_zz):
        G = free_zz.G
        x = AlgebraElement.from_terms(G, [(G.parse("b"), 1), (G.parse("a"), 2)])
        assert x.to_json() == [[[[1, 1]], [2, 1], [0, 1]], [[[2, 1]], [1, 1], [0, 1]]]
        assert AlgebraElement.from_json(G, x.to_json()) == x

    def test_from_json_rejects_bad_terms(self, Z):
        with pytest.raises(InvalidInputError):
            AlgebraElement.from_json(Z, [[1, [1, 1]]])

    def test_repr(self, Z):
        assert repr(AlgebraElement.zero(Z)) == "0"
        assert "λ[1]" in repr(AlgebraElement.delta(Z, 1))


def _law_groups():
    Z = IntegerGroup()
    Z2 = IntegerLattice(2)
    ZZ = free_product(IntegerGroup(), IntegerGroup())
    return [Z, Z2, ZZ, build_instance("rotation4").G]


@pytest.mark.unit
class TestAlgebraLaws:
    """Seeded law checks on Z, Z², Z∗Z and rotation4 (50 cases each)"""

    CASES_PER_GROUP = 50

    def test_convolution_is_associative(self, rng, random_element):
        for G in _law_groups():
            for _ in range(self.CASES_PER_GROUP):
                x, y, z = (random_element(rng, G) for _ in range(3))
                assert convolve(convolve(x, y), z) == convolve(x, convolve(y, z))

    def test_adjoint_is_anti_multiplicative(self, rng, random_element):
        for G in _law_groups():
            for _ in range(self.CASES_PER_GROUP):
                x, y = random_element(rng, G), random_element(rng, G)
                assert adjoint(convolve(x, y)) == convolve(adjoint(y), adjoint(x))

    def test_trace_is_tracial(self, rng, random_element):
        for G in _law_groups():
            for _ in range(self.CASES_PER_GROUP):
                x, y = random_element(rng, G), random_element(rng, G)
                assert trace(convolve(x, y)) == trace(convolve(y, x))

    def test_norm_is_trace_of_square(self, rng, random_element):
        for G in _law_groups():
            for _ in range(self.CASES_PER_GROUP):
                x = random_element(rng, G)
                assert Coefficient(norm2(x)) == trace(convolve(adjoint(x), x))

    def test_adjoint_is_involutive(self, rng, random_element):
        for G in _law_groups():
            for _ in range(self.CASES_PER_GROUP):
                x = random_element(rng, G)
                assert adjoint(adjoint(x)) == x


@pytest.mark.unit
class TestConditionalExpectation:
    """Conditional expectation contract over the built-in triples (≥200 cases)"""

    CASES_PER_INSTANCE = 30

    def _instances(self):
        return [build_instance(key) for key in sorted(INSTANCE_REGISTRY)]

    def test_idempotent(self, rng, random_element):
        for T in self._instances():
            for _ in range(self.CASES_PER_INSTANCE):
                x = random_element(rng, T.G)
                once = cond_exp(x, T.H)
                assert cond_exp(once, T.H) == once

    def test_trace_preserving(self, rng, random_element):
        for T in self._instances():
            for _ in range(self.CASES_PER_INSTANCE):
                x = random_element(rng, T.G)
                assert trace(cond_exp(x, T.H)) == trace(x)

    def test_norm_contracting(self, rng, random_element):
        for T in self._instances():
            for _ in range(self.CASES_PER_INSTANCE):
                x = random_element(rng, T.G)
                assert norm2(cond_exp(x, T.H)) <= norm2(x)

    def test_bimodule_property(self, rng, random_element):
        for T in self._instances():
            h_pool = T.H.ball(2)
            for _ in range(self.CASES_PER_INSTANCE):
                x = random_element(rng, T.G)
                b1 = random_element(rng, T.G, support=h_pool)
                b2 = random_element(rng, T.G, support=h_pool)
                lhs = cond_exp(convolve(convolve(b1, x), b2), T.H)
                rhs = convolve(convolve(b1, cond_exp(x, T.H)), b2)
                assert lhs == rhs

    def test_subgroup_must_share_group(self, rotation4, free_zz, lam):
        with pytest.raises(InvalidInputError):
            cond_exp(lam(rotation4, "((1,0),0)"), free_zz.H)


@pytest.mark.unit
class TestWahpDefect:
    """The direct and centered formulas agree on 100 seeded triples per instance"""

    CASES = 100

    @pytest.mark.parametrize("instance_id", sorted(INSTANCE_REGISTRY))
    def test_formulas_agree(self, instance_id, rng, random_element):
        T = build_instance(instance_id)
        h_pool = T.H.ball(2)
        for _ in range(self.CASES):
            x = random_element(rng, T.G)
            y = random_element(rng, T.G)
            u = random_element(rng, T.G, support=h_pool)
            # Raises InternalConsistencyError on any disagreement
            assert wahp_defect(x, y, u, T.H, T.K) >= 0

    def test_rotation_example(self, rotation4, lam):
        x = lam(rotation4, "((1,0),0)")
        u = lam(rotation4, "((0,0),2)")
        assert wahp_defect(x, x, u, rotation4.H, rotation4.K) == 1

    def test_defect_vanishes_inside_k(self, rotation4, lam):
        x = lam(rotation4, "((0,0),1)")
        u = lam(rotation4, "((0,0),2)")
        assert wahp_defect(x, x, u, rotation4.H, rotation4.K) == 0

    def test_u_must_live_in_h(self, rotation4, lam):
        x = lam(rotation4, "((1,0),0)")
        with pytest.raises(InvalidInputError, match="supported in"):
            wahp_defect(x, x, x, rotation4.H, rotation4.K)

    def test_disagreement_is_reported(self, rotation4, lam, mocker):
        x = lam(rotation4, "((1,0),0)")
        u = lam(rotation4, "((0,0),2)")
        real = cond_exp
        calls = {"n": 0}

        def skewed(element, S):
            calls["n"] += 1
            result = real(element, S)
            # The centered formula is the fifth conditional expectation taken
            return result + result if calls["n"] == 5 else result

        mocker.patch("src.algebra.identities.cond_exp", side_effect=skewed)
        with pytest.raises(InternalConsistencyError):
            wahp_defect(x, x, u, rotation4.H, rotation4.K)


@pytest.mark.unit
class TestCommutingSquares:
    """E_{G₁}E_{G₂} = E_{G₂}E_{G₁} = E_{G₁∩G₂} on 100 seeded x"""

    CASES = 100

    def test_free_factors(self, free_zz, rng, random_element):
        G = free_zz.G
        first, second = G.factor_subgroup(1), G.factor_subgroup(2)
        for _ in range(self.CASES):
            x = random_element(rng, G, radius=3, max_terms=6)
            assert commuting_square_check(first, second, x)

    def test_rotation_conjugate(self, rotation4, rng, random_element):
        H = rotation4.H
        conjugate = H.conjugate(((1, 0), 0))
        for _ in range(self.CASES):
            x = random_element(rng, rotation4.G, radius=3, max_terms=6)
            assert commuting_square_check(H, conjugate, x)

    def test_product_form(self, free_zz, rng, random_element):
        G = free_zz.G
        first, second = G.factor_subgroup(1), G.factor_subgroup(2)
        for _ in range(self.CASES):
            b0 = random_element(rng, G, support=first.ball(3))
            b1 = random_element(rng, G, support=second.ball(3))
            assert commuting_square_product_check(first, second, b0, b1)

    def test_product_form_checks_supports(self, free_zz, lam):
        G = free_zz.G
        first, second = G.factor_subgroup(1), G.factor_subgroup(2)
        with pytest.raises(InvalidInputError):
            commuting_square_product_check(first, second, lam(free_zz, "b"), lam(free_zz, "b"))
