"""Unit tests for free products and their word literals"""

import pytest

from src.groups.constructions import CyclicGroup, IntegerGroup
from src.groups.core import InvalidInputError
from src.groups.free_product import free_product
from src.reports.literals import LiteralParseError


@pytest.fixture
def G():
    return free_product(IntegerGroup(), IntegerGroup())


@pytest.mark.unit
class TestReducedWords:
    """Test multiplication by boundary reduction"""

    def test_letters_cancel(self, G):
        assert G.op(G.parse("a"), G.parse("a^-1")) == ()

    def test_same_factor_letters_merge(self, G):
        assert G.op(G.parse("a^2"), G.parse("a^-1 b")) == ((1, 1), (2, 1))

    def test_cancellation_cascades(self, G):
        u = G.parse("a b a")
        v = G.parse("a^-1 b^-1 a^-1")
        assert G.op(u, v) == ()

    def test_inverse_reverses_word(self, G):
        assert G.inv(G.parse("a^2 b^-1")) == G.parse("b a^-2")

    def test_word_reduces_arbitrary_letters(self, G):
        assert G.word([(1, 1), (1, -1), (2, 3)]) == ((2, 3),)

    def test_letter_of_identity_is_empty(self, G):
        assert G.letter(1, 0) == ()

    def test_finite_factor_merges_modulo_order(self):
        G = free_product(CyclicGroup(2), IntegerGroup())
        a = G.parse("a")
        assert G.op(a, a) == ()


@pytest.mark.unit
class TestWordLiterals:
    """Test parsing and formatting of word literals"""

    def test_parse_exponents(self, G):
        assert G.parse("a^2 b^-1") == ((1, 2), (2, -1))

    def test_identity_literal(self, G):
        assert G.parse("e") == ()
        assert G.format(()) == "e"

    def test_format(self, G):
        assert G.format(((1, 1), (2, -2))) == "a b^-2"

    def test_format_finite_factor_uses_brackets(self):
        G = free_product(CyclicGroup(3), IntegerGroup())
        assert G.format(((1, 2),)) == "a[2]"
        assert G.parse("a[2] b") == ((1, 2), (2, 1))

    def test_unknown_letter_cites_position(self, G):
        with pytest.raises(LiteralParseError) as excinfo:
            G.parse("a c")
        assert excinfo.value.position == 2

    def test_bad_character_cites_position(self, G):
        with pytest.raises(LiteralParseError) as excinfo:
            G.parse("a ! b")
        assert excinfo.value.position == 1

    def test_empty_literal(self, G):
        with pytest.raises(LiteralParseError):
            G.parse("   ")

    def test_json_roundtrip_of_mixed_word(self, G):
        w = G.parse("b a^3 b^-1")
        assert G.to_json(w) == [[2, 1], [1, 3], [2, -1]]
        assert G.from_json([[2, 1], [1, 3], [2, -1]]) == w

    def test_from_json_accepts_literal_strings(self, G):
        assert G.from_json("a b") == ((1, 1), (2, 1))

    def test_from_json_rejects_bad_letter(self, G):
        with pytest.raises(InvalidInputError):
            G.from_json([[3, 1]])


@pytest.mark.unit
class TestFreeProductStructure:
    """Test factor subgroups and boundary splitting"""

    def test_letter_names_must_differ(self):
        with pytest.raises(InvalidInputError):
            free_product(IntegerGroup(), IntegerGroup(), ("a", "a"))

    def test_e_is_reserved(self):
        with pytest.raises(InvalidInputError, match="reserved"):
            free_product(IntegerGroup(), IntegerGroup(), ("e", "b"))

    def test_factor_subgroup_membership(self, G):
        A = G.factor_subgroup(1)
        assert A.contains(G.parse("a^5"))
        assert A.contains(())
        assert not A.contains(G.parse("b"))
        assert A.ball(2) == ((), ((1, 1),), ((1, -1),), ((1, 2),), ((1, -2),))

    def test_split_boundary(self, G):
        head, core, tail = G.split_boundary(G.parse("a b a^2"), 1)
        assert (head, core, tail) == (1, ((2, 1),), 2)

    def test_split_boundary_without_factor_letters(self, G):
        assert G.split_boundary(G.parse("b"), 1) == (0, ((2, 1),), 0)

    def test_has_letter_from(self, G):
        assert G.has_letter_from(G.parse("a b"), 2)
        assert not G.has_letter_from(G.parse("a^3"), 2)
