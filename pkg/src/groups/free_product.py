"""Free products G₁ ∗ G₂ with reduced-word normal forms"""

import logging
import re
from typing import Any, List, Optional, Sequence, Tuple

from ..reports.literals import LiteralParseError
from .constructions import IntegerGroup
from .core import Group, GroupElement, InvalidInputError, Subgroup, generated_subgroup

logger = logging.getLogger(__name__)

# A letter is (factor index in {1, 2}, nontrivial element of that factor);
# adjacent letters of a reduced word come from different factors.
Letter = Tuple[int, GroupElement]
FreeWord = Tuple[Letter, ...]

_TOKEN = re.compile(r"\s*([A-Za-z]\w*)(?:\^(-?\d+)|\[([^\]]*)\])?")


class FreeProduct(Group):
    """
    G₁ ∗ G₂ over reduced words.

    Multiplication concatenates and reduces at the boundary: letters of the
    same factor merge, identities cancel, and the check repeats.
    """

    def __init__(
        self,
        first: Group,
        second: Group,
        letter_names: Sequence[str] = ("a", "b"),
        name: Optional[str] = None,
    ):
        if len(letter_names) != 2 or letter_names[0] == letter_names[1]:
            raise InvalidInputError("Free products need two distinct letter names")
        if "e" in letter_names:
            raise InvalidInputError("'e' is reserved for the identity word")

        self.factors = {1: first, 2: second}
        self.letter_names = {1: letter_names[0], 2: letter_names[1]}
        generators = [((1, g),) for g in first.generators]
        generators += [((2, g),) for g in second.generators]
        super().__init__(name or f"{first.name}∗{second.name}", (), generators)

    def _push(self, stack: List[Letter], letter: Letter) -> None:
        index, element = letter
        factor = self.factors[index]
        if stack and stack[-1][0] == index:
            merged = factor.op(stack[-1][1], element)
            stack.pop()
            if merged != factor.identity:
                stack.append((index, merged))
        elif element != factor.identity:
            stack.append(letter)

    def op(self, u: FreeWord, v: FreeWord) -> FreeWord:
        stack = list(u)
        for letter in v:
            self._push(stack, letter)
        return tuple(stack)

    def inv(self, w: FreeWord) -> FreeWord:
        return tuple((i, self.factors[i].inv(x)) for i, x in reversed(w))

    def letter(self, index: int, element: GroupElement) -> FreeWord:
        """The one-letter word of a factor element (empty for the identity)"""
        if element == self.factors[index].identity:
            return ()
        return ((index, element),)

    def word(self, letters: Sequence[Letter]) -> FreeWord:
        """Reduce an arbitrary letter sequence"""
        stack: List[Letter] = []
        for letter in letters:
            self._push(stack, letter)
        return tuple(stack)

    def factor_subgroup(self, index: int, name: Optional[str] = None) -> Subgroup:
        """The embedded factor G_index"""
        factor = self.factors[index]
        return generated_subgroup(
            self,
            lambda w: len(w) == 0 or (len(w) == 1 and w[0][0] == index),
            [((index, g),) for g in factor.generators],
            name or f"⟨{self.letter_names[index]}⟩",
        )

    def split_boundary(self, w: FreeWord, index: int) -> Tuple[GroupElement, FreeWord, GroupElement]:
        """
        Write w = s · core · t with s, t in factor ``index`` and the core
        neither starting nor ending with a letter of that factor.
        """
        identity = self.factors[index].identity
        letters = list(w)
        head = identity
        tail = identity
        if letters and letters[0][0] == index:
            head = letters.pop(0)[1]
        if letters and letters[-1][0] == index:
            tail = letters.pop()[1]
        return head, tuple(letters), tail

    def has_letter_from(self, w: FreeWord, index: int) -> bool:
        return any(i == index for i, _ in w)

    # ------------------------------------------------------------------
    # Literals: words like "a^2 b^-1"; "e" is the identity
    # ------------------------------------------------------------------

    def _format_letter(self, letter: Letter) -> str:
        index, element = letter
        name = self.letter_names[index]
        factor = self.factors[index]
        if isinstance(factor, IntegerGroup):
            return name if element == 1 else f"{name}^{element}"
        return f"{name}[{factor.format(element)}]"

    def format(self, w: FreeWord) -> str:
        if not w:
            return "e"
        return " ".join(self._format_letter(letter) for letter in w)

    def parse(self, text: str) -> FreeWord:
        """
        Parse a word literal such as ``a^2 b^-1`` or ``b a b^-1``.

        Raises:
            LiteralParseError: Citing the position of the first bad token
        """
        by_name = {name: index for index, name in self.letter_names.items()}
        letters: List[Letter] = []
        position = 0
        stripped = text.rstrip()

        if not stripped.strip():
            raise LiteralParseError(f"Empty word literal for {self.name}", position=0)

        while position < len(stripped):
            match = _TOKEN.match(stripped, position)
            if not match:
                raise LiteralParseError(
                    f"Unexpected character {stripped[position]!r} in word literal",
                    position=position,
                )
            name, exponent, bracket = match.groups()
            start = match.start(1)
            if name == "e" and exponent is None and bracket is None:
                position = match.end()
                continue
            if name not in by_name:
                raise LiteralParseError(
                    f"Unknown letter {name!r}; expected one of {sorted(by_name)} or 'e'",
                    position=start,
                )
            index = by_name[name]
            factor = self.factors[index]
            if bracket is not None:
                element = factor.parse(bracket)
            else:
                power = int(exponent) if exponent is not None else 1
                if not factor.generators:
                    raise LiteralParseError(f"Factor {factor.name} has no generator", position=start)
                element = factor.pow(factor.generators[0], power)
            letters.append((index, element))
            position = match.end()

        return self.word(letters)

    def to_json(self, w: FreeWord) -> Any:
        return [[i, self.factors[i].to_json(x)] for i, x in w]

    def from_json(self, obj: Any) -> FreeWord:
        if isinstance(obj, str):
            return self.parse(obj)
        if not isinstance(obj, (list, tuple)):
            raise InvalidInputError(f"Element of {self.name} must be a letter list, got {obj!r}")
        letters = []
        for pair in obj:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2 or pair[0] not in (1, 2):
                raise InvalidInputError(f"Letter must be [1|2, element], got {pair!r}")
            letters.append((pair[0], self.factors[pair[0]].from_json(pair[1])))
        return self.word(letters)


def free_product(
    first: Group,
    second: Group,
    letter_names: Sequence[str] = ("a", "b"),
    name: Optional[str] = None,
) -> FreeProduct:
    """G₁ ∗ G₂ with reduced-word normal forms."""
    return FreeProduct(first, second, letter_names, name)
