"""Parse element, element-set and algebra-element literals from the command line"""

import ast
import logging
import re
from fractions import Fraction
from typing import Any, Optional, Tuple

from ..groups.core import Group, GroupElement, InvalidInputError

logger = logging.getLogger(__name__)

_COEFFICIENT = re.compile(
    r"^\s*(?P<coef>[+-]?(?:\d+(?:/\d+)?)?(?:i)?)\s*\*\s*(?P<rest>.+)$"
)


class LiteralParseError(InvalidInputError):
    """Raised when a literal is malformed; ``position`` is a 0-based offset"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


def parse_python_literal(G: Group, text: str) -> GroupElement:
    """
    Parse a Python-style literal and rebuild an element of ``G``.

    Accepted forms are integers, tuples and dicts, e.g. ``3``, ``1,0``,
    ``((1,0),2)`` or ``({0:1,3:1},0)``.

    Args:
        G: Group whose ``from_json`` validates the parsed value
        text: Literal text

    Returns:
        The element in normal form

    Raises:
        LiteralParseError: If the text is not a literal or does not describe
            an element of ``G``
    """
    if text is None or not text.strip():
        raise LiteralParseError(f"Empty literal for {G.name}", position=0)

    try:
        value = ast.literal_eval(text.strip())
    except SyntaxError as e:
        position = (e.offset - 1) if e.offset else None
        raise LiteralParseError(f"Malformed literal {text!r}: {e.msg}", position=position)
    except ValueError as e:
        raise LiteralParseError(f"Malformed literal {text!r}: {str(e)}", position=0)

    try:
        return G.from_json(value)
    except LiteralParseError:
        raise
    except InvalidInputError as e:
        raise LiteralParseError(f"Literal {text!r} is not an element of {G.name}: {str(e)}", position=0)


def parse_element(G: Group, text: str) -> GroupElement:
    """Parse one element literal with the group's own grammar"""
    return G.parse(text)


def parse_element_set(G: Group, text: str) -> Tuple[GroupElement, ...]:
    """
    Parse a ``;``-separated set literal such as ``(1,0);(0,1)`` or ``b;b^-1``.

    Duplicates are dropped; the first occurrence fixes the order.
    """
    if text is None or not text.strip():
        raise LiteralParseError("Empty set literal", position=0)

    elements = []
    offset = 0
    for chunk in text.split(";"):
        if not chunk.strip():
            raise LiteralParseError("Empty entry in set literal", position=offset)
        try:
            g = G.parse(chunk)
        except LiteralParseError as e:
            inner = e.position or 0
            raise LiteralParseError(str(e).split(" (at position")[0], position=offset + inner)
        if g not in elements:
            elements.append(g)
        offset += len(chunk) + 1

    logger.debug(f"Parsed set literal with {len(elements)} elements of {G.name}")
    return tuple(elements)


def _parse_coefficient(text: str, position: int) -> Tuple[Fraction, Fraction]:
    body = text.strip()
    imaginary = body.endswith("i")
    if imaginary:
        body = body[:-1]
    if body in ("", "+"):
        value = Fraction(1)
    elif body == "-":
        value = Fraction(-1)
    else:
        try:
            value = Fraction(body)
        except (ValueError, ZeroDivisionError):
            raise LiteralParseError(f"Malformed coefficient {text!r}", position=position)
    return (Fraction(0), value) if imaginary else (value, Fraction(0))


def parse_algebra_element(G: Group, text: str) -> Any:
    """
    Parse a finitely supported element as ``;``-separated terms.

    Each term is ``[coefficient *] element``; coefficients are rationals such
    as ``-1/2`` or imaginary units such as ``i``, ``-2i``.  ``b^-1`` means
    λ_{b⁻¹}; ``2*(1,0),0;-1*(0,1),0`` means 2λ_((1,0),0) − λ_((0,1),0).
    """
    from ..algebra.coefficients import Coefficient
    from ..algebra.element import AlgebraElement

    if text is None or not text.strip():
        raise LiteralParseError("Empty algebra literal", position=0)

    terms = []
    offset = 0
    for chunk in text.split(";"):
        match = _COEFFICIENT.match(chunk)
        if match and match.group("coef").strip() not in ("", "+", "-"):
            re_part, im_part = _parse_coefficient(match.group("coef"), offset)
            literal = match.group("rest")
        else:
            re_part, im_part = Fraction(1), Fraction(0)
            literal = chunk
        try:
            g = G.parse(literal)
        except LiteralParseError as e:
            raise LiteralParseError(str(e).split(" (at position")[0], position=offset + (e.position or 0))
        terms.append((g, Coefficient(re_part, im_part)))
        offset += len(chunk) + 1

    return AlgebraElement.from_terms(G, terms)
