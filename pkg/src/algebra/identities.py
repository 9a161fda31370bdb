"""Exact algebraic identities: WAHP defect, commuting squares, commutators"""

import logging
from fractions import Fraction

from ..groups.core import InternalConsistencyError, InvalidInputError, Subgroup
from .element import AlgebraElement, cond_exp, convolve, norm2

logger = logging.getLogger(__name__)


def commutator(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """xy − yx"""
    return convolve(x, y) - convolve(y, x)


def wahp_defect(
    x: AlgebraElement,
    y: AlgebraElement,
    u: AlgebraElement,
    H: Subgroup,
    K: Subgroup,
) -> Fraction:
    """
    Squared 2-norm of E_B(xuy) − E_B(E_N(x)·u·E_N(y)) for B = L(H), N = L(K).

    The same element is computed a second time as E_B([x − E_N(x)]·u·[y − E_N(y)])
    and the two must agree term by term.

    Raises:
        InvalidInputError: If u is not supported in H
        InternalConsistencyError: If the two formulas disagree
    """
    outside = [g for g in u.support if not H.contains(g)]
    if outside:
        raise InvalidInputError(
            f"u must be supported in {H.name}; offending element {u.group.format(outside[0])}"
        )

    ex = cond_exp(x, K)
    ey = cond_exp(y, K)

    direct = cond_exp(convolve(convolve(x, u), y), H) - cond_exp(convolve(convolve(ex, u), ey), H)
    centered = cond_exp(convolve(convolve(x - ex, u), y - ey), H)

    if direct != centered:
        logger.error(f"WAHP identity failed: {direct!r} != {centered!r}")
        raise InternalConsistencyError("E_B(xuy) − E_B(E_N(x)uE_N(y)) differs from the centered form")

    return norm2(direct)


def commuting_square_check(G1: Subgroup, G2: Subgroup, x: AlgebraElement) -> bool:
    """E_{G₁}E_{G₂}x = E_{G₂}E_{G₁}x = E_{G₁∩G₂}x, exactly"""
    first = cond_exp(cond_exp(x, G2), G1)
    second = cond_exp(cond_exp(x, G1), G2)
    meet = cond_exp(x, G1.intersect(G2))
    return first == second == meet


def commuting_square_product_check(
    G1: Subgroup, G2: Subgroup, b0: AlgebraElement, b1: AlgebraElement
) -> bool:
    """
    E_{G₁∩G₂}(b₀b₁) = E_{G₁∩G₂}(b₀)·E_{G₁∩G₂}(b₁) for b₀ in L(G₁), b₁ in L(G₂).

    Raises:
        InvalidInputError: If b₀ or b₁ is not supported in its subgroup
    """
    for b, S in ((b0, G1), (b1, G2)):
        outside = [g for g in b.support if not S.contains(g)]
        if outside:
            raise InvalidInputError(
                f"Element must be supported in {S.name}; offending {b.group.format(outside[0])}"
            )

    meet = G1.intersect(G2)
    return cond_exp(convolve(b0, b1), meet) == convolve(cond_exp(b0, meet), cond_exp(b1, meet))
