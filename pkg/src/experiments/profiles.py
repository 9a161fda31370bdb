"""Decay profiles h ↦ ‖E_B(xλ_h y)‖₂² over ball_H"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from ..algebra.element import AlgebraElement, cond_exp, convolve, norm2
from ..config import config
from ..groups.core import (
    Budget,
    GroupElement,
    InternalConsistencyError,
    InvalidInputError,
    Triple,
)
from ..groups.free_product import FreeProduct

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DecayProfile:
    """Exact squared norms in ball order; ``exceptional`` lists the nonzero ones"""

    x: AlgebraElement
    y: AlgebraElement
    samples: Tuple[Tuple[GroupElement, Fraction], ...]
    exceptional: Tuple[GroupElement, ...]

    def to_tsv(self) -> str:
        """index, h literal, numerator, denominator; one row per sample"""
        G = self.x.group
        rows = ["index\th\tnumerator\tdenominator"]
        for i, (h, value) in enumerate(self.samples):
            rows.append(f"{i}\t{G.format(h)}\t{value.numerator}\t{value.denominator}")
        return "\n".join(rows) + "\n"


def _require_orthogonal(x: AlgebraElement, T: Triple, name: str) -> None:
    if x.group is not T.G:
        raise InvalidInputError(f"{name} does not live in {T.G.name}")
    inside = [g for g in x.support if T.K.contains(g)]
    if inside:
        raise InvalidInputError(
            f"{name} must be orthogonal to L(K); support element {T.G.format(inside[0])} lies in K"
        )


def _sample(T: Triple, x: AlgebraElement, y: AlgebraElement, h: GroupElement) -> Fraction:
    u = AlgebraElement.delta(T.G, h)
    return norm2(cond_exp(convolve(convolve(x, u), y), T.H))


def decay_profile(
    T: Triple,
    x: AlgebraElement,
    y: AlgebraElement,
    budget: Budget,
    workers: Optional[int] = None,
) -> DecayProfile:
    """
    Sample ‖E_{L(H)}(xλ_h y)‖₂² for h ∈ ball_H(radius), in ball order.

    Samples are computed by a thread pool and merged in ball order.

    Raises:
        InvalidInputError: If x or y has support in K
    """
    _require_orthogonal(x, T, "x")
    _require_orthogonal(y, T, "y")

    ball = T.H.ball(budget.radius, budget.element_cap)
    workers = workers or config.WORKERS

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(lambda h: _sample(T, x, y, h), ball))
    else:
        values = [_sample(T, x, y, h) for h in ball]

    samples = tuple(zip(ball, values))
    exceptional = tuple(h for h, v in samples if v != 0)
    logger.debug(f"Decay profile on {T.name}: {len(exceptional)} of {len(samples)} samples nonzero")
    logger.debug(f"Ball cache for {T.G.name}: {T.G.cache_stats()}")
    return DecayProfile(x, y, samples, exceptional)


def free_product_mixing_check(
    T: Triple, x: AlgebraElement, y: AlgebraElement, budget: Budget
) -> DecayProfile:
    """
    Decay profile for G = G₁∗G₂ with H ≤ G₁ and x, y orthogonal to L(G₁).

    Writing a support word of x as u·s and one of y as t·v with s, t the
    boundary G₁-letters, x_w λ_γ y_w′ can only reach H when γ = s⁻¹t⁻¹;
    the profile must vanish off these predicted points.

    Raises:
        InvalidInputError: If G is not a free product or a support word has no G₂-letter
        InternalConsistencyError: If a nonzero value falls outside the prediction
    """
    G = T.G
    if not isinstance(G, FreeProduct):
        raise InvalidInputError(f"{G.name} is not a free product")
    for name, z in (("x", x), ("y", y)):
        bare = [w for w in z.support if not G.has_letter_from(w, 2)]
        if bare:
            raise InvalidInputError(f"Support word {G.format(bare[0])} of {name} has no G₂-letter")

    G1 = G.factors[1]
    predicted = set()
    for w1 in x.support:
        _, _, s = G.split_boundary(w1, 1)
        for w2 in y.support:
            t, _, _ = G.split_boundary(w2, 1)
            predicted.add(G.letter(1, G1.inv(G1.op(t, s))))

    profile = decay_profile(T, x, y, budget)
    stray = [h for h in profile.exceptional if h not in predicted]
    if stray:
        raise InternalConsistencyError(
            f"Nonzero decay value at {G.format(stray[0])} outside the boundary-cancellation set"
        )
    return profile
