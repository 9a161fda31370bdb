"""Closed-form deciders for the built-in families, keyed by construction tag"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from ..groups.constructions import IntegerGroup, MatrixAction, SemidirectProduct
from ..groups.core import GroupElement, Triple
from ..groups.free_product import FreeProduct
from ..groups.wreath import FiniteSupportGroup

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StabilizerForm:
    """
    Exact description of a stabilizer inside H = {e}×Z.

    Either ``period`` is set and the stabilizer is {(e, period·n)}, or
    ``members`` is the complete finite stabilizer.
    """

    period: Optional[int] = None
    members: Optional[Tuple[GroupElement, ...]] = None

    def contains(self, h: GroupElement) -> bool:
        if self.period is not None:
            return h[1] % self.period == 0
        return h in (self.members or ())


def _acts_by_integers(T: Triple) -> bool:
    """True for A⋊Z triples with H = K = {e}×Z"""
    G = T.G
    if not isinstance(G, SemidirectProduct) or not isinstance(G.acting, IntegerGroup):
        return False
    one = (G.base.identity, 1)
    return T.H.contains(one) and T.K.contains(one) and all(
        g[0] == G.base.identity for g in T.H.generators + T.K.generators
    )


def _minimal_period(T: Triple, a: GroupElement, bound: int) -> Optional[int]:
    action = T.G.action
    for d in range(1, bound + 1):
        if action.apply(d, a) == a:
            return d
    return None


class ClosedFormRule:
    """
    A family-specific decider.

    Every hook returns ``None`` when the rule has nothing exact to say; the
    generic searches then stand on their own.
    """

    tag = ""
    proof = ""

    def applies(self, T: Triple) -> bool:
        return self.tag in T.tags

    def pair_candidates(
        self, T: Triple, f1: GroupElement, f2: GroupElement
    ) -> Optional[Tuple[GroupElement, ...]]:
        """A finite superset of {γ ∈ H : f₁γf₂ ∈ H}"""
        return None

    def stabilizer(self, T: Triple, a: GroupElement) -> Optional[StabilizerForm]:
        """The stabilizer {h ∈ H : α_h(a) = a} of a ∈ A*"""
        return None

    def finite_orbit(self, T: Triple, a: GroupElement) -> Optional[Tuple[GroupElement, ...]]:
        """The H-orbit of a ∈ A* when it is finite"""
        return None

    def ss_holds(self, T: Triple) -> Optional[bool]:
        return None

    def st_holds(self, T: Triple) -> Optional[bool]:
        return None

    def malnormal(self, T: Triple) -> Optional[bool]:
        return None

    def normalizer_holds(self, T: Triple) -> Optional[bool]:
        return None

    def fixed_point(self, T: Triple) -> Optional[GroupElement]:
        """Some a ∈ A* fixed by all of H"""
        return None

    def coset_stabilizer(self, T: Triple) -> Optional[Tuple[GroupElement, GroupElement]]:
        """(g, s) with g ∈ G∖K and s ∈ H of infinite order stabilizing gH"""
        return None

    def ss_obstruction(
        self, T: Triple, F: Sequence[GroupElement]
    ) -> Optional[Tuple[GroupElement, ...]]:
        """Elements of F proving FhF∩H ≠ ∅ for every h ∈ H"""
        return None


class TranslationWreathRule(ClosedFormRule):
    tag = "translation-wreath"
    proof = (
        "A nontrivial shift moves the least point of every nonempty support, "
        "so stabilizers in A* are trivial and H-orbits are infinite"
    )

    def applies(self, T: Triple) -> bool:
        if not super().applies(T) or not _acts_by_integers(T):
            return False
        base = T.G.base
        return isinstance(base, FiniteSupportGroup) and not base.space.is_finite

    def pair_candidates(self, T, f1, f2):
        (a1, k1), (a2, _) = f1, f2
        e = T.G.base.identity
        if a1 == e and a2 == e:
            return None
        if a1 == e or a2 == e:
            return ()
        # a₁·shift_{k₁+n}(a₂) = e forces the least support points to align
        shift = a1[0][0] - a2[0][0]
        return ((e, shift - k1),)

    def stabilizer(self, T, a):
        return StabilizerForm(members=(T.G.identity,))

    def ss_holds(self, T):
        return True

    def st_holds(self, T):
        return True

    def malnormal(self, T):
        return True

    def normalizer_holds(self, T):
        return True


class FiniteKSetWreathRule(ClosedFormRule):
    tag = "finite-kset-wreath"
    proof = (
        "Z acts on a finite K-set through a finite quotient, so every a ∈ A* "
        "has a finite orbit and a stabilizer of finite index"
    )

    def applies(self, T: Triple) -> bool:
        if not super().applies(T) or not _acts_by_integers(T):
            return False
        base = T.G.base
        return isinstance(base, FiniteSupportGroup) and base.space.is_finite

    def _period(self, T, a) -> int:
        return _minimal_period(T, a, T.G.base.space.size)

    def stabilizer(self, T, a):
        return StabilizerForm(period=self._period(T, a))

    def finite_orbit(self, T, a):
        return tuple(T.G.action.apply(j, a) for j in range(self._period(T, a)))

    def ss_holds(self, T):
        return False

    def st_holds(self, T):
        return False

    def malnormal(self, T):
        return False

    def normalizer_holds(self, T):
        return False

    def fixed_point(self, T):
        base = T.G.base
        return base.normalize((x, base.values.generators[0]) for x in base.space.points(0))


class FiniteOrderMatrixRule(ClosedFormRule):
    tag = "finite-order-matrix"
    proof = (
        "M has finite order m, so α_m is the identity: orbits are finite and "
        "stabilizers contain mZ; 0 is the only fixed vector iff det(M−I) ≠ 0"
    )

    def applies(self, T: Triple) -> bool:
        if not super().applies(T) or not _acts_by_integers(T):
            return False
        action = T.G.action
        return isinstance(action, MatrixAction) and action.order() is not None

    def _period(self, T, a) -> int:
        return _minimal_period(T, a, T.G.action.order())

    def stabilizer(self, T, a):
        return StabilizerForm(period=self._period(T, a))

    def finite_orbit(self, T, a):
        return tuple(T.G.action.apply(j, a) for j in range(self._period(T, a)))

    def ss_holds(self, T):
        return False

    def st_holds(self, T):
        return False

    def malnormal(self, T):
        return False

    def normalizer_holds(self, T):
        return T.G.action.fixed_space_determinant() != 0

    def fixed_point(self, T):
        vectors = T.G.action.fixed_vectors()
        return vectors[0] if vectors else None


class FreeFactorRule(ClosedFormRule):
    tag = "free-factor"
    proof = (
        "If f₁ = u·s and f₂ = t·v with s, t the boundary G₁-letters, then "
        "f₁γf₂ is reduced with a G₂-letter unless γ = s⁻¹t⁻¹"
    )

    def applies(self, T: Triple) -> bool:
        return super().applies(T) and isinstance(T.G, FreeProduct)

    def pair_candidates(self, T, f1, f2):
        G = T.G
        if not (G.has_letter_from(f1, 2) and G.has_letter_from(f2, 2)):
            return None
        G1 = G.factors[1]
        _, _, s = G.split_boundary(f1, 1)
        t, _, _ = G.split_boundary(f2, 1)
        return (G.letter(1, G1.inv(G1.op(t, s))),)

    def ss_holds(self, T):
        return True

    def st_holds(self, T):
        return True

    def malnormal(self, T):
        return True


class MalnormalFactorRule(ClosedFormRule):
    tag = "malnormal-factor"
    proof = (
        "A free factor is malnormal; then E(g,h) ⊆ E(g⁻¹)γ₀ = {γ₀}, so every "
        "E(g,h) has at most one element"
    )

    def applies(self, T: Triple) -> bool:
        return super().applies(T) and isinstance(T.G, FreeProduct)

    def ss_holds(self, T):
        return True

    def st_holds(self, T):
        return True

    def malnormal(self, T):
        return True


class AbelianRule(ClosedFormRule):
    tag = "abelian"
    proof = "In an abelian group f₁γf₂ = γ·f₁f₂, so E(f₁,f₂) is H or empty"

    def applies(self, T: Triple) -> bool:
        if not super().applies(T):
            return False
        G = T.G
        return all(G.op(s, t) == G.op(t, s) for s in G.generators for t in G.generators)

    def pair_candidates(self, T, f1, f2):
        if T.H.contains(T.G.op(f1, f2)):
            return None
        return ()

    def ss_holds(self, T):
        return False

    def st_holds(self, T):
        return False

    def malnormal(self, T):
        return False

    def coset_stabilizer(self, T):
        outside = T.outside_K(2)
        if not outside or not T.H.generators:
            return None
        return outside[0], T.H.generators[0]

    def ss_obstruction(self, T, F):
        for f1 in F:
            for f2 in F:
                if T.H.contains(T.G.op(f1, f2)):
                    return (f1, f2)
        return None


class DirectProductRule(ClosedFormRule):
    tag = "direct-product"
    proof = (
        "Witnesses for the factors combine to h = (h₁,h₂); a coset (g₁,e)H is "
        "fixed by {e}×H₂, so ST fails once H₂ is infinite"
    )

    def applies(self, T: Triple) -> bool:
        return super().applies(T) and T.factors is not None

    def ss_holds(self, T):
        verdicts = []
        for factor in T.factors:
            rule = rule_for(factor)
            verdicts.append(rule.ss_holds(factor) if rule else None)
        if False in verdicts:
            return False
        if all(v is True for v in verdicts):
            return True
        return None

    def st_holds(self, T):
        return False if self.coset_stabilizer(T) is not None else None

    def malnormal(self, T):
        return False if self.coset_stabilizer(T) is not None else None

    def coset_stabilizer(self, T):
        first, second = T.factors
        if not second.H.generators or not second.infinite_attested(8):
            return None
        outside = first.outside_K(2)
        if not outside:
            return None
        g = (outside[0], second.G.identity)
        s = (first.G.identity, second.H.generators[0])
        return g, s


CLOSED_FORM_RULES: Dict[str, ClosedFormRule] = {
    rule.tag: rule
    for rule in (
        TranslationWreathRule(),
        FiniteKSetWreathRule(),
        FiniteOrderMatrixRule(),
        FreeFactorRule(),
        MalnormalFactorRule(),
        AbelianRule(),
        DirectProductRule(),
    )
}


def rule_for(T: Triple) -> Optional[ClosedFormRule]:
    """The first registered rule whose tag the triple carries and which applies"""
    for tag, rule in CLOSED_FORM_RULES.items():
        if tag not in T.tags:
            continue
        if rule.applies(T):
            return rule
        logger.warning(f"Triple {T.name} is tagged {tag} but the rule does not apply")
    return None
