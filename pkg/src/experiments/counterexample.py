"""Finite-orbit counterexamples and hypothesis reports for semidirect triples"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

from ..algebra.element import AlgebraElement, adjoint, cond_exp, norm2, render_norm2
from ..algebra.identities import commutator
from ..certs.actions import action_orbit, normalizer_check, require_semidirect
from ..certs.decide import decide
from ..certs.verdict import SS, Verdict
from ..dynamics.cosets import FINITE
from ..groups.core import (
    Budget,
    GroupElement,
    InternalConsistencyError,
    InvalidInputError,
    Triple,
)

logger = logging.getLogger(__name__)

COROLLARY_CAVEAT = (
    "The conclusion L(K) = N_{L(G)}(L(H))'' is licensed by the theorem that "
    "condition (SS) for H < K < G forces it; it is imported, not re-proved here. "
    "Only the two group-level hypotheses were checked."
)


@dataclass(frozen=True)
class CounterexampleReport:
    """
    x = Σ λ_g over F ∪ F⁻¹ for F = {(α_h(a₀), e) : h ∈ H}.

    x is self-adjoint, orthogonal to L(K) and commutes with λ(H), so it lies
    in the normalizer algebra without lying in L(K).
    """

    instance: str
    a0: GroupElement
    F: Tuple[GroupElement, ...]
    x: AlgebraElement
    selfadjoint: bool
    orthogonal_to_K: bool
    commutes_with_H_generators: bool
    norm2: int
    norm: str


@dataclass(frozen=True)
class HypothesisReport:
    instance: str
    normalizer_verdict: Verdict
    ss_verdict: Verdict
    conclusion_licensed: bool
    caveat: str
    notes: Tuple[str, ...] = ()


def counterexample_checks(S: Triple, x: AlgebraElement) -> Tuple[bool, bool, bool]:
    """(x* = x, E_{L(K)}(x) = 0, [x, λ_s] = 0 for every H-generator s)"""
    G = S.G
    selfadjoint = adjoint(x) == x
    orthogonal = cond_exp(x, S.K).is_zero
    commutes = all(
        commutator(x, AlgebraElement.delta(G, s)).is_zero for s in S.H.generators
    )
    return selfadjoint, orthogonal, commutes


def build_counterexample(
    S: Triple, a0: GroupElement, budget: Budget, instance_id: str = ""
) -> CounterexampleReport:
    """
    Build the element x from a finite H-orbit of a₀ ∈ A*.

    Raises:
        InvalidInputError: If K is not the normalizer of H, a₀ is trivial, or
            the orbit of a₀ did not close within the budget
        InternalConsistencyError: If any of the three exact checks fails
    """
    require_semidirect(S)
    G = S.G
    A = G.base
    if a0 == A.identity:
        raise InvalidInputError("a0 must lie in A* = A∖{e}")

    normalizer = normalizer_check(S, budget)
    if not normalizer.holds:
        raise InvalidInputError(
            f"Normalizer check on {S.name} is {normalizer.status}; K must be the normalizer of H"
        )

    orbit = action_orbit(S, a0, budget)
    if orbit.status != FINITE:
        raise InvalidInputError(
            f"Orbit of {A.format(a0)} did not close within radius {budget.radius} "
            f"({len(orbit.elements)} points found)"
        )

    F = tuple((a, G.acting.identity) for a in orbit.elements)
    support = list(F)
    support += [G.inv(f) for f in F if G.inv(f) not in support]
    x = AlgebraElement.from_terms(G, ((g, 1) for g in support))

    selfadjoint, orthogonal, commutes = counterexample_checks(S, x)
    if not (selfadjoint and orthogonal and commutes):
        logger.error(
            f"Counterexample checks on {S.name}: selfadjoint={selfadjoint}, "
            f"orthogonal={orthogonal}, commutes={commutes}"
        )
        raise InternalConsistencyError(f"Counterexample for a0={A.format(a0)} failed an exact check")

    logger.info(f"✓ Counterexample on {S.name}: |supp(x)| = {len(x)}")
    return CounterexampleReport(
        instance_id or S.name,
        a0,
        F,
        x,
        selfadjoint,
        orthogonal,
        commutes,
        int(norm2(x)),
        render_norm2(norm2(x)),
    )


def _finite_orbit_note(S: Triple, budget: Budget) -> Optional[str]:
    A = S.G.base
    for a in A.ball(1):
        if a == A.identity:
            continue
        orbit = action_orbit(S, a, budget)
        if orbit.status == FINITE:
            return (
                f"{A.format(a)} has a finite H-orbit of size {len(orbit.elements)}; "
                f"with K the normalizer of H this gives L(K) strictly inside N_{{L(G)}}(L(H))''"
            )
    return None


def corollary_hypotheses(S: Triple, budget: Budget, instance_id: str = "") -> HypothesisReport:
    """
    Check that K is the normalizer of H and that (SS) holds.

    ``conclusion_licensed`` is true only when both verdicts are Holds.
    """
    require_semidirect(S)
    normalizer = normalizer_check(S, budget)
    ss = decide(S, SS, budget)

    licensed = (
        normalizer.holds
        and ss.holds
        and normalizer.certificate is not None
        and ss.certificate is not None
    )

    notes = []
    if not normalizer.holds:
        notes.append(f"normalizer check is {normalizer.status}: some a ∈ A* may be fixed by all of H")
    if ss.fails:
        note = _finite_orbit_note(S, budget)
        if note and normalizer.holds:
            notes.append(note)
        elif note:
            notes.append(note.split(";")[0])
        else:
            notes.append("(SS) fails")

    return HypothesisReport(
        instance_id or S.name,
        normalizer,
        ss,
        licensed,
        COROLLARY_CAVEAT,
        tuple(notes),
    )
