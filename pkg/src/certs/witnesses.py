"""Witness searches for (SS), (ST) and (wSS) over ball_H"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from ..dynamics.cosets import h_steps
from ..groups.constructions import is_semidirect_triple
from ..groups.core import (
    Budget,
    BudgetExceededError,
    Certified,
    GroupElement,
    Inconclusive,
    InternalConsistencyError,
    InvalidInputError,
    RefutedWithin,
    SearchOutcome,
    Triple,
)
from .closed_forms import rule_for

logger = logging.getLogger(__name__)

INVARIANT_SET = "invariant-set"


@dataclass(frozen=True)
class SSWitness:
    """
    h ∈ H with FhF ∩ H = ∅.

    With ``g`` set this is the one-sided form Fhg ∩ H = ∅.
    """

    F: Tuple[GroupElement, ...]
    h: GroupElement
    g: Optional[GroupElement] = None


@dataclass(frozen=True)
class ExceptionalSet:
    """
    E = {h : FhF ∩ H ≠ ∅}; ``witnesses[i]`` is a pair (f₁, f₂) with f₁E[i]f₂ ∈ H.

    ``complete`` means E is the whole exceptional set, not just its part in
    ball_H(ball_checked).
    """

    F: Tuple[GroupElement, ...]
    E: Tuple[GroupElement, ...]
    witnesses: Tuple[Tuple[GroupElement, GroupElement], ...]
    ball_checked: int
    complete: bool


def separates(
    T: Triple, left: Sequence[GroupElement], h: GroupElement, right: Sequence[GroupElement]
) -> bool:
    """left·h·right misses H"""
    G, H = T.G, T.H
    return not any(H.contains(G.product(f1, h, f2)) for f1 in left for f2 in right)


def verify_ss_witness(T: Triple, witness: SSWitness) -> bool:
    """Replay the witness by direct computation"""
    if not T.H.contains(witness.h) or any(T.K.contains(f) for f in witness.F):
        return False
    right = (witness.g,) if witness.g is not None else witness.F
    return separates(T, witness.F, witness.h, right)


def invariant_set_obstruction(
    T: Triple, F: Sequence[GroupElement]
) -> Optional[Tuple[GroupElement, ...]]:
    """
    For F = {(a,e) : a ∈ E} in A⋊K: if E is H-invariant and closed under
    inverses then every h = (e,k) meets (α_k(b)⁻¹, e)·h·(b, e) = h ∈ H, so
    no witness exists.
    """
    if not is_semidirect_triple(T):
        return None
    G = T.G
    A = G.base
    if any(f[1] != G.acting.identity for f in F):
        return None

    E = {f[0] for f in F}
    if any(A.inv(a) not in E for a in E):
        return None
    for s in h_steps(T):
        if any(G.action.apply(s[1], a) not in E for a in E):
            return None
    return tuple(F)


def _obstruction(T: Triple, F: Sequence[GroupElement]) -> Tuple[Optional[tuple], str]:
    found = invariant_set_obstruction(T, F)
    if found is not None:
        return found, INVARIANT_SET
    rule = rule_for(T)
    if rule is not None:
        found = rule.ss_obstruction(T, F)
        if found is not None:
            return found, rule.tag
    return None, ""


def _checked_elements(T: Triple, elements: Sequence[GroupElement], what: str) -> Tuple:
    elements = tuple(dict.fromkeys(elements))
    if not elements:
        raise InvalidInputError(f"{what} must be nonempty")
    T.require_outside_K(elements, what=what)
    return elements


def ss_witness(T: Triple, F: Sequence[GroupElement], budget: Budget) -> SearchOutcome:
    """
    Scan ball_H for h with FhF ∩ H = ∅.

    Returns Certified(SSWitness) for the first such h in ball order,
    RefutedWithin when an exact obstruction rules out every h, and
    Inconclusive otherwise.

    Raises:
        InvalidInputError: If F is empty or meets K
    """
    F = _checked_elements(T, F, "F")
    G = T.G
    obstruction, rule = _obstruction(T, F)

    try:
        ball = T.H.ball(budget.radius, budget.element_cap)
    except BudgetExceededError as e:
        logger.warning(str(e))
        return Inconclusive(budget, note=str(e))

    for h in ball:
        if h == G.identity or not separates(T, F, h, F):
            continue
        if obstruction is not None:
            raise InternalConsistencyError(
                f"Witness {G.format(h)} found although rule {rule} refutes F"
            )
        witness = SSWitness(F, h)
        if not verify_ss_witness(T, witness):
            raise InternalConsistencyError(f"SS witness {G.format(h)} failed replay")
        logger.debug(f"SS witness for |F|={len(F)} in {T.name}: h={G.format(h)}")
        return Certified(witness)

    if obstruction is not None:
        return RefutedWithin(budget, obstruction, rule=rule)

    logger.warning(f"No SS witness for |F|={len(F)} in {T.name} within radius {budget.radius}")
    return Inconclusive(budget, note="no witness in the H-ball")


def wss_witness(
    T: Triple, F: Sequence[GroupElement], g: GroupElement, budget: Budget
) -> SearchOutcome:
    """
    Scan ball_H for h with Fhg ∩ H = ∅.

    Raises:
        InvalidInputError: If F is empty or F ∪ {g} meets K
        InternalConsistencyError: If a witness fails its own replay
    """
    F = _checked_elements(T, F, "F")
    T.require_outside_K((g,), what="g")
    G = T.G

    try:
        ball = T.H.ball(budget.radius, budget.element_cap)
    except BudgetExceededError as e:
        logger.warning(str(e))
        return Inconclusive(budget, note=str(e))

    for h in ball:
        if h == G.identity or not separates(T, F, h, (g,)):
            continue
        witness = SSWitness(F, h, g)
        if not verify_ss_witness(T, witness):
            raise InternalConsistencyError(f"wSS witness {G.format(h)} failed replay")
        return Certified(witness)

    logger.warning(f"No wSS witness in {T.name} within radius {budget.radius}")
    return Inconclusive(budget, note="no one-sided witness in the H-ball")


def _exceptional_in_ball(T: Triple, F, ball) -> Tuple[list, list]:
    G, H = T.G, T.H
    members, pairs = [], []
    for h in ball:
        for f1 in F:
            hit = next((f2 for f2 in F if H.contains(G.product(f1, h, f2))), None)
            if hit is not None:
                members.append(h)
                pairs.append((f1, hit))
                break
    return members, pairs


def st_exceptional(T: Triple, F: Sequence[GroupElement], budget: Budget) -> SearchOutcome:
    """
    The exceptional set E = {h ∈ H : FhF ∩ H ≠ ∅}.

    Certified when a closed form lists finite candidate sets for every pair
    in F×F (E is then complete); otherwise Inconclusive with the
    ball-restricted E as the partial payload.

    Raises:
        InvalidInputError: If F is empty or meets K
        InternalConsistencyError: If the closed form disagrees with the scan
    """
    F = _checked_elements(T, F, "F")
    G, H = T.G, T.H

    try:
        ball = H.ball(budget.radius, budget.element_cap)
    except BudgetExceededError as e:
        logger.warning(str(e))
        return Inconclusive(budget, note=str(e))

    members, pairs = _exceptional_in_ball(T, F, ball)

    rule = rule_for(T)
    candidates = {}
    if rule is not None:
        for f1 in F:
            for f2 in F:
                listed = rule.pair_candidates(T, f1, f2)
                if listed is None:
                    candidates = None
                    break
                for gamma in listed:
                    if gamma not in candidates and H.contains(gamma) and H.contains(
                        G.product(f1, gamma, f2)
                    ):
                        candidates[gamma] = (f1, f2)
            if candidates is None:
                break

    if rule is not None and candidates is not None:
        in_ball = set(ball)
        predicted = {gamma for gamma in candidates if gamma in in_ball}
        if predicted != set(members):
            raise InternalConsistencyError(
                f"Rule {rule.tag} predicts {len(predicted)} exceptional elements in the ball, "
                f"scan found {len(members)}"
            )
        return Certified(
            ExceptionalSet(F, tuple(candidates), tuple(candidates.values()), budget.radius, True)
        )

    partial = ExceptionalSet(F, tuple(members), tuple(pairs), budget.radius, False)
    half = max(budget.radius // 2, 0)
    half_ball = set(H.ball(half, budget.element_cap))
    inner = sum(1 for h in members if h in half_ball)
    if len(members) > inner:
        note = (
            f"exceptional set grows with the ball ({inner} at radius {half}, "
            f"{len(members)} at radius {budget.radius}); evidence against ST"
        )
    else:
        note = f"{len(members)} exceptional elements within radius {budget.radius}"
    logger.warning(f"Exceptional set for |F|={len(F)} in {T.name} not certified complete: {note}")
    return Inconclusive(budget, partial=partial, note=note)
