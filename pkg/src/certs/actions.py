"""Criteria for semidirect products A⋊K through the action of H on A"""

import logging
from dataclasses import dataclass
from typing import Any, Optional, Sequence, Tuple

from ..dynamics.cosets import FINITE, GROWING, h_steps
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
from ..groups.wreath import FiniteSupportGroup
from .closed_forms import rule_for
from .verdict import CLOSED_FORM, FAILS, GENERIC, HOLDS, NORMALIZER, UNDETERMINED, Verdict

logger = logging.getLogger(__name__)

ORBIT_CLOSURE = "orbit-closure"


@dataclass(frozen=True)
class StabilizerReport:
    """
    {h ∈ H : α_h(a) = a} on ball_H.

    ``period`` set: the stabilizer is {(e, period·n)}; ``complete`` without a
    period: ``members`` is the whole (finite) stabilizer.
    """

    a: GroupElement
    members: Tuple[GroupElement, ...]
    complete: bool
    period: Optional[int] = None

    @property
    def finite(self) -> Optional[bool]:
        if not self.complete:
            return None
        return self.period is None


@dataclass(frozen=True)
class PointStabilizerReport:
    """{h ∈ H : h·x = x} for a point x of the K-set of a wreath product"""

    point: Any
    members: Tuple[GroupElement, ...]
    complete: bool
    period: Optional[int] = None


@dataclass(frozen=True)
class ActionWitness:
    """h ∈ H with E ∩ α_h(E) = ∅"""

    E: Tuple[GroupElement, ...]
    h: GroupElement


@dataclass(frozen=True)
class ActionOrbit:
    a: GroupElement
    elements: Tuple[GroupElement, ...]
    status: str


@dataclass(frozen=True)
class FixedPoint:
    """a ∈ A* with α_h(a) = a for every H-generator h"""

    a: GroupElement


@dataclass(frozen=True)
class NormalizerProof:
    scanned: int
    proof: str


def require_semidirect(S: Triple) -> None:
    if not is_semidirect_triple(S):
        raise InvalidInputError(f"{S.name} is not a semidirect triple {{e}}×H < {{e}}×K < A⋊K")


def _require_nontrivial(S: Triple, elements: Sequence[GroupElement], what: str) -> None:
    A = S.G.base
    if A.identity in elements:
        raise InvalidInputError(f"{what} must lie in A* = A∖{{e}}")


def alpha(S: Triple, h: GroupElement, a: GroupElement) -> GroupElement:
    """α_h(a) for h = (e, k) ∈ H"""
    return S.G.action.apply(h[1], a)


def action_orbit(S: Triple, a: GroupElement, budget: Budget) -> ActionOrbit:
    """Breadth-first H-orbit of a ∈ A; ``Finite`` once a layer adds nothing"""
    require_semidirect(S)
    steps = h_steps(S)
    found = [a]
    seen = {a}
    frontier = [a]

    for _ in range(budget.radius + 1):
        next_frontier = []
        for b in frontier:
            for s in steps:
                c = alpha(S, s, b)
                if c in seen:
                    continue
                if len(found) >= budget.element_cap:
                    return ActionOrbit(a, tuple(found), GROWING)
                seen.add(c)
                found.append(c)
                next_frontier.append(c)
        if not next_frontier:
            return ActionOrbit(a, tuple(found), FINITE)
        frontier = next_frontier

    return ActionOrbit(a, tuple(found), GROWING)


def point_stabilizer_report(S: Triple, x: Any, budget: Budget) -> PointStabilizerReport:
    """
    Stabilizer of a point x of X in a wreath product Z ≀_X K.

    The stabilizer of a ∈ A* is finite iff every point stabilizer H_x with
    x ∈ supp(a) is finite.
    """
    require_semidirect(S)
    base = S.G.base
    if not isinstance(base, FiniteSupportGroup):
        raise InvalidInputError(f"{S.name} is not a wreath product")
    space = base.space

    members = tuple(h for h in S.H.ball(budget.radius, budget.element_cap) if space.act(h[1], x) == x)

    if space.free:
        return PointStabilizerReport(x, members, True)
    if space.is_finite:
        period = next(d for d in range(1, space.size + 1) if space.act(d, x) == x)
        return PointStabilizerReport(x, members, True, period)
    return PointStabilizerReport(x, members, False)


def st_via_action(S: Triple, a: GroupElement, budget: Budget) -> SearchOutcome:
    """
    Stabilizer of a ∈ A* in H.

    Certified when a closed form describes the whole stabilizer (finite, or
    the pattern {period·n}); otherwise Inconclusive with the ball sample.

    Raises:
        InvalidInputError: If a is the identity of A
        InternalConsistencyError: If the closed form disagrees with the scan
    """
    require_semidirect(S)
    _require_nontrivial(S, (a,), "a")

    try:
        ball = S.H.ball(budget.radius, budget.element_cap)
    except BudgetExceededError as e:
        logger.warning(str(e))
        return Inconclusive(budget, note=str(e))

    members = tuple(h for h in ball if alpha(S, h, a) == a)

    rule = rule_for(S)
    form = rule.stabilizer(S, a) if rule else None
    if form is None:
        return Inconclusive(
            budget,
            partial=StabilizerReport(a, members, False),
            note=f"{len(members)} stabilizing elements in the H-ball",
        )

    if any((h in members) != form.contains(h) for h in ball):
        raise InternalConsistencyError(f"Rule {rule.tag} mispredicts the stabilizer of {S.G.base.format(a)}")

    base = S.G.base
    if isinstance(base, FiniteSupportGroup):
        points = [point_stabilizer_report(S, x, budget) for x, _ in a]
        points_finite = all(p.complete and p.period is None for p in points)
        if points_finite != (form.period is None):
            raise InternalConsistencyError(
                f"Stabilizer of {base.format(a)} disagrees with its point stabilizers"
            )

    listed = members if form.period is not None else form.members
    return Certified(StabilizerReport(a, listed, True, form.period))


def ss_via_action(S: Triple, E: Sequence[GroupElement], budget: Budget) -> SearchOutcome:
    """
    Scan ball_H for h with E ∩ α_h(E) = ∅.

    RefutedWithin when some a ∈ E has a finite H-orbit inside E: then
    α_h(a) ∈ E ∩ α_h(E) for every h.  The evidence lists the orbit as
    elements (b, e) of G.

    Raises:
        InvalidInputError: If E is empty or contains the identity
    """
    require_semidirect(S)
    E = tuple(dict.fromkeys(E))
    if not E:
        raise InvalidInputError("E must be nonempty")
    _require_nontrivial(S, E, "E")

    rule = rule_for(S)
    obstruction, how = None, ""
    members = set(E)
    for a in E:
        orbit = rule.finite_orbit(S, a) if rule else None
        how = rule.tag if orbit is not None else ORBIT_CLOSURE
        if orbit is None:
            report = action_orbit(S, a, budget)
            orbit = report.elements if report.status == FINITE else None
        if orbit is not None and set(orbit) <= members:
            obstruction = tuple((b, S.G.acting.identity) for b in orbit)
            break

    try:
        ball = S.H.ball(budget.radius, budget.element_cap)
    except BudgetExceededError as e:
        logger.warning(str(e))
        return Inconclusive(budget, note=str(e))

    for h in ball:
        if h == S.G.identity:
            continue
        if members.isdisjoint(alpha(S, h, a) for a in E):
            if obstruction is not None:
                raise InternalConsistencyError(
                    f"Action witness {S.G.format(h)} contradicts a finite orbit inside E"
                )
            return Certified(ActionWitness(E, h))

    if obstruction is not None:
        return RefutedWithin(budget, obstruction, rule=how)
    return Inconclusive(budget, note="no separating h in the H-ball")


def normalizer_check(S: Triple, budget: Budget) -> Verdict:
    """
    N_G(H) = K via fixed points: K is the normalizer when e is the only
    a ∈ A fixed by all of H.

    Raises:
        InvalidInputError: If H is not normal in K on sampled conjugations
        InternalConsistencyError: If a closed form contradicts the scan
    """
    require_semidirect(S)
    G, H, K = S.G, S.H, S.K

    sample = H.ball(2, budget.element_cap)
    for k in K.generators:
        for conj in (k, G.inv(k)):
            outside = [h for h in sample if not H.contains(G.conjugate(conj, h))]
            if outside:
                raise InvalidInputError(
                    f"H is not normal in K: {G.format(conj)}·{G.format(outside[0])}·{G.format(conj)}⁻¹ ∉ H"
                )

    A = G.base
    rule = rule_for(S)
    closed = rule.normalizer_holds(S) if rule else None

    try:
        points = A.ball(budget.radius, budget.element_cap)
    except BudgetExceededError as e:
        logger.warning(str(e))
        points = ()

    fixed = next(
        (a for a in points if a != A.identity and all(alpha(S, s, a) == a for s in H.generators)),
        None,
    )

    if fixed is not None:
        if closed is True:
            raise InternalConsistencyError(
                f"Rule {rule.tag} claims no fixed points but {A.format(fixed)} is fixed"
            )
        return Verdict(NORMALIZER, FAILS, GENERIC, FixedPoint(fixed), rule=rule.tag if rule else "", budget=budget)

    if closed is True:
        return Verdict(
            NORMALIZER, HOLDS, CLOSED_FORM, NormalizerProof(len(points), rule.proof), rule=rule.tag, budget=budget
        )

    if closed is False:
        a = rule.fixed_point(S)
        if a is None or a == A.identity or any(alpha(S, s, a) != a for s in H.generators):
            raise InternalConsistencyError(f"Rule {rule.tag} gave no valid fixed point")
        return Verdict(NORMALIZER, FAILS, CLOSED_FORM, FixedPoint(a), rule=rule.tag, budget=budget)

    return Verdict(
        NORMALIZER,
        UNDETERMINED,
        GENERIC,
        note=f"no fixed point among {len(points)} elements of ball_A({budget.radius})",
        budget=budget,
    )
