"""
The action H ↷ G/H by left multiplication.

Orbits are computed breadth-first over the H-generators on one-sided cosets
gH; two representatives name the same coset iff r₁⁻¹r₂ ∈ H.  Orbits are
never declared infinite here: a search that is still growing when the budget
runs out reports ``GrowingAtBudget``.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from ..certs.closed_forms import rule_for
from ..groups.core import (
    Budget,
    BudgetExceededError,
    Certified,
    GroupElement,
    Inconclusive,
    InternalConsistencyError,
    InvalidInputError,
    SearchOutcome,
    Triple,
)

logger = logging.getLogger(__name__)

FINITE = "Finite"
GROWING = "GrowingAtBudget"


@dataclass(frozen=True)
class CosetId:
    """The coset representative·H; ``via`` is the h ∈ H that produced it from the seed"""

    representative: GroupElement
    via: Optional[GroupElement] = field(default=None, compare=False)


@dataclass(frozen=True)
class OrbitReport:
    seed: CosetId
    elements: Tuple[CosetId, ...]
    status: str
    budget: Budget


@dataclass(frozen=True)
class FiniteOrbits:
    """Finite H-orbits found by ``fixed_vector_scan``; each spans an H-fixed vector"""

    orbits: Tuple[OrbitReport, ...]
    scanned_radius: int


@dataclass(frozen=True)
class IntersectionReport:
    g: GroupElement
    h: GroupElement
    members: Tuple[GroupElement, ...]
    complete: bool
    radius: int


@dataclass(frozen=True)
class InQN:
    """Hg ⊆ u₁gH ∪ … ∪ u_ngH; ``cover`` lists the u_j·g"""

    coset_reps: Tuple[GroupElement, ...]
    cover: Tuple[GroupElement, ...]
    verdict: str = field(default="InQN", init=False)


@dataclass(frozen=True)
class IndexAtLeast:
    """At least ``n`` distinct cosets of H∩gHg⁻¹ in H; ``coset_reps`` exhibits them"""

    n: int
    coset_reps: Tuple[GroupElement, ...]
    verdict: str = field(default="IndexAtLeast", init=False)


@dataclass(frozen=True)
class QNReport:
    g: GroupElement
    verdict: object
    budget: Budget


@dataclass(frozen=True)
class SeparationWitness:
    """h ∈ H with hY ∩ Y = ∅ for the cosets Y = {yH : y ∈ reps}"""

    reps: Tuple[GroupElement, ...]
    h: GroupElement


def same_coset(T: Triple, r1: GroupElement, r2: GroupElement) -> bool:
    """r₁H = r₂H"""
    G = T.G
    return T.H.contains(G.op(G.inv(r1), r2))


def h_steps(T: Triple) -> Tuple[GroupElement, ...]:
    """H-generators each followed by its inverse"""
    G = T.G
    out = []
    for s in T.H.generators:
        for t in (s, G.inv(s)):
            if t != G.identity and t not in out:
                out.append(t)
    return tuple(out)


def _orbit_bfs(T: Triple, g: GroupElement, budget: Budget) -> Tuple[List[CosetId], str]:
    """Breadth-first closure of {gH} under H-generators, up to the budget"""
    G = T.G
    steps = h_steps(T)
    found = [CosetId(g, G.identity)]
    frontier = list(found)

    for layer in range(budget.radius):
        next_frontier = []
        for coset in frontier:
            for s in steps:
                rep = G.op(s, coset.representative)
                if any(same_coset(T, c.representative, rep) for c in found):
                    continue
                if len(found) >= budget.element_cap:
                    logger.warning(
                        f"Orbit of {G.format(g)}H exceeds the element cap {budget.element_cap}"
                    )
                    return found, GROWING
                new = CosetId(rep, G.op(s, coset.via))
                found.append(new)
                next_frontier.append(new)
        if not next_frontier:
            logger.debug(f"Orbit of {G.format(g)}H closed after {layer} layers: {len(found)} cosets")
            return found, FINITE
        frontier = next_frontier

    # One extra pass decides whether the last layer already closed the orbit
    for coset in frontier:
        for s in steps:
            rep = G.op(s, coset.representative)
            if not any(same_coset(T, c.representative, rep) for c in found):
                return found, GROWING
    return found, FINITE


def coset_orbit(T: Triple, g: GroupElement, budget: Budget) -> OrbitReport:
    """
    The H-orbit of gH in (G∖K)/H.

    Raises:
        InvalidInputError: If g ∈ K
    """
    if T.K.contains(g):
        raise InvalidInputError(f"{T.G.format(g)} lies in K; the action is on (G∖K)/H")

    found, status = _orbit_bfs(T, g, budget)
    return OrbitReport(CosetId(g, T.G.identity), tuple(found), status, budget)


def intersection_set(
    T: Triple, g: GroupElement, h: GroupElement, budget: Budget
) -> IntersectionReport:
    """
    E(g,h) = {γ ∈ H : gγh ∈ H}.

    Scans ball_H(radius); when a closed form lists a finite superset of
    E(g,h) the exact set is returned with ``complete=True``.
    """
    T.require_outside_K((g, h), what="g and h")
    G, H = T.G, T.H

    def lands(gamma):
        return H.contains(G.product(g, gamma, h))

    scanned = tuple(gamma for gamma in H.ball(budget.radius, budget.element_cap) if lands(gamma))

    rule = rule_for(T)
    candidates = rule.pair_candidates(T, g, h) if rule else None
    if candidates is None:
        return IntersectionReport(g, h, scanned, False, budget.radius)

    exact = tuple(gamma for gamma in candidates if H.contains(gamma) and lands(gamma))
    missing = [gamma for gamma in scanned if gamma not in exact]
    if missing:
        raise InternalConsistencyError(
            f"Rule {rule.tag} missed members of E({G.format(g)},{G.format(h)}): "
            f"{[G.format(m) for m in missing]}"
        )
    return IntersectionReport(g, h, exact, True, budget.radius)


def qn_membership(T: Triple, g: GroupElement, budget: Budget) -> QNReport:
    """
    Decide g ∈ qN⁽¹⁾(H) within the budget.

    The H-orbit of gH has stabilizer H∩gHg⁻¹, so its size is the index
    [H : H∩gHg⁻¹].  A closed orbit gives ``InQN``; the cover Hg ⊆ ⋃ u_j·gH
    is re-checked as closure of the cosets under the H-generators.

    Raises:
        InternalConsistencyError: If a closed orbit is not closed under H
    """
    G = T.G
    found, status = _orbit_bfs(T, g, budget)
    reps = tuple(c.via for c in found)

    if status == GROWING:
        logger.debug(f"qN search for {G.format(g)}: index at least {len(found)}")
        return QNReport(g, IndexAtLeast(len(found), reps), budget)

    cover = tuple(c.representative for c in found)
    for u in cover:
        for s in h_steps(T):
            if not any(same_coset(T, v, G.op(s, u)) for v in cover):
                raise InternalConsistencyError(
                    f"Closed orbit of {G.format(g)}H is not closed under {G.format(s)}"
                )
    return QNReport(g, InQN(reps, cover), budget)


def fixed_vector_scan(T: Triple, budget: Budget) -> Tuple[Tuple[CosetId, OrbitReport], ...]:
    """
    Finite H-orbits on (G∖K)/H among cosets with representatives in ball_G(radius).

    Each finite orbit spans an H-fixed vector of ℓ²(G/H) outside ℓ²(K/H);
    an empty result means no violation within the budget.
    """
    seen: List[GroupElement] = []
    finite = []
    for g in T.outside_K(budget.radius, budget.element_cap):
        if any(same_coset(T, r, g) for r in seen):
            continue
        report = coset_orbit(T, g, budget)
        seen.extend(c.representative for c in report.elements)
        if report.status == FINITE:
            finite.append((report.seed, report))

    logger.debug(f"Fixed-vector scan of {T.name}: {len(finite)} finite orbits")
    return tuple(finite)


def separating_element(
    T: Triple, reps: Sequence[GroupElement], budget: Budget
) -> SearchOutcome:
    """
    Find h ∈ H∖{e} with hY ∩ Y = ∅ for the cosets Y = {yH}.

    Raises:
        InvalidInputError: If a representative lies in K
    """
    if not reps:
        raise InvalidInputError("Need at least one coset representative")
    T.require_outside_K(reps, what="Coset representatives")
    G = T.G

    try:
        ball = T.H.ball(budget.radius, budget.element_cap)
    except BudgetExceededError as e:
        logger.warning(str(e))
        return Inconclusive(budget, note=str(e))

    for h in ball:
        if h == G.identity:
            continue
        if not any(same_coset(T, y2, G.op(h, y1)) for y1 in reps for y2 in reps):
            return Certified(SeparationWitness(tuple(reps), h))

    return Inconclusive(budget, note="no separating element in the H-ball")


def duality_check(T: Triple, g: GroupElement, h: GroupElement, budget: Budget) -> bool:
    """
    E(g,h) ⊆ E(g⁻¹)γ₀ for every computed γ₀ ∈ E(g,h).

    Checked membership-wise: γγ₀⁻¹ must lie in E(g⁻¹) = g⁻¹Hg ∩ H.
    """
    G, H = T.G, T.H
    members = intersection_set(T, g, h, budget).members
    g_inv = G.inv(g)
    for gamma0 in members:
        for gamma in members:
            quotient = G.op(gamma, G.inv(gamma0))
            if not (H.contains(quotient) and H.contains(G.product(g, quotient, g_inv))):
                return False
    return True
