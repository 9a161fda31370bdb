"""
Verdict dispatch for (SS), (ST) and malnormality.

Closed-form rules decide the built-in families; generic searches over the
standard F-corpus supply the replayable evidence and are cross-checked
against every closed-form answer.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Sequence, Tuple

from ..dynamics.cosets import intersection_set
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
from .actions import StabilizerReport, st_via_action
from .closed_forms import ClosedFormRule, rule_for
from .verdict import (
    CLOSED_FORM,
    FAILS,
    GENERIC,
    HOLDS,
    MALNORMAL,
    SS,
    ST,
    UNDETERMINED,
    Verdict,
)
from .witnesses import SSWitness, ss_witness, st_exceptional, verify_ss_witness

logger = logging.getLogger(__name__)

CORPUS_RADIUS = 2
CORPUS_MAX_SIZE = 3


@dataclass(frozen=True)
class CorpusEvidence:
    """Certificates found over the standard F-corpus; ``unresolved`` counts the rest"""

    certificates: Tuple
    unresolved: int


@dataclass(frozen=True)
class CosetStabilizer:
    """s ∈ H∖{e} with s^n·gH = gH for 1 ≤ n ≤ ``checked``: the stabilizer of gH is infinite"""

    g: GroupElement
    s: GroupElement
    checked: int


@dataclass(frozen=True)
class MalnormalViolation:
    """γ ∈ H∩gHg⁻¹ with γ ≠ e"""

    g: GroupElement
    gamma: GroupElement


@dataclass(frozen=True)
class MalnormalScan:
    scanned: int
    largest_intersection: int


@dataclass(frozen=True)
class ProductEvidence:
    """Factor verdicts and combined witnesses h = (h₁,h₂)"""

    factors: Tuple[Verdict, Verdict]
    witnesses: Tuple[SSWitness, ...]


def standard_corpus(
    T: Triple, radius: int = CORPUS_RADIUS, max_size: int = CORPUS_MAX_SIZE
) -> Tuple[Tuple[GroupElement, ...], ...]:
    """All nonempty subsets of ball_G(radius)∖K with at most ``max_size`` elements"""
    outside = T.outside_K(radius)
    corpus = []
    for size in range(1, max_size + 1):
        corpus.extend(combinations(outside, size))
    return tuple(corpus)


def _run_corpus(search, T: Triple, budget: Budget, max_size: int) -> Tuple[SearchOutcome, ...]:
    return tuple(search(T, F, budget) for F in standard_corpus(T, max_size=max_size))


# ============================================================================
# MALNORMALITY
# ============================================================================


def malnormality_scan(T: Triple, budget: Budget) -> Verdict:
    """
    Check H ∩ gHg⁻¹ = {e} for g ∈ ball_G(radius)∖K.

    A nontrivial γ is a Fails certificate; without a violation the verdict is
    Holds only when a closed form proves malnormality.
    """
    G = T.G
    rule = rule_for(T)
    closed = rule.malnormal(T) if rule else None
    largest = 1
    scanned = 0

    try:
        candidates = T.outside_K(budget.radius, budget.element_cap)
    except BudgetExceededError as e:
        logger.warning(str(e))
        return Verdict(MALNORMAL, UNDETERMINED, GENERIC, note=str(e), budget=budget)

    for g in candidates:
        scanned += 1
        members = intersection_set(T, G.inv(g), g, budget).members
        largest = max(largest, len(members))
        nontrivial = [gamma for gamma in members if gamma != G.identity]
        if nontrivial:
            if closed is True:
                raise InternalConsistencyError(
                    f"Rule {rule.tag} claims malnormality but {G.format(nontrivial[0])} ∈ H∩gHg⁻¹"
                )
            return Verdict(
                MALNORMAL,
                FAILS,
                GENERIC,
                MalnormalViolation(g, nontrivial[0]),
                rule=rule.tag if rule else "",
                budget=budget,
            )

    scan = MalnormalScan(scanned, largest)
    if closed is True:
        return Verdict(MALNORMAL, HOLDS, CLOSED_FORM, scan, rule=rule.tag, budget=budget)
    note = f"no violation among {scanned} elements; largest intersection {largest}"
    if closed is False:
        note += f"; rule {rule.tag} says H is not malnormal"
    return Verdict(MALNORMAL, UNDETERMINED, GENERIC, note=note, budget=budget)


# ============================================================================
# FAILURE CERTIFICATES
# ============================================================================


def _first_nontrivial_base_element(T: Triple) -> GroupElement:
    A = T.G.base
    return next(a for a in A.ball(1) if a != A.identity)


def _ss_failure(T: Triple, rule: ClosedFormRule, budget: Budget) -> RefutedWithin:
    """A RefutedWithin outcome for some F, built from the rule's obstruction"""
    G = T.G
    if type(rule).finite_orbit is not ClosedFormRule.finite_orbit:
        A = G.base
        a = _first_nontrivial_base_element(T)
        orbit = rule.finite_orbit(T, a)
        E = list(orbit)
        E += [A.inv(b) for b in orbit if A.inv(b) not in E]
        F = tuple((b, G.acting.identity) for b in E)
    else:
        g = T.outside_K(1)[0]
        F = (g, G.inv(g))

    outcome = ss_witness(T, F, budget)
    if not isinstance(outcome, RefutedWithin):
        raise InternalConsistencyError(f"Rule {rule.tag} says SS fails but F={F} was not refuted")
    return outcome


def _st_failure(T: Triple, rule: ClosedFormRule, budget: Budget):
    """A StabilizerReport with a period, or a CosetStabilizer"""
    if type(rule).stabilizer is not ClosedFormRule.stabilizer:
        a = _first_nontrivial_base_element(T)
        outcome = st_via_action(T, a, budget)
        if not isinstance(outcome, Certified) or outcome.certificate.period is None:
            raise InternalConsistencyError(f"Rule {rule.tag} says ST fails but the stabilizer is finite")
        return outcome.certificate

    found = rule.coset_stabilizer(T)
    if found is None:
        raise InternalConsistencyError(f"Rule {rule.tag} gave no stabilizer certificate")
    g, s = found
    certificate = CosetStabilizer(g, s, budget.radius)
    if not verify_coset_stabilizer(T, certificate):
        raise InternalConsistencyError(f"Coset stabilizer for {T.G.format(g)} failed replay")
    return certificate


def verify_coset_stabilizer(T: Triple, certificate: CosetStabilizer) -> bool:
    G, H = T.G, T.H
    if T.K.contains(certificate.g) or not H.contains(certificate.s):
        return False
    g_inv = G.inv(certificate.g)
    for n in range(1, certificate.checked + 1):
        power = G.pow(certificate.s, n)
        if power == G.identity or not H.contains(G.product(g_inv, power, certificate.g)):
            return False
    return True


def verify_stabilizer_report(T: Triple, report: StabilizerReport) -> bool:
    G = T.G
    if report.a == G.base.identity:
        return False
    if any(not T.H.contains(h) or G.action.apply(h[1], report.a) != report.a for h in report.members):
        return False
    if report.period is not None:
        return G.action.apply(report.period, report.a) == report.a
    return True


# ============================================================================
# PRODUCT RULE
# ============================================================================


def product_ss_witness(T: Triple, F: Sequence[GroupElement], budget: Budget) -> SearchOutcome:
    """
    Combine factor witnesses: h₁ for F₁ = {p ∉ K₁}, h₂ for F₂ = {q ∉ K₂}.

    If f = (p,q) and f′ = (p′,q′) have exactly one of p, p′ outside K₁ then
    p·h₁·p′ ∉ K₁; otherwise the factor witness for F₁ or F₂ applies.
    """
    if T.factors is None:
        raise InvalidInputError(f"{T.name} is not a product of two triples")
    first, second = T.factors
    F = tuple(dict.fromkeys(F))
    T.require_outside_K(F)

    parts = []
    for factor, index in ((first, 0), (second, 1)):
        Fi = tuple(dict.fromkeys(f[index] for f in F if not factor.K.contains(f[index])))
        if not Fi:
            parts.append(factor.G.identity)
            continue
        outcome = ss_witness(factor, Fi, budget)
        if not isinstance(outcome, Certified):
            return Inconclusive(budget, partial=outcome, note=f"factor {index + 1} has no witness")
        parts.append(outcome.certificate.h)

    witness = SSWitness(F, tuple(parts))
    if not verify_ss_witness(T, witness):
        raise InternalConsistencyError("Componentwise witness failed replay")
    return Certified(witness)


def _decide_product(T: Triple, which: str, budget: Budget, rule: ClosedFormRule) -> Verdict:
    if which == ST:
        if rule.st_holds(T) is False:
            certificate = _st_failure(T, rule, budget)
            return Verdict(ST, FAILS, CLOSED_FORM, certificate, rule=rule.tag, budget=budget)
        return Verdict(ST, UNDETERMINED, CLOSED_FORM, rule=rule.tag, budget=budget)

    factors = tuple(decide(factor, SS, budget) for factor in T.factors)
    if all(v.holds for v in factors):
        outcomes = [product_ss_witness(T, F, budget) for F in standard_corpus(T, radius=1, max_size=2)]
        witnesses = tuple(o.certificate for o in outcomes if isinstance(o, Certified))
        return Verdict(SS, HOLDS, CLOSED_FORM, ProductEvidence(factors, witnesses), rule=rule.tag, budget=budget)
    if any(v.fails for v in factors):
        return Verdict(SS, FAILS, CLOSED_FORM, ProductEvidence(factors, ()), rule=rule.tag, budget=budget)
    note = ", ".join(f"factor {i + 1}: {v.status}" for i, v in enumerate(factors))
    return Verdict(SS, UNDETERMINED, CLOSED_FORM, rule=rule.tag, note=note, budget=budget)


# ============================================================================
# DISPATCH
# ============================================================================


def _decide_ss(T: Triple, budget: Budget, rule) -> Verdict:
    closed = rule.ss_holds(T) if rule else None
    if closed is False:
        return Verdict(SS, FAILS, CLOSED_FORM, _ss_failure(T, rule, budget), rule=rule.tag, budget=budget)

    outcomes = _run_corpus(ss_witness, T, budget, CORPUS_MAX_SIZE)
    refuted = [o for o in outcomes if isinstance(o, RefutedWithin)]
    witnesses = tuple(o.certificate for o in outcomes if isinstance(o, Certified))
    evidence = CorpusEvidence(witnesses, len(outcomes) - len(witnesses))

    if closed is True:
        if refuted:
            raise InternalConsistencyError(f"Rule {rule.tag} says SS holds but F={refuted[0].evidence} is refuted")
        return Verdict(SS, HOLDS, CLOSED_FORM, evidence, rule=rule.tag, budget=budget)

    if refuted:
        return Verdict(SS, FAILS, GENERIC, refuted[0], rule=refuted[0].rule, budget=budget)
    return Verdict(
        SS,
        UNDETERMINED,
        GENERIC,
        note=f"{len(witnesses)} of {len(outcomes)} corpus sets have witnesses",
        budget=budget,
    )


def _decide_st(T: Triple, budget: Budget, rule) -> Verdict:
    closed = rule.st_holds(T) if rule else None
    if closed is False:
        return Verdict(ST, FAILS, CLOSED_FORM, _st_failure(T, rule, budget), rule=rule.tag, budget=budget)

    if closed is True and type(rule).pair_candidates is ClosedFormRule.pair_candidates:
        scan = malnormality_scan(T, budget)
        if not scan.holds:
            raise InternalConsistencyError(f"Rule {rule.tag} derives ST from malnormality, which did not hold")
        return Verdict(ST, HOLDS, CLOSED_FORM, scan.certificate, rule=rule.tag, budget=budget)

    outcomes = _run_corpus(st_exceptional, T, budget, 2)
    sets = tuple(o.certificate for o in outcomes if isinstance(o, Certified))
    evidence = CorpusEvidence(sets, len(outcomes) - len(sets))

    if closed is True:
        return Verdict(ST, HOLDS, CLOSED_FORM, evidence, rule=rule.tag, budget=budget)
    return Verdict(
        ST,
        UNDETERMINED,
        GENERIC,
        note=f"{len(sets)} of {len(outcomes)} exceptional sets certified complete",
        budget=budget,
    )


def decide(T: Triple, which: str, budget: Budget) -> Verdict:
    """
    Decide (SS) or (ST) for a triple.

    Registered families are decided by their closed-form rule; other triples
    get a generic corpus search and stay Undetermined unless refuted.

    Raises:
        InvalidInputError: If ``which`` is not SS or ST
        InternalConsistencyError: If closed-form and generic results conflict
    """
    which = which.upper()
    if which not in (SS, ST):
        raise InvalidInputError(f"Can only decide SS or ST, got {which!r}")

    rule = rule_for(T)
    if rule is not None and T.factors is not None and rule.tag == "direct-product":
        verdict = _decide_product(T, which, budget, rule)
    elif which == SS:
        verdict = _decide_ss(T, budget, rule)
    else:
        verdict = _decide_st(T, budget, rule)

    logger.info(f"✓ {which} on {T.name}: {verdict.status} ({verdict.method})")
    return verdict
