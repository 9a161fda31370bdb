"""Replay the certificates recorded in a report without re-running searches"""

import json
import logging
from pathlib import Path
from typing import Any, Callable, Dict, Tuple, Union

from pydantic import ValidationError

from ..algebra.element import AlgebraElement, cond_exp, convolve, norm2, render_norm2
from ..certs.actions import (
    ActionOrbit,
    ActionWitness,
    FixedPoint,
    NormalizerProof,
    StabilizerReport,
    alpha,
)
from ..certs.closed_forms import AbelianRule, rule_for
from ..certs.decide import (
    CorpusEvidence,
    CosetStabilizer,
    MalnormalScan,
    MalnormalViolation,
    ProductEvidence,
    verify_coset_stabilizer,
    verify_stabilizer_report,
)
from ..certs.verdict import (
    CLOSED_FORM,
    FAILS,
    HOLDS,
    MALNORMAL,
    NORMALIZER,
    SS,
    ST,
    UNDETERMINED,
    Verdict,
)
from ..certs.witnesses import (
    INVARIANT_SET,
    ExceptionalSet,
    SSWitness,
    invariant_set_obstruction,
    verify_ss_witness,
)
from ..dynamics.cosets import (
    FINITE,
    FiniteOrbits,
    IndexAtLeast,
    InQN,
    IntersectionReport,
    OrbitReport,
    QNReport,
    SeparationWitness,
    h_steps,
    same_coset,
)
from ..experiments.counterexample import (
    CounterexampleReport,
    HypothesisReport,
    counterexample_checks,
)
from ..experiments.profiles import DecayProfile
from ..groups.core import Certified, Inconclusive, RefutedWithin, Triple
from ..instances.registry import build_instance
from .schema import PLAIN_KINDS, SCHEMA_VERSION, Codec, Report, ReportSchemaError

logger = logging.getLogger(__name__)

Replayer = Callable[[Triple, Any], bool]


def _distinct_cosets(T: Triple, reps) -> bool:
    return not any(same_coset(T, reps[i], reps[j]) for i in range(len(reps)) for j in range(i))


def _closed_under_h(T: Triple, reps) -> bool:
    G = T.G
    return all(
        any(same_coset(T, u, G.op(s, r)) for u in reps) for r in reps for s in h_steps(T)
    )


# ============================================================================
# REPLAYERS
# ============================================================================


def _replay_refuted(T: Triple, outcome: RefutedWithin) -> bool:
    G = T.G
    evidence = outcome.evidence
    if not evidence:
        return False
    if outcome.rule == INVARIANT_SET:
        return invariant_set_obstruction(T, evidence) is not None

    if outcome.rule == AbelianRule.tag:
        f1, f2 = evidence
        commutative = all(G.op(s, t) == G.op(t, s) for s in G.generators for t in G.generators)
        return commutative and T.H.contains(G.op(f1, f2))

    # A finite H-orbit {(b, e)} inside E
    A = getattr(G, "base", None)
    if A is None or any(f[1] != G.acting.identity or f[0] == A.identity for f in evidence):
        return False
    orbit = {f[0] for f in evidence}
    return all(alpha(T, s, b) in orbit for b in orbit for s in h_steps(T))


def _exact_candidates(T: Triple, f1, f2):
    """{γ ∈ H : f₁γf₂ ∈ H} from the closed form, or None when it lists nothing"""
    G, H = T.G, T.H
    rule = rule_for(T)
    listed = rule.pair_candidates(T, f1, f2) if rule else None
    if listed is None:
        return None
    return {gamma for gamma in listed if H.contains(gamma) and H.contains(G.product(f1, gamma, f2))}


def _replay_exceptional(T: Triple, report: ExceptionalSet) -> bool:
    G, H = T.G, T.H
    if len(report.E) != len(report.witnesses):
        return False
    members_ok = all(
        H.contains(gamma) and f1 in report.F and f2 in report.F and H.contains(G.product(f1, gamma, f2))
        for gamma, (f1, f2) in zip(report.E, report.witnesses)
    )
    if not members_ok or not report.complete:
        return members_ok

    exact = set()
    for f1 in report.F:
        for f2 in report.F:
            listed = _exact_candidates(T, f1, f2)
            if listed is None:
                return False
            exact |= listed
    return exact == set(report.E)


def _replay_action_witness(T: Triple, witness: ActionWitness) -> bool:
    A = T.G.base
    if not T.H.contains(witness.h) or A.identity in witness.E:
        return False
    return set(witness.E).isdisjoint(alpha(T, witness.h, a) for a in witness.E)


def _replay_fixed_point(T: Triple, point: FixedPoint) -> bool:
    return point.a != T.G.base.identity and all(alpha(T, s, point.a) == point.a for s in T.H.generators)


def _replay_closed_form(check: str) -> Replayer:
    def replay(T: Triple, _: Any) -> bool:
        rule = rule_for(T)
        return rule is not None and getattr(rule, check)(T) is True

    return replay


def _replay_violation(T: Triple, v: MalnormalViolation) -> bool:
    G, H = T.G, T.H
    return (
        not T.K.contains(v.g)
        and v.gamma != G.identity
        and H.contains(v.gamma)
        and H.contains(G.product(G.inv(v.g), v.gamma, v.g))
    )


def _replay_product(T: Triple, evidence: ProductEvidence) -> bool:
    if T.factors is None:
        return False
    factors_ok = all(replay(F, v) for F, v in zip(T.factors, evidence.factors))
    return factors_ok and all(verify_ss_witness(T, w) for w in evidence.witnesses)


def _replay_orbit(T: Triple, report: OrbitReport) -> bool:
    reps = [c.representative for c in report.elements]
    if not reps or not same_coset(T, reps[0], report.seed.representative):
        return False
    if not _distinct_cosets(T, reps):
        return False
    return _closed_under_h(T, reps) if report.status == FINITE else True


def _replay_inqn(T: Triple, g, verdict: InQN) -> bool:
    G, H = T.G, T.H
    if len(verdict.coset_reps) != len(verdict.cover):
        return False
    if any(not H.contains(u) or G.op(u, g) != c for u, c in zip(verdict.coset_reps, verdict.cover)):
        return False
    return _distinct_cosets(T, verdict.cover) and _closed_under_h(T, verdict.cover)


def _replay_index(T: Triple, g, verdict: IndexAtLeast) -> bool:
    G, H = T.G, T.H
    if verdict.n != len(verdict.coset_reps) or any(not H.contains(u) for u in verdict.coset_reps):
        return False
    return _distinct_cosets(T, [G.op(u, g) for u in verdict.coset_reps])


def _replay_qn(T: Triple, report: QNReport) -> bool:
    if isinstance(report.verdict, InQN):
        return _replay_inqn(T, report.g, report.verdict)
    if isinstance(report.verdict, IndexAtLeast):
        return _replay_index(T, report.g, report.verdict)
    return False


def _replay_intersection(T: Triple, report: IntersectionReport) -> bool:
    G, H = T.G, T.H
    if not all(H.contains(gamma) and H.contains(G.product(report.g, gamma, report.h)) for gamma in report.members):
        return False
    if not report.complete:
        return True
    exact = _exact_candidates(T, report.g, report.h)
    return exact is not None and exact == set(report.members)


def _replay_separation(T: Triple, witness: SeparationWitness) -> bool:
    G = T.G
    if witness.h == G.identity or not T.H.contains(witness.h):
        return False
    return not any(same_coset(T, y2, G.op(witness.h, y1)) for y1 in witness.reps for y2 in witness.reps)


def _replay_decay(T: Triple, profile: DecayProfile) -> bool:
    G, H = T.G, T.H
    for h, value in profile.samples:
        u = AlgebraElement.delta(G, h)
        if not H.contains(h) or norm2(cond_exp(convolve(convolve(profile.x, u), profile.y), H)) != value:
            return False
    nonzero = tuple(h for h, v in profile.samples if v != 0)
    return nonzero == tuple(profile.exceptional)


def _replay_counterexample(T: Triple, report: CounterexampleReport) -> bool:
    G = T.G
    if not report.F or report.F[0][0] != report.a0 or any(f[1] != G.acting.identity for f in report.F):
        return False
    orbit = {f[0] for f in report.F}
    if any(alpha(T, s, b) not in orbit for b in orbit for s in h_steps(T)):
        return False
    support = set(report.F) | {G.inv(f) for f in report.F}
    if report.x != AlgebraElement.from_terms(G, ((g, 1) for g in support)):
        return False
    checks = counterexample_checks(T, report.x)
    recorded = (report.selfadjoint, report.orthogonal_to_K, report.commutes_with_H_generators)
    exact = norm2(report.x)
    return all(checks) and checks == recorded and exact == report.norm2 and render_norm2(exact) == report.norm


def _replay_hypotheses(T: Triple, report: HypothesisReport) -> bool:
    both = report.normalizer_verdict.holds and report.ss_verdict.holds
    return (
        replay(T, report.normalizer_verdict)
        and replay(T, report.ss_verdict)
        and report.conclusion_licensed == both
    )


# Certificate kinds each status admits, per condition
HOLDS_KINDS: Dict[str, Tuple[type, ...]] = {
    SS: (CorpusEvidence, ProductEvidence),
    ST: (CorpusEvidence, MalnormalScan),
    MALNORMAL: (MalnormalScan,),
    NORMALIZER: (NormalizerProof,),
}
FAILS_KINDS: Dict[str, Tuple[type, ...]] = {
    SS: (RefutedWithin, ProductEvidence),
    ST: (StabilizerReport, CosetStabilizer),
    MALNORMAL: (MalnormalViolation,),
    NORMALIZER: (FixedPoint,),
}
RULE_CLAIMS = {
    SS: "ss_holds",
    ST: "st_holds",
    MALNORMAL: "malnormal",
    NORMALIZER: "normalizer_holds",
}


def _holds_consistently(T: Triple, verdict: Verdict, claim) -> bool:
    certificate = verdict.certificate
    if claim is not True:
        return False
    if isinstance(certificate, MalnormalScan) and verdict.condition == ST:
        return rule_for(T).malnormal(T) is True
    if isinstance(certificate, ProductEvidence):
        return all(v.holds for v in certificate.factors)
    if isinstance(certificate, CorpusEvidence) and verdict.condition == ST:
        return all(isinstance(c, ExceptionalSet) and c.complete for c in certificate.certificates)
    return True


def _fails_consistently(T: Triple, verdict: Verdict, claim) -> bool:
    certificate = verdict.certificate
    if claim is True:
        return False
    if isinstance(certificate, ProductEvidence):
        return any(v.fails for v in certificate.factors)
    if isinstance(certificate, StabilizerReport):
        return certificate.period is not None
    return True


def _replay_verdict(T: Triple, verdict: Verdict) -> bool:
    """
    The status must match the certificate kind and the closed-form claim
    before the certificate itself is replayed.
    """
    certificate = verdict.certificate
    if verdict.status == UNDETERMINED:
        return certificate is None
    if verdict.condition not in RULE_CLAIMS or certificate is None:
        return False

    rule = rule_for(T)
    if verdict.method == CLOSED_FORM and (rule is None or verdict.rule != rule.tag):
        return False
    claim = getattr(rule, RULE_CLAIMS[verdict.condition])(T) if rule else None

    if verdict.status == HOLDS:
        consistent = isinstance(certificate, HOLDS_KINDS[verdict.condition]) and _holds_consistently(
            T, verdict, claim
        )
    elif verdict.status == FAILS:
        consistent = isinstance(certificate, FAILS_KINDS[verdict.condition]) and _fails_consistently(
            T, verdict, claim
        )
    else:
        return False

    if not consistent:
        logger.warning(
            f"{verdict.condition} {verdict.status} on {T.name} does not match "
            f"a {type(certificate).__name__} certificate"
        )
        return False
    return replay(T, certificate)


REPLAYERS: Dict[type, Replayer] = {
    Verdict: _replay_verdict,
    Certified: lambda T, o: replay(T, o.certificate),
    RefutedWithin: _replay_refuted,
    Inconclusive: lambda T, o: o.partial is None or replay(T, o.partial),
    SSWitness: verify_ss_witness,
    ExceptionalSet: _replay_exceptional,
    StabilizerReport: verify_stabilizer_report,
    ActionWitness: _replay_action_witness,
    ActionOrbit: lambda T, o: o.status != FINITE
    or all(alpha(T, s, b) in set(o.elements) for b in o.elements for s in h_steps(T)),
    FixedPoint: _replay_fixed_point,
    NormalizerProof: _replay_closed_form("normalizer_holds"),
    CorpusEvidence: lambda T, e: all(replay(T, c) for c in e.certificates),
    CosetStabilizer: verify_coset_stabilizer,
    MalnormalViolation: _replay_violation,
    MalnormalScan: _replay_closed_form("malnormal"),
    ProductEvidence: _replay_product,
    OrbitReport: _replay_orbit,
    FiniteOrbits: lambda T, f: all(o.status == FINITE and _replay_orbit(T, o) for o in f.orbits),
    QNReport: _replay_qn,
    IntersectionReport: _replay_intersection,
    SeparationWitness: _replay_separation,
    DecayProfile: _replay_decay,
    CounterexampleReport: _replay_counterexample,
    HypothesisReport: _replay_hypotheses,
}


def replay(T: Triple, value: Any) -> bool:
    """Re-check one decoded certificate or outcome by direct computation"""
    replayer = REPLAYERS.get(type(value))
    if replayer is None:
        raise ReportSchemaError(f"No replay for {type(value).__name__}")
    ok = replayer(T, value)
    if not ok:
        logger.warning(f"Replay of {type(value).__name__} on {T.name} failed")
    return bool(ok)


# ============================================================================
# ENTRY POINT
# ============================================================================


def load_report(source: Union[str, Path, Dict[str, Any]]) -> Report:
    """
    Parse a report file (or an already-loaded dict).

    Raises:
        ReportSchemaError: On unreadable JSON, newer schema versions or missing fields
    """
    if isinstance(source, dict):
        data = source
    else:
        try:
            data = json.loads(Path(source).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise ReportSchemaError(f"Cannot read report {source}: {str(e)}")

    if not isinstance(data, dict):
        raise ReportSchemaError("A report must be a JSON object")
    version = data.get("schema_version")
    if not isinstance(version, int):
        raise ReportSchemaError("Report has no integer schema_version")
    if version > SCHEMA_VERSION:
        raise ReportSchemaError(
            f"Report schema_version {version} is newer than supported version {SCHEMA_VERSION}"
        )

    try:
        return Report.model_validate(data)
    except ValidationError as e:
        raise ReportSchemaError(f"Malformed report: {str(e)}")


def verify_report(source: Union[str, Path, Dict[str, Any]]) -> bool:
    """
    True iff every certificate in the report replays.

    Raises:
        ReportSchemaError: If the report does not follow the schema
        UnknownInstanceError: If the report names an unregistered instance
    """
    report = load_report(source)
    if report.outcome.get("kind") in PLAIN_KINDS:
        return True
    if report.instance is None:
        raise ReportSchemaError(f"Report for {report.command!r} names no instance")

    T = build_instance(report.instance)
    outcome = Codec(T).decode(report.outcome)
    valid = replay(T, outcome)
    logger.info(f"{'✓' if valid else '✗'} Verified {report.command} on {report.instance}: {valid}")
    return valid
