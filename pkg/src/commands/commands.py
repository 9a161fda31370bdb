"""Command handlers; each returns a Report for the CLI to print or save"""

import json
import logging
import time
from pathlib import Path
from typing import Any, Callable, Dict, Optional, Tuple

from ..certs.actions import action_orbit, normalizer_check, ss_via_action, st_via_action
from ..certs.decide import decide, malnormality_scan
from ..certs.verdict import FAILS, GENERIC, SS, ST, Verdict
from ..certs.witnesses import ss_witness, st_exceptional, wss_witness
from ..dynamics.cosets import (
    FiniteOrbits,
    coset_orbit,
    fixed_vector_scan,
    intersection_set,
    qn_membership,
    separating_element,
)
from ..experiments.counterexample import build_counterexample, corollary_hypotheses
from ..experiments.profiles import decay_profile, free_product_mixing_check
from ..groups.constructions import is_semidirect_triple
from ..groups.core import Budget, GroupElement, InvalidInputError, RefutedWithin, Triple
from ..groups.free_product import FreeProduct
from ..instances.registry import build_instance, list_instances
from ..reports.literals import (
    LiteralParseError,
    parse_algebra_element,
    parse_element,
    parse_element_set,
)
from ..reports.schema import Codec, Report, budget_json
from ..reports.verify import verify_report

logger = logging.getLogger(__name__)

CONDITIONS = ("ss", "st", "wss", "malnormal", "normalizer")


def _report(
    instance: Optional[str],
    command: str,
    budget: Optional[Budget],
    arguments: Dict[str, Any],
    outcome: Dict[str, Any],
    started: float,
) -> Report:
    return Report(
        instance=instance,
        command=command,
        budget=budget_json(budget),
        arguments={k: v for k, v in arguments.items() if v is not None},
        outcome=outcome,
        timing={"seconds": round(time.perf_counter() - started, 6)},
    )


def _parse_set(T: Triple, text: str) -> Tuple[str, Tuple[GroupElement, ...]]:
    """
    Parse ``--set`` as G-literals, falling back to A-literals on semidirect
    triples.  Returns ("G" | "A", elements).
    """
    try:
        return "G", parse_element_set(T.G, text)
    except LiteralParseError:
        if not is_semidirect_triple(T):
            raise
        logger.debug(f"--set is not a set of {T.G.name} literals; reading it in {T.G.base.name}")
        return "A", parse_element_set(T.G.base, text)


def _refuted_as_verdict(condition: str, outcome: Any, budget: Budget) -> Any:
    """A refuted F disproves the condition outright; other outcomes pass through"""
    if isinstance(outcome, RefutedWithin):
        return Verdict(condition, FAILS, GENERIC, outcome, rule=outcome.rule, budget=budget)
    return outcome


# ============================================================================
# COMMANDS
# ============================================================================


def instances(**kwargs) -> Report:
    """List the built-in triples"""
    started = time.perf_counter()
    outcome = {
        "kind": "InstanceList",
        "instances": [spec.model_dump() for spec in list_instances()],
    }
    return _report(None, "instances", None, {}, outcome, started)


def check(
    instance: str,
    condition: str,
    budget: Budget,
    set: Optional[str] = None,
    g: Optional[str] = None,
    h: Optional[str] = None,
    **kwargs,
) -> Report:
    """
    Check one condition on a built-in triple.

    Without ``set``, ss/st are decided for the triple.  With ``set``, ss
    searches a witness for that F (or, for A-literals, for E ⊆ A*) and st
    computes the exceptional set (or the stabilizer of a single a ∈ A*).
    ``st`` with ``g`` and ``h`` computes E(g,h).
    """
    started = time.perf_counter()
    condition = condition.lower()
    if condition not in CONDITIONS:
        raise InvalidInputError(f"Unknown condition {condition!r}; expected one of {list(CONDITIONS)}")
    T = build_instance(instance)
    arguments = {"condition": condition, "set": set, "g": g, "h": h}

    if condition == "ss":
        if set is None:
            result = decide(T, SS, budget)
        else:
            space, F = _parse_set(T, set)
            search = ss_via_action if space == "A" else ss_witness
            result = _refuted_as_verdict(SS, search(T, F, budget), budget)
    elif condition == "st":
        if g is not None and h is not None:
            result = intersection_set(T, parse_element(T.G, g), parse_element(T.G, h), budget)
        elif set is None:
            result = decide(T, ST, budget)
        else:
            space, F = _parse_set(T, set)
            if space == "A":
                if len(F) != 1:
                    raise InvalidInputError("A stabilizer check takes exactly one element of A*")
                result = st_via_action(T, F[0], budget)
            else:
                result = st_exceptional(T, F, budget)
    elif condition == "wss":
        if set is None or g is None:
            raise InvalidInputError("check wss needs --set and --g")
        result = wss_witness(T, parse_element_set(T.G, set), parse_element(T.G, g), budget)
    elif condition == "malnormal":
        result = malnormality_scan(T, budget)
    else:
        result = normalizer_check(T, budget)

    return _report(instance, f"check {condition}", budget, arguments, Codec(T).encode(result), started)


def qn(instance: str, g: str, budget: Budget, **kwargs) -> Report:
    """One-sided quasi-normalizer membership of g"""
    started = time.perf_counter()
    T = build_instance(instance)
    result = qn_membership(T, parse_element(T.G, g), budget)
    return _report(instance, "qn", budget, {"g": g}, Codec(T).encode(result), started)


def orbit(
    instance: str,
    budget: Budget,
    g: Optional[str] = None,
    a: Optional[str] = None,
    reps: Optional[str] = None,
    **kwargs,
) -> Report:
    """
    Coset orbit of gH, H-orbit of a ∈ A, a separating h for ``reps``, or
    (with no element given) the finite orbits among nearby cosets.
    """
    started = time.perf_counter()
    T = build_instance(instance)
    if g is not None:
        result = coset_orbit(T, parse_element(T.G, g), budget)
    elif a is not None:
        if not is_semidirect_triple(T):
            raise InvalidInputError(f"{instance} is not a semidirect triple; --a needs a base group")
        result = action_orbit(T, parse_element(T.G.base, a), budget)
    elif reps is not None:
        result = separating_element(T, parse_element_set(T.G, reps), budget)
    else:
        result = FiniteOrbits(tuple(report for _, report in fixed_vector_scan(T, budget)), budget.radius)
    arguments = {"g": g, "a": a, "reps": reps}
    return _report(instance, "orbit", budget, arguments, Codec(T).encode(result), started)


def decay(
    instance: str,
    x: str,
    y: str,
    budget: Budget,
    tsv: Optional[str] = None,
    **kwargs,
) -> Report:
    """Decay profile of ‖E_{L(H)}(xλ_h y)‖₂² over ball_H; optional TSV export"""
    started = time.perf_counter()
    T = build_instance(instance)
    xe = parse_algebra_element(T.G, x)
    ye = parse_algebra_element(T.G, y)
    if isinstance(T.G, FreeProduct):
        profile = free_product_mixing_check(T, xe, ye, budget)
    else:
        profile = decay_profile(T, xe, ye, budget)
    if tsv:
        Path(tsv).write_text(profile.to_tsv(), encoding="utf-8")
        logger.info(f"Wrote profile to {tsv}")
    return _report(instance, "decay", budget, {"x": x, "y": y}, Codec(T).encode(profile), started)


def counterexample(instance: str, a0: str, budget: Budget, **kwargs) -> Report:
    """Self-adjoint element commuting with λ(H) from a finite orbit of a₀"""
    started = time.perf_counter()
    T = build_instance(instance)
    if not is_semidirect_triple(T):
        raise InvalidInputError(f"{instance} is not a semidirect triple")
    result = build_counterexample(T, parse_element(T.G.base, a0), budget, instance)
    return _report(instance, "counterexample", budget, {"a0": a0}, Codec(T).encode(result), started)


def corollary(instance: str, budget: Budget, **kwargs) -> Report:
    """Normalizer and (SS) hypotheses for a semidirect triple"""
    started = time.perf_counter()
    T = build_instance(instance)
    result = corollary_hypotheses(T, budget, instance)
    return _report(instance, "corollary", budget, {}, Codec(T).encode(result), started)


# ============================================================================
# REPRODUCTION SUITE
# ============================================================================

# (report name, command, instance, radius, extra arguments)
REPRO_SUITE: Tuple[Tuple[str, str, Optional[str], int, Dict[str, str]], ...] = (
    ("instances", "instances", None, 1, {}),
    ("check-st-wreath-z2-z", "check", "wreath-z2-z", 6, {"condition": "st"}),
    ("check-ss-wreath-z2-z", "check", "wreath-z2-z", 4, {"condition": "ss"}),
    ("check-st-wreath-z2-z-set", "check", "wreath-z2-z", 6, {"condition": "st", "set": "({0:1},0);({0:1,3:1},0)"}),
    ("check-ss-rotation4", "check", "rotation4", 4, {"condition": "ss"}),
    ("check-ss-rotation4-set", "check", "rotation4", 4, {"condition": "ss", "set": "(1,0);(0,1);(-1,0);(0,-1)"}),
    ("check-st-rotation4", "check", "rotation4", 4, {"condition": "st"}),
    ("check-st-rotation4-stabilizer", "check", "rotation4", 8, {"condition": "st", "set": "(1,0)"}),
    ("check-wss-rotation4", "check", "rotation4", 4, {"condition": "wss", "set": "((1,0),0)", "g": "((1,0),0)"}),
    ("check-malnormal-rotation4", "check", "rotation4", 4, {"condition": "malnormal"}),
    ("check-normalizer-rotation4", "check", "rotation4", 4, {"condition": "normalizer"}),
    ("check-normalizer-trivial-action", "check", "trivial-action", 4, {"condition": "normalizer"}),
    ("check-ss-wreath-z2-zmod3", "check", "wreath-z2-zmod3", 4, {"condition": "ss"}),
    ("check-st-wreath-z2-zmod3", "check", "wreath-z2-zmod3", 4, {"condition": "st"}),
    ("check-normalizer-wreath-z2-zmod3", "check", "wreath-z2-zmod3", 4, {"condition": "normalizer"}),
    ("check-ss-free-zz", "check", "free-zz", 4, {"condition": "ss"}),
    ("check-st-free-zz", "check", "free-zz", 4, {"condition": "st"}),
    ("check-st-free-zz-set", "check", "free-zz", 6, {"condition": "st", "set": "b^-1;b"}),
    ("check-malnormal-free-zz", "check", "free-zz", 3, {"condition": "malnormal"}),
    ("check-st-f2-cyclic", "check", "f2-cyclic", 3, {"condition": "st"}),
    ("check-ss-z2-line", "check", "z2-line", 3, {"condition": "ss"}),
    ("check-st-z2-line", "check", "z2-line", 3, {"condition": "st"}),
    ("check-ss-prod-wreath2", "check", "prod-wreath2", 3, {"condition": "ss"}),
    ("check-st-prod-wreath2", "check", "prod-wreath2", 3, {"condition": "st"}),
    ("qn-free-zz-b", "qn", "free-zz", 6, {"g": "b"}),
    ("qn-free-zz-a3", "qn", "free-zz", 6, {"g": "a^3"}),
    ("qn-z2-line", "qn", "z2-line", 3, {"g": "(1,1)"}),
    ("orbit-rotation4", "orbit", "rotation4", 4, {"g": "((1,0),0)"}),
    ("orbit-rotation4-finite", "orbit", "rotation4", 2, {}),
    ("orbit-wreath-z2-z-separate", "orbit", "wreath-z2-z", 4, {"reps": "({0:1},0);({1:1},0)"}),
    ("decay-free-zz", "decay", "free-zz", 20, {"x": "b^-1", "y": "b"}),
    ("decay-rotation4", "decay", "rotation4", 20, {"x": "((1,0),0)", "y": "((1,0),0)"}),
    ("decay-wreath-z2-z", "decay", "wreath-z2-z", 8, {"x": "({0:1},0)", "y": "({0:1},0)"}),
    ("counterexample-rotation4", "counterexample", "rotation4", 4, {"a0": "1,0"}),
    ("counterexample-rotation4-diagonal", "counterexample", "rotation4", 4, {"a0": "1,1"}),
    ("corollary-wreath-z2-z", "corollary", "wreath-z2-z", 4, {}),
    ("corollary-rotation4", "corollary", "rotation4", 4, {}),
    ("corollary-trivial-action", "corollary", "trivial-action", 4, {}),
)


def repro(out: str, budget: Budget, **kwargs) -> Report:
    """
    Run the reproduction suite, write one JSON report per entry (plus TSV
    profiles) under ``out`` and verify every report that was written.

    Timings go to ``timings.json``; every other file is deterministic.
    """
    started = time.perf_counter()
    target = Path(out)
    target.mkdir(parents=True, exist_ok=True)

    timings = {}
    summary = []
    for name, command, instance, radius, extra in REPRO_SUITE:
        entry_budget = Budget(radius=radius, element_cap=budget.element_cap)
        handler = COMMANDS_REGISTRY[command]
        arguments = dict(extra)
        if command == "decay":
            arguments["tsv"] = str(target / f"{name}.tsv")
        report = handler(instance=instance, budget=entry_budget, **arguments)

        path = target / f"{name}.json"
        path.write_text(report.body_json(), encoding="utf-8")
        timings[name] = report.timing.get("seconds", 0.0)
        valid = verify_report(path)
        summary.append({"name": name, "valid": valid})
        logger.info(f"{'✓' if valid else '✗'} {name}")

    (target / "timings.json").write_text(json.dumps(timings, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    outcome = {"kind": "ReproSummary", "reports": summary, "all_valid": all(s["valid"] for s in summary)}
    return _report(None, "repro", None, {"out": out}, outcome, started)


def verify(report: str, **kwargs) -> Dict[str, Any]:
    """Replay the certificates of a saved report"""
    return {"valid": verify_report(report)}


COMMANDS_REGISTRY: Dict[str, Callable[..., Any]] = {
    # Listings
    "instances": instances,
    # Checks
    "check": check,
    "qn": qn,
    "orbit": orbit,
    # Experiments
    "decay": decay,
    "counterexample": counterexample,
    "corollary": corollary,
    # Reports
    "verify": verify,
    "repro": repro,
}
