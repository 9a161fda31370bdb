"""JSON report schema and the codec for certificates and outcomes"""

import dataclasses
import json
import logging
from fractions import Fraction
from typing import Any, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from ..algebra.element import AlgebraElement
from ..certs.actions import (
    ActionOrbit,
    ActionWitness,
    FixedPoint,
    NormalizerProof,
    StabilizerReport,
)
from ..certs.decide import (
    CorpusEvidence,
    CosetStabilizer,
    MalnormalScan,
    MalnormalViolation,
    ProductEvidence,
)
from ..certs.verdict import Verdict
from ..certs.witnesses import ExceptionalSet, SSWitness
from ..dynamics.cosets import (
    CosetId,
    FiniteOrbits,
    IndexAtLeast,
    InQN,
    IntersectionReport,
    OrbitReport,
    QNReport,
    SeparationWitness,
)
from ..experiments.counterexample import CounterexampleReport, HypothesisReport
from ..experiments.profiles import DecayProfile
from ..groups.core import (
    Budget,
    Certified,
    Inconclusive,
    InvalidInputError,
    RefutedWithin,
    Triple,
)

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1

# Outcome kinds that carry no certificate to replay
PLAIN_KINDS = ("InstanceList", "ReproSummary")


class ReportSchemaError(InvalidInputError):
    """Raised when a report does not follow this schema version"""

    pass


class Report(BaseModel):
    """
    One command run.

    ``timing`` is kept out of the serialized body so that repeated runs with
    the same arguments produce identical bytes.
    """

    model_config = ConfigDict(frozen=True)

    schema_version: int = SCHEMA_VERSION
    instance: Optional[str] = None
    command: str
    budget: Optional[Dict[str, int]] = None
    arguments: Dict[str, Any] = Field(default_factory=dict)
    outcome: Dict[str, Any]
    timing: Dict[str, float] = Field(default_factory=dict, exclude=True)

    def body_json(self) -> str:
        return json.dumps(self.model_dump(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def budget_json(budget: Optional[Budget]) -> Optional[Dict[str, int]]:
    if budget is None:
        return None
    return {"radius": budget.radius, "element_cap": budget.element_cap}


# ============================================================================
# FIELD LAYOUTS
# ============================================================================
#
# Each reportable type maps its constructor fields to a layout:
#   G, A        element of G or of the base group A (semidirect triples)
#   G?, G*, A*  optional element, element tuple
#   obj, obj*   nested reportable value (or None), tuple of them
#   raw, raw*   plain JSON value, tuple of plain values
#   budget, alg, samples, factor-verdicts

LAYOUTS: Dict[type, Dict[str, str]] = {
    Certified: {"certificate": "obj"},
    RefutedWithin: {"budget": "budget", "evidence": "G*", "rule": "raw"},
    Inconclusive: {"budget": "budget", "partial": "obj", "note": "raw"},
    Verdict: {
        "condition": "raw",
        "status": "raw",
        "method": "raw",
        "certificate": "obj",
        "rule": "raw",
        "note": "raw",
        "budget": "budget",
    },
    SSWitness: {"F": "G*", "h": "G", "g": "G?"},
    ExceptionalSet: {
        "F": "G*",
        "E": "G*",
        "witnesses": "G**",
        "ball_checked": "raw",
        "complete": "raw",
    },
    StabilizerReport: {"a": "A", "members": "G*", "complete": "raw", "period": "raw"},
    ActionWitness: {"E": "A*", "h": "G"},
    ActionOrbit: {"a": "A", "elements": "A*", "status": "raw"},
    FixedPoint: {"a": "A"},
    NormalizerProof: {"scanned": "raw", "proof": "raw"},
    CorpusEvidence: {"certificates": "obj*", "unresolved": "raw"},
    CosetStabilizer: {"g": "G", "s": "G", "checked": "raw"},
    MalnormalViolation: {"g": "G", "gamma": "G"},
    MalnormalScan: {"scanned": "raw", "largest_intersection": "raw"},
    ProductEvidence: {"factors": "factor-verdicts", "witnesses": "obj*"},
    CosetId: {"representative": "G", "via": "G?"},
    OrbitReport: {"seed": "obj", "elements": "obj*", "status": "raw", "budget": "budget"},
    FiniteOrbits: {"orbits": "obj*", "scanned_radius": "raw"},
    IntersectionReport: {
        "g": "G",
        "h": "G",
        "members": "G*",
        "complete": "raw",
        "radius": "raw",
    },
    InQN: {"coset_reps": "G*", "cover": "G*"},
    IndexAtLeast: {"n": "raw", "coset_reps": "G*"},
    QNReport: {"g": "G", "verdict": "obj", "budget": "budget"},
    SeparationWitness: {"reps": "G*", "h": "G"},
    DecayProfile: {"x": "alg", "y": "alg", "samples": "samples", "exceptional": "G*"},
    CounterexampleReport: {
        "instance": "raw",
        "a0": "A",
        "F": "G*",
        "x": "alg",
        "selfadjoint": "raw",
        "orthogonal_to_K": "raw",
        "commutes_with_H_generators": "raw",
        "norm2": "raw",
        "norm": "raw",
    },
    HypothesisReport: {
        "instance": "raw",
        "normalizer_verdict": "obj",
        "ss_verdict": "obj",
        "conclusion_licensed": "raw",
        "caveat": "raw",
        "notes": "raw*",
    },
}

KINDS: Dict[str, type] = {cls.__name__: cls for cls in LAYOUTS}


class Codec:
    """Encode and decode reportable values relative to one triple"""

    def __init__(self, T: Triple):
        self.T = T

    @property
    def A(self):
        base = getattr(self.T.G, "base", None)
        if base is None:
            raise ReportSchemaError(f"{self.T.name} has no base group A")
        return base

    # ------------------------------------------------------------------
    # Encoding
    # ------------------------------------------------------------------

    def encode(self, value: Any) -> Any:
        if value is None:
            return None
        layout = LAYOUTS.get(type(value))
        if layout is None:
            raise TypeError(f"{type(value).__name__} is not a reportable type")
        out = {"kind": type(value).__name__}
        for name, kind in layout.items():
            out[name] = self._encode_field(getattr(value, name), kind)
        return out

    def _encode_field(self, value: Any, kind: str) -> Any:
        G = self.T.G
        if kind == "raw":
            return value
        if kind == "raw*":
            return list(value)
        if kind == "G":
            return G.to_json(value)
        if kind == "G?":
            return None if value is None else G.to_json(value)
        if kind == "G*":
            return [G.to_json(g) for g in value]
        if kind == "G**":
            return [[G.to_json(p), G.to_json(q)] for p, q in value]
        if kind == "A":
            return self.A.to_json(value)
        if kind == "A*":
            return [self.A.to_json(a) for a in value]
        if kind == "obj":
            return self.encode(value)
        if kind == "obj*":
            return [self.encode(v) for v in value]
        if kind == "budget":
            return budget_json(value)
        if kind == "alg":
            return value.to_json()
        if kind == "samples":
            return [[G.to_json(h), [v.numerator, v.denominator]] for h, v in value]
        if kind == "factor-verdicts":
            return [Codec(T).encode(v) for T, v in zip(self.T.factors, value)]
        raise TypeError(f"Unknown field layout {kind!r}")

    # ------------------------------------------------------------------
    # Decoding
    # ------------------------------------------------------------------

    def decode(self, obj: Any) -> Any:
        """
        Raises:
            ReportSchemaError: On unknown kinds, missing fields or bad elements
        """
        if obj is None:
            return None
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ReportSchemaError(f"Expected a reportable object, got {obj!r}")
        cls = KINDS.get(obj["kind"])
        if cls is None:
            raise ReportSchemaError(f"Unknown kind {obj['kind']!r}")

        kwargs = {}
        for name, kind in LAYOUTS[cls].items():
            if name not in obj:
                raise ReportSchemaError(f"{obj['kind']} is missing field {name!r}")
            try:
                kwargs[name] = self._decode_field(obj[name], kind)
            except ReportSchemaError:
                raise
            except (InvalidInputError, TypeError, ValueError, KeyError) as e:
                raise ReportSchemaError(f"Bad field {name!r} in {obj['kind']}: {str(e)}")

        init_names = {f.name for f in dataclasses.fields(cls) if f.init}
        return cls(**{k: v for k, v in kwargs.items() if k in init_names})

    def _decode_field(self, value: Any, kind: str) -> Any:
        G = self.T.G
        if kind == "raw":
            return value
        if kind == "raw*":
            return tuple(value)
        if kind == "G":
            return G.from_json(value)
        if kind == "G?":
            return None if value is None else G.from_json(value)
        if kind == "G*":
            return tuple(G.from_json(g) for g in value)
        if kind == "G**":
            return tuple((G.from_json(p), G.from_json(q)) for p, q in value)
        if kind == "A":
            return self.A.from_json(value)
        if kind == "A*":
            return tuple(self.A.from_json(a) for a in value)
        if kind == "obj":
            return self.decode(value)
        if kind == "obj*":
            return tuple(self.decode(v) for v in value)
        if kind == "budget":
            return None if value is None else Budget(**value)
        if kind == "alg":
            return AlgebraElement.from_json(G, value)
        if kind == "samples":
            return tuple((G.from_json(h), Fraction(*v)) for h, v in value)
        if kind == "factor-verdicts":
            if self.T.factors is None or len(value) != 2:
                raise ReportSchemaError(f"{self.T.name} is not a product of two triples")
            return tuple(Codec(T).decode(v) for T, v in zip(self.T.factors, value))
        raise ReportSchemaError(f"Unknown field layout {kind!r}")
