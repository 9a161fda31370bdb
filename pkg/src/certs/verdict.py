"""Verdicts for mixing conditions"""

from dataclasses import dataclass
from typing import Any, Optional

from ..groups.core import Budget

SS = "SS"
ST = "ST"
WSS = "wSS"
MALNORMAL = "Malnormal"
NORMALIZER = "NormalizerEqualsK"

HOLDS = "Holds"
FAILS = "Fails"
UNDETERMINED = "Undetermined"

CLOSED_FORM = "ClosedForm"
GENERIC = "GenericSearch"


@dataclass(frozen=True)
class Verdict:
    """
    Outcome of a condition check.

    Holds and Fails always carry a replayable ``certificate``; ClosedForm
    verdicts name the rule they applied.
    """

    condition: str
    status: str
    method: str
    certificate: Any = None
    rule: str = ""
    note: str = ""
    budget: Optional[Budget] = None

    @property
    def holds(self) -> bool:
        return self.status == HOLDS

    @property
    def fails(self) -> bool:
        return self.status == FAILS
