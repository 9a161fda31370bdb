"""Finitely supported elements x = Σ x(g)λ_g of the group algebra"""

import json
import logging
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Tuple

from ..groups.core import Group, GroupElement, InvalidInputError, Subgroup
from .coefficients import ONE, ZERO, Coefficient, Scalar

logger = logging.getLogger(__name__)


class AlgebraElement:
    """
    A finitely supported map G → Gaussian rationals.

    No stored coefficient is zero, so equality of elements is equality of
    their coefficient maps.
    """

    __slots__ = ("group", "_coefficients")

    def __init__(self, group: Group, coefficients: Dict[GroupElement, Coefficient] = None):
        self.group = group
        self._coefficients = {
            g: c for g, c in (coefficients or {}).items() if not c.is_zero
        }

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, group: Group) -> "AlgebraElement":
        return cls(group)

    @classmethod
    def delta(cls, group: Group, g: GroupElement, c: Scalar = ONE) -> "AlgebraElement":
        """c·λ_g"""
        return cls(group, {g: Coefficient.of(c)})

    @classmethod
    def from_terms(
        cls, group: Group, terms: Iterable[Tuple[GroupElement, Scalar]]
    ) -> "AlgebraElement":
        """Sum of c·λ_g over the given terms; repeated g accumulate"""
        coefficients: Dict[GroupElement, Coefficient] = {}
        for g, c in terms:
            coefficients[g] = coefficients.get(g, ZERO) + Coefficient.of(c)
        return cls(group, coefficients)

    # ------------------------------------------------------------------
    # Access
    # ------------------------------------------------------------------

    def coefficient(self, g: GroupElement) -> Coefficient:
        """x(g)"""
        return self._coefficients.get(g, ZERO)

    @property
    def support(self) -> Tuple[GroupElement, ...]:
        return tuple(self._coefficients)

    def items(self) -> Iterator[Tuple[GroupElement, Coefficient]]:
        return iter(self._coefficients.items())

    @property
    def is_zero(self) -> bool:
        return not self._coefficients

    def __len__(self) -> int:
        return len(self._coefficients)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.group is other.group and self._coefficients == other._coefficients

    def __hash__(self) -> int:
        return hash(frozenset(self._coefficients.items()))

    def _require_same_group(self, other: "AlgebraElement") -> None:
        if other.group is not self.group:
            raise InvalidInputError(
                f"Elements live in different groups: {self.group.name} and {other.group.name}"
            )

    # ------------------------------------------------------------------
    # Linear structure
    # ------------------------------------------------------------------

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._require_same_group(other)
        merged = dict(self._coefficients)
        for g, c in other.items():
            merged[g] = merged.get(g, ZERO) + c
        return AlgebraElement(self.group, merged)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.group, {g: -c for g, c in self.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c: Scalar) -> "AlgebraElement":
        c = Coefficient.of(c)
        return AlgebraElement(self.group, {g: c * v for g, v in self.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return convolve(self, other)

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def sorted_items(self) -> List[Tuple[GroupElement, Coefficient]]:
        """Terms in a canonical order (by the JSON form of the element)"""
        return sorted(
            self.items(),
            key=lambda item: json.dumps(self.group.to_json(item[0]), sort_keys=True),
        )

    def to_json(self) -> List[Any]:
        """[[element, [re_num, re_den], [im_num, im_den]], ...]"""
        return [
            [self.group.to_json(g)] + c.to_json() for g, c in self.sorted_items()
        ]

    @classmethod
    def from_json(cls, group: Group, obj: Any) -> "AlgebraElement":
        if not isinstance(obj, list):
            raise InvalidInputError(f"Algebra element must be a list of terms, got {obj!r}")
        terms = []
        for term in obj:
            if not isinstance(term, list) or len(term) != 3:
                raise InvalidInputError(f"Term must be [element, re, im], got {term!r}")
            terms.append((group.from_json(term[0]), Coefficient.from_json(term[1:])))
        return cls.from_terms(group, terms)

    def __repr__(self) -> str:
        if self.is_zero:
            return "0"
        return " + ".join(f"({c})λ[{self.group.format(g)}]" for g, c in self.sorted_items())


def convolve(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """(x·y)(g) = Σ_{ab=g} x(a)y(b)"""
    x._require_same_group(y)
    G = x.group
    out: Dict[GroupElement, Coefficient] = {}
    for a, ca in x.items():
        for b, cb in y.items():
            g = G.op(a, b)
            out[g] = out.get(g, ZERO) + ca * cb
    return AlgebraElement(G, out)


def adjoint(x: AlgebraElement) -> AlgebraElement:
    """x*(g) = conj(x(g⁻¹))"""
    G = x.group
    return AlgebraElement(G, {G.inv(g): c.conjugate() for g, c in x.items()})


def trace(x: AlgebraElement) -> Coefficient:
    """τ(x) = x(e)"""
    return x.coefficient(x.group.identity)


def norm2(x: AlgebraElement) -> Fraction:
    """‖x‖₂² = Σ|x(g)|², exact"""
    return sum((c.abs2() for _, c in x.items()), Fraction(0))


def render_norm2(value: Fraction, digits: int = 6) -> str:
    """Decimal rendering of ‖x‖₂ from its exact square (reports only)"""
    return f"{float(value) ** 0.5:.{digits}f}"


def cond_exp(x: AlgebraElement, S: Subgroup) -> AlgebraElement:
    """E_{L(S)}(x): restriction of the Fourier series to S"""
    if S.parent is not x.group:
        raise InvalidInputError(f"{S.name} is not a subgroup of {x.group.name}")
    return AlgebraElement(x.group, {g: c for g, c in x.items() if S.contains(g)})
