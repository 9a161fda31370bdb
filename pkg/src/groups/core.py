"""Computable-group abstraction: elements, subgroups, triples and budgets"""

import json
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Generic,
    Hashable,
    Iterable,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

from pydantic import BaseModel, ConfigDict, Field

from ..config import config
from .cache import BallCache

logger = logging.getLogger(__name__)

# Elements are immutable, hashable normal forms; equality of elements is
# equality of normal forms.
GroupElement = Hashable

C = TypeVar("C")


class InvalidInputError(ValueError):
    """Raised when caller input violates a documented precondition"""

    pass


class BudgetExceededError(Exception):
    """Raised when an enumeration needs more elements than its cap allows"""

    pass


class InternalConsistencyError(AssertionError):
    """Raised when an exact identity or a certificate replay fails"""

    pass


class Budget(BaseModel):
    """Search budget: word-length radius plus a cap on enumerated elements"""

    model_config = ConfigDict(frozen=True)

    radius: int = Field(..., gt=0, description="Word-length radius of scanned balls")
    element_cap: int = Field(
        default_factory=lambda: config.MAX_ELEMENTS,
        gt=0,
        description="Maximum number of elements a single enumeration may produce",
    )


def word_ball(
    identity: GroupElement,
    steps: Sequence[GroupElement],
    op: Callable[[GroupElement, GroupElement], GroupElement],
    radius: int,
    element_cap: int,
    label: str = "group",
) -> Tuple[GroupElement, ...]:
    """
    Enumerate the word ball of the given radius breadth-first.

    Layer n holds the elements first reached by words of length n; inside a
    layer the order is discovery order (previous layer times ``steps``).

    Raises:
        BudgetExceededError: If more than ``element_cap`` elements are produced
    """
    if radius < 0:
        raise InvalidInputError(f"Radius must be >= 0, got {radius}")

    seen = {identity}
    order = [identity]
    frontier = [identity]

    for _ in range(radius):
        next_frontier = []
        for g in frontier:
            for s in steps:
                x = op(g, s)
                if x in seen:
                    continue
                seen.add(x)
                order.append(x)
                next_frontier.append(x)
                if len(order) > element_cap:
                    raise BudgetExceededError(
                        f"Ball of radius {radius} in {label} exceeds element cap {element_cap}"
                    )
        if not next_frontier:
            break
        frontier = next_frontier

    return tuple(order)


class Group(ABC):
    """
    A computable group given by normal forms and a finite generating list.

    Subclasses implement ``op`` and ``inv``; the ball enumerator, powers,
    conjugation and literal handling are shared.
    """

    def __init__(
        self,
        name: str,
        identity: GroupElement,
        generators: Iterable[GroupElement],
        cache_size: Optional[int] = None,
    ):
        self.name = name
        self.identity = identity
        self.generators: Tuple[GroupElement, ...] = tuple(generators)
        self._cache = BallCache(cache_size or config.BALL_CACHE_SIZE)

    @abstractmethod
    def op(self, g: GroupElement, h: GroupElement) -> GroupElement:
        """Group product g·h"""

    @abstractmethod
    def inv(self, g: GroupElement) -> GroupElement:
        """Group inverse g⁻¹"""

    def steps(self, radius: int) -> Tuple[GroupElement, ...]:
        """Generators each followed by its inverse (involutions listed once)"""
        out = []
        for s in self.generators:
            for t in (s, self.inv(s)):
                if t != self.identity and t not in out:
                    out.append(t)
        return tuple(out)

    def ball(
        self, radius: int, element_cap: Optional[int] = None
    ) -> Tuple[GroupElement, ...]:
        """
        Word ball of the given radius in deterministic breadth-first order.

        Args:
            radius: Word length bound (>= 0)
            element_cap: Maximum number of elements (defaults to config)

        Returns:
            Tuple of distinct elements, identity first

        Raises:
            BudgetExceededError: If the ball is larger than ``element_cap``
        """
        cap = element_cap or config.MAX_ELEMENTS
        cached = self._cache.get(radius)
        if cached is not None:
            if len(cached) > cap:
                raise BudgetExceededError(
                    f"Ball of radius {radius} in {self.name} exceeds element cap {cap}"
                )
            return cached

        ball = word_ball(
            self.identity, self.steps(radius), self.op, radius, cap, label=self.name
        )
        self._cache.set(radius, ball)
        logger.debug(f"Enumerated ball of radius {radius} in {self.name}: {len(ball)} elements")
        return ball

    def cache_stats(self) -> Dict[str, Any]:
        """Ball cache statistics for debug logging"""
        return self._cache.stats()

    def pow(self, g: GroupElement, n: int) -> GroupElement:
        """g to the n-th power by repeated squaring"""
        if n < 0:
            return self.pow(self.inv(g), -n)
        result = self.identity
        base = g
        while n:
            if n & 1:
                result = self.op(result, base)
            base = self.op(base, base)
            n >>= 1
        return result

    def conjugate(self, g: GroupElement, x: GroupElement) -> GroupElement:
        """g·x·g⁻¹"""
        return self.op(self.op(g, x), self.inv(g))

    def product(self, *elements: GroupElement) -> GroupElement:
        """Left-to-right product of the given elements"""
        result = self.identity
        for g in elements:
            result = self.op(result, g)
        return result

    # ------------------------------------------------------------------
    # Literals and JSON
    # ------------------------------------------------------------------

    def to_json(self, g: GroupElement) -> Any:
        """JSON-ready form of an element (integers and nested lists)"""
        return g

    def from_json(self, obj: Any) -> GroupElement:
        """Rebuild an element from its JSON form"""
        return obj

    def format(self, g: GroupElement) -> str:
        """Text literal of an element"""
        return json.dumps(self.to_json(g), separators=(",", ":"))

    def parse(self, text: str) -> GroupElement:
        """
        Parse a text literal (Python-style integers, tuples and dicts).

        Raises:
            LiteralParseError: If the literal is malformed
        """
        from ..reports.literals import parse_python_literal

        return parse_python_literal(self, text)

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"


def enumerate_ball(
    G: Group, radius: int, element_cap: Optional[int] = None
) -> Tuple[GroupElement, ...]:
    """Word ball of ``G``; see ``Group.ball``."""
    return G.ball(radius, element_cap)


class Subgroup:
    """
    A subgroup given by a decidable membership predicate and generators.

    Without an explicit enumerator, ``ball`` filters the parent's balls by
    ``contains``.
    """

    def __init__(
        self,
        parent: Group,
        contains: Callable[[GroupElement], bool],
        generators: Iterable[GroupElement] = (),
        name: str = "H",
        enumerator: Optional[Callable[[int, int], Tuple[GroupElement, ...]]] = None,
    ):
        self.parent = parent
        self._contains = contains
        self.generators: Tuple[GroupElement, ...] = tuple(generators)
        self.name = name
        self._enumerator = enumerator

        if not contains(parent.identity):
            raise InvalidInputError(f"Subgroup {name} does not contain the identity")

        outside = [g for g in self.generators if not contains(g)]
        if outside:
            raise InvalidInputError(
                f"Generators of {name} fail its membership predicate: {outside}"
            )

    def contains(self, g: GroupElement) -> bool:
        return bool(self._contains(g))

    def ball(
        self, radius: int, element_cap: Optional[int] = None
    ) -> Tuple[GroupElement, ...]:
        """Enumerate the subgroup's radius-``radius`` ball"""
        cap = element_cap or config.MAX_ELEMENTS
        if self._enumerator is not None:
            return self._enumerator(radius, cap)
        return tuple(g for g in self.parent.ball(radius, cap) if self.contains(g))

    def intersect(self, other: "Subgroup") -> "Subgroup":
        """Intersection; membership is the conjunction of both predicates"""
        if other.parent is not self.parent:
            raise InvalidInputError(
                f"Cannot intersect {self.name} and {other.name}: different parent groups"
            )

        def enumerate_intersection(radius: int, cap: int) -> Tuple[GroupElement, ...]:
            return tuple(g for g in self.ball(radius, cap) if other.contains(g))

        return Subgroup(
            self.parent,
            lambda g: self.contains(g) and other.contains(g),
            (),
            name=f"{self.name}∩{other.name}",
            enumerator=enumerate_intersection,
        )

    def conjugate(self, g: GroupElement) -> "Subgroup":
        """The subgroup g·S·g⁻¹"""
        G = self.parent
        g_inv = G.inv(g)

        def enumerate_conjugate(radius: int, cap: int) -> Tuple[GroupElement, ...]:
            return tuple(G.conjugate(g, x) for x in self.ball(radius, cap))

        return Subgroup(
            G,
            lambda x: self.contains(G.product(g_inv, x, g)),
            tuple(G.conjugate(g, s) for s in self.generators),
            name=f"{G.format(g)}{self.name}{G.format(g)}⁻¹",
            enumerator=enumerate_conjugate,
        )

    def __repr__(self) -> str:
        return f"Subgroup({self.name} < {self.parent.name})"


def is_member(S: Subgroup, g: GroupElement) -> bool:
    """Membership test of ``g`` in ``S``."""
    return S.contains(g)


def generated_subgroup(
    parent: Group,
    contains: Callable[[GroupElement], bool],
    generators: Sequence[GroupElement],
    name: str,
) -> Subgroup:
    """Subgroup whose balls are word balls over its own generators"""
    cache = BallCache(config.BALL_CACHE_SIZE)
    steps = []
    for s in generators:
        for t in (s, parent.inv(s)):
            if t != parent.identity and t not in steps:
                steps.append(t)

    def enumerate_words(radius: int, cap: int) -> Tuple[GroupElement, ...]:
        cached = cache.get(radius)
        if cached is not None and len(cached) <= cap:
            return cached
        ball = word_ball(parent.identity, steps, parent.op, radius, cap, label=name)
        cache.set(radius, ball)
        return ball

    return Subgroup(parent, contains, generators, name=name, enumerator=enumerate_words)


class Triple:
    """
    A validated chain H ≤ K ≤ G.

    ``tags`` record the construction recipe so closed-form deciders can be
    looked up; ``factors`` is set for direct products of two triples.
    """

    def __init__(
        self,
        G: Group,
        K: Subgroup,
        H: Subgroup,
        name: str = "",
        tags: Iterable[str] = (),
        factors: Optional[Tuple["Triple", "Triple"]] = None,
        sample_radius: int = 2,
    ):
        if K.parent is not G or H.parent is not G:
            raise InvalidInputError("H and K must be subgroups of G")

        escaped = [h for h in H.generators if not K.contains(h)]
        escaped += [h for h in H.ball(sample_radius) if not K.contains(h)]
        if escaped:
            raise InvalidInputError(
                f"H is not contained in K: {[G.format(h) for h in escaped[:5]]}"
            )

        self.G = G
        self.K = K
        self.H = H
        self.name = name or f"{H.name}<{K.name}<{G.name}"
        self.tags: FrozenSet[str] = frozenset(tags)
        self.factors = factors

    def infinite_attested(self, n: int, max_radius: int = 64) -> bool:
        """True once H's enumerator produced at least ``n`` distinct elements"""
        for radius in range(1, max_radius + 1):
            if len(self.H.ball(radius)) >= n:
                return True
        return False

    def outside_K(
        self, radius: int, element_cap: Optional[int] = None
    ) -> Tuple[GroupElement, ...]:
        """Elements of ball_G(radius) that are not in K, in ball order"""
        return tuple(g for g in self.G.ball(radius, element_cap) if not self.K.contains(g))

    def require_outside_K(self, elements: Iterable[GroupElement], what: str = "F") -> None:
        """
        Raises:
            InvalidInputError: Naming every element of ``elements`` lying in K
        """
        offenders = [self.G.format(g) for g in elements if self.K.contains(g)]
        if offenders:
            raise InvalidInputError(
                f"{what} must lie in G∖K; offending elements: {', '.join(offenders)}"
            )

    def __repr__(self) -> str:
        return f"Triple({self.name})"


# ----------------------------------------------------------------------
# Search outcomes
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class Certified(Generic[C]):
    """A witness that re-verifies by direct computation"""

    certificate: C
    status: str = field(default="Certified", init=False)


@dataclass(frozen=True)
class RefutedWithin:
    """Budget exhaustion that a closed-form argument turns into a refutation"""

    budget: Budget
    evidence: Tuple[Any, ...]
    rule: str = ""
    status: str = field(default="RefutedWithin", init=False)


@dataclass(frozen=True)
class Inconclusive:
    """Nothing certified within the budget; ``partial`` holds what was found"""

    budget: Budget
    partial: Any = None
    note: str = ""
    status: str = field(default="Inconclusive", init=False)


SearchOutcome = Union[Certified, RefutedWithin, Inconclusive]
