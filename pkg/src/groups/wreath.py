"""Generalized wreath products Z ≀_X K"""

import logging
from typing import Any, Callable, Optional, Tuple

from .constructions import (
    Action,
    ConstructionError,
    IntegerGroup,
    SemidirectProduct,
)
from .core import Group, GroupElement, InvalidInputError

logger = logging.getLogger(__name__)

# A finitely supported map X → Z, stored as its support sorted by point.
SupportMap = Tuple[Tuple[Any, Any], ...]


class KSet:
    """
    A set X with a left action of K.

    ``points(radius)`` lists the points reachable from ``base_point`` by
    elements of ball_K(radius); for finite X it lists all of X.  ``free``
    records that point stabilizers are trivial.
    """

    def __init__(
        self,
        group: Group,
        act: Callable[[GroupElement, Any], Any],
        points: Callable[[int], Tuple[Any, ...]],
        base_point: Any,
        name: str,
        point_json: Optional[Callable[[Any], Any]] = None,
        point_from_json: Optional[Callable[[Any], Any]] = None,
        point_format: Optional[Callable[[Any], str]] = None,
        size: Optional[int] = None,
        free: bool = False,
    ):
        self.group = group
        self._act = act
        self._points = points
        self.base_point = base_point
        self.name = name
        self.point_json = point_json or group.to_json
        self.point_from_json = point_from_json or group.from_json
        self.point_format = point_format or group.format
        self.size = size
        self.free = free

    def act(self, k: GroupElement, x: Any) -> Any:
        return self._act(k, x)

    def points(self, radius: int) -> Tuple[Any, ...]:
        return self._points(radius)

    @property
    def is_finite(self) -> bool:
        return self.size is not None

    @classmethod
    def left_translation(cls, K: Group) -> "KSet":
        """X = K with k·x = kx"""
        return cls(
            K,
            K.op,
            lambda r: K.ball(r),
            K.identity,
            name=K.name,
            free=True,
        )

    @classmethod
    def cyclic_quotient(cls, K: IntegerGroup, n: int) -> "KSet":
        """X = Z/n with k·x = x + k mod n"""
        if not isinstance(K, IntegerGroup):
            raise ConstructionError("Cyclic quotients are defined for the acting group Z")
        if n < 1:
            raise ConstructionError(f"Quotient size must be >= 1, got {n}")

        def from_json(obj: Any) -> int:
            if isinstance(obj, bool) or not isinstance(obj, int):
                raise InvalidInputError(f"Point of Z/{n} must be an integer, got {obj!r}")
            return obj % n

        return cls(
            K,
            lambda k, x: (x + k) % n,
            lambda r: tuple(range(n)),
            0,
            name=f"Z/{n}",
            point_json=lambda x: x,
            point_from_json=from_json,
            point_format=str,
            size=n,
        )

    def validate(self, sample_radius: int = 2) -> None:
        """
        Raises:
            ConstructionError: If the K-action on X breaks an action law
        """
        K = self.group
        ks = K.ball(sample_radius)
        for x in self.points(sample_radius):
            if self.act(K.identity, x) != x:
                raise ConstructionError(f"{self.name}: identity moves point {x!r}")
            for k1 in ks:
                for k2 in ks:
                    if self.act(K.op(k1, k2), x) != self.act(k1, self.act(k2, x)):
                        raise ConstructionError(
                            f"{self.name}: not a K-set at k1={k1!r}, k2={k2!r}, x={x!r}"
                        )


class FiniteSupportGroup(Group):
    """Z^(X): finitely supported maps X → Z under pointwise product"""

    def __init__(self, values: Group, space: KSet, name: Optional[str] = None):
        self.values = values
        self.space = space
        generators = [((space.base_point, s),) for s in values.generators]
        super().__init__(name or f"{values.name}^({space.name})", (), generators)

    def normalize(self, items) -> SupportMap:
        """Canonical support map: identity values dropped, sorted by point"""
        return tuple(
            sorted(((x, z) for x, z in items if z != self.values.identity), key=lambda p: p[0])
        )

    def op(self, f: SupportMap, g: SupportMap) -> SupportMap:
        merged = dict(f)
        for x, z in g:
            merged[x] = self.values.op(merged.get(x, self.values.identity), z)
        return self.normalize(merged.items())

    def inv(self, f: SupportMap) -> SupportMap:
        return tuple((x, self.values.inv(z)) for x, z in f)

    def steps(self, radius: int) -> Tuple[SupportMap, ...]:
        """Point masses on the radius-``radius`` points of X"""
        out = []
        for x in self.space.points(radius):
            for s in self.values.steps(radius):
                out.append(((x, s),))
        return tuple(out)

    def support(self, f: SupportMap) -> Tuple[Any, ...]:
        return tuple(x for x, _ in f)

    def point_mass(self, x: Any, z: Optional[GroupElement] = None) -> SupportMap:
        value = z if z is not None else self.values.generators[0]
        return self.normalize([(x, value)])

    def to_json(self, f: SupportMap) -> Any:
        return [[self.space.point_json(x), self.values.to_json(z)] for x, z in f]

    def from_json(self, obj: Any) -> SupportMap:
        if isinstance(obj, dict):
            items = list(obj.items())
        elif isinstance(obj, (list, tuple)):
            items = []
            for pair in obj:
                if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                    raise InvalidInputError(f"Support entry must be [point, value], got {pair!r}")
                items.append((pair[0], pair[1]))
        else:
            raise InvalidInputError(f"Element of {self.name} must be a map, got {obj!r}")

        return self.normalize(
            (self.space.point_from_json(x), self.values.from_json(z)) for x, z in items
        )

    def format(self, f: SupportMap) -> str:
        body = ",".join(
            f"{self.space.point_format(x)}:{self.values.format(z)}" for x, z in f
        )
        return "{" + body + "}"


class ShiftAction(Action):
    """K acting on Z^(X) by (k·f)(x) = f(k⁻¹·x)"""

    def __init__(self, acting: Group, base: FiniteSupportGroup):
        self.base_group = base
        super().__init__(acting, base, self._shift, name=f"shift on {base.space.name}")

    def _shift(self, k: GroupElement, f: SupportMap) -> SupportMap:
        space = self.base_group.space
        return self.base_group.normalize((space.act(k, x), z) for x, z in f)


def wreath(
    values: Group, space: KSet, acting: Optional[Group] = None, name: Optional[str] = None
) -> SemidirectProduct:
    """
    Z ≀_X K = Z^(X) ⋊ K with the shift action.

    The group is generated by the point masses at the base point of X together
    with the generators of K.
    """
    K = acting or space.group
    if space.group is not K:
        raise ConstructionError("The K-set must be a set for the acting group")
    space.validate()

    base = FiniteSupportGroup(values, space)
    action = ShiftAction(K, base)
    G = SemidirectProduct(
        base,
        K,
        action,
        base_generators=base.generators,
        name=name or f"{values.name}≀_{space.name} {K.name}",
    )
    logger.debug(f"✓ Built wreath product {G.name}")
    return G
