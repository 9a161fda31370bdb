"""Concrete groups: integers, cyclic groups, lattices, direct and semidirect products"""

import logging
from functools import lru_cache
from math import gcd, lcm
from typing import Any, Callable, Iterable, Optional, Sequence, Tuple

import sympy

from .core import (
    Group,
    GroupElement,
    InvalidInputError,
    Subgroup,
    Triple,
    generated_subgroup,
)

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[int, ...], ...]


class ConstructionError(InvalidInputError):
    """Raised when a construction's data violates its laws"""

    pass


def _require_int(obj: Any, what: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise InvalidInputError(f"{what} must be an integer, got {obj!r}")
    return obj


def _require_pair(obj: Any, what: str) -> Tuple[Any, Any]:
    if not isinstance(obj, (list, tuple)) or len(obj) != 2:
        raise InvalidInputError(f"{what} must be a pair, got {obj!r}")
    return obj[0], obj[1]


# ============================================================================
# BASE GROUPS
# ============================================================================


class IntegerGroup(Group):
    """The infinite cyclic group Z under addition, generator 1"""

    def __init__(self, name: str = "Z"):
        super().__init__(name, 0, (1,))

    def op(self, g: int, h: int) -> int:
        return g + h

    def inv(self, g: int) -> int:
        return -g

    def pow(self, g: int, n: int) -> int:
        return g * n

    def format(self, g: int) -> str:
        return str(g)

    def from_json(self, obj: Any) -> int:
        return _require_int(obj, f"Element of {self.name}")


class CyclicGroup(Group):
    """Z/n under addition, residues 0..n-1, generator 1"""

    def __init__(self, order: int, name: Optional[str] = None):
        if order < 2:
            raise ConstructionError(f"Cyclic group order must be >= 2, got {order}")
        self.order = order
        super().__init__(name or f"Z/{order}", 0, (1,))

    def op(self, g: int, h: int) -> int:
        return (g + h) % self.order

    def inv(self, g: int) -> int:
        return (-g) % self.order

    def format(self, g: int) -> str:
        return str(g)

    def from_json(self, obj: Any) -> int:
        return _require_int(obj, f"Element of {self.name}") % self.order


class IntegerLattice(Group):
    """Z^d as integer tuples, generators the standard basis vectors"""

    def __init__(self, dimension: int, name: Optional[str] = None):
        if dimension < 1:
            raise ConstructionError(f"Lattice dimension must be >= 1, got {dimension}")
        self.dimension = dimension
        basis = tuple(
            tuple(1 if i == j else 0 for j in range(dimension)) for i in range(dimension)
        )
        super().__init__(name or f"Z^{dimension}", (0,) * dimension, basis)

    def op(self, g: Tuple[int, ...], h: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(x + y for x, y in zip(g, h))

    def inv(self, g: Tuple[int, ...]) -> Tuple[int, ...]:
        return tuple(-x for x in g)

    def to_json(self, g: Tuple[int, ...]) -> Any:
        return list(g)

    def from_json(self, obj: Any) -> Tuple[int, ...]:
        if isinstance(obj, int) and not isinstance(obj, bool) and self.dimension == 1:
            return (obj,)
        if not isinstance(obj, (list, tuple)) or len(obj) != self.dimension:
            raise InvalidInputError(
                f"Element of {self.name} must be a {self.dimension}-tuple, got {obj!r}"
            )
        return tuple(_require_int(x, f"Coordinate of {self.name}") for x in obj)

    def format(self, g: Tuple[int, ...]) -> str:
        return "(" + ",".join(str(x) for x in g) + ")"


def whole_group(G: Group, name: Optional[str] = None) -> Subgroup:
    """G as a subgroup of itself"""

    def enumerate_all(radius: int, cap: int) -> Tuple[GroupElement, ...]:
        return G.ball(radius, cap)

    return Subgroup(G, lambda g: True, G.generators, name=name or G.name, enumerator=enumerate_all)


# ============================================================================
# DIRECT PRODUCTS
# ============================================================================


class DirectProduct(Group):
    """G₁ × G₂ with componentwise operations"""

    def __init__(self, first: Group, second: Group, name: Optional[str] = None):
        self.first = first
        self.second = second
        generators = [(g, second.identity) for g in first.generators]
        generators += [(first.identity, g) for g in second.generators]
        super().__init__(
            name or f"{first.name}×{second.name}",
            (first.identity, second.identity),
            generators,
        )

    def op(self, g, h):
        return (self.first.op(g[0], h[0]), self.second.op(g[1], h[1]))

    def inv(self, g):
        return (self.first.inv(g[0]), self.second.inv(g[1]))

    def to_json(self, g) -> Any:
        return [self.first.to_json(g[0]), self.second.to_json(g[1])]

    def from_json(self, obj: Any):
        left, right = _require_pair(obj, f"Element of {self.name}")
        return (self.first.from_json(left), self.second.from_json(right))

    def format(self, g) -> str:
        return f"({self.first.format(g[0])},{self.second.format(g[1])})"


def direct_product(first: Group, second: Group, name: Optional[str] = None) -> DirectProduct:
    """Direct product G₁ × G₂; generators are the embedded factor generators."""
    return DirectProduct(first, second, name)


def product_subgroup(G: DirectProduct, S1: Subgroup, S2: Subgroup, name: str) -> Subgroup:
    """S₁ × S₂ inside G₁ × G₂"""
    if S1.parent is not G.first or S2.parent is not G.second:
        raise InvalidInputError(f"{name}: factor subgroups must live in the factors of {G.name}")
    generators = [(s, G.second.identity) for s in S1.generators]
    generators += [(G.first.identity, s) for s in S2.generators]
    return generated_subgroup(
        G,
        lambda g: S1.contains(g[0]) and S2.contains(g[1]),
        generators,
        name,
    )


def product_triple(first: Triple, second: Triple, name: Optional[str] = None) -> Triple:
    """The triple H₁×H₂ < K₁×K₂ < G₁×G₂"""
    G = direct_product(first.G, second.G)
    K = product_subgroup(G, first.K, second.K, f"{first.K.name}×{second.K.name}")
    H = product_subgroup(G, first.H, second.H, f"{first.H.name}×{second.H.name}")
    return Triple(
        G,
        K,
        H,
        name=name or f"{first.name}×{second.name}",
        tags={"direct-product"},
        factors=(first, second),
    )


# ============================================================================
# ACTIONS AND SEMIDIRECT PRODUCTS
# ============================================================================


class Action:
    """
    An action of ``acting`` (K) on ``space`` (A) by automorphisms.

    ``apply(k, a)`` must satisfy the action laws; ``validate`` checks them on
    sampled balls and raises ``ConstructionError`` on the first violation.
    """

    def __init__(
        self,
        acting: Group,
        space: Group,
        apply: Callable[[GroupElement, GroupElement], GroupElement],
        name: str = "α",
    ):
        self.acting = acting
        self.space = space
        self._apply = apply
        self.name = name

    def apply(self, k: GroupElement, a: GroupElement) -> GroupElement:
        return self._apply(k, a)

    def validate(self, sample_radius: int = 2) -> None:
        """
        Check the action laws on ball samples.

        Raises:
            ConstructionError: On the first violated law
        """
        K, A = self.acting, self.space
        ks = K.ball(sample_radius)
        points = A.ball(sample_radius)

        for a in points:
            if self.apply(K.identity, a) != a:
                raise ConstructionError(f"{self.name}: identity moves {A.format(a)}")

        for k1 in ks:
            for k2 in ks:
                k12 = K.op(k1, k2)
                for a in points:
                    if self.apply(k12, a) != self.apply(k1, self.apply(k2, a)):
                        raise ConstructionError(
                            f"{self.name}: not an action at k1={K.format(k1)}, "
                            f"k2={K.format(k2)}, a={A.format(a)}"
                        )

        for k in ks:
            for a in points:
                for b in points:
                    lhs = self.apply(k, A.op(a, b))
                    rhs = A.op(self.apply(k, a), self.apply(k, b))
                    if lhs != rhs:
                        raise ConstructionError(
                            f"{self.name}: α_{K.format(k)} is not a homomorphism at "
                            f"a={A.format(a)}, b={A.format(b)}"
                        )

        logger.debug(f"✓ Action {self.name} validated on radius {sample_radius}")


@lru_cache(maxsize=4096)
def _matrix_power(matrix: Matrix, n: int) -> Matrix:
    """matrix**n for n >= 0 over the integers"""
    size = len(matrix)
    if n == 0:
        return tuple(tuple(1 if i == j else 0 for j in range(size)) for i in range(size))
    if n == 1:
        return matrix
    half = _matrix_power(matrix, n // 2)
    square = _matmul(half, half)
    return _matmul(square, matrix) if n % 2 else square


def _matmul(left: Matrix, right: Matrix) -> Matrix:
    size = len(left)
    return tuple(
        tuple(sum(left[i][t] * right[t][j] for t in range(size)) for j in range(size))
        for i in range(size)
    )


class MatrixAction(Action):
    """Z acting on Z^d through the powers of a unimodular integer matrix"""

    def __init__(self, acting: Group, space: IntegerLattice, matrix: Sequence[Sequence[int]]):
        if not isinstance(acting, IntegerGroup):
            raise ConstructionError("Matrix actions need the acting group Z")

        matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        d = space.dimension
        if len(matrix) != d or any(len(row) != d for row in matrix):
            raise ConstructionError(f"Matrix must be {d}×{d} to act on {space.name}")

        det = sympy.Matrix(matrix).det()
        if abs(det) != 1:
            raise ConstructionError(
                f"Matrix {matrix} has determinant {det}; automorphisms of Z^{d} need |det| = 1"
            )

        self.matrix: Matrix = matrix
        self.inverse: Matrix = tuple(
            tuple(int(x) for x in row) for row in sympy.Matrix(matrix).inv().tolist()
        )
        super().__init__(acting, space, self._apply_power, name=f"M={list(map(list, matrix))}")

    def power(self, n: int) -> Matrix:
        if n >= 0:
            return _matrix_power(self.matrix, n)
        return _matrix_power(self.inverse, -n)

    def _apply_power(self, k: int, a: Tuple[int, ...]) -> Tuple[int, ...]:
        m = self.power(k)
        return tuple(sum(row[j] * a[j] for j in range(len(a))) for row in m)

    def order(self, max_order: int = 24) -> Optional[int]:
        """Smallest m >= 1 with M^m = I, or None if there is none up to ``max_order``"""
        identity = _matrix_power(self.matrix, 0)
        for m in range(1, max_order + 1):
            if _matrix_power(self.matrix, m) == identity:
                return m
        return None

    def fixed_space_determinant(self) -> int:
        """det(M − I); nonzero exactly when 0 is the only fixed vector"""
        d = len(self.matrix)
        return int((sympy.Matrix(self.matrix) - sympy.eye(d)).det())

    def fixed_vectors(self) -> Tuple[Tuple[int, ...], ...]:
        """Integer basis of ker(M − I), scaled to primitive integer vectors"""
        d = len(self.matrix)
        basis = []
        for vector in (sympy.Matrix(self.matrix) - sympy.eye(d)).nullspace():
            scale = lcm(*(int(sympy.fraction(x)[1]) for x in vector))
            integral = [int(x * scale) for x in vector]
            divisor = gcd(*integral) or 1
            basis.append(tuple(x // divisor for x in integral))
        return tuple(basis)


class SemidirectProduct(Group):
    """
    A ⋊_α K with product (a,k)(b,l) = (a·α_k(b), kl).

    ``A_embedded`` = {(a,e)} and ``K_embedded`` = {(e,k)} are exposed as
    subgroups; ``embed(L)`` lifts a subgroup L ≤ K.
    """

    def __init__(
        self,
        base: Group,
        acting: Group,
        action: Action,
        base_generators: Optional[Iterable[GroupElement]] = None,
        name: Optional[str] = None,
        validate: bool = True,
    ):
        if action.acting is not acting or action.space is not base:
            raise ConstructionError("Action must act by the acting group on the base group")
        if validate:
            action.validate()

        self.base = base
        self.acting = acting
        self.action = action
        a_gens = tuple(base_generators) if base_generators is not None else base.generators
        generators = [(a, acting.identity) for a in a_gens]
        generators += [(base.identity, k) for k in acting.generators]
        super().__init__(
            name or f"{base.name}⋊{acting.name}",
            (base.identity, acting.identity),
            generators,
        )

        self.A_embedded = Subgroup(
            self,
            lambda g: g[1] == acting.identity,
            [(a, acting.identity) for a in a_gens],
            name=base.name,
            enumerator=lambda r, cap: tuple((a, acting.identity) for a in base.ball(r, cap)),
        )
        self.K_embedded = self.embed(whole_group(acting))

    def op(self, g, h):
        a, k = g
        b, l = h
        return (self.base.op(a, self.action.apply(k, b)), self.acting.op(k, l))

    def inv(self, g):
        a, k = g
        k_inv = self.acting.inv(k)
        return (self.action.apply(k_inv, self.base.inv(a)), k_inv)

    def embed(self, L: Subgroup) -> Subgroup:
        """{e}×L for a subgroup L of the acting group"""
        if L.parent is not self.acting:
            raise InvalidInputError(f"{L.name} is not a subgroup of {self.acting.name}")
        e = self.base.identity
        return Subgroup(
            self,
            lambda g: g[0] == e and L.contains(g[1]),
            [(e, k) for k in L.generators],
            name=L.name,
            enumerator=lambda r, cap: tuple((e, k) for k in L.ball(r, cap)),
        )

    def to_json(self, g) -> Any:
        return [self.base.to_json(g[0]), self.acting.to_json(g[1])]

    def from_json(self, obj: Any):
        a, k = _require_pair(obj, f"Element of {self.name}")
        return (self.base.from_json(a), self.acting.from_json(k))

    def format(self, g) -> str:
        return f"({self.base.format(g[0])},{self.acting.format(g[1])})"


def semidirect(
    base: Group,
    acting: Group,
    action: Action,
    base_generators: Optional[Iterable[GroupElement]] = None,
    name: Optional[str] = None,
) -> SemidirectProduct:
    """A ⋊_α K; the action laws are validated on sampled balls."""
    return SemidirectProduct(base, acting, action, base_generators, name)


def semidirect_triple(
    G: SemidirectProduct,
    H: Subgroup,
    K: Optional[Subgroup] = None,
    name: str = "",
    tags: Iterable[str] = (),
) -> Triple:
    """The triple {e}×H < {e}×K < A⋊K for subgroups H ≤ K of the acting group"""
    K_sub = G.embed(K) if K is not None else G.K_embedded
    return Triple(G, K_sub, G.embed(H), name=name, tags=tags)


def is_semidirect_triple(T: Triple) -> bool:
    """True when T lives in a semidirect product with H, K inside {e}×K"""
    if not isinstance(T.G, SemidirectProduct):
        return False
    e = T.G.base.identity
    return all(g[0] == e for g in T.K.generators + T.H.generators)


def matrix_group(matrix: Sequence[Sequence[int]], name: Optional[str] = None) -> SemidirectProduct:
    """Z^d ⋊_M Z for a unimodular integer matrix M"""
    Z = IntegerGroup()
    lattice = IntegerLattice(len(matrix))
    action = MatrixAction(Z, lattice, matrix)
    return SemidirectProduct(lattice, Z, action, name=name or f"{lattice.name}⋊_M Z")

