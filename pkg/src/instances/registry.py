"""Built-in triples H < K < G, looked up by instance id"""

import logging
from functools import lru_cache
from typing import Any, Callable, Dict, List

from pydantic import BaseModel, ConfigDict, Field, field_validator

from ..certs.closed_forms import CLOSED_FORM_RULES
from ..groups.constructions import (
    CyclicGroup,
    IntegerGroup,
    IntegerLattice,
    matrix_group,
    product_triple,
    semidirect_triple,
    whole_group,
)
from ..groups.core import InvalidInputError, Triple, generated_subgroup
from ..groups.free_product import free_product
from ..groups.wreath import KSet, wreath

logger = logging.getLogger(__name__)


class UnknownInstanceError(InvalidInputError):
    """Raised when an instance id is not registered"""

    pass


class InstanceSpec(BaseModel):
    """Recipe and parameters of a built-in triple"""

    model_config = ConfigDict(frozen=True)

    id: str = Field(..., min_length=1)
    recipe: str
    parameters: Dict[str, Any] = Field(default_factory=dict)
    tags: List[str] = Field(default_factory=list)
    description: str = ""

    @field_validator("tags")
    @classmethod
    def tags_have_rules(cls, tags: List[str]) -> List[str]:
        unknown = [t for t in tags if t not in CLOSED_FORM_RULES]
        if unknown:
            raise ValueError(f"No closed-form rule for tags {unknown}")
        return tags


# ============================================================================
# RECIPES
# ============================================================================


def _wreath_recipe(spec: InstanceSpec) -> Triple:
    Z = IntegerGroup()
    values = CyclicGroup(spec.parameters.get("values", 2))
    quotient = spec.parameters.get("quotient")
    space = KSet.cyclic_quotient(Z, quotient) if quotient else KSet.left_translation(Z)
    G = wreath(values, space, Z)
    return semidirect_triple(G, whole_group(Z), name=spec.id, tags=spec.tags)


def _matrix_recipe(spec: InstanceSpec) -> Triple:
    G = matrix_group(spec.parameters["matrix"])
    return semidirect_triple(G, whole_group(G.acting), name=spec.id, tags=spec.tags)


def _free_factor_recipe(spec: InstanceSpec) -> Triple:
    G = free_product(IntegerGroup(), IntegerGroup())
    H = G.factor_subgroup(1)
    return Triple(G, H, H, name=spec.id, tags=spec.tags)


def _abelian_line_recipe(spec: InstanceSpec) -> Triple:
    G = IntegerLattice(2)
    H = generated_subgroup(G, lambda g: g[1] == 0, [(1, 0)], "Z×{0}")
    return Triple(G, H, H, name=spec.id, tags=spec.tags)


def _product_recipe(spec: InstanceSpec) -> Triple:
    first, second = spec.parameters["factors"]
    # Factor groups are built fresh so the two sides never share ball caches
    return product_triple(
        _build(INSTANCE_REGISTRY[first]), _build(INSTANCE_REGISTRY[second]), name=spec.id
    )


RECIPES: Dict[str, Callable[[InstanceSpec], Triple]] = {
    "wreath": _wreath_recipe,
    "matrix": _matrix_recipe,
    "free-factor": _free_factor_recipe,
    "abelian-line": _abelian_line_recipe,
    "product": _product_recipe,
}


# ============================================================================
# REGISTRY
# ============================================================================

INSTANCE_REGISTRY: Dict[str, InstanceSpec] = {
    spec.id: spec
    for spec in (
        InstanceSpec(
            id="wreath-z2-z",
            recipe="wreath",
            parameters={"values": 2},
            tags=["translation-wreath"],
            description="Z/2 ≀_Z Z with H = K = Z acting by translation",
        ),
        InstanceSpec(
            id="wreath-z2-zmod3",
            recipe="wreath",
            parameters={"values": 2, "quotient": 3},
            tags=["finite-kset-wreath"],
            description="Z/2 ≀_{Z/3} Z with H = K = Z acting on Z/3",
        ),
        InstanceSpec(
            id="rotation4",
            recipe="matrix",
            parameters={"matrix": [[0, -1], [1, 0]]},
            tags=["finite-order-matrix"],
            description="Z² ⋊_M Z, M = [[0,-1],[1,0]] of order 4, H = K = Z",
        ),
        InstanceSpec(
            id="trivial-action",
            recipe="matrix",
            parameters={"matrix": [[1, 0], [0, 1]]},
            tags=["finite-order-matrix"],
            description="Z² × Z as Z² ⋊_I Z, H = K = Z",
        ),
        InstanceSpec(
            id="free-zz",
            recipe="free-factor",
            tags=["free-factor"],
            description="Z ∗ Z with H = K = ⟨a⟩, decided by boundary-letter cancellation",
        ),
        InstanceSpec(
            id="f2-cyclic",
            recipe="free-factor",
            tags=["malnormal-factor"],
            description="Z ∗ Z with H = K = ⟨a⟩, decided through malnormality",
        ),
        InstanceSpec(
            id="z2-line",
            recipe="abelian-line",
            tags=["abelian"],
            description="Z² with H = K = Z×{0}",
        ),
        InstanceSpec(
            id="prod-wreath2",
            recipe="product",
            parameters={"factors": ["wreath-z2-z", "wreath-z2-z"]},
            tags=["direct-product"],
            description="(Z/2 ≀_Z Z) × (Z/2 ≀_Z Z) with H = K = Z × Z",
        ),
    )
}


def _build(spec: InstanceSpec) -> Triple:
    recipe = RECIPES.get(spec.recipe)
    if recipe is None:
        raise InvalidInputError(f"Instance {spec.id} uses unknown recipe {spec.recipe!r}")
    T = recipe(spec)
    logger.debug(f"✓ Built instance {spec.id}: {T.G.name}")
    return T


@lru_cache(maxsize=None)
def build_instance(instance_id: str) -> Triple:
    """
    Build (once) the triple registered under ``instance_id``.

    Raises:
        UnknownInstanceError: If the id is not registered
    """
    spec = INSTANCE_REGISTRY.get(instance_id)
    if spec is None:
        raise UnknownInstanceError(
            f"Unknown instance {instance_id!r}. Available instances: {sorted(INSTANCE_REGISTRY)}"
        )
    return _build(spec)


def list_instances() -> List[InstanceSpec]:
    return [INSTANCE_REGISTRY[key] for key in sorted(INSTANCE_REGISTRY)]
