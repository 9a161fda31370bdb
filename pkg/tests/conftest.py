"""Shared pytest fixtures and configuration"""

import json
import random
from fractions import Fraction

import pytest

from src.algebra.coefficients import Coefficient
from src.algebra.element import AlgebraElement
from src.cli import main
from src.groups.core import Budget
from src.instances.registry import build_instance

# Coefficients drawn by the property tests: 0, ±1, ±i
UNIT_COEFFICIENTS = (
    Coefficient(Fraction(0)),
    Coefficient(Fraction(1)),
    Coefficient(Fraction(-1)),
    Coefficient(Fraction(0), Fraction(1)),
    Coefficient(Fraction(0), Fraction(-1)),
)


@pytest.fixture
def rng():
    """Seeded random source; property loops stay reproducible"""
    return random.Random(20240611)


@pytest.fixture
def budget():
    """Default search budget for unit tests"""
    return Budget(radius=4, element_cap=20000)


@pytest.fixture
def small_budget():
    """Budget for the corpus-heavy deciders"""
    return Budget(radius=2, element_cap=20000)


@pytest.fixture
def random_element():
    """Factory for random finitely supported elements with support in a ball"""

    def make(rng, G, radius=2, max_terms=4, support=None):
        pool = support if support is not None else G.ball(radius)
        terms = [
            (rng.choice(pool), rng.choice(UNIT_COEFFICIENTS))
            for _ in range(rng.randint(1, max_terms))
        ]
        return AlgebraElement.from_terms(G, terms)

    return make


@pytest.fixture
def rotation4():
    """Z² ⋊_M Z with M of order 4, H = K = Z"""
    return build_instance("rotation4")


@pytest.fixture
def trivial_action():
    return build_instance("trivial-action")


@pytest.fixture
def wreath():
    """Z/2 ≀_Z Z with H = K = Z"""
    return build_instance("wreath-z2-z")


@pytest.fixture
def finite_wreath():
    """Z/2 ≀_{Z/3} Z with H = K = Z"""
    return build_instance("wreath-z2-zmod3")


@pytest.fixture
def free_zz():
    """Z ∗ Z with H = K = ⟨a⟩"""
    return build_instance("free-zz")


@pytest.fixture
def f2_cyclic():
    return build_instance("f2-cyclic")


@pytest.fixture
def z2_line():
    """Z² with H = K = Z×{0}"""
    return build_instance("z2-line")


@pytest.fixture
def prod_wreath():
    return build_instance("prod-wreath2")


@pytest.fixture
def lam():
    """λ_g for an element literal of T.G"""

    def make(T, literal):
        return AlgebraElement.delta(T.G, T.G.parse(literal))

    return make


@pytest.fixture
def run_cli(capsys):
    """Run the CLI in-process; returns (exit status, parsed stdout)"""

    def run(*argv):
        status = main(list(argv))
        return status, json.loads(capsys.readouterr().out)

    return run
