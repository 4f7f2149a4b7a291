"""Bundled example step laws."""
from __future__ import annotations

from .lattice import StepLaw, difference_law, validate_law


def simple_walk() -> StepLaw:
    """Uniform nearest-neighbour walk."""
    return validate_law({(1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1}, 4)


def lazy_walk() -> StepLaw:
    """Stays put with probability 1/3, otherwise a nearest-neighbour step."""
    return validate_law({(0, 0): 2, (1, 0): 1, (-1, 0): 1, (0, 1): 1, (0, -1): 1}, 6)


def difference_of_simple() -> StepLaw:
    return difference_law(simple_walk())


def long_step_walk() -> StepLaw:
    """Simple walk with every step doubled; E|X|^2 = 4."""
    return validate_law({(2, 0): 1, (-2, 0): 1, (0, 2): 1, (0, -2): 1}, 4)


BUNDLED = {
    "simple": simple_walk,
    "lazy": lazy_walk,
    "difference_simple": difference_of_simple,
    "long_step": long_step_walk,
}


def bundled_laws() -> dict:
    return {name: make() for name, make in BUNDLED.items()}
