import itertools
from dataclasses import dataclass, replace
from enum import Enum

from symcoreApp.errors import StructuralError


class Space(str, Enum):
    LORENTZ = "lorentz"
    INNER = "inner"


class Variance(str, Enum):
    UP = "up"
    DOWN = "down"


LORENTZ_RANGE = 4

# Lorentz metric diag(-1, 1, 1, 1)
ETA_DIAGONAL = (-1, 1, 1, 1)


@dataclass(frozen=True, order=True)
class Index:
    name: str
    space: Space
    variance: Variance

    def flipped(self) -> "Index":
        return replace(self, variance=Variance.DOWN if self.variance is Variance.UP else Variance.UP)

    def renamed(self, name: str) -> "Index":
        return replace(self, name=name)

    def with_variance(self, variance: Variance) -> "Index":
        return replace(self, variance=variance)


def up(name: str, space: Space = Space.LORENTZ) -> Index:
    return Index(name, space, Variance.UP)


def down(name: str, space: Space = Space.LORENTZ) -> Index:
    return Index(name, space, Variance.DOWN)


def inner_up(name: str) -> Index:
    return Index(name, Space.INNER, Variance.UP)


def inner_down(name: str) -> Index:
    return Index(name, Space.INNER, Variance.DOWN)


def check_pair(first: Index, second: Index) -> None:
    """A dummy pair must live in one space and carry opposite variance."""
    if first.space is not second.space:
        raise StructuralError("index space mismatch", first.name)
    if first.variance is second.variance:
        raise StructuralError("contracted indices must have opposite variance", first.name)


def fresh_name(used: set[str], space: Space) -> str:
    prefix = "_l" if space is Space.LORENTZ else "_I"
    n = 0
    while f"{prefix}{n}" in used:
        n += 1
    return f"{prefix}{n}"


def canonical_dummy_name(position: int, space: Space, reserved: frozenset[str] = frozenset()) -> str:
    """The ``position``-th dummy label of ``space`` skipping names already free in the term."""
    prefix = "_a" if space is Space.LORENTZ else "_A"
    names = (f"{prefix}{n}" for n in itertools.count())
    return next(itertools.islice((n for n in names if n not in reserved), position, None))
