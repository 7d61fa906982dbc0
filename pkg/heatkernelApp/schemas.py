from typing import Any

from ninja import Schema
from pydantic import Field


class GammaQuery(Schema):
    commutative: bool = False


class Graded(Schema):
    expression: dict[str, Any]
    latex: str


class GammaOut(Graded):
    n: int = Field(..., ge=1, le=4)
    matches_published: bool


class TraceLnOut(Graded):
    matches_published: bool


class CovariantOut(Graded):
    commutative: bool
    closes: bool
