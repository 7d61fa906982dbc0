from typing import Any, Literal, Optional

from ninja import Schema
from pydantic import field_validator

from symcoreApp.scalars import parse


class ConstraintOut(Schema):
    space: str
    vectors: list[str]


class RuleOut(Schema):
    name: str
    expression: dict[str, Any]
    latex: str
    constraints: list[ConstraintOut] = []


class PropagatorQuery(Schema):
    kind: Literal['gauge', 'ghost'] = 'gauge'
    xi: str = '1'

    @field_validator('xi')
    @classmethod
    def xi_is_rational(cls, value: str) -> str:
        if not parse(value).is_Rational:
            raise ValueError("xi must be a rational number")
        return value


class VertexQuery(Schema):
    vertex: Literal['3', '4', 'ghost', 'wick3'] = '3'
    symmetrize: bool = False
    on_shell: bool = False


class SymmetryOut(Schema):
    vertex: str
    permutations: int
    failures: list[list[int]]
    symmetric: bool
    group: Optional[str] = None
