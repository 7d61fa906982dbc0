from typing import Any, Literal

import sympy
from ninja import Schema
from pydantic import Field, field_validator

from symcoreApp.scalars import XI, parse

BrstField = Literal['A', 'omega', 'omega-star', 'h', 'psi']


class NilpotencyOut(Schema):
    field: BrstField
    first: dict[str, Any]
    residue: dict[str, Any]
    latex: list[str]
    nilpotent: bool
    ghost_shift: bool


class ExactnessQuery(Schema):
    xi: str = 'xi'

    @field_validator('xi')
    @classmethod
    def xi_is_gauge_parameter(cls, value: str) -> str:
        try:
            expr = parse(value)
        except (SyntaxError, TypeError, sympy.SympifyError):
            raise ValueError("xi must be a number or the symbol xi") from None
        if expr.free_symbols - {XI}:
            raise ValueError("xi must be a number or the symbol xi")
        return value


class ExactnessOut(Schema):
    latex: list[str]
    delta: dict[str, Any]
    s_psi: dict[str, Any]
    residue: dict[str, Any]
    verdicts: dict[str, bool]


class RandomQuery(Schema):
    samples: int = Field(20, ge=1, le=500)
    seed: int | None = None


class RandomOut(Schema):
    samples: int
    failures: list[str]
