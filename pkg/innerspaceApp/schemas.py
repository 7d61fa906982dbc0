from typing import Any, Literal, Optional

from ninja import Schema
from pydantic import Field, field_validator


class MomentQuery(Schema):
    degree: int = Field(2, ge=0)
    dim: Optional[int] = Field(None, ge=2)
    cutoff: Optional[float] = Field(None, gt=0)


class MomentOut(Schema):
    degree: int
    expression: dict[str, Any]
    latex: str
    value: Optional[float] = None
    quadrature_agrees: Optional[bool] = None


class OmegaOut(Schema):
    dim: int
    exact: str
    value: float


class OperatorIn(Schema):
    form: Literal['vector', 'scalar'] = 'vector'
    coefficients: dict[str, str]

    @field_validator('coefficients')
    @classmethod
    def inner_field_names(cls, value: dict[str, str]) -> dict[str, str]:
        for name in value:
            if not name[:1].isupper():
                raise ValueError(f"coefficient field {name!r} must be capitalized")
        return value


class TraceIn(Schema):
    a: OperatorIn
    b: OperatorIn


class TraceOut(Schema):
    expression: dict[str, Any]
    latex: str
