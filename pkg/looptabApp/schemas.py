from typing import Any, Optional

from ninja import Schema
from pydantic import Field


class LoopQuery(Schema):
    rank: int = Field(0, ge=0)
    denoms: int = Field(1, ge=1)
    oracle: bool = False
    numeric: bool = False


class DivergentPartOut(Schema):
    rank: int
    denominators: int
    source: str
    degree: int
    pole_coeff: dict[str, Any]
    latex: str
    numeric: Optional[dict[str, Any]] = None


class TableRowOut(Schema):
    rank: int
    denominators: int
    latex: str
    oracle_agrees: bool
    scales: bool
