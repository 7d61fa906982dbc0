from typing import Literal

from ninja import Schema
from pydantic import Field

from renormApp.beta import MatterContent, preset


class MatterIn(Schema):
    """Preset name or explicit counts; explicit counts win when given."""

    matter: Literal['none', 'sm', 'custom'] = 'none'
    no_higgs: bool = False
    n_gauge: int = 0
    n_dirac: int = 0
    n_chiral: int = 0
    n_scalar_doublet: int = 0
    n_complex_scalar: int = 0

    def to_content(self) -> MatterContent:
        if self.matter != 'custom':
            return preset(self.matter, self.no_higgs)
        content = MatterContent(
            self.n_gauge, self.n_dirac, self.n_chiral, self.n_scalar_doublet, self.n_complex_scalar,
        )
        return content.without_higgs() if self.no_higgs else content


class BetaQuery(MatterIn):
    dimension: int | None = Field(None, ge=1)


class BetaOut(Schema):
    dimension: int | None
    coefficient: str
    beta: str
    renormalized_coupling: str
    latex: str
    asymptotically_free: bool | None


class BetaRowOut(Schema):
    dimension: int
    coefficient: str
    beta: str
    asymptotically_free: bool


class BetaTableQuery(MatterIn):
    dim_from: int = Field(1, ge=1)
    dim_to: int = Field(12, ge=1)


class DeterminantOut(Schema):
    kind: str
    value: str
    published: str | None
    agrees: bool | None


class MatterOut(Schema):
    kind: str
    value: str
    published: str
    agrees: bool
