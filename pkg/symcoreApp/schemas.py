from typing import Any, Literal, Optional

from ninja import Schema

from symcoreApp.indices import Index, Space, Variance


class IndexIn(Schema):
    name: str
    space: Literal['lorentz', 'inner'] = 'lorentz'
    variance: Literal['up', 'down']

    def to_index(self) -> Index:
        return Index(self.name, Space(self.space), Variance(self.variance))


# canonical JSON of either algebra ("algebra": "tensor" | "graded")
class ExpressionIn(Schema):
    expression: dict[str, Any]


class ContractIn(Schema):
    expression: dict[str, Any]
    upper: IndexIn
    lower: IndexIn


class ScalarBindingIn(Schema):
    expression: dict[str, Any]
    scalars: dict[str, str] = {}
    momenta: dict[str, dict[str, str]] = {}


class ExpressionOut(Schema):
    expression: dict[str, Any]
    latex: str
    is_zero: bool
    free_indices: Optional[list[str]] = None
