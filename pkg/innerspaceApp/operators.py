"""First-order inner-derivative operators and their cutoff traces.

Vector form (gauge and ghost fluctuations):
    (O_a)^M_N = a^K nabla_K delta^M_N - nabla_N a^M
Scalar form (matter fields):
    O_a = a^K nabla_K
"""
import logging
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import sympy

from innerspaceApp.moments import moment
from symcoreApp.errors import StructuralError, UnsupportedCaseError
from symcoreApp.indices import Space, inner_down
from symcoreApp.scalars import DIM, vector_space
from symcoreApp.tensor import TensorExpr, canonicalize

logger = logging.getLogger(__name__)


class OperatorForm(str, Enum):
    VECTOR = "vector"
    SCALAR = "scalar"


@dataclass
class InnerOperator:
    """A linear combination of coefficient fields sharing one operator form."""

    form: OperatorForm = OperatorForm.VECTOR
    fields: dict[str, sympy.Expr] = field(default_factory=dict)

    def __post_init__(self):
        self.form = OperatorForm(self.form)
        for name in self.fields:
            try:
                space = vector_space(name)
            except StructuralError as exc:
                raise UnsupportedCaseError(f"invalid coefficient field {name!r}") from exc
            if space is not Space.INNER:
                raise UnsupportedCaseError(f"coefficient field {name!r} must be an inner vector (capitalized)")
        self.fields = {name: sympy.sympify(w) for name, w in self.fields.items() if sympy.sympify(w) != 0}

    @classmethod
    def of(cls, name: str, form: OperatorForm | str = OperatorForm.VECTOR, weight=1) -> "InnerOperator":
        return cls(OperatorForm(form), {name: weight})

    def __add__(self, other: "InnerOperator") -> "InnerOperator":
        if other.form is not self.form:
            raise UnsupportedCaseError("cannot add operators of different forms")
        merged = dict(self.fields)
        for name, weight in other.fields.items():
            merged[name] = merged.get(name, 0) + weight
        return InnerOperator(self.form, merged)

    def __rmul__(self, factor) -> "InnerOperator":
        factor = sympy.sympify(factor)
        return InnerOperator(self.form, {name: factor * w for name, w in self.fields.items()})

    @property
    def multiplicity(self) -> sympy.Expr:
        """Trace of the identity on the operator's value space."""
        return DIM if self.form is OperatorForm.VECTOR else sympy.Integer(1)


def trace_quadratic(op_a: InnerOperator, op_b: InnerOperator) -> TensorExpr:
    """Leading cutoff trace Tr_{X Lambda}{O_a O_b}.

    The principal symbols i a^K P_K multiply to -a^K b^L P_K P_L times the
    identity on the value space; the second inner moment then gives

        -mult Omega_D Lambda^(D+2) / (D (D+2)) int a.b

    where ``dot_A_B`` stands for int d^D X Lambda^D a^M b_M. Terms odd in P
    vanish over the ball; the zeroth-order parts only reach Lambda^D.
    """
    if op_a.form is not op_b.form:
        raise UnsupportedCaseError("trace of operators with different forms")
    second = moment(2, ("K", "L"))
    total = TensorExpr.zero()
    for a, wa in sorted(op_a.fields.items()):
        for b, wb in sorted(op_b.fields.items()):
            integrand = -op_a.multiplicity * wa * wb * second.result
            integrand = integrand * TensorExpr.momentum(a, inner_down("K")) * TensorExpr.momentum(b, inner_down("L"))
            total = total + integrand
    return canonicalize(total)


# endomorphism property on explicit fields


def divergence(vector: Sequence[sympy.Expr], coords: Sequence[sympy.Symbol]) -> sympy.Expr:
    return sympy.expand(sum(sympy.diff(v, x) for v, x in zip(vector, coords)))


def apply_vector_form(a: Sequence[sympy.Expr], f: Sequence[sympy.Expr], coords) -> list[sympy.Expr]:
    """(O_a f)^M = a^K d_K f^M - f^N d_N a^M."""
    return [
        sympy.expand(
            sum(a[k] * sympy.diff(f[m], coords[k]) for k in range(len(coords)))
            - sum(f[n] * sympy.diff(a[m], coords[n]) for n in range(len(coords)))
        )
        for m in range(len(coords))
    ]


def random_polynomial(rng: random.Random, coords, degree: int) -> sympy.Expr:
    monomials = sorted(sympy.itermonomials(list(coords), degree), key=sympy.default_sort_key)
    return sum((rng.randint(-3, 3) * m for m in monomials), sympy.Integer(0))


def divergence_free_field(rng: random.Random, coords, degree: int) -> list[sympy.Expr]:
    """v^i = sum_j d_j psi_ij with psi antisymmetric, so d_i v^i = 0."""
    dim = len(coords)
    potentials = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            potentials[i, j] = random_polynomial(rng, coords, degree + 1)
    components = []
    for i in range(dim):
        component = sympy.Integer(0)
        for j in range(dim):
            if i < j:
                component += sympy.diff(potentials[i, j], coords[j])
            elif j < i:
                component -= sympy.diff(potentials[j, i], coords[j])
        components.append(sympy.expand(component))
    return components


def endomorphism_check(dim: int, seed: int, samples: int = 5, max_degree: int = 3) -> bool:
    """The vector form maps divergence-free polynomial fields to divergence-free fields."""
    if dim < 2:
        raise UnsupportedCaseError("divergence-free test fields need D >= 2")
    coords = sympy.symbols(f"X1:{dim + 1}")
    rng = random.Random(seed)
    for _ in range(samples):
        a = divergence_free_field(rng, coords, rng.randint(1, max_degree))
        f = divergence_free_field(rng, coords, rng.randint(1, max_degree))
        if divergence(a, coords) != 0 or divergence(f, coords) != 0:
            raise UnsupportedCaseError("test field generator produced a divergent field")
        image = apply_vector_form(a, f, coords)
        if divergence(image, coords) != 0:
            logger.info("endomorphism check failed at D=%d", dim)
            return False
    return True
