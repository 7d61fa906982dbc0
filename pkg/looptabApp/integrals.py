"""Divergent parts of dimensionally regularized one-loop integrals.

    1/(2 pi)^4 int d^4p  p^mu1 ... p^mur / [p^2 (p + q2)^2 ... (p + qN)^2]  |div

with offsets q_j = k2 + ... + kj. Every result is the coefficient of the
formal pole Omega4/epsilon; the integrals are Wick rotated and continued to
d = 4 - epsilon, and the factor i of the rotation is kept explicitly.
"""
import itertools
import logging
import math
from dataclasses import dataclass, field

import sympy

from symcoreApp.errors import UnsupportedCaseError
from symcoreApp.indices import up
from symcoreApp.scalars import POLE, dot, dot_symbols
from symcoreApp.tensor import TensorExpr, canonicalize, free_indices_of, scale_vectors, vectors_in

logger = logging.getLogger(__name__)

MAX_RANK = 4
MAX_DENOMINATORS = 4
LABELS = ("mu", "nu", "rho", "sigma")
OMEGA4_VALUE = 1 / (8 * sympy.pi**2)
SCALE = sympy.Symbol("lambda_scale", positive=True)


@dataclass(frozen=True)
class LoopIntegral:
    rank: int
    denominators: int
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.rank < 0 or self.denominators < 1:
            raise UnsupportedCaseError(
                f"no parameter integral for rank {self.rank} with {self.denominators} denominators"
            )
        if self.rank > MAX_RANK or self.denominators > MAX_DENOMINATORS:
            raise UnsupportedCaseError(
                f"rank {self.rank} with {self.denominators} denominators is outside the supported range"
            )
        object.__setattr__(self, "labels", tuple(self.labels) or LABELS[:self.rank])
        if len(self.labels) != self.rank or len(set(self.labels)) != self.rank:
            raise UnsupportedCaseError("need one distinct label per numerator factor")

    @property
    def momenta(self) -> tuple[str, ...]:
        return tuple(f"k{i}" for i in range(2, self.denominators + 1))

    @property
    def offsets(self) -> list[dict[str, int]]:
        """q1 = 0, q2 = k2, q3 = k2 + k3, ..."""
        return [{f"k{i}": 1 for i in range(2, j + 1)} for j in range(1, self.denominators + 1)]

    @property
    def degree(self) -> int:
        """Mass dimension of the pole coefficient."""
        return self.rank - 2 * self.denominators + 4

    @property
    def key(self) -> str:
        return f"{self.rank}/{self.denominators}"


@dataclass
class DivergentPart:
    integral: LoopIntegral
    pole_coeff: TensorExpr
    source: str = field(default="oracle")

    @property
    def expr(self) -> TensorExpr:
        return self.pole_coeff * POLE

    def numeric(self, digits: int = 12) -> TensorExpr:
        """Coefficient of 1/epsilon with Omega4 = 1/(8 pi^2)."""
        return self.pole_coeff.map_coefficients(lambda c: sympy.N(c * OMEGA4_VALUE, digits))


# published table


def _eta(a: str, b: str) -> TensorExpr:
    return TensorExpr.metric(up(a), up(b))


def _k(vector: str, label: str) -> TensorExpr:
    return TensorExpr.momentum(vector, up(label))


def _tadpole(labels) -> TensorExpr:
    return TensorExpr.zero()


def _bubble(labels) -> TensorExpr:
    return TensorExpr.scalar(sympy.I)


def _bubble_vector(labels) -> TensorExpr:
    mu, = labels
    return -sympy.I / 2 * _k("k2", mu)


def _bubble_tensor(labels) -> TensorExpr:
    mu, nu = labels
    return sympy.I / 3 * _k("k2", mu) * _k("k2", nu) - sympy.I / 12 * dot("k2", "k2") * _eta(mu, nu)


def _triangle_tensor(labels) -> TensorExpr:
    mu, nu = labels
    return sympy.I / 4 * _eta(mu, nu)


def _triangle_rank3(labels) -> TensorExpr:
    mu, nu, rho = labels

    def v(a):
        return 2 * _k("k2", a) + _k("k3", a)

    return -sympy.I / 12 * (_eta(mu, nu) * v(rho) + _eta(nu, rho) * v(mu) + _eta(rho, mu) * v(nu))


def _box_rank4(labels) -> TensorExpr:
    mu, nu, rho, sigma = labels
    return sympy.I / 24 * (
        _eta(mu, nu) * _eta(rho, sigma) + _eta(mu, rho) * _eta(nu, sigma) + _eta(mu, sigma) * _eta(nu, rho)
    )


TABLE = {
    (0, 1): _tadpole,
    (0, 2): _bubble,
    (1, 2): _bubble_vector,
    (2, 2): _bubble_tensor,
    (2, 3): _triangle_tensor,
    (3, 3): _triangle_rank3,
    (4, 4): _box_rank4,
}


def div_part(integral: LoopIntegral) -> DivergentPart:
    builder = TABLE.get((integral.rank, integral.denominators))
    if builder is None:
        logger.debug("integral %s not tabulated, using the reduction", integral.key)
        return reduce_oracle(integral)
    return DivergentPart(integral, canonicalize(builder(integral.labels)), "table")


# reduction


def perfect_matchings(items: tuple) -> list[tuple[tuple, ...]]:
    if not items:
        return [()]
    first, rest = items[0], items[1:]
    out = []
    for n, partner in enumerate(rest):
        for tail in perfect_matchings(rest[:n] + rest[n + 1:]):
            out.append(((first, partner),) + tail)
    return out


def simplex_integral(expr, xs) -> sympy.Expr:
    """int dx1..dxN delta(1 - sum x) expr, for expr polynomial in xs."""
    n = len(xs)
    total = sympy.Integer(0)
    for monom, coefficient in sympy.Poly(sympy.expand(expr), *xs).terms():
        weight = sympy.Integer(math.prod(math.factorial(a) for a in monom))
        total += coefficient * weight / math.factorial(n - 1 + sum(monom))
    return sympy.expand(total)


def _square(combination: dict) -> sympy.Expr:
    return sum(
        (ca * cb * dot(a, b) for (a, ca), (b, cb) in itertools.product(combination.items(), repeat=2)),
        sympy.Integer(0),
    )


def reduce_oracle(integral: LoopIntegral) -> DivergentPart:
    """Feynman parameters, shift p = l - v, symmetric reduction in l, pole of the l integral.

    With X_i = x_i + ... + x_N the shift is v = sum_i X_i k_i and
    Delta = sum_j x_j q_j^2 - v^2. A term (l^2)^s contributes
    i (-1)^m (s+1)!/m! Delta^m at m = s + 2 - N >= 0 and nothing otherwise.
    """
    n = integral.denominators
    xs = sympy.symbols(f"x1:{n + 1}")
    shift = {f"k{i}": sum(xs[i - 1:]) for i in range(2, n + 1)}
    delta = sum((x * _square(q) for x, q in zip(xs, integral.offsets)), sympy.Integer(0)) - _square(shift)

    total = TensorExpr.zero()
    for size in range(0, integral.rank + 1, 2):
        s = size // 2
        m = s + 2 - n
        if m < 0:
            continue
        weight = (
            sympy.I * (-1) ** m * sympy.factorial(s + 1) / sympy.factorial(m)
            / math.prod(4 + 2 * t for t in range(s)) * delta**m
        )
        for chosen in itertools.combinations(integral.labels, size):
            loop_part = sum(
                (math.prod((_eta(a, b) for a, b in matching), start=TensorExpr.scalar(1))
                 for matching in perfect_matchings(chosen)),
                TensorExpr.zero(),
            )
            shift_part = TensorExpr.scalar(1)
            for label in integral.labels:
                if label not in chosen:
                    shift_part = shift_part * -sum(
                        (x * _k(vector, label) for vector, x in shift.items()), TensorExpr.zero()
                    )
            total = total + loop_part * shift_part * weight
    pole = canonicalize(total.map_coefficients(lambda c: simplex_integral(c, xs)))
    logger.debug("reduced integral %s to %d terms", integral.key, len(pole))
    return DivergentPart(integral, pole, "oracle")


# checks


def table_agrees(integral: LoopIntegral) -> bool:
    builder = TABLE.get((integral.rank, integral.denominators))
    if builder is None:
        return True
    return canonicalize(builder(integral.labels)) == reduce_oracle(integral).pole_coeff


def scale_check(integral: LoopIntegral, part: DivergentPart | None = None) -> bool:
    """k -> lambda k rescales the pole coefficient by lambda^(rank - 2 N + 4)."""
    part = part or div_part(integral)
    scaled = scale_vectors(part.pole_coeff, integral.momenta, SCALE)
    return scaled == part.pole_coeff * SCALE**integral.degree


def closure_check(integral: LoopIntegral, part: DivergentPart | None = None) -> bool:
    """Only external momenta and metrics, polynomially, carrying exactly the numerator labels."""
    part = part or div_part(integral)
    canonical = canonicalize(part.pole_coeff)
    labels = {up(a) for a in integral.labels}
    for atoms, coefficient in canonical.terms.items():
        if set(free_indices_of(atoms)) != labels:
            return False
        if not coefficient.is_polynomial(*dot_symbols(coefficient)):
            return False
        if coefficient.free_symbols - set(dot_symbols(coefficient)):
            return False
    return vectors_in(canonical) <= set(integral.momenta)


def supported_cases() -> list[LoopIntegral]:
    return [
        LoopIntegral(rank, denominators)
        for denominators in range(1, MAX_DENOMINATORS + 1)
        for rank in range(MAX_RANK + 1)
    ]
