"""Momentum-space Feynman rules: propagators and the three self-couplings.

All momenta are incoming. A gauge leg ``i`` carries the spacetime momentum
``k<i>``, the inner momentum ``K<i>``, a lower Lorentz index and an upper
inner index; ghost legs carry only the inner index.
"""
import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

import sympy

from symcoreApp.errors import RuleError
from symcoreApp.indices import Index, Space, down, inner_down, inner_up
from symcoreApp.scalars import IEPS, LAMBDA, dot
from symcoreApp.tensor import Momentum, TensorExpr, canonicalize, evaluate, substitute

logger = logging.getLogger(__name__)


class LegKind(str, Enum):
    GAUGE = "gauge"
    GHOST_IN = "ghost_in"
    GHOST_OUT = "ghost_out"


@dataclass(frozen=True)
class Leg:
    id: int
    inner_index: Index
    lorentz_index: Index | None = None
    kind: LegKind = LegKind.GAUGE

    def __post_init__(self):
        if (self.kind is LegKind.GAUGE) != (self.lorentz_index is not None):
            raise RuleError(f"leg {self.id}: gauge legs need a Lorentz index, ghost legs none")

    @classmethod
    def gauge(cls, id: int, lorentz: str, inner: str) -> "Leg":
        return cls(id, inner_up(inner), down(lorentz), LegKind.GAUGE)

    @classmethod
    def ghost_in(cls, id: int, inner: str) -> "Leg":
        return cls(id, inner_up(inner), None, LegKind.GHOST_IN)

    @classmethod
    def ghost_out(cls, id: int, inner: str) -> "Leg":
        return cls(id, inner_up(inner), None, LegKind.GHOST_OUT)

    @property
    def momentum(self) -> str:
        return f"k{self.id}"

    @property
    def inner_momentum(self) -> str:
        return f"K{self.id}"

    def k(self, index: Index) -> TensorExpr:
        return TensorExpr.momentum(self.momentum, index)

    def K(self, index: Index) -> TensorExpr:
        return TensorExpr.momentum(self.inner_momentum, index)


@dataclass(frozen=True)
class Constraint:
    """Sum of the named momenta vanishes."""

    space: Space
    vectors: tuple[str, ...]

    def solve_for(self, vector: str) -> dict[str, int]:
        return {v: -1 for v in self.vectors if v != vector}


@dataclass(frozen=True)
class RuleResult:
    expr: TensorExpr
    legs: tuple[Leg, ...]
    constraints: tuple[Constraint, Constraint] = field(default=())

    @classmethod
    def conserving(cls, expr: TensorExpr, legs: Sequence[Leg]) -> "RuleResult":
        return cls(
            canonicalize(expr),
            tuple(legs),
            (
                Constraint(Space.LORENTZ, tuple(leg.momentum for leg in legs)),
                Constraint(Space.INNER, tuple(leg.inner_momentum for leg in legs)),
            ),
        )


def _eta(a: Index, b: Index) -> TensorExpr:
    return TensorExpr.metric(a, b)


def _delta(a: Index, b: Index) -> TensorExpr:
    return TensorExpr.metric(a, b)


def _require(legs: Sequence[Leg], kinds: Sequence[LegKind], rule: str) -> None:
    if len(legs) != len(kinds):
        raise RuleError(f"{rule} takes {len(kinds)} legs, got {len(legs)}")
    for leg, kind in zip(legs, kinds):
        if leg.kind is not kind:
            raise RuleError(f"{rule}: leg {leg.id} must be {kind.value}, got {leg.kind.value}")
    ids = [leg.id for leg in legs]
    if len(set(ids)) != len(ids):
        raise RuleError(f"{rule}: leg ids must be distinct")


# propagators


def gauge_propagator(xi, k: str, first: tuple[str, str], second: tuple[str, str]) -> TensorExpr:
    """(eta_{mu nu} - (1 - xi) k_mu k_nu / k^2) delta^{MN} / (k^2 - i0)."""
    (mu, m), (nu, n) = first, second
    k2 = dot(k, k)
    transverse = _eta(down(mu), down(nu)) - (1 - sympy.sympify(xi)) / k2 * (
        TensorExpr.momentum(k, down(mu)) * TensorExpr.momentum(k, down(nu))
    )
    return canonicalize(transverse * _delta(inner_up(m), inner_up(n)) / (k2 - IEPS))


def ghost_propagator(k: str, r: str, s: str) -> TensorExpr:
    """delta^R_S / (k^2 - i0)."""
    return canonicalize(_delta(inner_up(r), inner_down(s)) / (dot(k, k) - IEPS))


# vertices


def vertex3(legs: Sequence[Leg]) -> RuleResult:
    """Published cubic vertex; invariant under cyclic leg permutations."""
    _require(legs, [LegKind.GAUGE] * 3, "vertex3")
    total = TensorExpr.zero()
    for i, j, l in ((2, 3, 1), (3, 1, 2), (1, 2, 3)):
        total = total + _wick_term(legs, i, j, l)
    return RuleResult.conserving(-2 * LAMBDA**2 * total, legs)


def wick_vertex3(legs: Sequence[Leg]) -> RuleResult:
    """Cubic vertex from all six field-to-leg assignments of the action term."""
    _require(legs, [LegKind.GAUGE] * 3, "wick_vertex3")
    total = TensorExpr.zero()
    for i, j, l in itertools.permutations((1, 2, 3)):
        total = total + _wick_term(legs, i, j, l)
    return RuleResult.conserving(-LAMBDA**2 * total, legs)


def _wick_term(legs: Sequence[Leg], i: int, j: int, l: int) -> TensorExpr:
    """Leg i carries the spacetime derivative, leg l the inner one, leg j the free field."""
    a = {n: legs[n - 1].lorentz_index for n in (1, 2, 3)}
    x = {n: legs[n - 1].inner_index for n in (1, 2, 3)}
    li = legs[i - 1]
    ll = legs[l - 1]
    lorentz = li.k(a[j]) * _eta(a[l], a[i]) - li.k(a[l]) * _eta(a[j], a[i])
    return lorentz * _delta(x[i], x[l]) * ll.K(x[j])


# each row: overall sign, (K leg, slot of index), (K leg, slot), (delta slot, delta slot)
_QUARTIC_INNER = {
    "A": [(1, (1, 3), (2, 4), (1, 2)), (-1, (2, 4), (3, 1), (2, 3)),
          (1, (3, 1), (4, 2), (3, 4)), (-1, (1, 3), (4, 2), (1, 4))],
    "B": [(1, (1, 4), (2, 3), (1, 2)), (-1, (1, 4), (3, 2), (1, 3)),
          (1, (3, 2), (4, 1), (3, 4)), (-1, (2, 3), (4, 1), (2, 4))],
    "C": [(1, (1, 2), (3, 4), (1, 3)), (-1, (1, 2), (4, 3), (1, 4)),
          (1, (2, 1), (4, 3), (2, 4)), (-1, (2, 1), (3, 4), (2, 3))],
}
# eta_{12} eta_{34} - eta_{14} eta_{23} and so on
_QUARTIC_LORENTZ = {
    "A": (((1, 2), (3, 4)), ((1, 4), (2, 3))),
    "B": (((1, 2), (3, 4)), ((1, 3), (2, 4))),
    "C": (((1, 3), (2, 4)), ((1, 4), (2, 3))),
}


def vertex4(legs: Sequence[Leg]) -> RuleResult:
    _require(legs, [LegKind.GAUGE] * 4, "vertex4")
    a = {n: legs[n - 1].lorentz_index for n in range(1, 5)}
    x = {n: legs[n - 1].inner_index for n in range(1, 5)}
    total = TensorExpr.zero()
    for block, rows in _QUARTIC_INNER.items():
        inner = TensorExpr.zero()
        for sign, (p, s), (q, t), (d1, d2) in rows:
            inner = inner + sign * legs[p - 1].K(x[s]) * legs[q - 1].K(x[t]) * _delta(x[d1], x[d2])
        (e1, e2), (f1, f2) = _QUARTIC_LORENTZ[block]
        lorentz = _eta(a[e1[0]], a[e1[1]]) * _eta(a[e2[0]], a[e2[1]]) \
            - _eta(a[f1[0]], a[f1[1]]) * _eta(a[f2[0]], a[f2[1]])
        total = total + inner * lorentz
    return RuleResult.conserving(-LAMBDA**2 * total, legs)


def vertex_ghost(legs: Sequence[Leg]) -> RuleResult:
    """Legs: outgoing ghost R, incoming ghost S, gauge field mu M."""
    _require(legs, [LegKind.GHOST_OUT, LegKind.GHOST_IN, LegKind.GAUGE], "vertex_ghost")
    out, into, gauge = legs
    inner = into.K(gauge.inner_index) * _delta(out.inner_index, into.inner_index) \
        - gauge.K(into.inner_index) * _delta(gauge.inner_index, out.inner_index)
    return RuleResult.conserving(-LAMBDA**2 * inner * out.k(gauge.lorentz_index), legs)


def default_legs(vertex: str) -> tuple[Leg, ...]:
    if vertex == "3":
        return Leg.gauge(1, "mu", "M"), Leg.gauge(2, "nu", "N"), Leg.gauge(3, "lambda", "L")
    if vertex == "4":
        return (Leg.gauge(1, "mu", "M"), Leg.gauge(2, "nu", "N"),
                Leg.gauge(3, "rho", "R"), Leg.gauge(4, "sigma", "S"))
    if vertex == "ghost":
        return Leg.ghost_out(1, "R"), Leg.ghost_in(2, "S"), Leg.gauge(3, "mu", "M")
    raise RuleError(f"unknown vertex {vertex!r}")


VERTICES = {"3": vertex3, "4": vertex4, "ghost": vertex_ghost, "wick3": wick_vertex3}


# symmetry and on-shell tools


def permuted(rule, legs: Sequence[Leg], order: Sequence[int]) -> RuleResult:
    """Rebuilds a rule with leg ``order[n]`` moved into slot ``n``."""
    return rule([legs[p] for p in order])


def bose_symmetrize(rule, legs: Sequence[Leg], group: Iterable[Sequence[int]] | None = None) -> RuleResult:
    """Group average of a rule over simultaneous leg permutations."""
    group = list(group or itertools.permutations(range(len(legs))))
    total = TensorExpr.zero()
    for order in group:
        total = total + permuted(rule, legs, order).expr
    return RuleResult.conserving(total / len(group), legs)


def is_symmetric(rule, legs: Sequence[Leg], group: Iterable[Sequence[int]] | None = None) -> list[tuple[int, ...]]:
    """Permutations under which the rule changes; empty when fully symmetric."""
    reference = rule(legs).expr
    failures = []
    for order in group or itertools.permutations(range(len(legs))):
        if permuted(rule, legs, order).expr != reference:
            failures.append(tuple(order))
    return failures


def cyclic_group(n: int) -> list[tuple[int, ...]]:
    return [tuple((start + step) % n for step in range(n)) for start in range(n)]


def eliminate(result: RuleResult, leg: Leg) -> TensorExpr:
    """Solves both conservation constraints for ``leg``'s momenta."""
    binding = {}
    for constraint in result.constraints:
        vector = leg.momentum if constraint.space is Space.LORENTZ else leg.inner_momentum
        binding[vector] = constraint.solve_for(vector)
    return substitute(result.expr, binding)


def reduce_on_shell(result: RuleResult) -> TensorExpr:
    """Conservation on the last leg, then inner transversality of every external leg."""
    expr = eliminate(result, result.legs[-1])
    own = {(leg.inner_momentum, leg.inner_index.name) for leg in result.legs}
    kept = {}
    for atoms, coefficient in expr.terms.items():
        if any(isinstance(a, Momentum) and (a.vector, a.index.name) in own for a in atoms):
            continue
        kept[atoms] = coefficient
    return canonicalize(TensorExpr(kept))


def grading(expr: TensorExpr) -> set[tuple[int, int]]:
    """(power of Lambda, number of inner momentum factors) per term."""
    degrees = set()
    for atoms, coefficient in canonicalize(expr).terms.items():
        inner = sum(1 for a in atoms if isinstance(a, Momentum) and a.index.space is Space.INNER)
        degrees.add((sympy.degree(coefficient, LAMBDA), inner))
    return degrees


# numeric inner covariance


def cayley_rotation(generator: Sequence[Sequence[int]]) -> sympy.Matrix:
    """Exact rational rotation (I - A)(I + A)^-1 from an antisymmetric integer matrix."""
    a = sympy.Matrix(generator)
    if a + a.T != sympy.zeros(*a.shape):
        raise RuleError("Cayley generator must be antisymmetric")
    one = sympy.eye(a.shape[0])
    return (one - a) * (one + a).inv()


def _rotate(vector: Sequence, rotation: sympy.Matrix) -> tuple[Fraction, ...]:
    image = rotation * sympy.Matrix([sympy.Rational(str(v)) for v in vector])
    return tuple(Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in image)


def inner_contracted(result: RuleResult) -> TensorExpr:
    """Contracts each free inner index of a rule with a test vector ``U<leg>``."""
    contracted = result.expr
    for leg in result.legs:
        contracted = contracted * TensorExpr.momentum(f"U{leg.id}", leg.inner_index.flipped())
    return canonicalize(contracted)


def covariance_defect(
    result: RuleResult,
    vectors: dict[str, Sequence],
    lorentz: dict[str, int],
    rotation: sympy.Matrix,
    scalars=None,
) -> sympy.Expr:
    """Value of the contracted rule minus its value with every inner vector rotated."""
    contracted = inner_contracted(result)
    inner_dim = rotation.shape[0]
    rotated = {
        name: (_rotate(v, rotation) if name[0].isupper() else v) for name, v in vectors.items()
    }
    before = evaluate(contracted, vectors, free=lorentz, inner_dim=inner_dim, scalars=scalars)
    after = evaluate(contracted, rotated, free=lorentz, inner_dim=inner_dim, scalars=scalars)
    logger.debug("covariance check %s -> %s", before, after)
    return sympy.simplify(before - after)


def build_vertex(vertex: str, symmetrize: bool = False, on_shell: bool = False) -> tuple[TensorExpr, RuleResult]:
    """Vertex on its default legs, optionally Bose-symmetrized and reduced on shell."""
    if vertex not in VERTICES:
        raise RuleError(f"unknown vertex {vertex!r}")
    rule = VERTICES[vertex]
    legs = default_legs("3" if vertex == "wick3" else vertex)
    result = bose_symmetrize(rule, legs) if symmetrize else rule(legs)
    expr = reduce_on_shell(result) if on_shell else result.expr
    return expr, result


def build_propagator(kind: str, xi=1) -> TensorExpr:
    if kind == "gauge":
        return gauge_propagator(xi, "k", ("mu", "M"), ("nu", "N"))
    if kind == "ghost":
        return ghost_propagator("k", "R", "S")
    raise RuleError(f"unknown propagator {kind!r}")


def constraints_json(result: RuleResult) -> list[dict]:
    return [{"space": c.space.value, "vectors": list(c.vectors)} for c in result.constraints]
