"""Divergent part of Tr Ln(D/D0) for D = -d^2 + B_rho d^rho + C.

Each of the n insertions of (i B_rho (p + q_j)^rho + C) is expanded, the
loop momenta are integrated with the one-loop table, and every external
momentum k_l^mu is traded for i d^mu acting on the operator inserted at
vertex l. The products are then reduced under the trace, modulo total
derivatives, onto a fixed monomial basis.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

import sympy

from looptabApp.integrals import LoopIntegral, div_part
from symcoreApp.errors import CovariantFormError, UnsupportedCaseError
from symcoreApp.graded import GradedAtom, GradedExpr, Template, atom, graded_normalize, substitute
from symcoreApp.indices import down
from symcoreApp.reduction import TraceReducer
from symcoreApp.scalars import POLE, dot_parts, dot_symbols
from symcoreApp.tensor import Metric, Momentum

logger = logging.getLogger(__name__)

ORDERS = (1, 2, 3, 4)
# Tr Ln(1 + X) = sum_n (-1)^(n+1)/n Tr X^n
LOG_WEIGHTS = {1: sympy.Integer(1), 2: -sympy.Rational(1, 2), 3: sympy.Rational(1, 3), 4: -sympy.Rational(1, 4)}


def B(index: str, *derivatives: str, commutative: bool = False) -> GradedExpr:
    return atom("B", down(index), derivatives=[down(d) for d in derivatives]).as_commutative(commutative)


def C(*derivatives: str, commutative: bool = False) -> GradedExpr:
    return atom("C", derivatives=[down(d) for d in derivatives]).as_commutative(commutative)


def Acal(index: str, *derivatives: str, commutative: bool = False) -> GradedExpr:
    return atom("Acal", down(index), derivatives=[down(d) for d in derivatives]).as_commutative(commutative)


def E(commutative: bool = False) -> GradedExpr:
    return atom("E").as_commutative(commutative)


def field_strength(mu: str, nu: str, commutative: bool = False) -> GradedExpr:
    """F_mu nu = [D_mu, D_nu] = d_mu A_nu - d_nu A_mu + [A_mu, A_nu]."""
    a = lambda i, *d: Acal(i, *d, commutative=commutative)  # noqa: E731
    return a(nu, mu) - a(mu, nu) + a(mu) * a(nu) - a(nu) * a(mu)


@dataclass
class FluctuationOperator:
    """Coefficients of D = -d^2 + B_rho d^rho + C, optionally in covariant form."""

    b: Template
    c: GradedExpr
    connection: Template | None = None
    endomorphism: GradedExpr | None = None
    commutative: bool = False
    name: str = "generic"

    @classmethod
    def generic(cls, commutative: bool = False) -> "FluctuationOperator":
        return cls(
            Template((down("rho"),), B("rho", commutative=commutative)),
            C(commutative=commutative),
            commutative=commutative,
        )

    @classmethod
    def covariant(
        cls,
        connection: Template | None = None,
        endomorphism: GradedExpr | None = None,
        commutative: bool = False,
        name: str = "covariant",
    ) -> "FluctuationOperator":
        """B_mu = -2 A_mu and C = -d_mu A^mu - A_mu A^mu + E."""
        connection = connection or Template((down("rho"),), Acal("rho", commutative=commutative))
        endomorphism = E(commutative) if endomorphism is None else endomorphism
        b, c = covariant_coefficients(connection, endomorphism, commutative)
        return cls(b, c, connection, endomorphism, commutative, name)

    @property
    def is_generic(self) -> bool:
        return self.name == "generic"

    @property
    def has_covariant_form(self) -> bool:
        return self.connection is not None and self.endomorphism is not None

    def bindings(self) -> dict[str, Template | GradedExpr]:
        return {"B": self.b, "C": self.c}

    def check_covariant_identities(self) -> None:
        if not self.has_covariant_form:
            raise CovariantFormError(f"operator {self.name!r} has no covariant form")
        b, c = covariant_coefficients(self.connection, self.endomorphism, self.commutative)
        slot = B("rho", commutative=self.commutative)
        if not (substitute(slot, {"B": self.b}) == substitute(slot, {"B": b})):
            raise CovariantFormError("B_mu differs from -2 A_mu")
        if not (self.c == c):
            raise CovariantFormError("C differs from -d_mu A^mu - A_mu A^mu + E")


def covariant_coefficients(connection: Template, endomorphism: GradedExpr, commutative: bool = False):
    a = lambda i, *d: substitute(Acal(i, *d, commutative=commutative), {"Acal": connection})  # noqa: E731
    b = Template((down("rho"),), -2 * a("rho"))
    c = -a("mu", "mu") - a("mu") * a("mu") + endomorphism
    return b, graded_normalize(c)


# assembly


def _choices(vertex: int):
    """Per-vertex terms: C, i B.p, and i B.k_l for every offset momentum l <= vertex."""
    yield ("C", None)
    yield ("loop", None)
    for l in range(2, vertex + 1):
        yield ("external", l)


def _label(vertex: int) -> str:
    return f"rho{vertex}"


def _vertex_of(momentum: str) -> int:
    return int(momentum[1:])


@lru_cache(maxsize=None)
def raw_gamma(n: int, commutative: bool = False) -> GradedExpr:
    """Unreduced Gamma^(n)div over the bare B and C atoms, including Omega4/epsilon."""
    if n not in ORDERS:
        raise UnsupportedCaseError(f"only n = 1..4 insertions diverge, got {n}")
    terms = []
    for choice in itertools.product(*(list(_choices(j)) for j in range(1, n + 1))):
        loop_labels = tuple(_label(j) for j, (kind, _) in enumerate(choice, start=1) if kind == "loop")
        integral = LoopIntegral(len(loop_labels), n, loop_labels)
        if integral.degree < 0:
            continue
        pole = div_part(integral).pole_coeff.canonical()
        if pole.is_zero:
            continue
        base_factor = sympy.I ** sum(kind != "C" for kind, _ in choice)
        base_derivatives = {j: [] for j in range(1, n + 1)}
        for j, (kind, l) in enumerate(choice, start=1):
            if kind == "external":
                base_derivatives[l].append(_label(j))
                base_factor *= sympy.I
        for atoms, coefficient in pole.terms.items():
            terms.extend(_expand_pole_term(choice, base_derivatives, base_factor, atoms, coefficient))
    result = GradedExpr(terms, commutative=commutative) * POLE
    logger.debug("raw Gamma^(%d) has %d terms", n, len(result.terms))
    return result


def _expand_pole_term(choice, base_derivatives, base_factor, atoms, coefficient):
    names = {j: _label(j) for j, (kind, _) in enumerate(choice, start=1) if kind != "C"}
    derivatives = {j: list(ds) for j, ds in base_derivatives.items()}
    factor = base_factor
    for a in atoms:
        if isinstance(a, Metric):
            first, second = (int(i.name[3:]) for i in a.indices)
            names[second] = names[first]
        elif isinstance(a, Momentum):
            derivatives[_vertex_of(a.vector)].append(a.index.name)
            factor *= sympy.I

    dots = dot_symbols(coefficient)
    monomials = sympy.Poly(coefficient, *dots).terms() if dots else [((), coefficient)]
    out = []
    for powers, weight in monomials:
        extra = {j: [] for j in derivatives}
        counter = 0
        for symbol, power in zip(dots, powers):
            left, right = (_vertex_of(v) for v in dot_parts(symbol))
            for _ in range(power):
                counter += 1
                label = f"sigma{counter}"
                extra[left].append(label)
                extra[right].append(label)
                weight *= sympy.I**2
        sequence = []
        for j, (kind, _) in enumerate(choice, start=1):
            ds = tuple(down(d) for d in derivatives[j] + extra[j])
            if kind == "C":
                sequence.append(GradedAtom("C", (), ds))
            else:
                sequence.append(GradedAtom("B", (down(names[j]),), ds))
        out.append((tuple(sequence), factor * weight))
    return out


# published basis


def published_gamma(n: int, commutative: bool = False) -> GradedExpr:
    """Local divergent contributions with n insertions, as tabulated.

    The C^2 term of the quadratic contribution enters with +1; the
    alternating sum then yields the -1/2 C^2 of the trace-log bracket.
    """
    kw = {"commutative": commutative}
    r = sympy.Rational
    if n == 1:
        body = GradedExpr.zero(commutative)
    elif n == 2:
        body = (
            r(1, 6) * B("mu", "mu", **kw) * B("nu", "nu", **kw)
            + r(1, 12) * B("mu", "nu", **kw) * B("mu", "nu", **kw)
            - B("mu", "mu", **kw) * C(**kw)
            + C(**kw) * C(**kw)
        )
    elif n == 3:
        body = (
            r(1, 4) * B("mu", "mu", **kw) * B("nu", **kw) * B("nu", **kw)
            - r(1, 4) * B("mu", **kw) * B("nu", "mu", **kw) * B("nu", **kw)
            - r(3, 4) * C(**kw) * B("nu", **kw) * B("nu", **kw)
        )
    elif n == 4:
        body = (
            r(1, 12) * B("mu", **kw) * B("mu", **kw) * B("nu", **kw) * B("nu", **kw)
            + r(1, 24) * B("mu", **kw) * B("nu", **kw) * B("mu", **kw) * B("nu", **kw)
        )
    else:
        raise UnsupportedCaseError(f"only n = 1..4 insertions diverge, got {n}")
    return body * (sympy.I * POLE)


def published_trace_ln(commutative: bool = False) -> GradedExpr:
    kw = {"commutative": commutative}
    r = sympy.Rational
    body = (
        -r(1, 12) * B("mu", "mu", **kw) * B("nu", "nu", **kw)
        - r(1, 24) * B("mu", "nu", **kw) * B("mu", "nu", **kw)
        + r(1, 2) * B("mu", "mu", **kw) * C(**kw)
        - r(1, 2) * C(**kw) * C(**kw)
        + r(1, 12) * B("mu", "mu", **kw) * B("nu", **kw) * B("nu", **kw)
        - r(1, 12) * B("mu", **kw) * B("nu", "mu", **kw) * B("nu", **kw)
        - r(1, 4) * C(**kw) * B("nu", **kw) * B("nu", **kw)
        - r(1, 48) * B("mu", **kw) * B("mu", **kw) * B("nu", **kw) * B("nu", **kw)
        - r(1, 96) * B("mu", **kw) * B("nu", **kw) * B("mu", **kw) * B("nu", **kw)
    )
    return body * (sympy.I * POLE)


def covariant_target(endomorphism: GradedExpr | None = None, commutative: bool = False) -> GradedExpr:
    """-i Omega4/epsilon Tr{1/12 F_mu nu F^mu nu + 1/2 E^2} with F written through A."""
    e = E(commutative) if endomorphism is None else endomorphism
    f = field_strength("mu", "nu", commutative)
    body = sympy.Rational(1, 12) * f * field_strength("mu", "nu", commutative) + sympy.Rational(1, 2) * e * e
    return body * (-sympy.I * POLE)


def covariant_display(commutative: bool = False) -> GradedExpr:
    """The same target with the field strength kept as an atom."""
    f = atom("F", down("mu"), down("nu")).as_commutative(commutative)
    body = sympy.Rational(1, 12) * f * atom("F", down("mu"), down("nu")).as_commutative(commutative)
    body = body + sympy.Rational(1, 2) * E(commutative) * E(commutative)
    return body * (-sympy.I * POLE)


# reduction


def reducer_for(op: FluctuationOperator) -> TraceReducer:
    keep = (published_trace_ln(op.commutative),) if op.is_generic else ()
    return TraceReducer(cyclic=not op.commutative, commutative=op.commutative, keep=keep)


def _bound(op: FluctuationOperator, expr: GradedExpr) -> GradedExpr:
    return expr if op.is_generic else substitute(expr, op.bindings())


def gamma_n_div(op: FluctuationOperator, n: int) -> GradedExpr:
    raw = raw_gamma(n, op.commutative)
    return reducer_for(op).normal_form(_bound(op, raw))


def trace_ln_div(op: FluctuationOperator) -> GradedExpr:
    total = GradedExpr.zero(op.commutative)
    for n in ORDERS:
        total = total + LOG_WEIGHTS[n] * raw_gamma(n, op.commutative)
    return reducer_for(op).normal_form(_bound(op, total))


def covariant_simplify(op: FluctuationOperator) -> GradedExpr:
    """Rewrites the trace-log in covariant form with the operator's own E; a nonzero residue is an error."""
    if not op.has_covariant_form:
        raise CovariantFormError(f"operator {op.name!r} has no covariant form")
    op.check_covariant_identities()
    reducer = reducer_for(op)
    generic = trace_ln_div(FluctuationOperator.generic(op.commutative))
    substituted = substitute(generic, op.bindings())
    target = substitute(covariant_target(commutative=op.commutative), {"Acal": op.connection, "E": op.endomorphism})
    residue = reducer.normal_form(substituted - target)
    if not residue.is_zero:
        raise CovariantFormError(f"covariant closure leaves {len(residue.terms)} residual terms")
    logger.info("covariant form of %s closes", op.name)
    return substitute(covariant_display(op.commutative), {"E": op.endomorphism})


def agrees_with_published(op: FluctuationOperator | None = None) -> dict[str, bool]:
    """Term-by-term comparison of the assembly with the tabulated brackets."""
    op = op or FluctuationOperator.generic()
    reducer = reducer_for(op)
    verdicts = {
        f"gamma{n}": reducer.equivalent(gamma_n_div(op, n), published_gamma(n, op.commutative)) for n in ORDERS
    }
    verdicts["trace_ln"] = reducer.equivalent(trace_ln_div(op), published_trace_ln(op.commutative))
    return verdicts
