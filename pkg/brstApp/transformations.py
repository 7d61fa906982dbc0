"""BRST differential on polynomials in A, omega, omega*, h and psi.

s is read off the parity-preserving variation delta_theta F = theta sF:
delta_theta acts as an even derivation through atom templates carrying
the odd constant theta, and theta is then moved to the front of each term
and stripped. Spacetime and inner derivatives commute with s.
"""
import logging
import random
from dataclasses import dataclass, field

import sympy
from django.conf import settings

from symcoreApp.errors import StructuralError, UnsupportedCaseError
from symcoreApp.graded import (
    GradedAtom,
    GradedExpr,
    Kind,
    Template,
    atom,
    differentiate,
    graded_normalize,
    parity,
    substitute,
)
from symcoreApp.indices import down, inner_down, inner_up, up
from symcoreApp.reduction import divergence_free
from symcoreApp.scalars import LAMBDA, XI

logger = logging.getLogger(__name__)

THETA = "theta"


def theta() -> GradedExpr:
    return atom(THETA)


def _covariant(name: str, index: str) -> GradedExpr:
    """d_mu P^M + A_mu^K nabla_K P^M - P^K nabla_K A_mu^M for the parameter species ``name``."""
    p = lambda i, *d: atom(name, inner_up(i), derivatives=d)  # noqa: E731
    return (
        p(index, down("mu"))
        + atom("A", down("mu"), inner_up("K")) * p(index, inner_down("K"))
        - p("K") * atom("A", down("mu"), inner_up(index), derivatives=[inner_down("K")])
    )


VARIATIONS: dict[str, Template] = {
    "A": Template((down("mu"), inner_up("M")), theta() * _covariant("omega", "M")),
    "omegabar": Template((inner_down("R"),), -theta() * atom("h", inner_down("R"))),
    "omega": Template(
        (inner_up("S"),),
        -theta() * atom("omega", inner_up("K")) * atom("omega", inner_up("S"), derivatives=[inner_down("K")]),
    ),
    "h": Template((inner_down("R"),), GradedExpr.zero()),
    "psi": Template((), -theta() * atom("omega", inner_up("K")) * atom("psi", derivatives=[inner_down("K")])),
}

GENERATORS = {
    "A": lambda: atom("A", down("mu"), inner_up("M")),
    "omega": lambda: atom("omega", inner_up("S")),
    "omega-star": lambda: atom("omegabar", inner_down("R")),
    "h": lambda: atom("h", inner_down("R")),
    "psi": lambda: atom("psi"),
}


def generator(name: str) -> GradedExpr:
    try:
        return GENERATORS[name]()
    except KeyError:
        raise StructuralError("unknown BRST field", name) from None


def _vary_atom(a: GradedAtom) -> GradedExpr:
    if a.info.kind is Kind.PARAMETER:
        return GradedExpr.zero()
    if a.species not in VARIATIONS:
        raise StructuralError("no BRST variation for atom species", a.species)
    return substitute(GradedExpr({(a,): 1}), {a.species: VARIATIONS[a.species]})


def delta_theta(e: GradedExpr) -> GradedExpr:
    """The even variation delta_theta, term by term through the Leibniz rule."""
    out = GradedExpr.zero(e.commutative)
    for atoms, coefficient in e.terms.items():
        for position, a in enumerate(atoms):
            image = _vary_atom(a)
            if not image.terms:
                continue
            left = GradedExpr({atoms[:position]: coefficient}, commutative=e.commutative)
            right = GradedExpr({atoms[position + 1:]: 1}, commutative=e.commutative)
            out = out + left * image * right
    return out


def strip_theta(e: GradedExpr) -> GradedExpr:
    """theta X -> X, moving theta to the front first."""
    terms = []
    for atoms, coefficient in e.terms.items():
        positions = [k for k, a in enumerate(atoms) if a.species == THETA]
        if len(positions) != 1:
            raise StructuralError("expected exactly one theta per term", THETA)
        k = positions[0]
        sign = -1 if parity(atoms[:k]) else 1
        terms.append((atoms[:k] + atoms[k + 1:], sign * coefficient))
    return GradedExpr(terms, commutative=e.commutative)


def s(e: GradedExpr) -> GradedExpr:
    """Odd left derivation: s(ab) = s(a) b + (-1)^|a| a s(b)."""
    result = graded_normalize(strip_theta(delta_theta(e)))
    logger.debug("s expanded %d terms into %d", len(e.terms), len(result.terms))
    return result


# audits


def ghost_shift_ok(e: GradedExpr) -> bool:
    """Every term of s(e) carries ghost number one higher than e."""
    before, after = e.ghost_numbers(), s(e).ghost_numbers()
    return not after or (len(before) == 1 and after == {before.pop() + 1})


@dataclass
class NilpotencyReport:
    field: str
    first: GradedExpr
    expansion: GradedExpr
    residue: GradedExpr

    @property
    def passed(self) -> bool:
        return self.residue.is_zero


def verify_nilpotent(name: str) -> NilpotencyReport:
    x = generator(name)
    first = s(x)
    expansion = strip_theta(delta_theta(first))
    residue = graded_normalize(expansion)
    report = NilpotencyReport(name, first, expansion, residue)
    logger.info("s^2 %s: %d raw terms, %s", name, len(expansion.terms), "zero" if report.passed else "nonzero")
    return report


def random_polynomial(rng: random.Random, max_degree: int = 3) -> GradedExpr:
    """A product of up to ``max_degree`` generators with fresh indices and random derivatives."""
    factors = []
    for n in range(rng.randint(1, max_degree)):
        name = rng.choice(sorted(GENERATORS))
        a = next(iter(generator(name).terms))[0]
        renamed = tuple(i.renamed(f"{i.name}{n}") for i in a.indices)
        derivatives = [down(f"nu{n}")] if rng.random() < 0.5 else []
        if rng.random() < 0.5:
            derivatives.append(inner_down(f"L{n}"))
        factors.append(GradedExpr({(GradedAtom(a.species, renamed, tuple(derivatives)),): rng.randint(1, 3)}))
    result = factors[0]
    for f in factors[1:]:
        result = result * f
    return result


def random_nilpotency_check(samples: int = 20, seed: int | None = None) -> list[GradedExpr]:
    """Polynomials whose s^2 does not vanish; empty when nilpotency holds."""
    rng = random.Random(settings.QID_RANDOM_SEED if seed is None else seed)
    failures = []
    for _ in range(samples):
        e = random_polynomial(rng)
        if not s(s(e)).is_zero:
            failures.append(e)
    return failures


def derivation_check(a: GradedExpr, b: GradedExpr) -> bool:
    sign = -1 if a.parities() == {True} else 1
    return s(a * b) == s(a) * b + sign * (a * s(b))


# gauge fixing


def default_gauge_condition() -> GradedExpr:
    """f^R = d^mu A_mu^R."""
    return atom("A", down("mu"), inner_up("R"), derivatives=[up("mu")])


def faddeev_popov(ghost: str = "omega") -> GradedExpr:
    """F^R_S omega^S for the default condition, d^mu(d_mu omega^R + A_mu^K nabla_K omega^R - omega^K nabla_K A_mu^R)."""
    return differentiate(_covariant(ghost, "R"), up("mu"))


def check_linear(f: GradedExpr) -> None:
    for atoms in graded_normalize(f).terms:
        fields = [a for a in atoms if a.info.kind is Kind.FIELD]
        if len(fields) != 1 or fields[0].species != "A":
            raise UnsupportedCaseError("only gauge conditions linear in A are supported")


@dataclass
class GaugeFermion:
    """Psi = -Lambda^2 (omega*_R f^R + xi/2 omega*_R h^R)."""

    f: GradedExpr = field(default_factory=default_gauge_condition)
    xi: sympy.Expr = XI

    def __post_init__(self):
        check_linear(self.f)

    def bracket(self) -> GradedExpr:
        omega_star = atom("omegabar", inner_down("R"))
        return omega_star * self.f + self.xi / 2 * (omega_star * atom("h", inner_up("R")))

    @property
    def expr(self) -> GradedExpr:
        return -LAMBDA**2 * self.bracket()

    def audit(self) -> bool:
        e = self.expr
        return e.ghost_numbers() == {-1} and e.parities() == {True}


@dataclass
class ExactnessReport:
    delta: GradedExpr
    ghost_term_matches: bool
    s_psi: GradedExpr
    residue: GradedExpr
    s_s_psi_zero: bool
    fermion_ok: bool

    @property
    def passed(self) -> bool:
        return self.ghost_term_matches and self.residue.is_zero and self.s_s_psi_zero and self.fermion_ok


def exactness_check(f: GradedExpr | None = None, xi=XI) -> ExactnessReport:
    """S_NEW - S_ID = s Psi, i.e. Lambda^2 (omega* Delta + h f + xi/2 h h) - s Psi = 0."""
    fermion = GaugeFermion(default_gauge_condition() if f is None else f, sympy.sympify(xi))
    delta = s(fermion.f)
    ghost_term_matches = True
    if f is None:
        ghost_term_matches = delta == faddeev_popov()
    omega_star, h = atom("omegabar", inner_down("R")), atom("h", inner_down("R"))
    gauge_fixing = omega_star * delta + h * fermion.f + fermion.xi / 2 * (h * atom("h", inner_up("R")))
    s_psi = s(fermion.expr)
    residue = graded_normalize(LAMBDA**2 * gauge_fixing - s_psi)
    report = ExactnessReport(delta, ghost_term_matches, s_psi, residue, s(s_psi).is_zero, fermion.audit())
    logger.info("exactness %s", "holds" if report.passed else "fails")
    return report


# gauge transformations


def gauge_variation(e: GradedExpr) -> GradedExpr:
    """Infinitesimal gauge transformation with parameter E^M on A and psi."""
    images = {
        "A": Template((down("mu"), inner_up("M")), _covariant("gauge_parameter", "M")),
        "psi": Template((), -atom("gauge_parameter", inner_up("K")) * atom("psi", derivatives=[inner_down("K")])),
    }
    out = GradedExpr.zero()
    for atoms, coefficient in e.terms.items():
        for position, a in enumerate(atoms):
            if a.species not in images:
                raise UnsupportedCaseError(f"gauge variation of {a.species} is not defined")
            image = substitute(GradedExpr({(a,): 1}), {a.species: images[a.species]})
            left = GradedExpr({atoms[:position]: coefficient})
            right = GradedExpr({atoms[position + 1:]: 1})
            out = out + left * image * right
    return graded_normalize(out)


def gauge_matches_brst(name: str = "A") -> bool:
    """E^M = theta omega^M turns the gauge variation into delta_theta."""
    x = generator(name)
    ghost = Template((inner_up("M"),), theta() * atom("omega", inner_up("M")))
    return substitute(gauge_variation(x), {"gauge_parameter": ghost}) == graded_normalize(delta_theta(x))


def apply_divergence_free(e: GradedExpr, species=("A", "omega", "h", "gauge_parameter")) -> GradedExpr:
    """Drops terms with nabla_M X^M for the listed divergence-free fields."""
    vanishes = divergence_free(species)
    kept = {atoms: c for atoms, c in graded_normalize(e).terms.items() if not any(vanishes(a) for a in atoms)}
    return GradedExpr(kept, commutative=e.commutative)
