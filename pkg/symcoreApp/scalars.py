"""Formal commuting scalars shared by both algebras.

Coefficients are sympy expressions. Invariant products of two momenta are
plain symbols named ``dot_<a>_<b>`` with the two vector names sorted, so
``dot(a, b) is dot(b, a)``.
"""
import re

import sympy

from symcoreApp.errors import StructuralError
from symcoreApp.indices import Space

LAMBDA = sympy.Symbol("Lambda")
DIM = sympy.Symbol("D")
XI = sympy.Symbol("xi")
COUPLING = sympy.Symbol("g")
EPSILON = sympy.Symbol("epsilon")
OMEGA4 = sympy.Symbol("Omega4")
OMEGA_D = sympy.Symbol("OmegaD")
MASS = sympy.Symbol("m")
# inert i-epsilon marker carried inside propagator denominators
IEPS = sympy.Symbol("i0")

SCALARS = {
    "Lambda": LAMBDA,
    "D": DIM,
    "xi": XI,
    "g": COUPLING,
    "epsilon": EPSILON,
    "Omega4": OMEGA4,
    "OmegaD": OMEGA_D,
    "m": MASS,
    "i0": IEPS,
}

LATEX_NAMES = {
    LAMBDA: r"\Lambda",
    DIM: "D",
    XI: r"\xi",
    COUPLING: "g",
    EPSILON: r"\varepsilon",
    OMEGA4: r"\Omega_4",
    OMEGA_D: r"\Omega_D",
    MASS: "m",
    IEPS: r"i\epsilon",
}

POLE = OMEGA4 / EPSILON

_VECTOR_NAME = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")


def vector_space(name: str) -> Space:
    """Spacetime momenta are lower-case (k1, p), inner momenta upper-case (K1, P)."""
    if not _VECTOR_NAME.match(name):
        raise StructuralError("invalid vector name", name)
    return Space.INNER if name[0].isupper() else Space.LORENTZ


def dot(a: str, b: str) -> sympy.Symbol:
    if vector_space(a) is not vector_space(b):
        raise StructuralError("dot product across spaces", f"{a}.{b}")
    first, second = sorted((a, b))
    return sympy.Symbol(f"dot_{first}_{second}")


def dot_parts(symbol: sympy.Symbol) -> tuple[str, str] | None:
    name = symbol.name
    if not name.startswith("dot_"):
        return None
    first, _, second = name[4:].partition("_")
    return first, second


def dot_symbols(expr: sympy.Expr) -> list[sympy.Symbol]:
    return sorted((s for s in expr.free_symbols if dot_parts(s)), key=lambda s: s.name)


def clean(coefficient) -> sympy.Expr:
    """Canonical rational-function form of a coefficient."""
    coefficient = sympy.sympify(coefficient)
    if coefficient.is_Number:
        return coefficient
    return sympy.cancel(sympy.expand(coefficient))


def is_zero(coefficient) -> bool:
    return clean(coefficient) == 0


def parse(text: str) -> sympy.Expr:
    return sympy.parse_expr(text, local_dict=dict(SCALARS))


def latex(coefficient) -> str:
    names = dict(LATEX_NAMES)
    for symbol in sympy.sympify(coefficient).free_symbols:
        parts = dot_parts(symbol)
        if parts:
            names[symbol] = rf"{_vector_latex(parts[0])}\cdot {_vector_latex(parts[1])}"
    return sympy.latex(coefficient, symbol_names=names)


def _vector_latex(name: str) -> str:
    head = name.rstrip("0123456789")
    tail = name[len(head):]
    return f"{head}_{{{tail}}}" if tail else head
