"""Moments of the inner momentum over the cutoff ball |P| <= Lambda.

    int_{|P| <= Lambda} d^D P/(2 pi)^D  P^I1 ... P^In

Results are written with the formal Omega_D, the unit sphere surface over
(2 pi)^D, so that Omega_4 = 1/(8 pi^2).
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import sympy
from django.conf import settings
from scipy.special import gamma

from looptabApp.integrals import perfect_matchings
from symcoreApp.errors import UnsupportedCaseError
from symcoreApp.indices import inner_up
from symcoreApp.scalars import DIM, LAMBDA, OMEGA_D
from symcoreApp.tensor import TensorExpr, evaluate

logger = logging.getLogger(__name__)

MAX_DEGREE = 4
LABELS = ("I", "J", "K", "L")


def omega_d(dim=DIM):
    """2 pi^(D/2) / Gamma(D/2) / (2 pi)^D, exact for symbolic or integer D."""
    dim = sympy.sympify(dim)
    return 2 * sympy.pi ** (dim / 2) / sympy.gamma(dim / 2) / (2 * sympy.pi) ** dim


def omega_d_numeric(dim: float) -> float:
    return 2 * math.pi ** (dim / 2) / gamma(dim / 2) / (2 * math.pi) ** dim


@dataclass
class InnerMoment:
    degree: int
    labels: tuple[str, ...]
    scalar: sympy.Expr
    result: TensorExpr

    @property
    def is_zero(self) -> bool:
        return self.scalar == 0


def radial_factor(degree: int, dim=DIM, cutoff=LAMBDA) -> sympy.Expr:
    """Omega_D Lambda^(D+n) / (D (D+2) ... (D+n))."""
    dim = sympy.sympify(dim)
    denominator = math.prod((dim + 2 * t for t in range(degree // 2 + 1)), start=sympy.Integer(1))
    return OMEGA_D * sympy.sympify(cutoff) ** (dim + degree) / denominator


def moment(degree: int, labels: Sequence[str] | None = None) -> InnerMoment:
    if degree < 0 or degree > MAX_DEGREE:
        raise UnsupportedCaseError(f"inner moments are supported up to degree {MAX_DEGREE}, got {degree}")
    labels = tuple(labels or LABELS[:degree])
    if len(labels) != degree or len(set(labels)) != degree:
        raise UnsupportedCaseError("need one distinct inner label per momentum factor")
    if degree % 2:
        logger.debug("odd inner moment of degree %d vanishes over the ball", degree)
        return InnerMoment(degree, labels, sympy.Integer(0), TensorExpr.zero())
    scalar = radial_factor(degree)
    symmetric = sum(
        (math.prod((TensorExpr.metric(inner_up(a), inner_up(b)) for a, b in matching), start=TensorExpr.scalar(1))
         for matching in perfect_matchings(labels)),
        TensorExpr.zero(),
    )
    return InnerMoment(degree, labels, scalar, (symmetric * scalar).canonical())


def moment_value(m: InnerMoment, components: Sequence[int], dim: int, cutoff: float) -> float:
    """Numeric component of a symbolic moment at concrete D and Lambda."""
    free = dict(zip(m.labels, components))
    value = evaluate(
        m.result, {}, free=free, inner_dim=dim,
        scalars={OMEGA_D: omega_d_numeric(dim), LAMBDA: cutoff},
    )
    return float(value)


def quadrature_moment(components: Sequence[int], dim: int, cutoff: float, nodes: int | None = None) -> float:
    """Independent radial-angular product rule for one moment component.

    Gauss-Legendre in r and in each hyperspherical angle; the direction is
    u = (cos t1, sin t1 cos t2, ..., sin t1 ... sin t_(D-2) cos phi, ... sin phi).
    """
    if dim < 2:
        raise UnsupportedCaseError("the quadrature rule needs D >= 2")
    nodes = nodes or settings.QID_QUADRATURE_NODES
    x, w = np.polynomial.legendre.leggauss(nodes)
    degree = len(components)

    r = cutoff * (x + 1) / 2
    radial = np.sum(w * cutoff / 2 * r ** (dim - 1 + degree))

    thetas = [np.pi * (x + 1) / 2] * (dim - 2)
    theta_weights = [w * np.pi / 2] * (dim - 2)
    phi, phi_weights = np.pi * (x + 1), w * np.pi
    grids = np.meshgrid(*thetas, phi, indexing="ij")
    weight_grids = np.meshgrid(*theta_weights, phi_weights, indexing="ij")
    weights = np.prod(weight_grids, axis=0)
    angles, phi_grid = grids[:-1], grids[-1]

    jacobian = np.ones_like(phi_grid)
    for j, theta in enumerate(angles):
        jacobian = jacobian * np.sin(theta) ** (dim - 2 - j)

    direction = []
    prefix = np.ones_like(phi_grid)
    for theta in angles:
        direction.append(prefix * np.cos(theta))
        prefix = prefix * np.sin(theta)
    direction.extend([prefix * np.cos(phi_grid), prefix * np.sin(phi_grid)])

    integrand = jacobian * weights
    for component in components:
        integrand = integrand * direction[component]
    angular = np.sum(integrand)
    return float(radial * angular / (2 * np.pi) ** dim)


def quadrature_agrees(degree: int, dim: int, cutoff: float, tolerance: float = 1e-9) -> bool:
    """Every component of moment(degree) against the product rule."""
    m = moment(degree)
    for components in itertools.product(range(dim), repeat=degree):
        exact = moment_value(m, components, dim, cutoff)
        numeric = quadrature_moment(components, dim, cutoff)
        if exact == 0:
            if abs(numeric) > tolerance * radial_scale(degree, dim, cutoff):
                return False
        elif abs(numeric - exact) / abs(exact) > tolerance:
            logger.info("quadrature mismatch at %s: %r vs %r", components, numeric, exact)
            return False
    return True


def radial_scale(degree: int, dim: int, cutoff: float) -> float:
    return float(radial_factor(degree, dim, cutoff).subs(OMEGA_D, omega_d_numeric(dim)))


def scaling_check(degree: int, rho) -> bool:
    """moment(n) at rho Lambda equals rho^(D+n) moment(n) at Lambda."""
    rho = sympy.Rational(rho)
    if rho <= 0:
        raise UnsupportedCaseError("the cutoff scale factor must be positive")
    m = moment(degree)
    scaled = sympy.expand_power_base(m.scalar.subs(LAMBDA, rho * LAMBDA), force=True)
    expected = sympy.expand_power_base(m.scalar * rho ** (DIM + degree), force=True)
    return sympy.simplify(sympy.powsimp(scaled - expected, force=True)) == 0
