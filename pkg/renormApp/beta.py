import logging
from dataclasses import asdict, dataclass
from functools import lru_cache

import sympy

from looptabApp.integrals import OMEGA4_VALUE
from renormApp.determinants import MATTER_KINDS, matter_div, qid_divergent_action
from symcoreApp.errors import MatterContentError, UnsupportedCaseError
from symcoreApp.scalars import COUPLING, DIM, EPSILON, OMEGA_D

logger = logging.getLogger(__name__)

# the bracket is quoted in units of 1/12
UNIT = sympy.Rational(1, 12)


@dataclass(frozen=True)
class MatterContent:
    n_gauge: int = 0
    n_dirac: int = 0
    n_chiral: int = 0
    n_scalar_doublet: int = 0
    n_complex_scalar: int = 0

    def __post_init__(self):
        for name, count in asdict(self).items():
            if count < 0:
                raise MatterContentError(f"{name} must be non-negative, got {count}")

    def counts(self) -> dict[str, int]:
        return {
            "gauge_field": self.n_gauge,
            "dirac": self.n_dirac,
            "chiral": self.n_chiral,
            "scalar_doublet": self.n_scalar_doublet,
            "complex_scalar": self.n_complex_scalar,
        }

    def without_higgs(self) -> "MatterContent":
        return MatterContent(self.n_gauge, self.n_dirac, self.n_chiral, 0, self.n_complex_scalar)


# 8 + 3 + 1 gauge fields, 3 families of 15 chiral fields, one Higgs doublet
STANDARD_MODEL = MatterContent(n_gauge=12, n_chiral=45, n_scalar_doublet=1)
PRESETS = {
    "none": MatterContent(),
    "sm": STANDARD_MODEL,
}


def preset(name: str, no_higgs: bool = False) -> MatterContent:
    try:
        content = PRESETS[name]
    except KeyError:
        raise UnsupportedCaseError(f"unknown matter preset {name!r}") from None
    return content.without_higgs() if no_higgs else content


@lru_cache(maxsize=None)
def _per_unit() -> dict[str, sympy.Expr]:
    values = {kind: matter_div(kind) / UNIT for kind in MATTER_KINDS}
    values["qid"] = sympy.simplify(qid_divergent_action() / (OMEGA_D / (DIM * (DIM + 2))) / UNIT)
    return values


def coefficient(content: MatterContent) -> sympy.Expr:
    """The beta bracket in units of 1/12, assembled from the derived determinants."""
    per_unit = _per_unit()
    total = per_unit["qid"]
    for kind, count in content.counts().items():
        total += count * per_unit[kind]
    return sympy.expand(total)


def published_coefficient(content: MatterContent) -> sympy.Expr:
    return (
        11 * DIM + 2 * content.n_gauge - 4 * content.n_dirac - 2 * content.n_chiral
        - 2 * content.n_scalar_doublet - content.n_complex_scalar
    )


@dataclass
class BetaResult:
    content: MatterContent
    coefficient: sympy.Expr
    dimension: int | None = None

    @property
    def prefactor(self) -> sympy.Expr:
        return OMEGA_D / (DIM * (DIM + 2)) * UNIT * self.coefficient

    @property
    def beta(self) -> sympy.Expr:
        expr = -COUPLING**3 / (4 * sympy.pi**2) * self.prefactor
        return expr if self.dimension is None else expr.subs(DIM, self.dimension)

    @property
    def renormalized_coupling(self) -> sympy.Expr:
        """g_R to O(g^3), with g^2/(4 pi^2) = 2 Omega4 g^2."""
        expr = COUPLING * (1 + 2 * OMEGA4_VALUE * COUPLING**2 * self.prefactor / EPSILON)
        return expr if self.dimension is None else expr.subs(DIM, self.dimension)

    def value(self, dim: int) -> sympy.Expr:
        return self.coefficient.subs(DIM, dim)

    def asymptotically_free(self, dim: int | None = None) -> bool:
        dim = self.dimension if dim is None else dim
        if dim is None or dim < 1:
            raise UnsupportedCaseError("asymptotic freedom is decided for integer D >= 1")
        if dim == 7 and self.content == STANDARD_MODEL:
            logger.warning("Standard Model matter at D = 7 gives 11(D-6)-2 = 9 > 0, against a quoted D <= 7 boundary")
        return bool(self.value(dim) > 0)


def beta(dim: int | None, content: MatterContent | None = None) -> BetaResult:
    content = content or MatterContent()
    result = BetaResult(content, coefficient(content), dim)
    logger.debug("beta coefficient for %s: %s", content, result.coefficient)
    return result


def beta_table(dims, content: MatterContent | None = None) -> list[dict]:
    result = beta(None, content)
    rows = []
    for d in dims:
        rows.append({
            "dimension": d,
            "coefficient": result.value(d),
            "beta": result.beta.subs(DIM, d),
            "asymptotically_free": result.asymptotically_free(d),
        })
    return rows
