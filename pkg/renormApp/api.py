import sympy
from django.http import HttpRequest
from ninja import Query, Router

from renormApp.beta import beta, beta_table
from renormApp.determinants import PUBLISHED_DETERMINANTS, PUBLISHED_MATTER, determinant_div, matter_div
from renormApp.schemas import BetaOut, BetaQuery, BetaRowOut, BetaTableQuery, DeterminantOut, MatterOut
from symcoreApp.errors import UnsupportedCaseError
from symcoreApp.scalars import latex
from symcoreApp.utils import qid_errors

renorm_router = Router(tags=['Renormalization'])


def beta_out(result) -> dict:
    return {
        "dimension": result.dimension,
        "coefficient": str(result.coefficient if result.dimension is None else result.value(result.dimension)),
        "beta": str(result.beta),
        "renormalized_coupling": str(result.renormalized_coupling),
        "latex": r"\beta(g) = " + latex(result.beta),
        "asymptotically_free": None if result.dimension is None else result.asymptotically_free(),
    }


def table_rows(filters: BetaTableQuery) -> list[dict]:
    if filters.dim_to < filters.dim_from:
        raise UnsupportedCaseError("empty dimension range")
    rows = beta_table(range(filters.dim_from, filters.dim_to + 1), filters.to_content())
    return [{**row, "coefficient": str(row["coefficient"]), "beta": str(row["beta"])} for row in rows]


@renorm_router.get('/determinant/{kind}', response=DeterminantOut)
@qid_errors
def determinant_view(request: HttpRequest, kind: str):
    value = determinant_div(kind)
    published = PUBLISHED_DETERMINANTS.get(kind)
    return {
        "kind": kind,
        "value": str(value),
        "published": None if published is None else str(published),
        "agrees": None if published is None else sympy.simplify(value - published) == 0,
    }


@renorm_router.get('/matter/{kind}', response=MatterOut)
@qid_errors
def matter_view(request: HttpRequest, kind: str):
    value = matter_div(kind)
    return {"kind": kind, "value": str(value), "published": str(PUBLISHED_MATTER[kind]), "agrees": value == PUBLISHED_MATTER[kind]}


@renorm_router.get('/beta', response=BetaOut)
@qid_errors
def beta_view(request: HttpRequest, filters: Query[BetaQuery]):
    return beta_out(beta(filters.dimension, filters.to_content()))


@renorm_router.get('/beta_table', response=list[BetaRowOut])
@qid_errors
def beta_table_view(request: HttpRequest, filters: Query[BetaTableQuery]):
    return table_rows(filters)
