from django.http import HttpRequest
from ninja import Query, Router

from looptabApp.integrals import TABLE, DivergentPart, LoopIntegral, div_part, reduce_oracle, scale_check, table_agrees
from looptabApp.schemas import DivergentPartOut, LoopQuery, TableRowOut
from symcoreApp.serializers import to_dict, to_latex
from symcoreApp.utils import qid_errors

looptab_router = Router(tags=['One-loop integrals'])


def part_out(part: DivergentPart, numeric: bool = False) -> dict:
    return {
        "rank": part.integral.rank,
        "denominators": part.integral.denominators,
        "source": part.source,
        "degree": part.integral.degree,
        "pole_coeff": to_dict(part.pole_coeff),
        "latex": to_latex(part.expr),
        "numeric": to_dict(part.numeric()) if numeric else None,
    }


@looptab_router.get('/div_part', response=DivergentPartOut)
@qid_errors
def div_part_view(request: HttpRequest, filters: Query[LoopQuery]):
    integral = LoopIntegral(filters.rank, filters.denoms)
    part = reduce_oracle(integral) if filters.oracle else div_part(integral)
    return part_out(part, filters.numeric)


@looptab_router.get('/table', response=list[TableRowOut])
@qid_errors
def table_view(request: HttpRequest):
    rows = []
    for rank, denominators in TABLE:
        integral = LoopIntegral(rank, denominators)
        part = div_part(integral)
        rows.append({
            "rank": rank,
            "denominators": denominators,
            "latex": to_latex(part.expr),
            "oracle_agrees": table_agrees(integral),
            "scales": scale_check(integral, part),
        })
    return rows
