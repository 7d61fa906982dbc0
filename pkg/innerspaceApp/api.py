import sympy
from django.http import HttpRequest
from ninja import Query, Router

from innerspaceApp.moments import moment, moment_value, omega_d, omega_d_numeric, quadrature_agrees
from innerspaceApp.operators import InnerOperator, trace_quadratic
from innerspaceApp.schemas import MomentOut, MomentQuery, OmegaOut, OperatorIn, TraceIn, TraceOut
from symcoreApp.scalars import parse
from symcoreApp.serializers import to_dict, to_latex
from symcoreApp.utils import qid_errors

innerspace_router = Router(tags=['Inner space'])


def operator_from(data: OperatorIn) -> InnerOperator:
    return InnerOperator(data.form, {name: parse(weight) for name, weight in data.coefficients.items()})


@innerspace_router.get('/moment', response=MomentOut)
@qid_errors
def moment_view(request: HttpRequest, filters: Query[MomentQuery]):
    m = moment(filters.degree)
    out = {"degree": m.degree, "expression": to_dict(m.result), "latex": to_latex(m.result)}
    if filters.dim is not None and filters.cutoff is not None:
        out["value"] = moment_value(m, [0] * m.degree, filters.dim, filters.cutoff)
        out["quadrature_agrees"] = quadrature_agrees(m.degree, filters.dim, filters.cutoff)
    return out


@innerspace_router.get('/omega/{dim}', response=OmegaOut)
@qid_errors
def omega_view(request: HttpRequest, dim: int):
    return {"dim": dim, "exact": sympy.sstr(sympy.simplify(omega_d(dim))), "value": omega_d_numeric(dim)}


@innerspace_router.post('/trace', response=TraceOut)
@qid_errors
def trace_view(request: HttpRequest, data: TraceIn):
    result = trace_quadratic(operator_from(data.a), operator_from(data.b))
    return {"expression": to_dict(result), "latex": to_latex(result)}
