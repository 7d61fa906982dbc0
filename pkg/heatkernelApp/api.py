from django.http import HttpRequest
from ninja import Query, Router

from heatkernelApp.assembly import (
    FluctuationOperator,
    covariant_simplify,
    gamma_n_div,
    published_gamma,
    published_trace_ln,
    reducer_for,
    trace_ln_div,
)
from heatkernelApp.schemas import CovariantOut, GammaOut, GammaQuery, TraceLnOut
from symcoreApp.serializers import to_dict, to_latex
from symcoreApp.utils import qid_errors

heatkernel_router = Router(tags=['Functional determinants'])


def graded_out(expr) -> dict:
    return {"expression": to_dict(expr), "latex": to_latex(expr)}


@heatkernel_router.get('/gamma/{n}', response=GammaOut)
@qid_errors
def gamma_view(request: HttpRequest, n: int, filters: Query[GammaQuery]):
    op = FluctuationOperator.generic(filters.commutative)
    result = gamma_n_div(op, n)
    matches = reducer_for(op).equivalent(result, published_gamma(n, filters.commutative))
    return {"n": n, "matches_published": matches, **graded_out(result)}


@heatkernel_router.get('/trace_ln', response=TraceLnOut)
@qid_errors
def trace_ln_view(request: HttpRequest, filters: Query[GammaQuery]):
    op = FluctuationOperator.generic(filters.commutative)
    result = trace_ln_div(op)
    matches = reducer_for(op).equivalent(result, published_trace_ln(filters.commutative))
    return {"matches_published": matches, **graded_out(result)}


@heatkernel_router.get('/covariant', response=CovariantOut)
@qid_errors
def covariant_view(request: HttpRequest, filters: Query[GammaQuery]):
    result = covariant_simplify(FluctuationOperator.covariant(commutative=filters.commutative))
    return {"commutative": filters.commutative, "closes": True, **graded_out(result)}
