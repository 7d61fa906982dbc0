import math

from django.http import HttpRequest
from ninja import Query, Router

from rulesApp.feynman import (
    VERTICES,
    build_propagator,
    build_vertex,
    constraints_json,
    cyclic_group,
    default_legs,
    is_symmetric,
)
from rulesApp.schemas import PropagatorQuery, RuleOut, SymmetryOut, VertexQuery
from symcoreApp.errors import RuleError
from symcoreApp.scalars import parse
from symcoreApp.serializers import to_dict, to_latex
from symcoreApp.utils import qid_errors

rules_router = Router(tags=['Feynman rules'])


@rules_router.get('/propagator', response=RuleOut)
@qid_errors
def propagator_view(request: HttpRequest, filters: Query[PropagatorQuery]):
    expr = build_propagator(filters.kind, parse(filters.xi))
    return {"name": f"{filters.kind}_propagator", "expression": to_dict(expr), "latex": to_latex(expr)}


@rules_router.get('/vertex', response=RuleOut)
@qid_errors
def vertex_view(request: HttpRequest, filters: Query[VertexQuery]):
    expr, result = build_vertex(filters.vertex, filters.symmetrize, filters.on_shell)
    return {
        "name": f"vertex{filters.vertex}",
        "expression": to_dict(expr),
        "latex": to_latex(expr),
        "constraints": constraints_json(result),
    }


@rules_router.get('/symmetry/{vertex}', response=SymmetryOut)
@qid_errors
def symmetry_view(request: HttpRequest, vertex: str, cyclic: bool = False):
    if vertex not in VERTICES or vertex == "ghost":
        raise RuleError(f"no permutation suite for vertex {vertex!r}")
    legs = default_legs("3" if vertex == "wick3" else vertex)
    group = cyclic_group(len(legs)) if cyclic else None
    failures = is_symmetric(VERTICES[vertex], legs, group)
    count = len(legs) if cyclic else math.factorial(len(legs))
    return {
        "vertex": vertex,
        "permutations": count,
        "failures": [list(f) for f in failures],
        "symmetric": not failures,
        "group": "cyclic" if cyclic else "symmetric",
    }
