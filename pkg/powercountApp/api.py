from django.conf import settings
from django.http import HttpRequest
from ninja import Router

from powercountApp.graphs import (
    brute_degree,
    check_divergent_leg_counts,
    check_random_graphs,
    divergence_index,
    divergent_leg_counts,
    superficial_degree,
)
from powercountApp.schemas import DegreeOut, GraphIn, RandomCheckOut
from symcoreApp.utils import qid_errors

powercount_router = Router(tags=['Power counting'])


def degree_report(g) -> dict:
    superficial, brute = superficial_degree(g), brute_degree(g)
    return {
        "vertices": g.vertex_count,
        "internal_lines": g.internal_count,
        "external_legs": g.external_count,
        "loops": g.loop_count,
        "superficial_degree": superficial,
        "brute_degree": brute,
        "agree": superficial == brute,
    }


@powercount_router.post('/degree', response=DegreeOut)
@qid_errors
def degree_view(request: HttpRequest, data: GraphIn):
    return degree_report(data.to_graph())


@powercount_router.get('/divergence_index/{vtype}', response=int)
@qid_errors
def divergence_index_view(request: HttpRequest, vtype: str):
    return divergence_index(vtype)


@powercount_router.get('/random_check', response=RandomCheckOut)
@qid_errors
def random_check_view(request: HttpRequest, graphs: int = 20, seed: int | None = None):
    seed = settings.QID_RANDOM_SEED if seed is None else seed
    max_vertices = settings.QID_MAX_GRAPH_VERTICES
    mismatches = check_random_graphs(seed, graphs, max_vertices)
    return {
        "seed": seed,
        "graphs": graphs,
        "max_vertices": max_vertices,
        "mismatches": len(mismatches),
        "divergent_leg_counts": divergent_leg_counts(),
        "leg_count_mismatches": len(check_divergent_leg_counts(seed, graphs, max_vertices)),
    }
