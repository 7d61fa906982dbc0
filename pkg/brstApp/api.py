from django.http import HttpRequest
from ninja import Query, Router

from brstApp.schemas import ExactnessOut, ExactnessQuery, NilpotencyOut, RandomOut, RandomQuery
from brstApp.transformations import (
    NilpotencyReport,
    exactness_check,
    gauge_matches_brst,
    generator,
    ghost_shift_ok,
    random_nilpotency_check,
    verify_nilpotent,
)
from symcoreApp.scalars import parse
from symcoreApp.serializers import graded_to_text, to_dict, to_latex
from symcoreApp.utils import qid_errors

brst_router = Router(tags=['BRST symmetry'])


def nilpotency_out(field: str, report: NilpotencyReport | None = None) -> dict:
    report = report or verify_nilpotent(field)
    return {
        "field": field,
        "first": to_dict(report.first),
        "residue": to_dict(report.residue),
        "latex": [to_latex(generator(field)), to_latex(report.first), to_latex(report.residue)],
        "nilpotent": report.passed,
        "ghost_shift": ghost_shift_ok(generator(field)),
    }


def exactness_out(xi) -> dict:
    report = exactness_check(xi=xi)
    return {
        "latex": [to_latex(report.s_psi), to_latex(report.residue)],
        "delta": to_dict(report.delta),
        "s_psi": to_dict(report.s_psi),
        "residue": to_dict(report.residue),
        "verdicts": {
            "ghost_term_matches": report.ghost_term_matches,
            "exactness": report.residue.is_zero,
            "s_s_psi_zero": report.s_s_psi_zero,
            "gauge_fermion": report.fermion_ok,
            "gauge_matches_brst": gauge_matches_brst(),
        },
    }


@brst_router.get('/nilpotent/{field}', response=NilpotencyOut)
@qid_errors
def nilpotent_view(request: HttpRequest, field: str):
    return nilpotency_out(field)


@brst_router.get('/exactness', response=ExactnessOut)
@qid_errors
def exactness_view(request: HttpRequest, filters: Query[ExactnessQuery]):
    return exactness_out(parse(filters.xi))


@brst_router.get('/random', response=RandomOut)
@qid_errors
def random_view(request: HttpRequest, filters: Query[RandomQuery]):
    failures = random_nilpotency_check(filters.samples, filters.seed)
    return {"samples": filters.samples, "failures": [graded_to_text(e) for e in failures]}
