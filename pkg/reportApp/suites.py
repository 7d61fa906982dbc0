"""Identity suites behind ``verify``.

Each suite returns named verdicts; ``run_suites`` runs the requested ones
on a thread pool and assembles the verdicts in registry order.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import sympy
from django.conf import settings

from brstApp.transformations import GENERATORS, exactness_check, gauge_matches_brst, verify_nilpotent
from heatkernelApp.assembly import FluctuationOperator, agrees_with_published, covariant_simplify
from innerspaceApp.moments import omega_d, quadrature_agrees, scaling_check
from looptabApp.integrals import TABLE, LoopIntegral, table_agrees
from powercountApp.graphs import check_divergent_leg_counts, check_random_graphs
from renormApp.beta import STANDARD_MODEL, beta, preset
from renormApp.determinants import lambda_not_renormalized, pipeline_agrees
from rulesApp.feynman import (
    build_propagator,
    cyclic_group,
    default_legs,
    is_symmetric,
    vertex3,
    vertex4,
    vertex_ghost,
    wick_vertex3,
)
from symcoreApp.errors import QidError, UnsupportedCaseError
from symcoreApp.indices import up
from symcoreApp.tensor import TensorExpr, substitute

logger = logging.getLogger(__name__)

Suite = Callable[[], dict[str, bool]]


def _inner_zero(rule, legs) -> bool:
    """The rule vanishes once every inner momentum is set to zero."""
    return substitute(rule(legs).expr, {leg.inner_momentum: {} for leg in legs}).is_zero


def rules_suite() -> dict[str, bool]:
    cubic, quartic, ghost = default_legs("3"), default_legs("4"), default_legs("ghost")
    landau = build_propagator("gauge", 0) * TensorExpr.momentum("k", up("mu"))
    return {
        "vertex3_cyclic": not is_symmetric(vertex3, cubic, cyclic_group(3)),
        "wick3_bose": not is_symmetric(wick_vertex3, cubic),
        "vertex4_bose": not is_symmetric(vertex4, quartic),
        "vertex3_inner_zero": _inner_zero(vertex3, cubic),
        "vertex4_inner_zero": _inner_zero(vertex4, quartic),
        "ghost_inner_zero": _inner_zero(vertex_ghost, ghost),
        "landau_transverse": landau.is_zero,
    }


def powercount_suite() -> dict[str, bool]:
    sample = (settings.QID_RANDOM_SEED, settings.QID_RANDOM_GRAPHS, settings.QID_MAX_GRAPH_VERTICES)
    return {
        "superficial_degree": not check_random_graphs(*sample),
        "divergent_leg_counts": not check_divergent_leg_counts(*sample),
    }


def looptab_suite() -> dict[str, bool]:
    return {f"table_{rank}_{denoms}": table_agrees(LoopIntegral(rank, denoms)) for rank, denoms in TABLE}


def innerspace_suite() -> dict[str, bool]:
    verdicts = {
        f"quadrature_{degree}_D{dim}": quadrature_agrees(degree, dim, 1.0)
        for degree in (0, 2)
        for dim in (2, 3, 4)
    }
    verdicts["omega_4"] = sympy.simplify(omega_d(4) - 1 / (8 * sympy.pi**2)) == 0
    verdicts.update({f"scaling_{degree}": scaling_check(degree, 2) for degree in (0, 2, 4)})
    return verdicts


def heatkernel_suite() -> dict[str, bool]:
    verdicts = {f"{name}_matches_published": ok for name, ok in agrees_with_published().items()}
    try:
        covariant_simplify(FluctuationOperator.covariant())
        verdicts["covariant_closure"] = True
    except QidError:
        logger.exception("covariant form does not close")
        verdicts["covariant_closure"] = False
    return verdicts


def renorm_suite() -> dict[str, bool]:
    verdicts = dict(pipeline_agrees())
    pure, sm = beta(None), beta(None, STANDARD_MODEL)
    verdicts["lambda_not_renormalized"] = lambda_not_renormalized()
    verdicts["pure_free_all_dimensions"] = all(pure.asymptotically_free(d) for d in range(1, 13))
    verdicts["sm_free_at_7"] = sm.asymptotically_free(7)
    verdicts["sm_not_free_at_6"] = not sm.asymptotically_free(6)
    verdicts["sm_no_higgs_zero_at_6"] = beta(6, preset("sm", no_higgs=True)).value(6) == 0
    return verdicts


def brst_suite() -> dict[str, bool]:
    verdicts = {f"nilpotent_{name}": verify_nilpotent(name).passed for name in GENERATORS}
    verdicts["exactness"] = exactness_check().passed
    verdicts["gauge_matches_brst"] = gauge_matches_brst()
    return verdicts


SUITES: dict[str, Suite] = {
    "rules": rules_suite,
    "powercount": powercount_suite,
    "looptab": looptab_suite,
    "innerspace": innerspace_suite,
    "heatkernel": heatkernel_suite,
    "renorm": renorm_suite,
    "brst": brst_suite,
}


def _guarded(name: str) -> dict[str, bool]:
    try:
        verdicts = SUITES[name]()
    except Exception:
        logger.exception("suite %s raised", name)
        return {name: False}
    logger.info("suite %s: %d/%d passed", name, sum(verdicts.values()), len(verdicts))
    return verdicts


def run_suites(names=None, workers: int | None = None) -> dict[str, dict[str, bool]]:
    unknown = sorted(set(names or ()) - set(SUITES))
    if unknown:
        raise UnsupportedCaseError(f"unknown suite {unknown[0]!r}")
    names = [n for n in SUITES if not names or n in names]
    workers = workers or settings.QID_VERIFY_WORKERS
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = dict(zip(names, pool.map(_guarded, names)))
    return {name: results[name] for name in names}


def flatten(results: dict[str, dict[str, bool]]) -> dict[str, bool]:
    return {f"{suite}.{name}": ok for suite, checks in results.items() for name, ok in checks.items()}


def summary(results: dict[str, dict[str, bool]]) -> dict[str, dict[str, int]]:
    return {suite: {"passed": sum(checks.values()), "total": len(checks)} for suite, checks in results.items()}
