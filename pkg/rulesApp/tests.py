import json
from io import StringIO

import sympy
from django.core.management import call_command
from django.test import SimpleTestCase
from ninja.testing import TestClient

from rulesApp.api import rules_router
from rulesApp.feynman import (
    Leg,
    bose_symmetrize,
    cayley_rotation,
    covariance_defect,
    cyclic_group,
    default_legs,
    eliminate,
    gauge_propagator,
    ghost_propagator,
    grading,
    is_symmetric,
    reduce_on_shell,
    vertex3,
    vertex4,
    vertex_ghost,
    wick_vertex3,
)
from symcoreApp.errors import RuleError
from symcoreApp.indices import Space, down, inner_down, inner_up, up
from symcoreApp.scalars import DIM, IEPS, LAMBDA, XI, dot
from symcoreApp.serializers import to_dict
from symcoreApp.tensor import Metric, Momentum, TensorExpr, contract, substitute


def eta(a, b):
    return TensorExpr.metric(down(a), down(b))


def delta(a, b):
    return TensorExpr.metric(inner_up(a), inner_up(b))


def k(vector, index):
    return TensorExpr.momentum(vector, down(index))


def K(vector, index):
    return TensorExpr.momentum(vector, inner_up(index))


NO_INNER_MOMENTA = {"K1": {}, "K2": {}, "K3": {}, "K4": {}}


class PropagatorTest(SimpleTestCase):
    def test_feynman_gauge(self):
        expected = eta("mu", "nu") * delta("M", "N") / (dot("k", "k") - IEPS)
        self.assertEqual(gauge_propagator(1, "k", ("mu", "M"), ("nu", "N")), expected)

    def test_xi_substitution_reaches_feynman_gauge(self):
        general = gauge_propagator(XI, "k", ("mu", "M"), ("nu", "N"))
        self.assertEqual(substitute(general, {XI: 1}), gauge_propagator(1, "k", ("mu", "M"), ("nu", "N")))

    def test_landau_gauge_is_transverse(self):
        landau = gauge_propagator(0, "k", ("mu", "M"), ("nu", "N"))
        self.assertTrue((landau * TensorExpr.momentum("k", up("mu"))).is_zero)

    def test_longitudinal_part_carries_xi(self):
        general = gauge_propagator(XI, "k", ("mu", "M"), ("nu", "N"))
        expected = XI * k("k", "nu") * delta("M", "N") / (dot("k", "k") - IEPS)
        self.assertEqual(general * TensorExpr.momentum("k", up("mu")), expected)

    def test_ghost_trace(self):
        propagator = ghost_propagator("k", "R", "S")
        traced = contract(propagator, inner_up("R"), inner_down("S"))
        self.assertEqual(sympy.simplify(traced.scalar_value() - DIM / (dot("k", "k") - IEPS)), 0)

    def test_ghost_chain(self):
        chain = ghost_propagator("k", "R", "S") * ghost_propagator("k", "S", "R")
        self.assertEqual(sympy.simplify(chain.scalar_value() - DIM / (dot("k", "k") - IEPS) ** 2), 0)

    def test_ghost_is_gauge_independent(self):
        propagator = ghost_propagator("k", "R", "S")
        self.assertEqual(substitute(propagator, {XI: 7}), propagator)


class CubicVertexTest(SimpleTestCase):
    def setUp(self):
        self.legs = default_legs("3")

    def test_matches_published_form(self):
        published = -2 * LAMBDA**2 * (
            K("K1", "L") * delta("M", "N") * (k("k2", "lambda") * eta("mu", "nu") - k("k2", "mu") * eta("nu", "lambda"))
            + K("K2", "M") * delta("N", "L") * (k("k3", "mu") * eta("nu", "lambda") - k("k3", "nu") * eta("lambda", "mu"))
            + K("K3", "N") * delta("L", "M") * (k("k1", "nu") * eta("lambda", "mu") - k("k1", "lambda") * eta("mu", "nu"))
        )
        self.assertEqual(vertex3(self.legs).expr, published)

    def test_vanishes_without_inner_momenta(self):
        self.assertTrue(substitute(vertex3(self.legs).expr, NO_INNER_MOMENTA).is_zero)

    def test_constraints(self):
        constraints = vertex3(self.legs).constraints
        self.assertEqual([c.space for c in constraints], [Space.LORENTZ, Space.INNER])
        self.assertEqual(constraints[1].vectors, ("K1", "K2", "K3"))

    def test_cyclic_permutations(self):
        self.assertEqual(is_symmetric(vertex3, self.legs, cyclic_group(3)), [])

    def test_published_form_is_not_fully_symmetric(self):
        self.assertEqual(len(is_symmetric(vertex3, self.legs)), 3)

    def test_symmetrized_vertex_equals_wick_sum(self):
        self.assertEqual(bose_symmetrize(vertex3, self.legs).expr, wick_vertex3(self.legs).expr)

    def test_wick_vertex_has_full_bose_symmetry(self):
        self.assertEqual(is_symmetric(wick_vertex3, self.legs), [])

    def test_grading(self):
        self.assertEqual(grading(vertex3(self.legs).expr), {(2, 1)})

    def test_elimination_commutes_with_cyclic_relabeling(self):
        rotated = [self.legs[1], self.legs[2], self.legs[0]]
        self.assertEqual(
            eliminate(vertex3(self.legs), self.legs[2]),
            eliminate(vertex3(rotated), self.legs[2]),
        )

    def test_on_shell_drops_own_inner_index(self):
        reduced = reduce_on_shell(vertex3(self.legs))
        own = {("K1", "M"), ("K2", "N"), ("K3", "L")}
        for atoms in reduced.terms:
            for a in atoms:
                if isinstance(a, Momentum):
                    self.assertNotEqual(a.vector, "K3")
                    self.assertNotIn((a.vector, a.index.name), own)
        self.assertFalse(reduced.is_zero)

    def test_wrong_leg_kind(self):
        with self.assertRaises(RuleError):
            vertex3([Leg.ghost_in(1, "M"), Leg.gauge(2, "nu", "N"), Leg.gauge(3, "lambda", "L")])


class QuarticVertexTest(SimpleTestCase):
    def setUp(self):
        self.legs = default_legs("4")
        self.expr = vertex4(self.legs).expr

    def test_published_coefficients(self):
        k1r = Momentum("K1", inner_up("R"))
        k2s = Momentum("K2", inner_up("S"))
        d_mn = Metric.of(inner_up("M"), inner_up("N"))
        self.assertEqual(
            self.expr.coefficient(k1r, k2s, d_mn, Metric.of(down("mu"), down("nu")), Metric.of(down("rho"), down("sigma"))),
            -LAMBDA**2,
        )
        self.assertEqual(
            self.expr.coefficient(k1r, k2s, d_mn, Metric.of(down("mu"), down("sigma")), Metric.of(down("nu"), down("rho"))),
            LAMBDA**2,
        )
        k1n = Momentum("K1", inner_up("N"))
        k3s = Momentum("K3", inner_up("S"))
        d_mr = Metric.of(inner_up("M"), inner_up("R"))
        self.assertEqual(
            self.expr.coefficient(k1n, k3s, d_mr, Metric.of(down("mu"), down("rho")), Metric.of(down("nu"), down("sigma"))),
            -LAMBDA**2,
        )

    def test_vanishes_without_inner_momenta(self):
        self.assertTrue(substitute(self.expr, NO_INNER_MOMENTA).is_zero)

    def test_all_24_permutations(self):
        self.assertEqual(is_symmetric(vertex4, self.legs), [])

    def test_grading(self):
        self.assertEqual(grading(self.expr), {(2, 2)})


class GhostVertexTest(SimpleTestCase):
    def setUp(self):
        self.legs = default_legs("ghost")
        self.expr = vertex_ghost(self.legs).expr

    def test_matches_published_form(self):
        published = -LAMBDA**2 * (K("K2", "M") * delta("R", "S") - K("K3", "S") * delta("M", "R")) * k("k1", "mu")
        self.assertEqual(self.expr, published)

    def test_vanishes_without_inner_momenta(self):
        self.assertTrue(substitute(self.expr, {"K2": {}, "K3": {}}).is_zero)

    def test_vanishes_without_ghost_momentum(self):
        self.assertTrue(substitute(self.expr, {"k1": {}}).is_zero)

    def test_leg_kinds(self):
        with self.assertRaises(RuleError):
            vertex_ghost(default_legs("3"))


class InnerCovarianceTest(SimpleTestCase):
    rotation = cayley_rotation([[0, 1, 2], [-1, 0, 3], [-2, -3, 0]])

    def vectors(self, legs):
        values = {
            "k1": [1, 2, -1, 3], "k2": [0, -2, 5, 1], "k3": [-1, 0, -4, -4], "k4": [2, 1, 1, 0],
            "K1": [1, -2, 3], "K2": [2, 0, -1], "K3": [-3, 2, -2], "K4": [0, 1, 4],
            "U1": [1, 1, 0], "U2": [0, 2, -1], "U3": [3, -1, 2], "U4": [-2, 0, 1],
        }
        names = {leg.momentum for leg in legs} | {leg.inner_momentum for leg in legs} | {f"U{leg.id}" for leg in legs}
        return {name: values[name] for name in names}

    def test_rotation_is_orthogonal(self):
        self.assertEqual(self.rotation * self.rotation.T, type(self.rotation).eye(3))

    def test_vertices_are_invariant(self):
        lorentz = {"mu": 0, "nu": 1, "lambda": 2, "rho": 3, "sigma": 1}
        for vertex, rule in (("3", vertex3), ("4", vertex4), ("ghost", vertex_ghost)):
            legs = default_legs(vertex)
            with self.subTest(vertex=vertex):
                defect = covariance_defect(rule(legs), self.vectors(legs), lorentz, self.rotation)
                self.assertEqual(defect, 0)


class RulesCommandTest(SimpleTestCase):
    def test_vertex_json(self):
        out = StringIO()
        call_command('rules', vertex='3', stdout=out)
        report = json.loads(out.getvalue())
        self.assertEqual(report["command"], "rules")
        self.assertEqual(report["outputs"]["expression"], to_dict(vertex3(default_legs("3")).expr))
        self.assertEqual(report["exit_status"], 0)

    def test_output_is_deterministic(self):
        first, second = StringIO(), StringIO()
        call_command('rules', vertex='4', stdout=first)
        call_command('rules', vertex='4', stdout=second)
        self.assertEqual(first.getvalue(), second.getvalue())

    def test_propagator_latex(self):
        out = StringIO()
        call_command('rules', propagator='gauge', xi='1/2', format='latex', stdout=out)
        self.assertIn(r"\eta", out.getvalue())


class RulesApiTest(SimpleTestCase):
    def setUp(self):
        self.client = TestClient(rules_router)

    def test_vertex(self):
        response = self.client.get('/vertex?vertex=ghost')
        self.assertEqual(response.status_code, 200)
        self.assertEqual(len(response.json()["constraints"]), 2)

    def test_symmetry(self):
        response = self.client.get('/symmetry/3?cyclic=true')
        self.assertTrue(response.json()["symmetric"])

    def test_bad_xi(self):
        response = self.client.get('/propagator?kind=gauge&xi=abc')
        self.assertEqual(response.status_code, 422)
