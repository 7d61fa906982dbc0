import json
import math
from io import StringIO

import sympy
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from ninja.testing import TestClient

from innerspaceApp.api import innerspace_router
from innerspaceApp.moments import (
    moment,
    moment_value,
    omega_d,
    omega_d_numeric,
    quadrature_agrees,
    quadrature_moment,
    scaling_check,
)
from innerspaceApp.operators import (
    InnerOperator,
    apply_vector_form,
    divergence,
    endomorphism_check,
    trace_quadratic,
)
from symcoreApp.errors import UnsupportedCaseError
from symcoreApp.indices import inner_up
from symcoreApp.scalars import DIM, LAMBDA, OMEGA_D, dot
from symcoreApp.tensor import TensorExpr


def delta(a, b):
    return TensorExpr.metric(inner_up(a), inner_up(b))


class OmegaTest(SimpleTestCase):
    def test_four_dimensions(self):
        self.assertEqual(sympy.simplify(omega_d(4) - 1 / (8 * sympy.pi**2)), 0)

    def test_numeric_matches_exact(self):
        for dim in (2, 3, 5, 8):
            with self.subTest(dim=dim):
                self.assertLess(abs(omega_d_numeric(dim) - float(omega_d(dim))), 1e-15)


class MomentTest(SimpleTestCase):
    def test_volume(self):
        self.assertEqual(moment(0).result, TensorExpr.scalar(OMEGA_D * LAMBDA**DIM / DIM))

    def test_odd_moments_vanish(self):
        self.assertTrue(moment(1).result.is_zero)
        self.assertTrue(moment(3).is_zero)

    def test_second_moment(self):
        expected = delta("I", "J") * (OMEGA_D * LAMBDA ** (DIM + 2) / (DIM * (DIM + 2)))
        self.assertEqual(moment(2).result, expected)

    def test_fourth_moment(self):
        symmetric = delta("I", "J") * delta("K", "L") + delta("I", "K") * delta("J", "L") + delta("I", "L") * delta("J", "K")
        expected = symmetric * (OMEGA_D * LAMBDA ** (DIM + 4) / (DIM * (DIM + 2) * (DIM + 4)))
        self.assertEqual(moment(4).result, expected)

    def test_unsupported_degree(self):
        with self.assertRaises(UnsupportedCaseError):
            moment(6)

    def test_quadrature_matches_every_component(self):
        for dim in (2, 3, 4):
            for cutoff in (1.0, 2.0):
                for degree in (0, 2, 4):
                    with self.subTest(dim=dim, cutoff=cutoff, degree=degree):
                        self.assertTrue(quadrature_agrees(degree, dim, cutoff))

    def test_ball_volume_in_three_dimensions(self):
        volume = quadrature_moment((), 3, 2.0) * (2 * math.pi) ** 3
        self.assertLess(abs(volume - 4 / 3 * math.pi * 8) / volume, 1e-9)

    def test_mixed_component_vanishes(self):
        self.assertLess(abs(quadrature_moment((0, 1), 3, 1.0)), 1e-15)
        self.assertEqual(moment_value(moment(2), (0, 1), 3, 1.0), 0.0)


class ScalingTest(SimpleTestCase):
    def test_published_examples(self):
        self.assertTrue(scaling_check(2, 2))
        self.assertTrue(scaling_check(0, sympy.Rational(5, 7)))
        self.assertTrue(scaling_check(4, 3))

    def test_rejects_nonpositive_factor(self):
        with self.assertRaises(UnsupportedCaseError):
            scaling_check(2, 0)


class TraceQuadraticTest(SimpleTestCase):
    def test_vector_form(self):
        result = trace_quadratic(InnerOperator.of("F"), InnerOperator.of("F"))
        expected = -DIM * OMEGA_D * LAMBDA ** (DIM + 2) / (DIM * (DIM + 2)) * dot("F", "F")
        self.assertEqual(sympy.simplify(result.scalar_value() - expected), 0)

    def test_scalar_form(self):
        result = trace_quadratic(InnerOperator.of("F", "scalar"), InnerOperator.of("G", "scalar"))
        expected = -OMEGA_D * LAMBDA ** (DIM + 2) / (DIM * (DIM + 2)) * dot("F", "G")
        self.assertEqual(sympy.simplify(result.scalar_value() - expected), 0)

    def test_zero_field(self):
        self.assertTrue(trace_quadratic(InnerOperator.of("F"), InnerOperator()).is_zero)
        self.assertTrue(trace_quadratic(InnerOperator.of("F"), 0 * InnerOperator.of("G")).is_zero)

    def test_bilinear(self):
        a, b, c = InnerOperator.of("A"), InnerOperator.of("B"), InnerOperator.of("C")
        self.assertEqual(trace_quadratic(a, b + c), trace_quadratic(a, b) + trace_quadratic(a, c))
        self.assertEqual(trace_quadratic(3 * a, b), 3 * trace_quadratic(a, b))

    def test_mixed_forms(self):
        with self.assertRaises(UnsupportedCaseError):
            trace_quadratic(InnerOperator.of("F"), InnerOperator.of("F", "scalar"))

    def test_spacetime_name_rejected(self):
        with self.assertRaises(UnsupportedCaseError):
            InnerOperator.of("f")


class EndomorphismTest(SimpleTestCase):
    def test_divergence_free_fields_are_preserved(self):
        for dim in (2, 3, 4):
            with self.subTest(dim=dim):
                self.assertTrue(endomorphism_check(dim, seed=20240601))

    def test_divergent_coefficient_breaks_property(self):
        x, y = sympy.symbols("X1:3")
        a = [x**2, sympy.Integer(0)]
        f = [y, -x]
        self.assertNotEqual(divergence(apply_vector_form(a, f, (x, y)), (x, y)), 0)


class InnerMomentCommandTest(SimpleTestCase):
    def test_symbolic(self):
        out = StringIO()
        call_command('inner_moment', degree=2, stdout=out)
        report = json.loads(out.getvalue())
        self.assertTrue(report["verdicts"]["scaling"])
        self.assertEqual(report["exit_status"], 0)

    def test_numeric(self):
        out = StringIO()
        call_command('inner_moment', degree=2, dim=3, cutoff='2', numeric=True, stdout=out)
        report = json.loads(out.getvalue())
        self.assertTrue(report["verdicts"]["quadrature"])
        self.assertTrue(report["verdicts"]["endomorphism"])
        expected = 2**5 * float(omega_d(3)) / 15
        self.assertLess(abs(report["outputs"]["component_0"] - expected) / expected, 1e-12)

    def test_unsupported_degree(self):
        with self.assertRaises(CommandError):
            call_command('inner_moment', degree=5, stdout=StringIO())


class InnerspaceApiTest(SimpleTestCase):
    def setUp(self):
        self.client = TestClient(innerspace_router)

    def test_moment(self):
        response = self.client.get('/moment?degree=2&dim=2&cutoff=1')
        self.assertEqual(response.status_code, 200)
        self.assertTrue(response.json()["quadrature_agrees"])

    def test_omega(self):
        response = self.client.get('/omega/4')
        self.assertLess(abs(response.json()["value"] - 1 / (8 * math.pi**2)), 1e-15)

    def test_trace(self):
        payload = {"a": {"form": "vector", "coefficients": {"F": "1"}}, "b": {"form": "vector", "coefficients": {"F": "1"}}}
        response = self.client.post('/trace', json=payload)
        self.assertEqual(response.status_code, 200)

    def test_lowercase_field(self):
        payload = {"a": {"coefficients": {"f": "1"}}, "b": {"coefficients": {"F": "1"}}}
        self.assertEqual(self.client.post('/trace', json=payload).status_code, 422)
