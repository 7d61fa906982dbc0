import json
from io import StringIO
from pathlib import Path

import sympy
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from ninja.testing import TestClient

from looptabApp.api import looptab_router
from looptabApp.integrals import (
    TABLE,
    LoopIntegral,
    closure_check,
    div_part,
    perfect_matchings,
    reduce_oracle,
    scale_check,
    simplex_integral,
    supported_cases,
)
from symcoreApp.errors import UnsupportedCaseError
from symcoreApp.indices import up
from symcoreApp.scalars import dot
from symcoreApp.serializers import from_dict
from symcoreApp.tensor import TensorExpr

GOLDEN = Path(__file__).resolve().parent / "fixtures" / "golden.json"
I = sympy.I


def eta(a, b):
    return TensorExpr.metric(up(a), up(b))


def k(vector, label):
    return TensorExpr.momentum(vector, up(label))


class PublishedTableTest(SimpleTestCase):
    def test_tadpole_vanishes(self):
        self.assertTrue(div_part(LoopIntegral(0, 1)).pole_coeff.is_zero)

    def test_bubble(self):
        self.assertEqual(div_part(LoopIntegral(0, 2)).pole_coeff, TensorExpr.scalar(I))

    def test_bubble_vector(self):
        self.assertEqual(div_part(LoopIntegral(1, 2)).pole_coeff, -I / 2 * k("k2", "mu"))

    def test_bubble_tensor(self):
        expected = I / 3 * k("k2", "mu") * k("k2", "nu") - I / 12 * dot("k2", "k2") * eta("mu", "nu")
        self.assertEqual(div_part(LoopIntegral(2, 2)).pole_coeff, expected)

    def test_triangle_tensor(self):
        self.assertEqual(div_part(LoopIntegral(2, 3)).pole_coeff, I / 4 * eta("mu", "nu"))

    def test_box(self):
        expected = I / 24 * (
            eta("mu", "nu") * eta("rho", "sigma") + eta("mu", "rho") * eta("nu", "sigma")
            + eta("mu", "sigma") * eta("nu", "rho")
        )
        self.assertEqual(div_part(LoopIntegral(4, 4)).pole_coeff, expected)

    def test_table_source(self):
        self.assertEqual(div_part(LoopIntegral(3, 3)).source, "table")
        self.assertEqual(div_part(LoopIntegral(1, 3)).source, "oracle")

    def test_custom_labels(self):
        part = div_part(LoopIntegral(1, 2, ("alpha",)))
        self.assertEqual(part.pole_coeff, -I / 2 * k("k2", "alpha"))


class ReductionOracleTest(SimpleTestCase):
    def test_matches_every_published_entry(self):
        for rank, denominators in TABLE:
            integral = LoopIntegral(rank, denominators)
            with self.subTest(integral=integral.key):
                self.assertEqual(reduce_oracle(integral).pole_coeff, div_part(integral).pole_coeff)

    def test_rank3_triangle(self):
        def v(a):
            return 2 * k("k2", a) + k("k3", a)

        expected = -I / 12 * (eta("mu", "nu") * v("rho") + eta("nu", "rho") * v("mu") + eta("rho", "mu") * v("nu"))
        self.assertEqual(reduce_oracle(LoopIntegral(3, 3)).pole_coeff, expected)

    def test_golden_values(self):
        golden = json.loads(GOLDEN.read_text(encoding="utf-8"))
        for key, data in golden.items():
            rank, denominators = map(int, key.split("/"))
            with self.subTest(integral=key):
                self.assertEqual(reduce_oracle(LoopIntegral(rank, denominators)).pole_coeff, from_dict(data))

    def test_convergent_integrals_vanish(self):
        for integral in supported_cases():
            if integral.degree < 0:
                with self.subTest(integral=integral.key):
                    self.assertTrue(div_part(integral).pole_coeff.is_zero)

    def test_perfect_matchings(self):
        self.assertEqual(len(perfect_matchings(("a", "b", "c", "d"))), 3)
        self.assertEqual(perfect_matchings(()), [()])

    def test_simplex_integral(self):
        x1, x2, x3 = sympy.symbols("x1:4")
        self.assertEqual(simplex_integral(sympy.Integer(1), (x1, x2, x3)), sympy.Rational(1, 2))
        self.assertEqual(simplex_integral(x2 * (1 - x2), (x1, x2)), sympy.Rational(1, 6))


class PropertiesTest(SimpleTestCase):
    def test_scaling_and_closure_over_supported_range(self):
        for integral in supported_cases():
            part = div_part(integral)
            with self.subTest(integral=integral.key):
                self.assertTrue(scale_check(integral, part))
                self.assertTrue(closure_check(integral, part))

    def test_scaling_detects_wrong_dimension(self):
        integral = LoopIntegral(2, 2)
        part = div_part(integral)
        part.pole_coeff = part.pole_coeff + TensorExpr.scalar(1) * eta("mu", "nu")
        self.assertFalse(scale_check(integral, part))

    def test_unsupported_rank(self):
        with self.assertRaises(UnsupportedCaseError):
            div_part(LoopIntegral(5, 2))

    def test_unsupported_denominators(self):
        with self.assertRaises(UnsupportedCaseError):
            LoopIntegral(0, 5)
        with self.assertRaises(UnsupportedCaseError):
            LoopIntegral(0, 0)

    def test_numeric_pole(self):
        numeric = div_part(LoopIntegral(0, 2)).numeric()
        value = complex(numeric.scalar_value())
        self.assertLess(abs(value - 1j / (8 * 3.141592653589793**2)), 1e-12)


class DivIntegralCommandTest(SimpleTestCase):
    def test_published_case(self):
        out = StringIO()
        call_command('div_integral', rank=2, denoms=3, stdout=out)
        report = json.loads(out.getvalue())
        self.assertEqual(report["outputs"]["source"], "table")
        self.assertTrue(report["verdicts"]["table_matches_reduction"])
        self.assertEqual(report["exit_status"], 0)

    def test_numeric_flag(self):
        out = StringIO()
        call_command('div_integral', rank=0, denoms=2, numeric=True, stdout=out)
        self.assertIn("numeric", json.loads(out.getvalue())["outputs"])

    def test_latex(self):
        out = StringIO()
        call_command('div_integral', rank=2, denoms=3, format='latex', stdout=out)
        self.assertIn(r"\Omega_4", out.getvalue())

    def test_out_of_range(self):
        with self.assertRaises(CommandError):
            call_command('div_integral', rank=5, denoms=1, stdout=StringIO())


class LooptabApiTest(SimpleTestCase):
    def setUp(self):
        self.client = TestClient(looptab_router)

    def test_div_part(self):
        response = self.client.get('/div_part?rank=1&denoms=2')
        self.assertEqual(response.status_code, 200)
        self.assertEqual(from_dict(response.json()["pole_coeff"]), -I / 2 * k("k2", "mu"))

    def test_oracle(self):
        response = self.client.get('/div_part?rank=3&denoms=2&oracle=true')
        self.assertEqual(response.json()["source"], "oracle")

    def test_table(self):
        rows = self.client.get('/table').json()
        self.assertEqual(len(rows), 7)
        self.assertTrue(all(row["oracle_agrees"] and row["scales"] for row in rows))

    def test_unsupported(self):
        self.assertEqual(self.client.get('/div_part?rank=5&denoms=2').status_code, 400)
