import json
from io import StringIO

import sympy
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from ninja.testing import TestClient

from heatkernelApp.api import heatkernel_router
from heatkernelApp.assembly import (
    Acal,
    B,
    C,
    E,
    FluctuationOperator,
    agrees_with_published,
    covariant_simplify,
    covariant_target,
    field_strength,
    gamma_n_div,
    published_gamma,
    raw_gamma,
    reducer_for,
    trace_ln_div,
)
from symcoreApp.errors import CovariantFormError, UnsupportedCaseError
from symcoreApp.graded import GradedExpr, Template, substitute
from symcoreApp.indices import down
from symcoreApp.reduction import TraceReducer
from symcoreApp.scalars import EPSILON, POLE

I = sympy.I
r = sympy.Rational


class GenericAssemblyTest(SimpleTestCase):
    def setUp(self):
        self.op = FluctuationOperator.generic()
        self.reducer = reducer_for(self.op)

    def test_single_insertion_vanishes(self):
        self.assertTrue(gamma_n_div(self.op, 1).is_zero)

    def test_each_order_matches_published(self):
        for n in (2, 3, 4):
            with self.subTest(n=n):
                self.assertTrue(self.reducer.equivalent(gamma_n_div(self.op, n), published_gamma(n)))

    def test_trace_ln_coefficients(self):
        result = trace_ln_div(self.op)
        expected = [
            (B("mu", "mu") * B("nu", "nu"), -r(1, 12)),
            (B("mu", "nu") * B("mu", "nu"), -r(1, 24)),
            (B("mu", "mu") * C(), r(1, 2)),
            (C() * C(), -r(1, 2)),
            (B("mu", "mu") * B("nu") * B("nu"), r(1, 12)),
            (B("mu") * B("nu", "mu") * B("nu"), -r(1, 12)),
            (C() * B("nu") * B("nu"), -r(1, 4)),
            (B("mu") * B("mu") * B("nu") * B("nu"), -r(1, 48)),
            (B("mu") * B("nu") * B("mu") * B("nu"), -r(1, 96)),
        ]
        remainder = result
        for monomial, coefficient in expected:
            remainder = remainder - coefficient * I * POLE * monomial
        self.assertTrue(self.reducer.normal_form(remainder).is_zero)

    def test_all_published_brackets_agree(self):
        self.assertTrue(all(agrees_with_published().values()))

    def test_without_first_order_term(self):
        op = FluctuationOperator(Template((down("rho"),), GradedExpr.zero()), C(), name="scalar")
        expected = -r(1, 2) * I * POLE * C() * C()
        self.assertTrue(TraceReducer().equivalent(trace_ln_div(op), expected))

    def test_free_operator(self):
        op = FluctuationOperator(Template((down("rho"),), GradedExpr.zero()), GradedExpr.zero(), name="free")
        self.assertTrue(trace_ln_div(op).is_zero)

    def test_raw_terms_carry_the_pole(self):
        for atoms, coefficient in raw_gamma(2).terms.items():
            self.assertFalse(sympy.expand(coefficient * EPSILON).has(EPSILON))

    def test_unsupported_order(self):
        with self.assertRaises(UnsupportedCaseError):
            gamma_n_div(self.op, 5)


class CovariantFormTest(SimpleTestCase):
    def test_noncommutative_closure(self):
        result = covariant_simplify(FluctuationOperator.covariant())
        self.assertFalse(result.is_zero)

    def test_commuting_closure(self):
        covariant_simplify(FluctuationOperator.covariant(commutative=True))

    def test_flat_connection_leaves_endomorphism(self):
        flat = Template((down("rho"),), GradedExpr.zero())
        op = FluctuationOperator.covariant(connection=flat)
        generic = trace_ln_div(FluctuationOperator.generic())
        expected = -r(1, 2) * I * POLE * E() * E()
        self.assertTrue(TraceReducer().equivalent(substitute(generic, op.bindings()), expected))

    def test_abelian_field_strength_coefficient(self):
        op = FluctuationOperator.covariant(endomorphism=GradedExpr.zero(True), commutative=True)
        generic = trace_ln_div(FluctuationOperator.generic(True))
        f = field_strength("mu", "nu", True)
        expected = -r(1, 12) * I * POLE * f * field_strength("mu", "nu", True)
        reducer = TraceReducer(cyclic=False, commutative=True)
        self.assertTrue(reducer.equivalent(substitute(generic, op.bindings()), expected))

    def test_target_expands_field_strength(self):
        target = covariant_target()
        self.assertEqual(sympy.simplify(target.coefficient(E() * E()) + I * POLE / 2), 0)

    def test_broken_identity(self):
        broken = FluctuationOperator(
            Template((down("rho"),), -3 * Acal("rho")),
            -Acal("mu", "mu") - Acal("mu") * Acal("mu") + E(),
            connection=Template((down("rho"),), Acal("rho")),
            endomorphism=E(),
            name="broken",
        )
        with self.assertRaises(CovariantFormError):
            covariant_simplify(broken)

    def test_generic_has_no_covariant_form(self):
        with self.assertRaises(CovariantFormError):
            covariant_simplify(FluctuationOperator.generic())


class HeatKernelCommandTest(SimpleTestCase):
    def test_generic_report(self):
        out = StringIO()
        call_command("heat_kernel", stdout=out)
        report = json.loads(out.getvalue())
        self.assertEqual(report["command"], "heat-kernel")
        self.assertTrue(all(report["verdicts"].values()))
        self.assertEqual(report["outputs"]["gamma1"]["terms"], [])

    def test_generic_is_the_default_form(self):
        bare, explicit = StringIO(), StringIO()
        call_command("heat_kernel", stdout=bare)
        call_command("heat_kernel", "--generic", stdout=explicit)
        self.assertEqual(json.loads(bare.getvalue())["inputs"]["form"], "generic")
        self.assertEqual(bare.getvalue(), explicit.getvalue())

    def test_covariant_latex(self):
        out = StringIO()
        call_command("heat_kernel", "--covariant", "--format", "latex", stdout=out)
        self.assertIn(r"\mathcal{F}", out.getvalue())

    def test_generic_and_covariant_exclusive(self):
        with self.assertRaises(CommandError):
            call_command("heat_kernel", "--generic", "--covariant")


class HeatKernelApiTest(SimpleTestCase):
    def setUp(self):
        self.client = TestClient(heatkernel_router)

    def test_gamma(self):
        response = self.client.get("/gamma/2")
        self.assertEqual(response.status_code, 200)
        self.assertTrue(response.json()["matches_published"])

    def test_gamma_out_of_range(self):
        self.assertEqual(self.client.get("/gamma/6").status_code, 400)

    def test_covariant(self):
        response = self.client.get("/covariant?commutative=true")
        self.assertEqual(response.status_code, 200)
        self.assertTrue(response.json()["closes"])
