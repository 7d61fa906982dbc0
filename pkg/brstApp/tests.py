import json
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from ninja.testing import TestClient

from brstApp.api import brst_router
from brstApp.transformations import (
    GENERATORS,
    GaugeFermion,
    apply_divergence_free,
    derivation_check,
    exactness_check,
    faddeev_popov,
    gauge_matches_brst,
    generator,
    ghost_shift_ok,
    random_nilpotency_check,
    s,
    verify_nilpotent,
)
from symcoreApp.errors import StructuralError, UnsupportedCaseError
from symcoreApp.graded import atom
from symcoreApp.indices import down, inner_down, inner_up, up


def omega(name, *derivatives):
    return atom("omega", inner_up(name), derivatives=derivatives)


class VariationTest(SimpleTestCase):
    def test_h_is_invariant(self):
        self.assertTrue(s(generator("h")).is_zero)

    def test_ghost(self):
        expected = -(omega("K") * omega("S", inner_down("K")))
        self.assertEqual(s(generator("omega")), expected)

    def test_antighost(self):
        self.assertEqual(s(generator("omega-star")), -atom("h", inner_down("R")))

    def test_gauge_field(self):
        a = lambda *i, d=(): atom("A", *i, derivatives=d)  # noqa: E731
        expected = (
            omega("M", down("mu"))
            + a(down("mu"), inner_up("K")) * omega("M", inner_down("K"))
            - omega("K") * a(down("mu"), inner_up("M"), d=[inner_down("K")])
        )
        self.assertEqual(s(generator("A")), expected)

    def test_matter(self):
        expected = -(omega("K") * atom("psi", derivatives=[inner_down("K")]))
        self.assertEqual(s(generator("psi")), expected)

    def test_derivatives_commute_with_s(self):
        x = atom("omegabar", inner_down("R"), derivatives=[down("nu")])
        self.assertEqual(s(x), -atom("h", inner_down("R"), derivatives=[down("nu")]))

    def test_unknown_field(self):
        with self.assertRaises(StructuralError):
            generator("graviton")

    def test_ghost_number_shift(self):
        for name in GENERATORS:
            with self.subTest(field=name):
                self.assertTrue(ghost_shift_ok(generator(name)))

    def test_graded_leibniz_rule(self):
        pairs = [("omega", "A"), ("A", "omega"), ("psi", "omega-star"), ("omega-star", "omega")]
        for left, right in pairs:
            with self.subTest(left=left, right=right):
                self.assertTrue(derivation_check(generator(left), generator(right)))


class NilpotencyTest(SimpleTestCase):
    def test_generators(self):
        for name in GENERATORS:
            with self.subTest(field=name):
                report = verify_nilpotent(name)
                self.assertTrue(report.passed)
                self.assertTrue(report.residue.is_zero)

    def test_gauge_field_expansion_is_not_trivially_empty(self):
        report = verify_nilpotent("A")
        self.assertFalse(report.first.is_zero)
        self.assertGreater(len(report.expansion.terms), 0)

    def test_random_polynomials(self):
        self.assertEqual(random_nilpotency_check(samples=10, seed=3), [])


class ExactnessTest(SimpleTestCase):
    def test_default_gauge_fixing(self):
        report = exactness_check()
        self.assertTrue(report.ghost_term_matches)
        self.assertTrue(report.residue.is_zero)
        self.assertTrue(report.s_s_psi_zero)
        self.assertTrue(report.passed)

    def test_ghost_operator(self):
        self.assertEqual(exactness_check().delta, faddeev_popov())

    def test_landau_limit(self):
        self.assertTrue(exactness_check(xi=0).passed)

    def test_gauge_fermion_grading(self):
        fermion = GaugeFermion()
        self.assertEqual(fermion.expr.ghost_numbers(), {-1})
        self.assertTrue(fermion.audit())

    def test_nonlinear_condition(self):
        f = atom("A", down("mu"), inner_up("R")) * atom("A", up("mu"), inner_up("K"), derivatives=[inner_down("K")])
        with self.assertRaises(UnsupportedCaseError):
            exactness_check(f=f)


class GaugeTransformationTest(SimpleTestCase):
    def test_ghost_parameter_reproduces_brst(self):
        self.assertTrue(gauge_matches_brst("A"))
        self.assertTrue(gauge_matches_brst("psi"))

    def test_divergence_free_on_request(self):
        e = omega("K", inner_down("K")) * generator("psi") + omega("K") * atom("psi", derivatives=[inner_down("K")])
        kept = apply_divergence_free(e)
        self.assertEqual(kept, omega("K") * atom("psi", derivatives=[inner_down("K")]))


class BrstCommandTest(SimpleTestCase):
    def run_check(self, *args):
        out = StringIO()
        call_command("brst_check", *args, stdout=out)
        return out.getvalue()

    def test_field(self):
        report = json.loads(self.run_check("--field", "omega"))
        self.assertEqual(report["command"], "brst-check")
        self.assertEqual(report["outputs"]["residue"]["terms"], [])
        self.assertTrue(report["verdicts"]["nilpotent"])

    def test_exactness_with_random(self):
        report = json.loads(self.run_check("--exactness", "--random", "3"))
        self.assertTrue(all(report["verdicts"].values()))
        self.assertEqual(report["outputs"]["random_failures"], [])

    def test_latex(self):
        self.assertIn(r"\omega", self.run_check("--field", "psi", "--format", "latex"))

    def test_field_and_exactness_exclusive(self):
        with self.assertRaises(CommandError):
            call_command("brst_check", "--field", "A", "--exactness")


class BrstApiTest(SimpleTestCase):
    def setUp(self):
        self.client = TestClient(brst_router)

    def test_nilpotent(self):
        body = self.client.get("/nilpotent/omega-star").json()
        self.assertTrue(body["nilpotent"])
        self.assertTrue(body["ghost_shift"])

    def test_unknown_field(self):
        self.assertEqual(self.client.get("/nilpotent/graviton").status_code, 400)

    def test_exactness(self):
        body = self.client.get("/exactness?xi=0").json()
        self.assertTrue(all(body["verdicts"].values()))

    def test_bad_xi(self):
        self.assertEqual(self.client.get("/exactness?xi=1*/2").status_code, 422)
        self.assertEqual(self.client.get("/exactness?xi=Lambda").status_code, 422)

    def test_random(self):
        self.assertEqual(self.client.get("/random?samples=2&seed=1").json()["failures"], [])
