import json
from io import StringIO

import numpy as np
import sympy
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from ninja.testing import TestClient

from heatkernelApp.assembly import covariant_simplify
from innerspaceApp.operators import OperatorForm
from renormApp.api import renorm_router
from renormApp.beta import STANDARD_MODEL, MatterContent, beta, beta_table, preset, published_coefficient
from renormApp.determinants import (
    PUBLISHED_QID_ACTION,
    REPRESENTATIONS,
    determinant_div,
    endomorphism_ratio,
    field_strength_matrix,
    gamma_matrices,
    inner_connection,
    lambda_not_renormalized,
    local_coefficient,
    master_coefficients,
    matter_div,
    pipeline_agrees,
    qid_divergent_action,
    qid_fluctuation_operators,
    qid_operator_traces,
    qid_trace_ln,
)
from symcoreApp.errors import MatterContentError, UnsupportedCaseError
from symcoreApp.graded import atom
from symcoreApp.indices import down
from symcoreApp.scalars import DIM, POLE

R = sympy.Rational


class DeterminantTest(SimpleTestCase):
    def test_master_formula(self):
        self.assertEqual(master_coefficients(), (R(1, 12), R(1, 2)))

    def test_operators(self):
        gauge, ghost = qid_fluctuation_operators()
        self.assertTrue(ghost.endomorphism.is_zero)
        self.assertFalse(gauge.endomorphism.is_zero)
        self.assertEqual(REPRESENTATIONS["gauge"].scale, -2)
        self.assertIs(inner_connection("ghost").form, OperatorForm.VECTOR)

    def test_gauge_operator_closes_with_field_strength_endomorphism(self):
        gauge, _ = qid_fluctuation_operators()
        closed = covariant_simplify(gauge)
        unit = -sympy.I * POLE
        f = atom("F", down("mu"), down("nu"))
        self.assertEqual(sympy.simplify(closed.coefficient(f * atom("F", down("mu"), down("nu"))) / unit), R(1, 12))
        self.assertEqual(sympy.simplify(closed.coefficient(field_strength_matrix() * field_strength_matrix()) / unit), 2)

    def test_operator_traces(self):
        traces = qid_operator_traces()
        self.assertEqual(traces, {"gauge": -R(5, 3), "ghost": R(1, 12)})
        for kind in ("gauge", "ghost"):
            with self.subTest(kind=kind):
                self.assertEqual(sympy.simplify(traces[kind] - local_coefficient(kind)), 0)

    def test_gauge_plus_ghost_trace_ln(self):
        self.assertEqual(sympy.simplify(qid_trace_ln() + sympy.I * R(11, 12) * DIM), 0)

    def test_clifford_algebra(self):
        eta = np.diag((-1.0, 1.0, 1.0, 1.0))
        gammas = gamma_matrices()
        for m in range(4):
            for n in range(4):
                anticommutator = gammas[m] @ gammas[n] + gammas[n] @ gammas[m]
                self.assertTrue(np.allclose(anticommutator, 2 * eta[m, n] * np.eye(4)))

    def test_endomorphism_traces(self):
        self.assertEqual(endomorphism_ratio(REPRESENTATIONS["gauge"]), -4)
        self.assertEqual(endomorphism_ratio(REPRESENTATIONS["gauge_field"]), -1)
        self.assertEqual(endomorphism_ratio(REPRESENTATIONS["dirac"]), -2)
        self.assertEqual(endomorphism_ratio(REPRESENTATIONS["ghost"]), 0)

    def test_gauge(self):
        self.assertEqual(sympy.simplify(determinant_div("gauge") - R(5, 3) * DIM), 0)

    def test_ghost(self):
        self.assertEqual(sympy.simplify(determinant_div("ghost") + DIM / 12), 0)

    def test_combined_action(self):
        self.assertEqual(sympy.simplify(qid_divergent_action() - PUBLISHED_QID_ACTION), 0)

    def test_unknown_kind(self):
        with self.assertRaises(UnsupportedCaseError):
            determinant_div("graviton")

    def test_lambda_not_renormalized(self):
        self.assertTrue(lambda_not_renormalized())
        self.assertTrue(lambda_not_renormalized(5))


class MatterTest(SimpleTestCase):
    def test_published_values(self):
        expected = {
            "gauge_field": R(1, 6),
            "dirac": -R(1, 3),
            "chiral": -R(1, 6),
            "scalar_doublet": -R(1, 6),
            "complex_scalar": -R(1, 12),
        }
        for kind, value in expected.items():
            with self.subTest(kind=kind):
                self.assertEqual(matter_div(kind), value)

    def test_halving(self):
        self.assertEqual(matter_div("chiral"), matter_div("dirac") / 2)
        self.assertEqual(matter_div("complex_scalar"), matter_div("scalar_doublet") / 2)

    def test_pipeline(self):
        self.assertTrue(all(pipeline_agrees().values()))

    def test_negative_counts(self):
        with self.assertRaises(MatterContentError):
            MatterContent(n_dirac=-1)


class BetaTest(SimpleTestCase):
    def test_pure_qid(self):
        result = beta(None)
        self.assertEqual(sympy.expand(result.coefficient - 11 * DIM), 0)
        for d in range(1, 13):
            self.assertTrue(result.asymptotically_free(d))

    def test_standard_model(self):
        result = beta(None, STANDARD_MODEL)
        self.assertEqual(sympy.expand(result.coefficient - (11 * (DIM - 6) - 2)), 0)
        self.assertTrue(result.asymptotically_free(7))
        self.assertFalse(result.asymptotically_free(6))
        self.assertEqual(result.value(7), 9)

    def test_without_higgs_at_six(self):
        self.assertEqual(beta(6, preset("sm", no_higgs=True)).value(6), 0)

    def test_matches_published_formula(self):
        content = MatterContent(3, 2, 5, 1, 4)
        self.assertEqual(sympy.expand(beta(None, content).coefficient - published_coefficient(content)), 0)

    def test_beta_expression(self):
        g = sympy.Symbol("g")
        expected = -g**3 / (4 * sympy.pi**2) * sympy.Symbol("OmegaD") / (4 * 6) * sympy.Rational(11 * 4, 12)
        self.assertEqual(sympy.simplify(beta(4).beta - expected), 0)

    def test_renormalized_coupling_to_third_order(self):
        g = sympy.Symbol("g")
        self.assertEqual(sympy.Poly(sympy.expand(beta(4).renormalized_coupling), g).degree(), 3)

    def test_monotone_in_dimension(self):
        rows = beta_table(range(1, 12), STANDARD_MODEL)
        values = [row["coefficient"] for row in rows]
        self.assertEqual(values, sorted(values))

    def test_unknown_preset(self):
        with self.assertRaises(UnsupportedCaseError):
            preset("mssm")


class BetaCommandTest(SimpleTestCase):
    def run_beta(self, *args):
        out = StringIO()
        call_command("beta", *args, stdout=out)
        return out.getvalue()

    def test_standard_model_at_seven(self):
        report = json.loads(self.run_beta("--dimension", "7", "--matter", "sm"))
        self.assertEqual(report["outputs"]["coefficient"], "9")
        self.assertTrue(report["outputs"]["asymptotically_free"])
        self.assertTrue(all(report["verdicts"].values()))

    def test_table(self):
        text = self.run_beta("--matter", "sm", "--format", "table", "--dim-from", "5", "--dim-to", "8")
        self.assertEqual(len(text.strip().splitlines()), 5)
        self.assertIn("-13", text)

    def test_custom_counts(self):
        report = json.loads(self.run_beta("--dimension", "4", "--matter", "custom", "--dirac", "11"))
        self.assertEqual(report["outputs"]["coefficient"], "0")
        self.assertFalse(report["outputs"]["asymptotically_free"])

    def test_counts_need_custom(self):
        with self.assertRaises(CommandError):
            self.run_beta("--matter", "sm", "--dirac", "1")

    def test_negative_counts(self):
        with self.assertRaises(CommandError):
            self.run_beta("--matter", "custom", "--chiral", "-1")


class RenormApiTest(SimpleTestCase):
    def setUp(self):
        self.client = TestClient(renorm_router)

    def test_determinant(self):
        response = self.client.get("/determinant/gauge")
        self.assertEqual(response.status_code, 200)
        self.assertTrue(response.json()["agrees"])

    def test_matter(self):
        self.assertEqual(self.client.get("/matter/dirac").json()["value"], "-1/3")

    def test_beta(self):
        body = self.client.get("/beta?dimension=6&matter=sm&no_higgs=true").json()
        self.assertEqual(body["coefficient"], "0")
        self.assertFalse(body["asymptotically_free"])

    def test_negative_counts(self):
        self.assertEqual(self.client.get("/beta?matter=custom&n_dirac=-2").status_code, 400)

    def test_table(self):
        rows = self.client.get("/beta_table?dim_from=1&dim_to=3").json()
        self.assertEqual([row["coefficient"] for row in rows], ["11", "22", "33"])
