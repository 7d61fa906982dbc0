import json
import tempfile
from io import BytesIO, StringIO
from pathlib import Path
from unittest.mock import patch

import openpyxl
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, TestCase, override_settings
from ninja.testing import TestClient

from reportApp.api import report_router
from reportApp.commands import dispatch
from reportApp.models import RunReport
from reportApp.schemas import RunReportOut
from reportApp.suites import SUITES, flatten, run_suites, summary
from symcoreApp.errors import UnsupportedCaseError


class DispatchTest(SimpleTestCase):
    def test_hyphenated_subcommand(self):
        report = dispatch(["beta", "--dimension", "7", "--matter", "sm"])
        self.assertEqual(report.command, "beta")
        self.assertEqual(report.argv, ["--dimension", "7", "--matter", "sm"])
        self.assertEqual(report.outputs["coefficient"], "9")
        self.assertTrue(report.passed)

    def test_underscore_and_hyphen_agree(self):
        first = dispatch(["div-integral", "--rank", "2", "--denoms", "2"])
        second = dispatch(["div_integral", "--rank", "2", "--denoms", "2"])
        self.assertEqual(first.outputs, second.outputs)

    def test_unknown_subcommand(self):
        with self.assertRaises(CommandError):
            dispatch(["migrate"])

    def test_missing_subcommand(self):
        with self.assertRaises(CommandError):
            dispatch([])

    def test_unknown_flag(self):
        with self.assertRaises(CommandError):
            dispatch(["beta", "--dimensions", "7"])

    def test_reports_are_deterministic(self):
        first = dispatch(["heat-kernel", "--covariant"])
        second = dispatch(["heat-kernel", "--covariant"])
        self.assertEqual(first.canonical_json(), second.canonical_json())
        self.assertEqual(first.digest(), second.digest())


class QidCommandTest(SimpleTestCase):
    def test_routes_to_subcommand(self):
        out = StringIO()
        call_command("qid", "brst-check", "--field", "h", stdout=out)
        report = json.loads(out.getvalue())
        self.assertEqual(report["command"], "brst-check")
        self.assertTrue(report["verdicts"]["nilpotent"])

    def test_subcommand_renderer(self):
        out = StringIO()
        call_command("qid", "beta", "--matter", "sm", "--format", "table", "--dim-from", "6", "--dim-to", "7", stdout=out)
        self.assertIn("9", out.getvalue())

    def test_report_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            target = Path(tmp) / "rules.json"
            call_command("qid", "rules", "--propagator", "ghost", "--report-file", str(target), stdout=StringIO())
            self.assertEqual(json.loads(target.read_text())["command"], "rules")

    def test_failure_is_a_command_error(self):
        with self.assertRaises(CommandError):
            call_command("qid", "inner-moment", "--degree", "7", stdout=StringIO())


class SuiteTest(SimpleTestCase):
    def test_selected_suites(self):
        results = run_suites(["rules", "looptab"], workers=2)
        self.assertEqual(list(results), ["rules", "looptab"])
        self.assertTrue(all(flatten(results).values()))
        self.assertEqual(summary(results)["looptab"]["passed"], summary(results)["looptab"]["total"])

    def test_order_follows_registry(self):
        self.assertEqual(list(run_suites(["renorm", "innerspace"])), ["innerspace", "renorm"])

    def test_unknown_suite(self):
        with self.assertRaises(UnsupportedCaseError):
            run_suites(["gravity"])

    def test_crashing_suite_is_reported_failed(self):
        def crash():
            raise TypeError("broken product")

        with patch.dict(SUITES, {"rules": crash}), self.assertLogs("reportApp.suites", level="ERROR"):
            results = run_suites(["rules", "looptab"], workers=2)
        self.assertEqual(results["rules"], {"rules": False})
        self.assertTrue(all(results["looptab"].values()))

    def test_verify_command_table(self):
        out = StringIO()
        call_command("verify", "--suite", "brst", "--format", "table", stdout=out)
        lines = out.getvalue().strip().splitlines()
        self.assertTrue(all(line.startswith("PASS") for line in lines))
        self.assertIn("brst.exactness", out.getvalue())


class SavedReportTest(TestCase):
    def test_save_stores_report(self):
        with tempfile.TemporaryDirectory() as tmp, override_settings(QID_REPORT_DIR=tmp):
            call_command("beta", "--dimension", "4", "--save", stdout=StringIO())
            run = RunReport.objects.get()
            self.assertEqual(run.command, "beta")
            self.assertTrue(run.passed)
            self.assertTrue((Path(tmp) / f"beta-{run.digest}.json").exists())


class ReportApiTest(TestCase):
    def setUp(self):
        self.client = TestClient(report_router)
        self.run = RunReport.objects.create(
            command="brst-check",
            argv=["--field", "A"],
            verdicts={"nilpotent": True, "ghost_shift": True},
            digest="0123456789abcdef",
        )

    def test_list_runs(self):
        rows = self.client.get("/runs?command=brst-check").json()
        self.assertEqual([row["digest"] for row in rows], ["0123456789abcdef"])
        self.assertEqual(self.client.get("/runs?command=beta").json(), [])

    def test_get_run(self):
        body = self.client.get(f"/runs/{self.run.id}").json()
        self.assertEqual(RunReportOut(**body).verdicts["nilpotent"], True)

    def test_missing_run(self):
        self.assertEqual(self.client.get("/runs/999").status_code, 404)

    def test_verify(self):
        body = self.client.post("/verify", json={"suites": ["renorm"], "save": True}).json()
        self.assertEqual(body["exit_status"], 0)
        self.assertIn("renorm.sm_free_at_7", body["verdicts"])
        self.assertTrue(RunReport.objects.filter(command="verify").exists())

    def test_verify_unknown_suite(self):
        self.assertEqual(self.client.post("/verify", json={"suites": ["gravity"]}).status_code, 400)

    def test_run_report_xlsx(self):
        response = self.client.get(f"/runs/{self.run.id}/xlsx")
        sheet = openpyxl.load_workbook(BytesIO(response.content)).active
        self.assertEqual(sheet["B1"].value, "brst-check")

    def test_beta_table_xlsx(self):
        response = self.client.get("/beta_table.xlsx?matter=sm&dim_from=5&dim_to=8")
        self.assertEqual(response.status_code, 200)
        sheet = openpyxl.load_workbook(BytesIO(response.content)).active
        values = [row[1] for row in sheet.iter_rows(min_row=5, values_only=True)]
        self.assertEqual(values, ["-13", "-2", "9", "20"])
