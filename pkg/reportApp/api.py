from django.http import HttpRequest
from django.shortcuts import get_object_or_404
from ninja import Query, Router

from renormApp.schemas import BetaTableQuery
from reportApp.commands import save_report
from reportApp.models import RunReport
from reportApp.schemas import RunReportOut, RunReportRow, VerifyIn
from reportApp.suites import flatten, run_suites, summary
from reportApp.utils import export_beta_table_to_xlsx, export_run_report_to_xlsx
from symcoreApp.utils import qid_errors

report_router = Router(tags=["Run reports"])


@report_router.get("/runs", response=list[RunReportRow])
def list_runs(request: HttpRequest, command: str | None = None):
    runs = RunReport.objects.all()
    if command:
        runs = runs.filter(command=command)
    return runs


@report_router.get("/runs/{report_id}", response=RunReportOut)
def get_run(request: HttpRequest, report_id: int):
    return get_object_or_404(RunReport, id=report_id)


@report_router.get("/runs/{report_id}/xlsx")
def run_report_xlsx(request: HttpRequest, report_id: int):
    get_object_or_404(RunReport, id=report_id)
    return export_run_report_to_xlsx(report_id)


@report_router.post("/verify", response=RunReportOut)
@qid_errors
def verify(request: HttpRequest, payload: VerifyIn):
    results = run_suites(payload.suites or None)
    verdicts = flatten(results)
    report = RunReportOut(
        command="verify",
        inputs={"suites": list(results)},
        outputs=summary(results),
        verdicts=verdicts,
        exit_status=0 if all(verdicts.values()) else 1,
    )
    if payload.save:
        save_report(report)
    return report


@report_router.get("/beta_table.xlsx")
@qid_errors
def beta_table_xlsx(request: HttpRequest, filters: Query[BetaTableQuery]):
    return export_beta_table_to_xlsx(filters)
