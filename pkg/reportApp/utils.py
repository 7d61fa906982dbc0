from datetime import datetime

import openpyxl
from django.http import HttpResponse
from openpyxl.styles import Font, PatternFill

from renormApp.api import table_rows
from renormApp.schemas import BetaTableQuery
from reportApp.models import RunReport

XLSX = "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet"

VERDICT_COLORS = {
    True: "90EE90",
    False: "FFC0CB",
}


def _fill(color: str) -> PatternFill:
    return PatternFill(start_color=color, end_color=color, fill_type="solid")


def _autowidth(sheet) -> None:
    for col in sheet.columns:
        max_len = max(len(str(cell.value or "")) for cell in col)
        sheet.column_dimensions[col[0].column_letter].width = max_len + 2


def _xlsx_response(workbook, filename: str) -> HttpResponse:
    response = HttpResponse(content_type=XLSX)
    response["Content-Disposition"] = f"attachment; filename={filename}"
    workbook.save(response)
    return response


def export_beta_table_to_xlsx(filters: BetaTableQuery) -> HttpResponse:
    rows = table_rows(filters)

    workbook = openpyxl.Workbook()
    sheet = workbook.active
    sheet.title = "Beta function"

    content = filters.to_content()
    sheet.append(["Matter", filters.matter, "no Higgs" if filters.no_higgs else ""])
    sheet.append(["Counts", ", ".join(f"{kind}={n}" for kind, n in content.counts().items())])
    sheet.append([])
    headers = ["D", "Coefficient (units of 1/12)", "beta(g)", "Asymptotically free"]
    sheet.append(headers)
    header_row = sheet.max_row
    for cell in sheet[header_row]:
        cell.font = Font(bold=True)
    sheet.cell(row=1, column=1).font = Font(bold=True)
    sheet.cell(row=2, column=1).font = Font(bold=True)

    for row in rows:
        sheet.append([row["dimension"], row["coefficient"], row["beta"], "yes" if row["asymptotically_free"] else "no"])
        # colour by verdict
        sheet.cell(row=sheet.max_row, column=4).fill = _fill(VERDICT_COLORS[row["asymptotically_free"]])

    _autowidth(sheet)
    filename = f"beta_{filters.matter}_{datetime.now().strftime('%Y%m%d_%H%M')}.xlsx"
    return _xlsx_response(workbook, filename)


def export_run_report_to_xlsx(report_id: int) -> HttpResponse:
    report = RunReport.objects.get(id=report_id)

    wb = openpyxl.Workbook()
    ws = wb.active
    ws.title = f"Run {report.id}"

    info = [
        ("Command", report.command),
        ("Arguments", " ".join(report.argv) or "-"),
        ("Created", report.created_at.strftime("%Y-%m-%d %H:%M")),
        ("Digest", report.digest),
        ("Exit status", report.exit_status),
    ]
    for idx, (label, value) in enumerate(info, start=1):
        ws.cell(row=idx, column=1, value=label).font = Font(bold=True)
        ws.cell(row=idx, column=2, value=value)

    start_row = len(info) + 2
    ws.cell(row=start_row, column=1, value="Verdicts").font = Font(bold=True)
    for idx, (name, ok) in enumerate(sorted(report.verdicts.items()), start=1):
        row = start_row + idx
        ws.cell(row=row, column=1, value=name)
        status = ws.cell(row=row, column=2, value="pass" if ok else "fail")
        status.fill = _fill(VERDICT_COLORS[bool(ok)])

    _autowidth(ws)
    return _xlsx_response(wb, f"run_{report.id}_{report.command}.xlsx")
