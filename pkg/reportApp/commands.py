"""Shared base for the engine's management commands.

Every command builds a ``RunReportOut`` in ``run(options)``; ``handle``
renders it, optionally stores it, and turns a failed verification into a
nonzero exit.
"""
import logging
from pathlib import Path

from django.conf import settings
from django.core.management import get_commands, load_command_class
from django.core.management.base import BaseCommand, CommandError

from reportApp.models import RunReport
from reportApp.schemas import RunReportOut
from symcoreApp.errors import QidError

logger = logging.getLogger(__name__)


def save_report(report: RunReportOut) -> RunReport:
    return RunReport.objects.create(
        command=report.command,
        argv=report.argv,
        inputs=report.inputs,
        outputs=report.outputs,
        verdicts=report.verdicts,
        exit_status=report.exit_status,
        digest=report.digest(),
    )


def write_report_file(report: RunReportOut, path: str | None = None) -> Path:
    if path:
        target = Path(path)
    else:
        target = Path(settings.QID_REPORT_DIR) / f"{report.command}-{report.digest()}.json"
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(report.canonical_json(), encoding="utf-8")
    logger.info("report written to %s", target)
    return target


class QidCommand(BaseCommand):
    name = ""
    argv: list[str] = []

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.add_argument('--report-file', help="Write the JSON report to this path")
        parser.add_argument(
            '--save', action='store_true',
            help="Store the report in the database and under QID_REPORT_DIR",
        )
        return parser

    def run_from_argv(self, argv):
        self.argv = list(argv[2:])
        super().run_from_argv(argv)

    def report(self, inputs: dict, outputs: dict, verdicts: dict | None = None) -> RunReportOut:
        verdicts = dict(verdicts or {})
        return RunReportOut(
            command=self.name,
            argv=list(self.argv),
            inputs=inputs,
            outputs=outputs,
            verdicts=verdicts,
            exit_status=0 if all(verdicts.values()) else 1,
        )

    def run(self, options: dict) -> RunReportOut:
        raise NotImplementedError

    def render(self, report: RunReportOut, options: dict) -> str:
        if options.get('format') == 'latex' and 'latex' in report.outputs:
            latex = report.outputs['latex']
            return (latex if isinstance(latex, str) else "\n".join(latex)) + "\n"
        return report.canonical_json()

    def handle(self, *args, **options):
        try:
            report = self.run(options)
        except QidError as exc:
            raise CommandError(str(exc)) from exc
        self.stdout.write(self.render(report, options), ending="")
        if options.get('report_file'):
            write_report_file(report, options['report_file'])
        if options.get('save'):
            write_report_file(report)
            save_report(report)
        if not report.passed:
            failed = sorted(name for name, ok in report.verdicts.items() if not ok)
            raise CommandError(f"verification failed: {', '.join(failed)}")


# dispatch

SUBCOMMANDS = ("rules", "power_count", "div_integral", "inner_moment", "heat_kernel", "beta", "brst_check", "verify")


def resolve(argv: list[str]) -> tuple[QidCommand, dict]:
    """Loads the subcommand named by ``argv[0]`` (hyphens allowed) and parses the rest."""
    if not argv:
        raise CommandError(f"missing subcommand, expected one of {', '.join(SUBCOMMANDS)}")
    name = argv[0].replace("-", "_")
    if name not in SUBCOMMANDS:
        raise CommandError(f"unknown subcommand {argv[0]!r}")
    command = load_command_class(get_commands()[name], name)
    parser = command.create_parser("qid", argv[0])
    options = vars(parser.parse_args(argv[1:]))
    command.argv = list(argv[1:])
    return command, options


def dispatch(argv: list[str]) -> RunReportOut:
    command, options = resolve(argv)
    logger.debug("dispatching %s", command.name)
    return command.run(options)
