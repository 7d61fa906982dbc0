from reportApp.commands import QidCommand
from reportApp.schemas import RunReportOut
from reportApp.suites import SUITES, flatten, run_suites, summary


class Command(QidCommand):
    help = "Run the identity suites; exits nonzero when any verdict fails"
    name = "verify"

    def add_arguments(self, parser):
        parser.add_argument(
            '--suite', action='append', choices=list(SUITES), dest='suites',
            help="Restrict to this suite (repeatable); all suites by default",
        )
        parser.add_argument('--workers', type=int, default=None, help="Thread pool size (QID_VERIFY_WORKERS)")
        parser.add_argument('--format', choices=['json', 'table'], default='json')

    def run(self, options: dict) -> RunReportOut:
        results = run_suites(options['suites'], options['workers'])
        return self.report({"suites": list(results)}, summary(results), flatten(results))

    def render(self, report: RunReportOut, options: dict) -> str:
        if options.get('format') != 'table':
            return super().render(report, options)
        lines = []
        for name, ok in report.verdicts.items():
            lines.append(f"{'PASS' if ok else 'FAIL'}  {name}")
        return "\n".join(lines) + "\n"
