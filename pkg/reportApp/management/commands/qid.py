import argparse

from reportApp.commands import SUBCOMMANDS, QidCommand, resolve
from reportApp.schemas import RunReportOut


class Command(QidCommand):
    help = f"Single entry point: qid <{'|'.join(s.replace('_', '-') for s in SUBCOMMANDS)}> [options]"
    name = "qid"

    def add_arguments(self, parser):
        parser.add_argument('subcommand')
        parser.add_argument('rest', nargs=argparse.REMAINDER)

    def run(self, options: dict) -> RunReportOut:
        self.target, self.target_options = resolve([options['subcommand'], *options['rest']])
        options['report_file'] = options.get('report_file') or self.target_options.get('report_file')
        options['save'] = options.get('save') or self.target_options.get('save')
        return self.target.run(self.target_options)

    def render(self, report: RunReportOut, options: dict) -> str:
        return self.target.render(report, self.target_options)
