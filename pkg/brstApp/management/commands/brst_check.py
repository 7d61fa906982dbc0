from brstApp.api import exactness_out, nilpotency_out
from brstApp.transformations import GENERATORS, random_nilpotency_check, verify_nilpotent
from reportApp.commands import QidCommand
from reportApp.schemas import RunReportOut
from symcoreApp.scalars import XI
from symcoreApp.serializers import graded_to_dict, graded_to_text


class Command(QidCommand):
    help = "Verify s(s X) = 0 on a BRST generator, or S_NEW - S_ID = s Psi for the default gauge fixing"
    name = "brst-check"

    def add_arguments(self, parser):
        target = parser.add_mutually_exclusive_group()
        target.add_argument('--field', choices=sorted(GENERATORS), help="Generator whose s^2 is expanded (default A)")
        target.add_argument('--exactness', action='store_true', help="Check the gauge-fixed action is s-exact")
        parser.add_argument('--random', type=int, default=0, metavar='N', help="Also test N random polynomials")
        parser.add_argument('--format', choices=['json', 'latex'], default='json')

    def run(self, options: dict) -> RunReportOut:
        if options['exactness']:
            inputs = {"check": "exactness"}
            outputs = exactness_out(XI)
            verdicts = outputs.pop("verdicts")
        else:
            field = options['field'] or "A"
            inputs = {"check": "nilpotency", "field": field}
            report = verify_nilpotent(field)
            body = nilpotency_out(field, report)
            outputs = {
                "first": body["first"],
                "expansion": graded_to_dict(report.expansion, normalize=False),
                "expansion_text": graded_to_text(report.expansion),
                "residue": body["residue"],
                "latex": body["latex"],
            }
            verdicts = {"nilpotent": body["nilpotent"], "ghost_shift": body["ghost_shift"]}
        if options['random']:
            failures = random_nilpotency_check(options['random'])
            inputs["random"] = options['random']
            outputs["random_failures"] = [graded_to_text(e) for e in failures]
            verdicts["random_nilpotency"] = not failures
        return self.report(inputs, outputs, verdicts)
