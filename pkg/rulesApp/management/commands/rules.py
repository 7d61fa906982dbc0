from reportApp.commands import QidCommand
from reportApp.schemas import RunReportOut
from rulesApp.feynman import build_propagator, build_vertex, constraints_json
from symcoreApp.errors import RuleError
from symcoreApp.scalars import parse
from symcoreApp.serializers import to_dict, to_latex


class Command(QidCommand):
    help = "Emit a propagator or vertex factor as canonical JSON or LaTeX"
    name = "rules"

    def add_arguments(self, parser):
        target = parser.add_mutually_exclusive_group(required=True)
        target.add_argument('--vertex', choices=['3', '4', 'ghost', 'wick3'])
        target.add_argument('--propagator', choices=['gauge', 'ghost'])
        parser.add_argument('--xi', default='1', help="Gauge parameter (rational)")
        parser.add_argument('--symmetrize', action='store_true', help="Average over all leg permutations")
        parser.add_argument('--on-shell', action='store_true', help="Apply conservation and inner transversality")
        parser.add_argument('--format', choices=['json', 'latex'], default='json')

    def run(self, options: dict) -> RunReportOut:
        if options.get('vertex'):
            expr, result = build_vertex(options['vertex'], options['symmetrize'], options['on_shell'])
            inputs = {
                "vertex": options['vertex'],
                "symmetrize": options['symmetrize'],
                "on_shell": options['on_shell'],
            }
            outputs = {"expression": to_dict(expr), "latex": to_latex(expr), "constraints": constraints_json(result)}
        else:
            xi = parse(options['xi'])
            if not xi.is_Rational:
                raise RuleError(f"xi must be rational, got {options['xi']!r}")
            expr = build_propagator(options['propagator'], xi)
            inputs = {"propagator": options['propagator'], "xi": str(xi)}
            outputs = {"expression": to_dict(expr), "latex": to_latex(expr)}
        return self.report(inputs, outputs)
