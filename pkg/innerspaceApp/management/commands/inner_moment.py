from django.conf import settings

from innerspaceApp.moments import moment, moment_value, quadrature_agrees, scaling_check
from innerspaceApp.operators import endomorphism_check
from reportApp.commands import QidCommand
from reportApp.schemas import RunReportOut
from symcoreApp.errors import UnsupportedCaseError
from symcoreApp.scalars import DIM, LAMBDA
from symcoreApp.serializers import to_dict, to_latex


class Command(QidCommand):
    help = "Moment of the inner momentum over the cutoff ball, with scaling and quadrature checks"
    name = "inner-moment"

    def add_arguments(self, parser):
        parser.add_argument('--degree', type=int, required=True)
        parser.add_argument('--dim', type=int, help="Concrete inner dimension D")
        parser.add_argument('--cutoff', default='1', help="Concrete cutoff Lambda (used with --dim)")
        parser.add_argument('--numeric', action='store_true', help="Compare against the quadrature rule")
        parser.add_argument('--rho', default='2', help="Cutoff scale factor for the scaling check")
        parser.add_argument('--format', choices=['json', 'latex'], default='json')

    def run(self, options: dict) -> RunReportOut:
        m = moment(options['degree'])
        verdicts = {"scaling": scaling_check(m.degree, options['rho'])}
        inputs = {"degree": m.degree, "rho": options['rho']}
        result = m.result
        outputs = {}
        if options.get('dim') is not None:
            dim, cutoff = options['dim'], float(options['cutoff'])
            if dim < 2:
                raise UnsupportedCaseError("inner dimension must be at least 2")
            inputs.update(dim=dim, cutoff=options['cutoff'])
            result = result.map_coefficients(lambda c: c.subs({DIM: dim, LAMBDA: float(cutoff)}))
            outputs["component_0"] = moment_value(m, [0] * m.degree, dim, cutoff)
            if options['numeric']:
                verdicts["quadrature"] = quadrature_agrees(m.degree, dim, cutoff)
                verdicts["endomorphism"] = endomorphism_check(dim, settings.QID_RANDOM_SEED)
        outputs.update(expression=to_dict(result), latex=to_latex(result))
        return self.report(inputs, outputs, verdicts)
