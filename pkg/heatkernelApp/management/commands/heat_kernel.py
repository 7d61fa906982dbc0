from heatkernelApp.api import graded_out
from heatkernelApp.assembly import (
    ORDERS,
    FluctuationOperator,
    agrees_with_published,
    covariant_simplify,
    gamma_n_div,
    trace_ln_div,
)
from reportApp.commands import QidCommand
from reportApp.schemas import RunReportOut


class Command(QidCommand):
    help = "Divergent part of Tr Ln(D/D0) for D = -d^2 + B.d + C, generic or in covariant form"
    name = "heat-kernel"

    def add_arguments(self, parser):
        form = parser.add_mutually_exclusive_group()
        form.add_argument('--generic', dest='covariant', action='store_false', help="Bare B and C coefficients (default)")
        form.add_argument('--covariant', dest='covariant', action='store_true', help="B = -2A, C = -dA - AA + E")
        parser.set_defaults(covariant=False)
        parser.add_argument('--commutative', action='store_true', help="Abelian case with commuting coefficients")
        parser.add_argument('--format', choices=['json', 'latex'], default='json')

    def run(self, options: dict) -> RunReportOut:
        commutative = options['commutative']
        inputs = {"form": "covariant" if options['covariant'] else "generic", "commutative": commutative}
        if options['covariant']:
            result = covariant_simplify(FluctuationOperator.covariant(commutative=commutative))
            return self.report(inputs, graded_out(result), {"covariant_closure": True})

        op = FluctuationOperator.generic(commutative)
        outputs = {f"gamma{n}": graded_out(gamma_n_div(op, n))["expression"] for n in ORDERS}
        outputs.update(graded_out(trace_ln_div(op)))
        verdicts = {f"{name}_matches_published": ok for name, ok in agrees_with_published(op).items()}
        return self.report(inputs, outputs, verdicts)
