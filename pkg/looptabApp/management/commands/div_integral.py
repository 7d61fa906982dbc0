from looptabApp.api import part_out
from looptabApp.integrals import TABLE, LoopIntegral, closure_check, div_part, reduce_oracle, scale_check, table_agrees
from reportApp.commands import QidCommand
from reportApp.schemas import RunReportOut


class Command(QidCommand):
    help = "Divergent part of a one-loop integral with the given numerator rank and denominator count"
    name = "div-integral"

    def add_arguments(self, parser):
        parser.add_argument('--rank', type=int, required=True)
        parser.add_argument('--denoms', type=int, required=True)
        parser.add_argument('--numeric', action='store_true', help="Also print the 1/epsilon coefficient with Omega4 = 1/(8 pi^2)")
        parser.add_argument('--oracle', action='store_true', help="Bypass the table and use the reduction")
        parser.add_argument('--format', choices=['json', 'latex'], default='json')

    def run(self, options: dict) -> RunReportOut:
        integral = LoopIntegral(options['rank'], options['denoms'])
        part = reduce_oracle(integral) if options['oracle'] else div_part(integral)
        verdicts = {
            "scaling": scale_check(integral, part),
            "closure": closure_check(integral, part),
        }
        if (integral.rank, integral.denominators) in TABLE:
            verdicts["table_matches_reduction"] = table_agrees(integral)
        outputs = part_out(part, options['numeric'])
        if outputs["numeric"] is None:
            del outputs["numeric"]
        return self.report(
            {"rank": integral.rank, "denominators": integral.denominators, "oracle": options['oracle']},
            outputs,
            verdicts,
        )
