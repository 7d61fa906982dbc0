import sympy

from renormApp.api import beta_out, table_rows
from renormApp.beta import beta, published_coefficient
from renormApp.determinants import lambda_not_renormalized, pipeline_agrees
from renormApp.schemas import BetaQuery, BetaTableQuery
from reportApp.commands import QidCommand
from reportApp.schemas import RunReportOut
from symcoreApp.errors import MatterContentError


class Command(QidCommand):
    help = "One-loop beta function of QID with optional Standard Model or custom matter content"
    name = "beta"

    def add_arguments(self, parser):
        parser.add_argument('--dimension', type=int, help="Inner dimension D; omit for the symbolic result")
        parser.add_argument('--matter', choices=['none', 'sm', 'custom'], default='none')
        parser.add_argument('--no-higgs', action='store_true')
        parser.add_argument('--gauge', type=int, default=0, help="Minimally coupled gauge fields (custom)")
        parser.add_argument('--dirac', type=int, default=0)
        parser.add_argument('--chiral', type=int, default=0)
        parser.add_argument('--doublets', type=int, default=0, help="Complex scalar doublets (custom)")
        parser.add_argument('--complex-scalars', type=int, default=0)
        parser.add_argument('--dim-from', type=int, default=1)
        parser.add_argument('--dim-to', type=int, default=12)
        parser.add_argument('--format', choices=['json', 'latex', 'table'], default='json')

    def matter(self, options: dict) -> dict:
        return {
            "matter": options['matter'],
            "no_higgs": options['no_higgs'],
            "n_gauge": options['gauge'],
            "n_dirac": options['dirac'],
            "n_chiral": options['chiral'],
            "n_scalar_doublet": options['doublets'],
            "n_complex_scalar": options['complex_scalars'],
        }

    def run(self, options: dict) -> RunReportOut:
        matter = self.matter(options)
        if options['matter'] != 'custom' and any(v for k, v in matter.items() if k.startswith('n_')):
            raise MatterContentError("explicit counts need --matter custom")
        content = BetaQuery(**matter).to_content()
        result = beta(options['dimension'], content)
        outputs = beta_out(result)
        outputs["coefficient_units"] = "1/12"
        if options['format'] == 'table':
            query = BetaTableQuery(dim_from=options['dim_from'], dim_to=options['dim_to'], **matter)
            outputs["table"] = table_rows(query)
        verdicts = {
            "coefficient_matches_published": sympy.expand(result.coefficient - published_coefficient(content)) == 0,
            "lambda_not_renormalized": lambda_not_renormalized(),
        }
        verdicts.update(pipeline_agrees())
        inputs = {"dimension": options['dimension'], **matter}
        return self.report(inputs, outputs, verdicts)

    def render(self, report: RunReportOut, options: dict) -> str:
        if options.get('format') != 'table':
            return super().render(report, options)
        lines = [f"{'D':>4}  {'coefficient':>12}  {'asymptotically free':>20}  beta(g)"]
        for row in report.outputs["table"]:
            lines.append(f"{row['dimension']:>4}  {row['coefficient']:>12}  {str(row['asymptotically_free']):>20}  {row['beta']}")
        return "\n".join(lines) + "\n"
