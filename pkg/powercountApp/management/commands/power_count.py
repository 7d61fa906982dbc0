import json
from pathlib import Path

from django.conf import settings
from pydantic import ValidationError

from powercountApp.api import degree_report
from powercountApp.graphs import (
    VertexType,
    check_divergent_leg_counts,
    check_random_graphs,
    divergence_index,
    divergent_leg_counts,
)
from powercountApp.schemas import GraphIn
from reportApp.commands import QidCommand
from reportApp.schemas import RunReportOut
from symcoreApp.errors import GraphError


class Command(QidCommand):
    help = "Superficial degree of divergence of a diagram, or the randomized power-counting check"
    name = "power-count"

    def add_arguments(self, parser):
        target = parser.add_mutually_exclusive_group(required=True)
        target.add_argument('--graph', help="Path to a diagram JSON file (see docs/graph-schema.md)")
        target.add_argument('--random', type=int, metavar='N', help="Check N random connected diagrams")
        parser.add_argument('--seed', type=int, default=None)
        parser.add_argument('--max-vertices', type=int, default=None)

    def run(self, options: dict) -> RunReportOut:
        indices = {t.value: divergence_index(t) for t in VertexType}
        if options.get('graph'):
            try:
                data = GraphIn.model_validate(json.loads(Path(options['graph']).read_text(encoding="utf-8")))
            except (OSError, json.JSONDecodeError, ValidationError) as exc:
                raise GraphError(f"cannot read graph file: {exc}") from exc
            outputs = degree_report(data.to_graph())
            outputs["divergence_indices"] = indices
            return self.report(
                {"graph": data.model_dump()},
                outputs,
                {"degree_agrees": outputs["agree"]},
            )
        seed = settings.QID_RANDOM_SEED if options.get('seed') is None else options['seed']
        max_vertices = options.get('max_vertices') or settings.QID_MAX_GRAPH_VERTICES
        mismatches = check_random_graphs(seed, options['random'], max_vertices)
        leg_mismatches = check_divergent_leg_counts(seed, options['random'], max_vertices)
        return self.report(
            {"random": options['random'], "seed": seed, "max_vertices": max_vertices},
            {
                "mismatches": mismatches,
                "divergence_indices": indices,
                "divergent_leg_counts": divergent_leg_counts(),
                "leg_count_mismatches": leg_mismatches,
            },
            {"random_graphs_agree": not mismatches, "leg_counts_agree": not leg_mismatches},
        )
