import json
import random
import tempfile
from io import StringIO
from pathlib import Path
from unittest.mock import patch

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings
from ninja.testing import TestClient

from powercountApp.api import powercount_router
from powercountApp.graphs import (
    FeynmanGraph,
    VertexType,
    brute_degree,
    check_divergent_leg_counts,
    check_random_graphs,
    divergence_index,
    divergent_leg_counts,
    random_graph,
    superficial_degree,
)
from symcoreApp.errors import GraphError

SELF_ENERGY = {
    "vertices": [{"id": 1, "type": "gauge3"}, {"id": 2, "type": "gauge3"}],
    "internal_edges": [
        {"source": 1, "target": 2, "kind": "gauge"},
        {"source": 1, "target": 2, "kind": "gauge"},
    ],
    "external_legs": [{"vertex": 1, "kind": "gauge"}, {"vertex": 2, "kind": "gauge"}],
}


def graph(vertices, edges=(), legs=()):
    return FeynmanGraph.build(vertices, edges, legs)


class DivergenceIndexTest(SimpleTestCase):
    def test_every_vertex_is_marginal(self):
        for vtype in VertexType:
            self.assertEqual(divergence_index(vtype), 0)

    def test_unknown_type(self):
        with self.assertRaises(GraphError):
            divergence_index("gauge5")

    def test_divergent_leg_counts(self):
        self.assertEqual(divergent_leg_counts(), [1, 2, 3, 4])


class DegreeTest(SimpleTestCase):
    def assertDegree(self, g, expected):
        self.assertEqual(superficial_degree(g), expected)
        self.assertEqual(brute_degree(g), expected)

    def test_gauge_self_energy(self):
        g = graph([(1, "gauge3"), (2, "gauge3")], [(1, 2, "gauge"), (1, 2, "gauge")], [(1, "gauge"), (2, "gauge")])
        self.assertEqual(g.loop_count, 1)
        self.assertDegree(g, 2)

    def test_quartic_tadpole(self):
        g = graph([(1, "gauge4")], [(1, 1, "gauge")], [(1, "gauge"), (1, "gauge")])
        self.assertDegree(g, 2)

    def test_ghost_loop(self):
        g = graph(
            [(1, "ghost"), (2, "ghost")],
            [(1, 2, "ghost"), (2, 1, "ghost")],
            [(1, "gauge"), (2, "gauge")],
        )
        self.assertDegree(g, 2)

    def test_four_point_tree(self):
        g = graph([(1, "gauge3"), (2, "gauge3")], [(1, 2, "gauge")], [(1, "gauge")] * 2 + [(2, "gauge")] * 2)
        self.assertEqual(g.loop_count, 0)
        self.assertDegree(g, 0)

    def test_five_point_tree_converges(self):
        g = graph(
            [(1, "gauge3"), (2, "gauge3"), (3, "gauge3")],
            [(1, 2, "gauge"), (2, 3, "gauge")],
            [(1, "gauge"), (1, "gauge"), (2, "gauge"), (3, "gauge"), (3, "gauge")],
        )
        self.assertDegree(g, -1)

    def test_vacuum_diagram(self):
        g = graph([(1, "gauge3"), (2, "gauge3")], [(1, 2, "gauge")] * 3)
        self.assertEqual(g.loop_count, 2)
        self.assertDegree(g, 4)


class MalformedGraphTest(SimpleTestCase):
    def test_unsaturated_vertex(self):
        g = graph([(1, "gauge3")], legs=[(1, "gauge")])
        with self.assertRaises(GraphError):
            superficial_degree(g)

    def test_ghost_line_on_gauge_vertex(self):
        g = graph([(1, "gauge3"), (2, "ghost")], [(2, 1, "ghost")], [(1, "gauge"), (1, "gauge"), (2, "gauge"), (2, "ghost_in")])
        with self.assertRaises(GraphError):
            brute_degree(g)

    def test_ghost_vertex_needs_both_ghost_ends(self):
        g = graph([(1, "ghost")], legs=[(1, "gauge"), (1, "ghost_in"), (1, "ghost_in")])
        with self.assertRaises(GraphError):
            superficial_degree(g)

    def test_disconnected(self):
        g = graph([(1, "gauge4"), (2, "gauge4")], legs=[(1, "gauge")] * 4 + [(2, "gauge")] * 4)
        with self.assertRaises(GraphError):
            brute_degree(g)

    def test_unknown_vertex_reference(self):
        with self.assertRaises(GraphError):
            graph([(1, "gauge3")], [(1, 2, "gauge")])

    def test_duplicate_vertex(self):
        with self.assertRaises(GraphError):
            graph([(1, "gauge3"), (1, "gauge4")])


class RandomGraphTest(SimpleTestCase):
    def test_random_graphs_are_valid_and_connected(self):
        rng = random.Random(7)
        for _ in range(25):
            g = random_graph(rng, max_vertices=6)
            g.validate()
            self.assertTrue(g.is_connected())
            self.assertLessEqual(g.vertex_count, 6)

    def test_brute_force_agrees_with_formula(self):
        self.assertEqual(check_random_graphs(20240601, 200, 8), [])

    def test_divergent_leg_counts_match_brute_force(self):
        self.assertEqual(check_divergent_leg_counts(20240601, 200, 8), [])

    def test_wrong_leg_counts_are_caught(self):
        self_energy = graph([(1, "gauge3"), (2, "gauge3")], [(1, 2, "gauge"), (1, 2, "gauge")], [(1, "gauge"), (2, "gauge")])
        with patch("powercountApp.graphs.random_graph", return_value=self_energy), \
                patch("powercountApp.graphs.divergent_leg_counts", return_value=[1]):
            mismatches = check_divergent_leg_counts(1, 3, 8)
        self.assertEqual(len(mismatches), 3)
        self.assertEqual(mismatches[0]["brute"], 2)
        self.assertEqual(mismatches[0]["external"], 2)

    def test_seeded_generation_is_reproducible(self):
        first = random_graph(random.Random(11)).to_dict()
        second = random_graph(random.Random(11)).to_dict()
        self.assertEqual(first, second)


class PowerCountCommandTest(SimpleTestCase):
    def test_graph_file(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "self_energy.json"
            path.write_text(json.dumps(SELF_ENERGY), encoding="utf-8")
            out = StringIO()
            call_command('power_count', graph=str(path), stdout=out)
        report = json.loads(out.getvalue())
        self.assertEqual(report["outputs"]["superficial_degree"], 2)
        self.assertEqual(report["outputs"]["divergence_indices"], {"gauge3": 0, "gauge4": 0, "ghost": 0})
        self.assertTrue(report["verdicts"]["degree_agrees"])

    def test_missing_file(self):
        with self.assertRaises(CommandError):
            call_command('power_count', graph="/nonexistent/graph.json", stdout=StringIO())

    @override_settings(QID_RANDOM_SEED=3)
    def test_random_suite(self):
        out = StringIO()
        call_command('power_count', random=30, stdout=out)
        report = json.loads(out.getvalue())
        self.assertEqual(report["inputs"]["seed"], 3)
        self.assertEqual(report["outputs"]["mismatches"], [])
        self.assertEqual(report["outputs"]["leg_count_mismatches"], [])
        self.assertTrue(report["verdicts"]["leg_counts_agree"])
        self.assertEqual(report["exit_status"], 0)


class PowerCountApiTest(SimpleTestCase):
    def setUp(self):
        self.client = TestClient(powercount_router)

    def test_degree(self):
        response = self.client.post('/degree', json=SELF_ENERGY)
        self.assertEqual(response.status_code, 200)
        self.assertEqual(response.json()["brute_degree"], 2)
        self.assertTrue(response.json()["agree"])

    def test_malformed_graph(self):
        payload = dict(SELF_ENERGY, external_legs=[])
        response = self.client.post('/degree', json=payload)
        self.assertEqual(response.status_code, 400)

    def test_divergence_index(self):
        self.assertEqual(self.client.get('/divergence_index/ghost').json(), 0)
        self.assertEqual(self.client.get('/divergence_index/photon').status_code, 400)

    def test_random_check(self):
        response = self.client.get('/random_check?graphs=10&seed=5')
        self.assertEqual(response.json()["mismatches"], 0)
        self.assertEqual(response.json()["divergent_leg_counts"], [1, 2, 3, 4])
        self.assertEqual(response.json()["leg_count_mismatches"], 0)
