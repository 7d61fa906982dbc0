from typing import Literal

from ninja import Schema

from powercountApp.graphs import FeynmanGraph


class VertexIn(Schema):
    id: int
    type: Literal['gauge3', 'gauge4', 'ghost']


class EdgeIn(Schema):
    source: int
    target: int
    kind: Literal['gauge', 'ghost'] = 'gauge'


class LegIn(Schema):
    vertex: int
    kind: Literal['gauge', 'ghost_in', 'ghost_out'] = 'gauge'


# graph JSON accepted by power_count --graph and /api/powercount/degree
class GraphIn(Schema):
    vertices: list[VertexIn]
    internal_edges: list[EdgeIn] = []
    external_legs: list[LegIn] = []

    def to_graph(self) -> FeynmanGraph:
        return FeynmanGraph.build(
            [(v.id, v.type) for v in self.vertices],
            [(e.source, e.target, e.kind) for e in self.internal_edges],
            [(leg.vertex, leg.kind) for leg in self.external_legs],
        )


class DegreeOut(Schema):
    vertices: int
    internal_lines: int
    external_legs: int
    loops: int
    superficial_degree: int
    brute_degree: int
    agree: bool


class RandomCheckOut(Schema):
    seed: int
    graphs: int
    max_vertices: int
    mismatches: int
    divergent_leg_counts: list[int]
    leg_count_mismatches: int
