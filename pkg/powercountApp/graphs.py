"""Superficial degree of divergence of QID diagrams.

A diagram is a networkx ``MultiDiGraph``: nodes carry the vertex ``type``
and their external legs, edges carry ``kind``. Ghost edges point along the
ghost-number flow (outgoing ghost end to incoming ghost end); the
orientation of gauge edges is meaningless.
"""
import logging
import random
from collections import Counter
from enum import Enum
from typing import Iterable

import networkx as nx

from symcoreApp.errors import GraphError

logger = logging.getLogger(__name__)

SPACETIME_DIMENSION = 4


class VertexType(str, Enum):
    GAUGE3 = "gauge3"
    GAUGE4 = "gauge4"
    GHOST = "ghost"


class LineKind(str, Enum):
    GAUGE = "gauge"
    GHOST = "ghost"


class LegKind(str, Enum):
    GAUGE = "gauge"
    GHOST_IN = "ghost_in"
    GHOST_OUT = "ghost_out"


# (lines b, spacetime derivatives d)
VERTEX_DATA = {
    VertexType.GAUGE3: (3, 1),
    VertexType.GAUGE4: (4, 0),
    VertexType.GHOST: (3, 1),
}


def divergence_index(vtype: VertexType | str) -> int:
    """delta = b + d - 4."""
    try:
        lines, derivatives = VERTEX_DATA[VertexType(vtype)]
    except ValueError:
        raise GraphError(f"unknown vertex type {vtype!r}") from None
    return lines + derivatives - SPACETIME_DIMENSION


class FeynmanGraph:
    def __init__(self):
        self.graph = nx.MultiDiGraph()

    @classmethod
    def build(
        cls,
        vertices: Iterable[tuple[int, str]],
        internal_edges: Iterable[tuple[int, int, str]] = (),
        external_legs: Iterable[tuple[int, str]] = (),
    ) -> "FeynmanGraph":
        g = cls()
        for vid, vtype in vertices:
            g.add_vertex(vid, vtype)
        for source, target, kind in internal_edges:
            g.add_edge(source, target, kind)
        for vid, kind in external_legs:
            g.add_leg(vid, kind)
        return g

    def add_vertex(self, vid: int, vtype: str) -> None:
        if vid in self.graph:
            raise GraphError(f"duplicate vertex id {vid}")
        try:
            self.graph.add_node(vid, type=VertexType(vtype), legs=[])
        except ValueError:
            raise GraphError(f"unknown vertex type {vtype!r}") from None

    def add_edge(self, source: int, target: int, kind: str) -> None:
        for vid in (source, target):
            if vid not in self.graph:
                raise GraphError(f"edge refers to unknown vertex {vid}")
        try:
            self.graph.add_edge(source, target, kind=LineKind(kind))
        except ValueError:
            raise GraphError(f"unknown line kind {kind!r}") from None

    def add_leg(self, vid: int, kind: str) -> None:
        if vid not in self.graph:
            raise GraphError(f"external leg on unknown vertex {vid}")
        try:
            self.graph.nodes[vid]["legs"].append(LegKind(kind))
        except ValueError:
            raise GraphError(f"unknown leg kind {kind!r}") from None

    # bookkeeping

    @property
    def vertex_count(self) -> int:
        return self.graph.number_of_nodes()

    @property
    def internal_count(self) -> int:
        return self.graph.number_of_edges()

    @property
    def external_count(self) -> int:
        return sum(len(data["legs"]) for _, data in self.graph.nodes(data=True))

    @property
    def loop_count(self) -> int:
        return self.internal_count - self.vertex_count + 1

    def line_ends(self, vid: int) -> Counter:
        """Counts of gauge, ghost_in and ghost_out ends at a vertex."""
        ends = Counter()
        for _, _, kind in self.graph.out_edges(vid, data="kind"):
            ends["gauge" if kind is LineKind.GAUGE else "ghost_out"] += 1
        for _, _, kind in self.graph.in_edges(vid, data="kind"):
            ends["gauge" if kind is LineKind.GAUGE else "ghost_in"] += 1
        for leg in self.graph.nodes[vid]["legs"]:
            ends[leg.value] += 1
        return ends

    def validate(self) -> None:
        if self.vertex_count == 0:
            raise GraphError("graph has no vertices")
        for vid, vtype in self.graph.nodes(data="type"):
            ends = self.line_ends(vid)
            lines, _ = VERTEX_DATA[vtype]
            if sum(ends.values()) != lines:
                raise GraphError(f"vertex {vid} ({vtype.value}) has valence {sum(ends.values())}, expected {lines}")
            if vtype is VertexType.GHOST:
                if (ends["ghost_in"], ends["ghost_out"], ends["gauge"]) != (1, 1, 1):
                    raise GraphError(f"ghost vertex {vid} needs one incoming and one outgoing ghost line")
            elif ends["ghost_in"] or ends["ghost_out"]:
                raise GraphError(f"gauge vertex {vid} carries a ghost line")

    def is_connected(self) -> bool:
        return nx.is_weakly_connected(self.graph)

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": vid, "type": t.value} for vid, t in sorted(self.graph.nodes(data="type"))],
            "internal_edges": sorted(
                ({"source": u, "target": v, "kind": k.value} for u, v, k in self.graph.edges(data="kind")),
                key=lambda e: (e["source"], e["target"], e["kind"]),
            ),
            "external_legs": [
                {"vertex": vid, "kind": leg.value}
                for vid, legs in sorted(self.graph.nodes(data="legs")) for leg in legs
            ],
        }


def superficial_degree(g: FeynmanGraph) -> int:
    """omega = 4 - B."""
    g.validate()
    return SPACETIME_DIMENSION - g.external_count


def brute_degree(g: FeynmanGraph) -> int:
    """4 L - 2 I + sum of vertex derivatives, with L = I - V + 1."""
    g.validate()
    if not g.is_connected():
        raise GraphError("graph is disconnected")
    derivatives = sum(VERTEX_DATA[t][1] for _, t in g.graph.nodes(data="type"))
    return SPACETIME_DIMENSION * g.loop_count - 2 * g.internal_count + derivatives


def divergent_leg_counts(max_legs: int = 12) -> list[int]:
    """External leg numbers B >= 1 for which some diagram has omega >= 0."""
    return [b for b in range(1, max_legs + 1) if SPACETIME_DIMENSION - b >= 0]


# random diagrams

_STUBS = {
    VertexType.GAUGE3: ("gauge", "gauge", "gauge"),
    VertexType.GAUGE4: ("gauge", "gauge", "gauge", "gauge"),
    VertexType.GHOST: ("gauge", "ghost_in", "ghost_out"),
}
_PARTNER = {"gauge": "gauge", "ghost_in": "ghost_out", "ghost_out": "ghost_in"}


def _join(g: FeynmanGraph, a: tuple[int, str], b: tuple[int, str]) -> None:
    (va, ka), (vb, _) = a, b
    if ka == "gauge":
        g.add_edge(va, vb, "gauge")
    elif ka == "ghost_out":
        g.add_edge(va, vb, "ghost")
    else:
        g.add_edge(vb, va, "ghost")


def random_graph(rng: random.Random, max_vertices: int = 8, join_probability: float = 0.5, attempts: int = 100) -> FeynmanGraph:
    """A valid connected diagram with up to ``max_vertices`` vertices.

    Vertices are first joined along a random spanning tree, then remaining
    stubs are paired at random (self-loops allowed); unpaired stubs become
    external legs.
    """
    for _ in range(attempts):
        count = rng.randint(1, max_vertices)
        types = [rng.choice(list(VertexType)) for _ in range(count)]
        g = FeynmanGraph()
        for vid, vtype in enumerate(types, start=1):
            g.add_vertex(vid, vtype.value)
        connected_ok = True
        pool = [(1, kind) for kind in _STUBS[types[0]]]
        for vid in range(2, count + 1):
            own = [(vid, kind) for kind in _STUBS[types[vid - 1]]]
            rng.shuffle(own)
            choices = [(mine, theirs) for mine in own for theirs in pool if theirs[1] == _PARTNER[mine[1]]]
            if not choices:
                connected_ok = False
                break
            mine, theirs = rng.choice(choices)
            _join(g, mine, theirs)
            own.remove(mine)
            pool.remove(theirs)
            pool.extend(own)
        if not connected_ok:
            continue
        stubs = pool
        rng.shuffle(stubs)
        while stubs:
            stub = stubs.pop()
            partners = [s for s in stubs if s[1] == _PARTNER[stub[1]]]
            if partners and rng.random() < join_probability:
                partner = rng.choice(partners)
                stubs.remove(partner)
                _join(g, stub, partner)
            else:
                g.add_leg(*stub)
        g.validate()
        return g
    raise GraphError("could not generate a connected diagram")


def check_random_graphs(seed: int, count: int, max_vertices: int) -> list[dict]:
    """Mismatches between brute_degree and superficial_degree over random diagrams."""
    rng = random.Random(seed)
    mismatches = []
    for _ in range(count):
        g = random_graph(rng, max_vertices)
        brute, formula = brute_degree(g), superficial_degree(g)
        if brute != formula:
            mismatches.append({"graph": g.to_dict(), "brute": brute, "superficial": formula})
    logger.info("power counting: %d random graphs, %d mismatches", count, len(mismatches))
    return mismatches


def check_divergent_leg_counts(seed: int, count: int, max_vertices: int) -> list[dict]:
    """Random diagrams whose brute-force degree disagrees with ``divergent_leg_counts``."""
    divergent = set(divergent_leg_counts())
    rng = random.Random(seed)
    mismatches = []
    for _ in range(count):
        g = random_graph(rng, max_vertices)
        if not g.external_count:
            continue
        brute = brute_degree(g)
        if (brute >= 0) != (g.external_count in divergent):
            mismatches.append({"graph": g.to_dict(), "brute": brute, "external": g.external_count})
    logger.info("divergent leg counts: %d random graphs, %d mismatches", count, len(mismatches))
    return mismatches
