"""
Feynman graphs and their Symanzik polynomials.

U sums, over spanning trees T, the product of the edge variables not in T.
F sums, over spanning two-forests, minus the kinematic invariant of the
momentum flowing between the two components times the product of the edge
variables not in the forest. The invariant of a component is named by its
leg set; a single leg k gives t_k, so on the triangle F = -t1*x2*x3 - ...
"""

import logging
from dataclasses import dataclass
from itertools import combinations

import networkx as nx
import sympy
from networkx.utils import UnionFind

from .exceptions import GraphError
from .polynomials import LaurentPolynomial

logger = logging.getLogger(__name__)

# brute-force enumeration guard
MAX_EDGES = 12


@dataclass(frozen=True)
class Graph:
    """
    Vertices are 1..vertices; internal edge k (1-based) is internal_edges[k-1];
    external_legs holds (vertex, kinematic symbol name).
    """

    vertices: int
    internal_edges: tuple
    external_legs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "internal_edges", tuple(tuple(e) for e in self.internal_edges))
        object.__setattr__(self, "external_legs", tuple((int(v), str(t)) for v, t in self.external_legs))
        for u, v in self.internal_edges:
            if not (1 <= u <= self.vertices and 1 <= v <= self.vertices):
                raise GraphError(f"edge ({u}, {v}) references a vertex outside 1..{self.vertices}")
        for v, _ in self.external_legs:
            if not 1 <= v <= self.vertices:
                raise GraphError(f"leg attached to unknown vertex {v}")

    @classmethod
    def triangle(cls):
        # x1 joins vertices 2-3, x2 joins 3-1, x3 joins 1-2; leg t_k sits at vertex k
        return cls(3, ((2, 3), (3, 1), (1, 2)), ((1, "t1"), (2, "t2"), (3, "t3")))

    @classmethod
    def bubble(cls):
        return cls(2, ((1, 2),), ((1, "t1"), (2, "t2")))

    @classmethod
    def from_json(cls, data):
        return cls(int(data["vertices"]), data["edges"], data.get("legs", ()))

    def to_json(self):
        return {
            "vertices": self.vertices,
            "edges": [list(e) for e in self.internal_edges],
            "legs": [[v, t] for v, t in self.external_legs],
        }

    @property
    def nedges(self):
        return len(self.internal_edges)

    @property
    def loops(self):
        return self.nedges - self.vertices + 1

    def to_networkx(self):
        g = nx.MultiGraph()
        g.add_nodes_from(range(1, self.vertices + 1))
        for k, (u, v) in enumerate(self.internal_edges, start=1):
            g.add_edge(u, v, key=k)
        return g

    def is_connected(self):
        return nx.is_connected(self.to_networkx())


def _forest_components(graph, edge_subset):
    """Vertex sets of the forest spanned by edge_subset, or None if it has a cycle."""
    uf = UnionFind(range(1, graph.vertices + 1))
    for k in edge_subset:
        u, v = graph.internal_edges[k]
        if uf[u] == uf[v]:
            return None
        uf.union(u, v)
    return [frozenset(c) for c in uf.to_sets()]


def _kinematic_symbol(graph, component):
    legs = [t for v, t in graph.external_legs if v in component]
    others = [t for v, t in graph.external_legs if v not in component]
    if not legs or not others:
        return None
    # momentum conservation: either side names the same invariant
    if len(others) < len(legs) or (
        len(others) == len(legs) and graph.external_legs[-1][1] in legs
    ):
        legs = others
    if len(legs) == 1:
        return sympy.Symbol(legs[0])
    return sympy.Symbol("s_" + "_".join(legs))


def symanzik(graph):
    """
    Return (U, F) for a connected graph by enumerating edge subsets.

    Raises:
        GraphError: disconnected graph or too many edges for enumeration
    """
    if graph.nedges == 0:
        raise GraphError("graph has no internal edges")
    if graph.nedges > MAX_EDGES:
        raise GraphError(f"{graph.nedges} edges exceed the enumeration limit of {MAX_EDGES}")
    if not graph.is_connected():
        raise GraphError("graph is disconnected")

    n = graph.nedges
    u_terms = []
    f_terms = []
    for subset in combinations(range(n), graph.vertices - 1):
        if _forest_components(graph, subset) is None:
            continue
        u_terms.append((tuple(0 if k in subset else 1 for k in range(n)), 1))

    if graph.vertices >= 2:
        for subset in combinations(range(n), graph.vertices - 2):
            components = _forest_components(graph, subset)
            if components is None or len(components) != 2:
                continue
            symbol = _kinematic_symbol(graph, components[0])
            if symbol is None:
                continue
            f_terms.append((tuple(0 if k in subset else 1 for k in range(n)), -symbol))

    U = LaurentPolynomial.from_terms(n, u_terms)
    F = LaurentPolynomial.from_terms(n, f_terms)
    logger.debug(f"symanzik: {len(u_terms)} spanning trees, {len(f_terms)} weighted two-forests")
    return U, F
