"""Tree decompositions: validation, min-fill heuristic construction, lifting
a quotient decomposition to the full graph, and width accounting."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .graphs import Graph
from .partition import Partition

__all__ = [
    "TreeDecomposition",
    "validate",
    "heuristic_decomposition",
    "lift",
    "weighted_width",
    "decomposition_to_text",
    "decomposition_from_text",
]


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags indexed 0..b-1 and undirected tree edges between bag indices."""

    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


def validate(g: Graph, td: TreeDecomposition) -> bool:
    """The three axioms: vertex cover, edge cover, connected subtrees."""
    b = len(td.bags)
    if b == 0:
        return g.n == 0
    if len(td.tree_edges) != b - 1:
        return False
    # the tree edges must form a tree
    t = nx.Graph()
    t.add_nodes_from(range(b))
    t.add_edges_from(td.tree_edges)
    if b > 0 and not nx.is_connected(t):
        return False
    covered: set[int] = set()
    for bag in td.bags:
        covered |= bag
    if covered != set(range(g.n)):
        return False
    for u, v in g.edges():
        if not any(u in bag and v in bag for bag in td.bags):
            return False
    for v in range(g.n):
        nodes = [i for i, bag in enumerate(td.bags) if v in bag]
        sub = t.subgraph(nodes)
        if len(nodes) > 0 and not nx.is_connected(sub):
            return False
    return True


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def heuristic_decomposition(g: Graph) -> TreeDecomposition:
    """Valid decomposition from a min-fill elimination order.

    Backed by networkx's min-fill heuristic; the result is converted into
    canonical form (bags sorted lexicographically) and validated widths are
    measured downstream, never assumed.
    """
    if g.n == 0:
        return TreeDecomposition((), ())
    if g.n == 1:
        return TreeDecomposition((frozenset({0}),), ())
    _, dec = treewidth_min_fill_in(_to_nx(g))
    raw_bags = sorted(dec.nodes, key=lambda s: tuple(sorted(s)))
    index = {bag: i for i, bag in enumerate(raw_bags)}
    bags = tuple(frozenset(bag) for bag in raw_bags)
    edges = tuple(
        sorted(
            (min(index[a], index[b]), max(index[a], index[b]))
            for a, b in dec.edges
        )
    )
    if not bags:
        bags = (frozenset(range(g.n)),)
        edges = ()
    return TreeDecomposition(bags, edges)


def lift(td_q: TreeDecomposition, p: Partition) -> TreeDecomposition:
    """Replace every part index in a quotient decomposition by the part's
    vertices.  Width is at most (max part size)*(quotient width + 1) - 1."""
    bags = tuple(
        frozenset().union(*(p.parts[i] for i in bag)) if bag else frozenset()
        for bag in td_q.bags
    )
    return TreeDecomposition(bags, td_q.tree_edges)


def weighted_width(td: TreeDecomposition, gamma: Sequence[float]) -> float:
    """Max over bags of the summed per-vertex weights."""
    if any(w < 0 for w in gamma):
        raise ValueError("weights must be nonnegative")
    return max((sum(gamma[v] for v in bag) for bag in td.bags), default=0.0)


def decomposition_to_text(td: TreeDecomposition, n: int) -> str:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, bag in enumerate(td.bags):
        lines.append("b " + " ".join([str(i)] + [str(v) for v in sorted(bag)]))
    for a, b in td.tree_edges:
        lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def decomposition_from_text(text: str) -> tuple[TreeDecomposition, int]:
    bags: dict[int, frozenset[int]] = {}
    edges = []
    n = 0
    count = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise ValueError(f"line {lineno}: malformed header")
            count, n = int(parts[2]), int(parts[4])
        elif parts[0] == "b":
            bags[int(parts[1])] = frozenset(int(x) for x in parts[2:])
        else:
            edges.append((int(parts[0]), int(parts[1])))
    ordered = tuple(bags[i] for i in range(count))
    return TreeDecomposition(ordered, tuple(edges)), n
