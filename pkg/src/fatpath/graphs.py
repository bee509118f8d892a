"""Immutable simple undirected graphs and the primitive operations on them.

Every solver in this package consumes plain graphs: vertex ids 0..n-1,
adjacency stored as frozensets.  No weights, no directions, no mutation.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Optional

__all__ = [
    "Graph",
    "bfs_ball",
    "greedy_mis",
    "vertex_connectivity",
    "find_separator_leq",
    "independence_number_exact",
    "read_graph",
    "write_graph",
]


class Graph:
    """Simple undirected graph on vertices 0..n-1 with frozen adjacency sets."""

    __slots__ = ("n", "_adj", "_m")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be nonnegative")
        adj: list[set[int]] = [set() for _ in range(n)]
        m = 0
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if v not in adj[u]:
                adj[u].add(v)
                adj[v].add(u)
                m += 1
        self.n = n
        self._adj = tuple(frozenset(a) for a in adj)
        self._m = m

    @property
    def m(self) -> int:
        return self._m

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self._adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in self._adj[u]:
                if u < v:
                    yield (u, v)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph plus the list mapping new ids to original ids."""
        vs = sorted(set(vertices))
        index = {v: i for i, v in enumerate(vs)}
        edges = [
            (index[u], index[v])
            for u in vs
            for v in self._adj[u]
            if u < v and v in index
        ]
        return Graph(len(vs), edges), vs

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in range(self.n):
            if s in seen:
                continue
            comp = [s]
            seen.add(s)
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for w in self._adj[u]:
                    if w not in seen:
                        seen.add(w)
                        comp.append(w)
                        queue.append(w)
            comps.append(sorted(comp))
        return comps

    def adjacency_masks(self) -> list[int]:
        """Per-vertex neighborhoods as bitmasks, for subset DPs."""
        masks = [0] * self.n
        for u in range(self.n):
            m = 0
            for v in self._adj[u]:
                m |= 1 << v
            masks[u] = m
        return masks

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(u, v) for i, u in enumerate(vs) for v in vs[i + 1 :])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph) and self.n == other.n and self._adj == other._adj
        )

    def __hash__(self) -> int:
        return hash((self.n, self._adj))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self._m})"


def bfs_ball(g: Graph, v: int, r: int) -> tuple[frozenset[int], frozenset[int]]:
    """Vertices at distance < r from v, and those at distance exactly r.

    The ball always contains v; ball and boundary are disjoint.
    """
    if not (0 <= v < g.n):
        raise ValueError(f"vertex {v} out of range")
    if r < 1:
        raise ValueError("radius must be >= 1")
    dist = {v: 0}
    queue = deque([v])
    ball = set()
    boundary = set()
    while queue:
        u = queue.popleft()
        du = dist[u]
        if du < r:
            ball.add(u)
        else:
            boundary.add(u)
            continue  # do not expand past distance r
        for w in g.neighbors(u):
            if w not in dist:
                dist[w] = du + 1
                queue.append(w)
    return frozenset(ball), frozenset(boundary)


def greedy_mis(g: Graph, order: Optional[Iterable[int]] = None) -> frozenset[int]:
    """Maximal independent set by scanning `order` (default: ascending id)."""
    scan = list(order) if order is not None else list(range(g.n))
    if sorted(scan) != list(range(g.n)):
        raise ValueError("order must be a permutation of 0..n-1")
    taken: set[int] = set()
    blocked: set[int] = set()
    for v in scan:
        if v not in blocked:
            taken.add(v)
            blocked.add(v)
            blocked.update(g.neighbors(v))
    return frozenset(taken)


def _max_vertex_disjoint_paths(g: Graph, allowed: frozenset[int], s: int, t: int,
                               cap: Optional[int] = None) -> tuple[int, set[int]]:
    """Menger via unit-vertex-capacity max flow inside g[allowed].

    Returns (flow value, minimum s-t vertex cut).  s,t must be nonadjacent.
    Vertex splitting: v_in = 2v, v_out = 2v+1; internal arc capacity 1, with
    s and t uncapacitated.  Augmenting paths found by BFS in ascending
    neighbor order so the first minimum cut is deterministic.
    """
    # residual adjacency as dict-of-dicts over split nodes
    cap_arc: dict[tuple[int, int], int] = {}
    INF = 1 << 30

    def add(u, v, c):
        cap_arc[(u, v)] = cap_arc.get((u, v), 0) + c
        cap_arc.setdefault((v, u), 0)

    nodes = sorted(allowed)
    for v in nodes:
        add(2 * v, 2 * v + 1, INF if v in (s, t) else 1)
        for w in sorted(g.neighbors(v)):
            if w in allowed:
                add(2 * v + 1, 2 * w, INF)

    succ: dict[int, list[int]] = {}
    for (u, v) in cap_arc:
        succ.setdefault(u, []).append(v)
    for u in succ:
        succ[u].sort()

    source, sink = 2 * s, 2 * t + 1
    flow = 0
    limit = cap if cap is not None else INF
    while flow <= limit:
        parent: dict[int, int] = {source: source}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in succ.get(u, ()):
                if v not in parent and cap_arc[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            break
        v = sink
        while v != source:
            u = parent[v]
            cap_arc[(u, v)] -= 1
            cap_arc[(v, u)] += 1
            v = u
        flow += 1

    if flow > limit:
        return flow, set()
    # min cut: vertices whose internal arc crosses the reachable frontier
    reach = {source}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in succ.get(u, ()):
            if v not in reach and cap_arc[(u, v)] > 0:
                reach.add(v)
                queue.append(v)
    cut = {
        v for v in nodes
        if 2 * v in reach and 2 * v + 1 not in reach and v not in (s, t)
    }
    return flow, cut


def vertex_connectivity(g: Graph) -> int:
    """Minimum vertex-separator size; n-1 for complete graphs, 0 if disconnected."""
    n = g.n
    if n <= 1:
        return 0
    if not g.is_connected():
        return 0
    allowed = frozenset(range(n))
    best = n - 1
    nonadj = [
        (u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)
    ]
    if not nonadj:
        return n - 1  # complete-graph convention
    for u, v in nonadj:
        flow, _ = _max_vertex_disjoint_paths(g, allowed, u, v, cap=best - 1)
        if flow < best:
            best = flow
    return best


def find_separator_leq(
    g: Graph, induced_on: frozenset[int] | set[int], s: int
) -> Optional[frozenset[int]]:
    """A minimum vertex separator of g[induced_on], returned only if its size <= s.

    Absent means g[induced_on] is (s+1)-connected or complete.  Deterministic:
    the separator comes from the first minimum cut found scanning nonadjacent
    pairs in ascending order.
    """
    if s < 0:
        raise ValueError("separator budget must be >= 0")
    allowed = frozenset(induced_on)
    nodes = sorted(allowed)
    if len(nodes) <= 1:
        return None
    best_size = None
    best_cut = None
    for i, u in enumerate(nodes):
        for v in nodes[i + 1 :]:
            if g.has_edge(u, v):
                continue
            cap = s if best_size is None else best_size - 1
            flow, cut = _max_vertex_disjoint_paths(g, allowed, u, v, cap=cap)
            if flow <= cap and cut:
                if best_size is None or flow < best_size:
                    best_size = flow
                    best_cut = cut
    if best_cut is None:
        return None
    return frozenset(best_cut)


def independence_number_exact(g: Graph) -> int:
    """Exact independence number by branch and bound.  Guarded at n <= 30."""
    if g.n > 30:
        raise ValueError("independence_number_exact is limited to n <= 30")
    masks = g.adjacency_masks()
    best = 0

    def bb(candidates: int, size: int) -> None:
        nonlocal best
        if size + bin(candidates).count("1") <= best:
            return
        if candidates == 0:
            best = max(best, size)
            return
        v = (candidates & -candidates).bit_length() - 1
        bb(candidates & ~(1 << v) & ~masks[v], size + 1)  # take v
        bb(candidates & ~(1 << v), size)  # skip v

    bb((1 << g.n) - 1, 0)
    return best


def write_graph(g: Graph) -> str:
    """Line-oriented text: `p <n> <m>` then one `e <u> <v>` per edge, 0-indexed."""
    lines = [f"p {g.n} {g.m}"]
    lines.extend(f"e {u} {v}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None or len(parts) != 3:
                raise ValueError(f"line {lineno}: malformed problem line")
            n = int(parts[1])
        elif parts[0] == "e":
            if n is None or len(parts) != 3:
                raise ValueError(f"line {lineno}: edge before problem line or malformed")
            edges.append((int(parts[1]), int(parts[2])))
        else:
            raise ValueError(f"line {lineno}: unknown record {parts[0]!r}")
    if n is None:
        raise ValueError("missing problem line")
    return Graph(n, edges)
