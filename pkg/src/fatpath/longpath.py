"""Long Path via weighted contraction and randomized low-treewidth covers.

Each part is shrunk to its marked vertices plus one contracted vertex
carrying the unmarked count as weight.  A path of total weight >= k in the
pruned contraction (cross edges at contracted vertices removed) matches a
k-vertex path in the input.  When that contraction is too wide for direct
dynamic programming, randomized ball-carving covers select low-treewidth
induced subgraphs across repetitions; YES answers are certified, NO answers
are one-sided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .certificates import Certificate
from .dp import solve_dp
from .graphs import Graph, bfs_ball
from .hamilton import AugmentedGraph, red_closure, _edges_to_sequence
from .linkage import LinkageRequest, find_spanning_linkage
from .partition import (
    CLIQUE,
    Partition,
    SolverConfig,
    build_quotient,
    kappa_partition,
    refine_to_linked,
)
from .treewidth import TreeDecomposition, heuristic_decomposition

__all__ = [
    "Marking",
    "WeightedCompressed",
    "CoverSample",
    "mark",
    "build_weighted",
    "outer_cover",
    "pattern_cover",
    "weighted_longpath_dp",
    "solve_long_path",
]


@dataclass(frozen=True)
class Marking:
    """Per part, the vertices kept individually after contraction."""

    sets: tuple[frozenset[int], ...]
    strategy: str


def mark(gx: AugmentedGraph, p: Partition, strategy: str = "full") -> Marking:
    """"full" keeps every vertex (no compression).  "bounded" keeps, per
    quotient-neighbor pair, the endpoints of the 2D+2 lexicographically
    smallest cross edges (D the quotient degree) plus two extra vertices per
    part; its adequacy is enforced by oracle-equivalence tests."""
    if strategy not in ("full", "bounded"):
        raise ValueError(f"unknown mark strategy {strategy!r}")
    if strategy == "full":
        return Marking(tuple(frozenset(part) for part in p.parts), strategy)
    owner = p.part_of()
    quotient = build_quotient(gx.base, p.parts)
    delta = max(quotient.graph.max_degree(), 1)
    per_pair = 2 * delta + 2
    cross: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for u, v in gx.base.edges():
        a, b = owner[u], owner[v]
        if a == b:
            continue
        key = (min(a, b), max(a, b))
        cross.setdefault(key, []).append((u, v) if a < b else (v, u))
    marked: list[set[int]] = [set() for _ in p.parts]
    for (a, b), pairs in sorted(cross.items()):
        for u, v in sorted(pairs)[:per_pair]:
            marked[a].add(u)
            marked[b].add(v)
    for i, part in enumerate(p.parts):
        extras = sorted(part - marked[i])[:2]
        marked[i].update(extras)
    return Marking(tuple(frozenset(m) for m in marked), strategy)


@dataclass(frozen=True)
class WeightedCompressed:
    """The contraction H plus its pruned (h_prime) and completed (h_cross)
    variants.  origin maps marked vertices to input ids (None for contracted
    vertices); u_sets holds the unmarked vertices behind each contraction."""

    h: Graph
    h_prime: Graph
    h_cross: Graph
    weights: tuple[int, ...]
    origin: tuple[Optional[int], ...]
    part_of_h: tuple[int, ...]
    u_sets: tuple[tuple[int, ...], ...]
    contracted: dict[int, int]  # part id -> h vertex, when U_i nonempty


def build_weighted(
    gx: AugmentedGraph,
    p: Partition,
    m: Marking,
    raw_parts: frozenset[int] = frozenset(),
) -> WeightedCompressed:
    g = gx.base
    origin: list[Optional[int]] = []
    part_of_h: list[int] = []
    weights: list[int] = []
    u_sets: list[tuple[int, ...]] = []
    contracted: dict[int, int] = {}
    to_h: dict[int, int] = {}
    for i, part in enumerate(p.parts):
        ms = sorted(part & m.sets[i]) if i not in raw_parts else sorted(part)
        us = tuple(sorted(part - set(ms)))
        u_sets.append(us)
        for v in ms:
            to_h[v] = len(origin)
            origin.append(v)
            part_of_h.append(i)
            weights.append(1)
        if us:
            contracted[i] = len(origin)
            origin.append(None)
            part_of_h.append(i)
            weights.append(len(us))
    nh = len(origin)

    # cross adjacency between parts is inherited from g; contracted vertices
    # stand for their whole unmarked set
    def g_side(hv: int) -> tuple[int, ...]:
        ov = origin[hv]
        return (ov,) if ov is not None else u_sets[part_of_h[hv]]

    h_edges: set[tuple[int, int]] = set()
    members: dict[int, list[int]] = {}
    for hv in range(nh):
        members.setdefault(part_of_h[hv], []).append(hv)
    for i, vs in members.items():
        if i in raw_parts:
            for a, u in enumerate(vs):
                for v in vs[a + 1 :]:
                    if g.has_edge(origin[u], origin[v]):
                        h_edges.add((u, v))
        else:
            h_edges.update((u, v) for a, u in enumerate(vs) for v in vs[a + 1 :])
    cross_edges: set[tuple[int, int]] = set()
    for hu in range(nh):
        su = g_side(hu)
        for hv in range(hu + 1, nh):
            if part_of_h[hv] == part_of_h[hu]:
                continue
            if any(g.has_edge(a, b) for a in su for b in g_side(hv)):
                cross_edges.add((hu, hv))
    h = Graph(nh, sorted(h_edges | cross_edges))
    vset = set(contracted.values())
    prime_cross = {e for e in cross_edges if e[0] not in vset and e[1] not in vset}
    h_prime = Graph(nh, sorted(h_edges | prime_cross))
    # true-twin completion: a single cross edge between two non-raw parts
    # makes their kept sets fully adjacent
    linked_pairs = {
        (part_of_h[u], part_of_h[v])
        for u, v in cross_edges
        if part_of_h[u] not in raw_parts and part_of_h[v] not in raw_parts
    }
    full_cross = set(cross_edges)
    for i, j in linked_pairs:
        full_cross.update(
            (min(u, v), max(u, v)) for u in members[i] for v in members[j]
        )
    h_cross = Graph(nh, sorted(h_edges | full_cross))
    return WeightedCompressed(
        h,
        h_prime,
        h_cross,
        tuple(weights),
        tuple(origin),
        tuple(part_of_h),
        tuple(u_sets),
        contracted,
    )


def outer_cover(g: Graph, k: int, seed: int, c: float = 4.0) -> frozenset[int]:
    """Iterative ball carving: keep a geometric-radius ball around the lowest
    remaining vertex, discard its boundary, repeat.  Every component of the
    output has BFS radius at most ceil(c*k*log2(k)); the probability that any
    fixed k-subset survives intact is bounded below empirically."""
    if k < 4:
        raise ValueError("k must be >= 4")
    rng = np.random.default_rng(seed)
    cap = max(1, math.ceil(c * k * math.log2(k)))
    p = 1.0 / (2 * k)
    remaining = set(range(g.n))
    kept: set[int] = set()
    while remaining:
        sub, ids = g.induced(remaining)
        v = 0  # ids is sorted, so sub vertex 0 is the lowest remaining id
        r = min(int(rng.geometric(p)), cap)
        ball, boundary = bfs_ball(sub, v, r)
        kept.update(ids[x] for x in ball)
        remaining.difference_update(ids[x] for x in ball | boundary)
    return frozenset(kept)


@dataclass(frozen=True)
class CoverSample:
    vertices: frozenset[int]
    clusters: tuple[tuple[int, int], ...]  # (center, radius)
    boundary: frozenset[int]
    aborted: bool
    seed: int
    records: tuple[dict, ...]


def pattern_cover(
    g: Graph, k: int, seed: int, d: int = 2, c_r: float = 4.0
) -> CoverSample:
    """Clustering sampler: carve geometric-radius balls (success probability
    k^{-1/d}*log2(k), radius capped at R = ceil(c_r*k^{1/d})), keep each ball,
    drop its boundary, and rarely (probability 1/(k*n)) admit a small random
    boundary sample into a side pool B.  Output is balls plus pool, or empty
    if the pool overflows its k^{1-1/d}*log2(k) cap."""
    if k < 4:
        raise ValueError("k must be >= 4")
    rng = np.random.default_rng(seed)
    p = min(1.0, k ** (-1.0 / d) * math.log2(k))
    big_r = math.ceil(c_r * k ** (1.0 / d))
    l_cap = math.ceil(k ** (1.0 - 1.0 / d) * math.log2(k))
    n = max(g.n, 1)
    remaining = set(range(g.n))
    kept: set[int] = set()
    pool: set[int] = set()
    clusters: list[tuple[int, int]] = []
    records: list[dict] = []
    i = 0
    while remaining:
        sub, ids = g.induced(remaining)
        center = ids[0]
        r = min(int(rng.geometric(p)), big_r)
        ball, boundary = bfs_ball(sub, 0, r)
        kept.update(ids[x] for x in ball)
        clusters.append((center, r))
        sampled_l = 0
        if boundary and rng.random() < 1.0 / (k * n):
            sampled_l = int(rng.integers(1, l_cap + 1))
            bnd = sorted(ids[x] for x in boundary)
            take = min(sampled_l, len(bnd))
            picked = rng.choice(len(bnd), size=take, replace=False)
            pool.update(bnd[int(x)] for x in picked)
        remaining.difference_update(ids[x] for x in ball | boundary)
        records.append(
            {
                "i": i,
                "v_i": center,
                "r_i": r,
                "ball_size": len(ball),
                "boundary_size": len(boundary),
                "sampled_l": sampled_l,
                "aborted": False,
            }
        )
        i += 1
    aborted = len(pool) > l_cap
    if aborted:
        records.append(
            {
                "i": i,
                "v_i": -1,
                "r_i": 0,
                "ball_size": 0,
                "boundary_size": len(pool),
                "sampled_l": 0,
                "aborted": True,
            }
        )
        return CoverSample(
            frozenset(), tuple(clusters), frozenset(pool), True, seed, tuple(records)
        )
    return CoverSample(
        frozenset(kept | pool),
        tuple(clusters),
        frozenset(pool),
        False,
        seed,
        tuple(records),
    )


def _dfs_longpath(h: Graph, weights: list[int], k: int) -> Optional[Certificate]:
    """Pruned exhaustive search for a path of weight >= k; the escape hatch
    for small graphs whose decompositions are too wide for the bag DP."""
    n = h.n
    masks = h.adjacency_masks()
    full = (1 << n) - 1
    order = sorted(range(n), key=lambda v: -weights[v])
    for s in order:
        stack: list[tuple[int, int, int, tuple[int, ...]]] = [
            (s, 1 << s, weights[s], (s,))
        ]
        while stack:
            v, used, w, seq = stack.pop()
            if w >= k:
                return Certificate("path", seq)
            # weight bound: only unvisited vertices reachable from the active
            # end through unvisited vertices can still contribute
            free = ~used & full
            frontier = masks[v] & free
            reach = 0
            while frontier:
                reach |= frontier
                grow = 0
                rest = frontier
                while rest:
                    u = (rest & -rest).bit_length() - 1
                    rest &= rest - 1
                    grow |= masks[u]
                frontier = grow & free & ~reach
            bound = w
            rest = reach
            while rest:
                u = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                bound += weights[u]
            if bound < k:
                continue
            cand = masks[v] & free
            while cand:
                u = (cand & -cand).bit_length() - 1
                cand &= cand - 1
                stack.append((u, used | (1 << u), w + weights[u], seq + (u,)))
    return None


def weighted_longpath_dp(
    h: Graph, weights: list[int], td: TreeDecomposition, k: int
) -> Optional[Certificate]:
    """Max-weight path search: a path of total vertex weight >= k, if any."""
    if h.n == 0:
        return None
    best_single = max(range(h.n), key=lambda v: weights[v])
    if weights[best_single] >= k:
        return Certificate("path", (best_single,))
    if td.width > 5 and h.n <= 24:
        cert = _dfs_longpath(h, weights, k)
        if cert is not None:
            assert cert.validate(h)
            assert sum(weights[v] for v in cert.vertices) >= k
        return cert
    edges = solve_dp(h, td, "longpath", weights=list(weights), target=k)
    if edges is None:
        return None
    seq = _edges_to_sequence(h.n, edges, "path")
    assert seq is not None
    cert = Certificate("path", tuple(seq))
    assert cert.validate(h)
    assert sum(weights[v] for v in seq) >= k
    return cert


class _Fallback(Exception):
    def __init__(self, part_id: int):
        super().__init__(str(part_id))
        self.part_id = part_id


def _expand(
    g: Graph,
    p: Partition,
    wc: WeightedCompressed,
    cert_h: Certificate,
    raw_parts: frozenset[int],
    cfg: SolverConfig,
) -> Certificate:
    """Lift an H'-path to G: contracted vertices expand to their unmarked
    sets in ascending id, then every multi-vertex stay inside a non-clique
    part is replaced by an exact spanning linkage of that part."""
    seq: list[int] = []
    owner: list[int] = []
    for hv in cert_h.vertices:
        pid = wc.part_of_h[hv]
        if wc.origin[hv] is not None:
            seq.append(wc.origin[hv])
            owner.append(pid)
        else:
            seq.extend(wc.u_sets[pid])
            owner.extend([pid] * len(wc.u_sets[pid]))

    runs: list[list[int]] = [[seq[0]]]
    run_part: list[int] = [owner[0]]
    for v, pid in zip(seq[1:], owner[1:]):
        if pid == run_part[-1]:
            runs[-1].append(v)
        else:
            runs.append([v])
            run_part.append(pid)

    by_part: dict[int, list[int]] = {}
    for ri, pid in enumerate(run_part):
        by_part.setdefault(pid, []).append(ri)
    for pid, ris in sorted(by_part.items()):
        if p.kinds[pid] == CLIQUE or pid in raw_parts:
            continue  # run edges are real input edges
        open_ris = [ri for ri in ris if len(runs[ri]) > 1]
        if not open_ris:
            continue
        fixed = {runs[ri][0] for ri in ris if len(runs[ri]) == 1}
        remainder = frozenset(p.parts[pid] - fixed)
        if len(remainder) > cfg.linkage_guard:
            raise _Fallback(pid)
        pairs = tuple((runs[ri][0], runs[ri][-1]) for ri in open_ris)
        link = find_spanning_linkage(g, LinkageRequest(remainder, pairs))
        if link is None:
            raise _Fallback(pid)
        for ri, path in zip(open_ris, link.paths):
            runs[ri] = list(path)

    out = [v for run in runs for v in run]
    cert = Certificate("path", tuple(out))
    if not cert.validate(g):
        raise _Fallback(min(by_part))
    return cert


def _direct_small(g: Graph, k: int) -> Optional[Certificate]:
    if k <= 0 or g.n < k:
        return None if k > 0 else None
    if k == 1:
        return Certificate("path", (0,))
    if k == 2:
        for u in range(g.n):
            for v in g.neighbors(u):
                return Certificate("path", (u, v))
        return None
    # k == 3: any midpoint with two distinct neighbors
    for v in range(g.n):
        nb = sorted(g.neighbors(v))
        if len(nb) >= 2:
            return Certificate("path", (nb[0], v, nb[1]))
    return None


def solve_long_path(
    g: Graph,
    k: int,
    cfg: Optional[SolverConfig] = None,
    seed: int = 0,
    mark_strategy: str = "full",
) -> Optional[Certificate]:
    cfg = cfg or SolverConfig()
    if k < 1 or g.n < k:
        return None
    if k <= 3:
        return _direct_small(g, k)

    p0, _ = kappa_partition(g)
    p, _q = refine_to_linked(g, p0, cfg)
    gx = red_closure(g, p)

    exponent = cfg.c_rep * k ** (1.0 - 1.0 / cfg.d) * math.log2(k) ** 2
    schedule = cfg.repetition_budget
    if exponent < 60:
        schedule = min(cfg.repetition_budget, math.ceil(2.0**exponent))

    raw: frozenset[int] = frozenset()
    while True:
        marking = mark(gx, p, mark_strategy)
        wc = build_weighted(gx, p, marking, raw)

        try:
            # when the pruned contraction is narrow enough, decide exactly
            td_full = heuristic_decomposition(wc.h_prime)
            if td_full.width <= cfg.dp_width_cap or wc.h_prime.n <= 24:
                cert_h = weighted_longpath_dp(wc.h_prime, list(wc.weights), td_full, k)
                if cert_h is None:
                    return None
                return _expand(g, p, wc, cert_h, raw, cfg)

            for rep in range(schedule):
                rng = np.random.default_rng(seed + rep)
                s_outer = int(rng.integers(1 << 31))
                a_outer = outer_cover(
                    wc.h_cross, k, s_outer, cfg.outer_radius_const
                )
                if not a_outer:
                    continue
                sub, ids = wc.h_cross.induced(a_outer)
                for comp in sub.components():
                    comp_ids = [ids[x] for x in comp]
                    cg, cl = wc.h_cross.induced(comp_ids)
                    td = heuristic_decomposition(cg)
                    if td.width <= cfg.dp_width_cap or cg.n <= 24:
                        chosen = set(cl)
                    else:
                        s_pat = int(rng.integers(1 << 31))
                        sample = pattern_cover(cg, k, s_pat, cfg.d, cfg.c_r)
                        if sample.aborted or not sample.vertices:
                            continue
                        chosen = {cl[x] for x in sample.vertices}
                    dg, dl = wc.h_prime.induced(chosen)
                    dtd = heuristic_decomposition(dg)
                    if dtd.width > cfg.dp_width_cap and dg.n > 24:
                        continue
                    w_sub = [wc.weights[v] for v in dl]
                    cert_sub = weighted_longpath_dp(dg, w_sub, dtd, k)
                    if cert_sub is None:
                        continue
                    cert_h = Certificate(
                        "path", tuple(dl[v] for v in cert_sub.vertices)
                    )
                    return _expand(g, p, wc, cert_h, raw, cfg)
            return None
        except _Fallback as fb:
            if fb.part_id in raw:
                raise RuntimeError("fallback loop did not converge")
            raw = raw | {fb.part_id}
