"""Similarly sized fat objects in R^d and their intersection graphs.

Objects are balls or axis-aligned boxes in abstract units where every object
contains a unit ball and fits inside a radius-beta ball.  Generated centers
are snapped to a 2^-20 grid so that floating-point predicates agree with an
exact rational re-evaluation (the test oracle relies on this).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import Graph, bfs_ball

__all__ = [
    "Ball",
    "Box",
    "GeometricInstance",
    "validate_fatness",
    "objects_intersect",
    "intersection_graph",
    "generate_instance",
    "empirical_growth",
    "instance_to_json",
    "instance_from_json",
]

GRID = 1 << 20  # coordinate grid resolution: multiples of 2^-20


def snap(x: float) -> float:
    """Round to the nearest multiple of 2^-20 (exact in binary floating point)."""
    return round(x * GRID) / GRID


@dataclass(frozen=True)
class Ball:
    center: tuple[float, ...]
    radius: float

    @property
    def dimension(self) -> int:
        return len(self.center)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by center and per-axis half-extents."""

    center: tuple[float, ...]
    half_extents: tuple[float, ...]

    def __post_init__(self):
        if len(self.center) != len(self.half_extents):
            raise ValueError("center and half_extents dimension mismatch")

    @property
    def dimension(self) -> int:
        return len(self.center)


FatObject = Ball | Box


def validate_fatness(obj: FatObject, beta: float, d: int) -> bool:
    """True iff a unit ball fits inside obj and obj fits in some radius-beta ball."""
    if d < 1 or beta < 1:
        raise ValueError("require d >= 1 and beta >= 1")
    if obj.dimension != d:
        raise ValueError(f"object dimension {obj.dimension} != {d}")
    if isinstance(obj, Ball):
        return 1.0 <= obj.radius <= beta
    inradius = min(obj.half_extents)
    circumradius = math.sqrt(sum(h * h for h in obj.half_extents))
    return inradius >= 1.0 and circumradius <= beta


def objects_intersect(a: FatObject, b: FatObject) -> bool:
    """Closed-set intersection; tangency counts."""
    if isinstance(a, Ball) and isinstance(b, Ball):
        d2 = sum((x - y) ** 2 for x, y in zip(a.center, b.center))
        r = a.radius + b.radius
        return d2 <= r * r
    if isinstance(a, Box) and isinstance(b, Box):
        return all(
            abs(x - y) <= ha + hb
            for x, y, ha, hb in zip(a.center, b.center, a.half_extents, b.half_extents)
        )
    ball, box = (a, b) if isinstance(a, Ball) else (b, a)
    d2 = 0.0
    for x, c, h in zip(ball.center, box.center, box.half_extents):
        gap = max(abs(x - c) - h, 0.0)
        d2 += gap * gap
    return d2 <= ball.radius * ball.radius


@dataclass(frozen=True)
class GeometricInstance:
    """An ordered family of fat objects; object i is vertex i of the graph."""

    dimension: int
    beta: float
    objects: tuple[FatObject, ...]
    seed: int = 0

    def __post_init__(self):
        if self.dimension < 1 or self.beta < 1:
            raise ValueError("require dimension >= 1 and beta >= 1")
        for i, obj in enumerate(self.objects):
            if not validate_fatness(obj, self.beta, self.dimension):
                raise ValueError(f"object {i} fails the fatness check")


def intersection_graph(inst: GeometricInstance) -> Graph:
    """Edge {i,j} iff objects i and j intersect (closed sets)."""
    objs = inst.objects
    n = len(objs)
    # coarse prune on circumscribed balls before the exact pairwise predicate
    centers = np.array([o.center for o in objs], dtype=float)
    radii = np.array(
        [
            o.radius if isinstance(o, Ball) else math.sqrt(sum(h * h for h in o.half_extents))
            for o in objs
        ]
    )
    edges = []
    for i in range(n):
        if n > 1:
            d2 = np.sum((centers[i + 1 :] - centers[i]) ** 2, axis=1)
            reach = (radii[i + 1 :] + radii[i]) ** 2
            for off in np.nonzero(d2 <= reach)[0]:
                j = i + 1 + int(off)
                if objects_intersect(objs[i], objs[j]):
                    edges.append((i, j))
    return Graph(n, edges)


def generate_instance(
    d: int,
    beta: float,
    n: int,
    box_side: float,
    shape_mix: float = 1.0,
    seed: int = 0,
) -> GeometricInstance:
    """n random objects: centers uniform in [0, box_side]^d, sizes uniform in [1, beta].

    shape_mix is the fraction of balls (the rest are boxes).  Deterministic in
    all arguments; coordinates are snapped to the 2^-20 grid.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    boxes_possible = beta >= math.sqrt(d)  # h_i >= 1 forces circumradius >= sqrt(d)
    objects: list[FatObject] = []
    for _ in range(n):
        center = tuple(snap(float(x)) for x in rng.uniform(0.0, box_side, size=d))
        is_ball = rng.uniform() < shape_mix or not boxes_possible
        if is_ball:
            r = snap(float(rng.uniform(1.0, beta)))
            objects.append(Ball(center, min(max(r, 1.0), beta)))
        else:
            # half-extents in [1, beta/sqrt(d)] keep the circumradius <= beta
            hmax = beta / math.sqrt(d)
            hs = tuple(
                min(max(snap(float(h)), 1.0), hmax)
                for h in rng.uniform(1.0, hmax, size=d)
            )
            objects.append(Box(center, hs))
    return GeometricInstance(d, beta, tuple(objects), seed=seed)


def empirical_growth(g: Graph, r_max: int) -> list[tuple[int, int]]:
    """For r = 1..r_max, the maximum BFS-ball size over all vertices."""
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    table = []
    for r in range(1, r_max + 1):
        best = 0
        for v in range(g.n):
            ball, _ = bfs_ball(g, v, r)
            best = max(best, len(ball))
        table.append((r, best))
    return table


def _obj_to_dict(obj: FatObject) -> dict:
    if isinstance(obj, Ball):
        return {"type": "ball", "center": list(obj.center), "radius": obj.radius}
    return {"type": "box", "center": list(obj.center), "half_extents": list(obj.half_extents)}


def _obj_from_dict(rec: dict) -> FatObject:
    kind = rec.get("type")
    if kind == "ball":
        return Ball(tuple(rec["center"]), float(rec["radius"]))
    if kind == "box":
        return Box(tuple(rec["center"]), tuple(rec["half_extents"]))
    raise ValueError(f"unknown object type {kind!r}")


def instance_to_json(inst: GeometricInstance) -> str:
    doc = {
        "dimension": inst.dimension,
        "beta": inst.beta,
        "seed": inst.seed,
        "objects": [_obj_to_dict(o) for o in inst.objects],
    }
    return json.dumps(doc, indent=None, separators=(",", ":")) + "\n"


def instance_from_json(text: str) -> GeometricInstance:
    doc = json.loads(text)
    return GeometricInstance(
        dimension=int(doc["dimension"]),
        beta=float(doc["beta"]),
        objects=tuple(_obj_from_dict(rec) for rec in doc["objects"]),
        seed=int(doc.get("seed", 0)),
    )
