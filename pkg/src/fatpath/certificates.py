"""Path and cycle certificates.  Every solver output is one of these."""

from __future__ import annotations

from dataclasses import dataclass

from .graphs import Graph

__all__ = ["Certificate"]


@dataclass(frozen=True)
class Certificate:
    """A vertex sequence claimed to be a simple path or cycle."""

    kind: str  # "path" | "cycle"
    vertices: tuple[int, ...]

    def __post_init__(self):
        if self.kind not in ("path", "cycle"):
            raise ValueError(f"unknown certificate kind {self.kind!r}")

    def validate(self, g: Graph, hamiltonian: bool = False) -> bool:
        vs = self.vertices
        if len(vs) != len(set(vs)):
            return False
        if any(not 0 <= v < g.n for v in vs):
            return False
        if self.kind == "cycle":
            if len(vs) < 3:
                return False
            if not g.has_edge(vs[-1], vs[0]):
                return False
        else:
            if len(vs) < 1:
                return False
        if any(not g.has_edge(u, v) for u, v in zip(vs, vs[1:])):
            return False
        if hamiltonian and len(vs) != g.n:
            return False
        return True

    def serialize(self) -> str:
        return f"{self.kind}: " + " ".join(str(v) for v in self.vertices)

    def __len__(self) -> int:
        return len(self.vertices)
