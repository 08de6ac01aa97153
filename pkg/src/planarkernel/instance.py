"""Kernel outputs: the reduced graph plus provenance and declared bounds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .graph import PlanarGraph, SpaceLedger, serialize

Origin = Union[int, str]


class BoundViolation(RuntimeError):
    """A kernel exceeded its declared size bound although the parameter was met."""


@dataclass
class KernelInstance:
    """A reduced instance.

    ``provenance[i]`` is the original vertex id behind kernel vertex ``i`` or,
    for vertices created by a gadget, the gadget tag.
    """

    graph: PlanarGraph
    provenance: tuple[Origin, ...]
    k: int | None = None
    bound: int | None = None
    ledger: SpaceLedger | None = None
    stats: dict[str, int] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.graph.n

    def within_bound(self) -> bool:
        return self.bound is None or self.graph.n <= self.bound

    def original_vertices(self) -> list[int]:
        return [o for o in self.provenance if isinstance(o, int)]

    def comment_lines(self) -> list[str]:
        out = []
        for i, o in enumerate(self.provenance):
            if isinstance(o, int):
                out.append(f"c origin {i} orig {o}")
            else:
                out.append(f"c origin {i} gadget {o}")
        for key in sorted(self.stats):
            out.append(f"c stat {key} {self.stats[key]}")
        if self.bound is not None:
            out.append(f"c bound {self.bound} {self.graph.n}")
        return out

    def to_text(self, *, with_ledger: bool = False) -> str:
        comments = self.comment_lines()
        if with_ledger and self.ledger is not None:
            comments += self.ledger.lines()
        return serialize(self.graph, comments)


def euler_consistent(G: PlanarGraph) -> bool:
    """True iff the rotation system is a planar embedding (Euler's formula per component)."""
    from .regions import _faces

    faces = _faces(G).faces
    comps = G.components()
    isolated = sum(1 for c in comps if len(c) == 1)
    # each non-trivial component contributes V - E + F = 2
    return G.n - G.m + len(faces) == 2 * (len(comps) - isolated) + isolated
