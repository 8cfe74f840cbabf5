"""Even factors: spanning subgraphs whose components are circuits or isolated vertices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ContractError, InvariantError
from .factor_select import cycle_decomposition
from .graph import Edge, Graph, norm


@dataclass(frozen=True)
class EvenFactor:
    n: int
    edges: frozenset[Edge]

    def __post_init__(self):
        deg = [0] * self.n
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n) or u == v:
                raise InvariantError("even factor edge out of range", (u, v))
            deg[u] += 1
            deg[v] += 1
        bad = [v for v, d in enumerate(deg) if d not in (0, 2)]
        if bad:
            raise InvariantError(f"vertex {bad[0]} has degree {deg[bad[0]]} in the even factor", bad[0])

    @classmethod
    def of(cls, n: int, edges: Iterable[Sequence[int]]) -> "EvenFactor":
        es = [norm(*e) for e in edges]
        if len(set(es)) != len(es):
            raise InvariantError("even factor uses an edge twice", es)
        return cls(n, frozenset(es))

    @classmethod
    def from_circuits(cls, n: int, circuits: Iterable[Sequence[int]]) -> "EvenFactor":
        edges = []
        for c in circuits:
            edges += [(c[i], c[(i + 1) % len(c)]) for i in range(len(c))]
        return cls.of(n, edges)

    @property
    def circuits(self) -> list[tuple[int, ...]]:
        return cycle_decomposition(self.n, self.edges)

    @property
    def isolated(self) -> list[int]:
        covered = {x for e in self.edges for x in e}
        return [v for v in range(self.n) if v not in covered]

    @property
    def cost(self) -> int:
        return self.n + 2 * len(self.circuits) + len(self.isolated)

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def validate(self, g: Graph) -> None:
        """Raise unless this is an even factor of ``g``."""
        if g.n != self.n:
            raise ContractError(f"factor has {self.n} vertices, graph has {g.n}")
        for e in self.edges:
            if not g.has_edge(*e):
                raise InvariantError("even factor edge not in graph", e)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "cost": self.cost,
            "circuits": [list(c) for c in self.circuits],
            "isolated": self.isolated,
        }
