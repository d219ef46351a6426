"""Semantic regulation graph, its SCC condensation, and topological orderings."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from ._scc import tarjan
from .network import InteractionNetwork
from .partition import OrderedPartition


def regulates(net: InteractionNetwork, k, l) -> bool:
    """True iff flipping agent ``k`` alone can change the next value of ``l``."""
    k, l = net.index(k), net.index(l)
    if net.is_input(l):
        return False
    nxt = net.next_values(l)
    states = np.arange(net.n_states, dtype=np.int64)
    low = states[(states >> k) & 1 == 0]
    return bool(np.any(nxt[low] != nxt[low | (1 << k)]))


def set_regulates(net: InteractionNetwork, Xi, Xj) -> bool:
    src = net.members(net.mask(Xi))
    dst = net.members(net.mask(Xj))
    return any(regulates(net, a, b) for b in dst for a in src)


@dataclass(frozen=True)
class RegulationGraph:
    net: InteractionNetwork
    edges: tuple[tuple[int, int], ...]

    def successors(self, a: int) -> list[int]:
        return [t for s, t in self.edges if s == a]

    def predecessors(self, a: int) -> list[int]:
        return [s for s, t in self.edges if t == a]

    def regulators(self, a) -> list[str]:
        i = self.net.index(a)
        return [self.net.agents[s].name for s in self.predecessors(i)]

    def named_edges(self) -> list[tuple[str, str]]:
        names = self.net.names
        return [(names[s], names[t]) for s, t in self.edges]


def regulation_graph(net: InteractionNetwork) -> RegulationGraph:
    edges = []
    for k in range(net.n):
        for l in range(net.n):
            if regulates(net, k, l):
                edges.append((k, l))
    return RegulationGraph(net, tuple(edges))


@dataclass(frozen=True)
class CondensationDag:
    """SCCs of a regulation graph as agent masks, ordered by smallest member."""

    net: InteractionNetwork
    components: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    def component_of(self, a) -> int:
        i = self.net.index(a)
        return next(c for c, m in enumerate(self.components) if m >> i & 1)


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def scc_condensation(g: RegulationGraph) -> CondensationDag:
    n = g.net.n
    succ = [[] for _ in range(n)]
    for s, t in g.edges:
        succ[s].append(t)
    sccs = tarjan(range(n), succ.__getitem__)
    masks = sorted((sum(1 << a for a in scc) for scc in sccs), key=_lowest)
    where = {}
    for c, m in enumerate(masks):
        for a in range(n):
            if m >> a & 1:
                where[a] = c
    dag = sorted({(where[s], where[t]) for s, t in g.edges if where[s] != where[t]})
    return CondensationDag(g.net, tuple(masks), tuple(dag))


def topological_ordering(d: CondensationDag) -> OrderedPartition:
    """Kahn's algorithm; among ready components the one holding the smallest
    agent index goes first."""
    indeg = [0] * len(d.components)
    succ = [[] for _ in d.components]
    for s, t in d.edges:
        indeg[t] += 1
        succ[s].append(t)
    # component ids already follow the smallest-member order
    ready = [c for c, k in enumerate(indeg) if k == 0]
    heapq.heapify(ready)
    out = []
    while ready:
        c = heapq.heappop(ready)
        out.append(d.components[c])
        for t in succ[c]:
            indeg[t] -= 1
            if indeg[t] == 0:
                heapq.heappush(ready, t)
    return OrderedPartition(out)


def all_topological_orderings(d: CondensationDag, limit: int | None = None
                              ) -> Iterator[OrderedPartition]:
    """Every topological ordering, in lexicographic order of component ids.

    Stops after ``limit`` orderings when given.
    """
    m = len(d.components)
    indeg = [0] * m
    succ = [[] for _ in range(m)]
    for s, t in d.edges:
        indeg[t] += 1
        succ[s].append(t)
    chosen: list[int] = []
    placed = [False] * m
    produced = 0

    def rec():
        nonlocal produced
        if limit is not None and produced >= limit:
            return
        if len(chosen) == m:
            produced += 1
            yield OrderedPartition([d.components[c] for c in chosen])
            return
        for c in range(m):
            if placed[c] or indeg[c]:
                continue
            placed[c] = True
            chosen.append(c)
            for t in succ[c]:
                indeg[t] -= 1
            yield from rec()
            for t in succ[c]:
                indeg[t] += 1
            chosen.pop()
            placed[c] = False
            if limit is not None and produced >= limit:
                return

    yield from rec()


def count_topological_orderings(d: CondensationDag, cap: int) -> int:
    """Number of orderings, counting stops at ``cap + 1``."""
    return sum(1 for _ in all_topological_orderings(d, limit=cap + 1))
