"""Event graphs, acyclicity checks, and subset-indexed order machinery.

All consistency questions in this package reduce to the acyclicity of
graphs over event ids built from unions of relations.  This module holds
the graph container, Kahn's algorithm with deterministic tie-breaking,
and the constructors for the order-augmented graphs the solver's subset
recursion reasons about.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterable, Iterator

from .errors import PreconditionViolatedError
from .events import History, Relation

if TYPE_CHECKING:
    from .models import DerivedModel

#: Edge dedup uses a dense per-row bitmask up to this vertex count and a
#: plain pair set beyond it.
_DENSE_LIMIT = 4096


class EventGraph:
    """A directed graph over event ids with O(1) duplicate-edge detection."""

    __slots__ = ("n", "adj", "in_degree", "_rows", "_pairs")

    def __init__(self, n: int):
        self.n = n
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.in_degree: list[int] = [0] * n
        if n <= _DENSE_LIMIT:
            self._rows: list[int] | None = [0] * n
            self._pairs: set[tuple[int, int]] | None = None
        else:
            self._rows = None
            self._pairs = set()

    def add_edge(self, u: int, v: int) -> None:
        if self._rows is not None:
            bit = 1 << v
            if self._rows[u] & bit:
                return
            self._rows[u] |= bit
        else:
            if (u, v) in self._pairs:
                return
            self._pairs.add((u, v))
        self.adj[u].append(v)
        self.in_degree[v] += 1

    def add_pairs(self, pairs: Iterable[tuple[int, int]]) -> None:
        for u, v in pairs:
            self.add_edge(u, v)

    def has_edge(self, u: int, v: int) -> bool:
        if self._rows is not None:
            return bool(self._rows[u] >> v & 1)
        return (u, v) in self._pairs

    def edge_count(self) -> int:
        return sum(len(row) for row in self.adj)

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, row in enumerate(self.adj):
            for v in row:
                yield (u, v)

    def successor_mask(self, u: int) -> int:
        if self._rows is not None:
            return self._rows[u]
        mask = 0
        for v in self.adj[u]:
            mask |= 1 << v
        return mask


def kahn_acyclic(g: EventGraph) -> tuple[bool, list[int] | None]:
    """Topologically sort `g` if possible.

    Returns (True, order) when the graph is acyclic and (False, None)
    otherwise.  The zero-in-degree frontier pops the smallest event id
    first, so the returned order is deterministic.
    """
    degree = list(g.in_degree)
    heap = [v for v in range(g.n) if degree[v] == 0]
    heapq.heapify(heap)
    order: list[int] = []
    adj = g.adj
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w in adj[v]:
            degree[w] -= 1
            if degree[w] == 0:
                heapq.heappush(heap, w)
    if len(order) == g.n:
        return True, order
    return False, None


def find_cycle(g: EventGraph) -> list[int] | None:
    """Extract one directed cycle, or None if the graph is acyclic.

    Used for diagnostics only.  The cycle is reported as a vertex list
    [v0, v1, ..., vm] with edges v0 -> v1 -> ... -> vm -> v0.
    """
    degree = list(g.in_degree)
    stack = [v for v in range(g.n) if degree[v] == 0]
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            degree[w] -= 1
            if degree[w] == 0:
                stack.append(w)
    residual = {v for v in range(g.n) if degree[v] > 0}
    if not residual:
        return None
    preds: dict[int, list[int]] = {v: [] for v in residual}
    for u in residual:
        for v in g.adj[u]:
            if v in residual:
                preds[v].append(u)
    # Every residual vertex keeps a residual predecessor, so walking
    # predecessors must revisit a vertex; that revisit closes a cycle.
    start = min(residual)
    path = [start]
    seen = {start: 0}
    cur = start
    while True:
        cur = min(preds[cur])
        if cur in seen:
            cycle = path[seen[cur]:]
            cycle.reverse()
            return cycle
        seen[cur] = len(path)
        path.append(cur)


class WriteIndex:
    """Dense bit positions for the write events of one history.

    Bit i corresponds to `ids[i]`; ids are ascending, so masks order the
    same way fixtures do.
    """

    __slots__ = ("ids", "bit_of", "k", "full_mask")

    def __init__(self, h: History):
        self.ids: tuple[int, ...] = h.writes
        self.bit_of: dict[int, int] = {w: i for i, w in enumerate(self.ids)}
        self.k = len(self.ids)
        self.full_mask = (1 << self.k) - 1

    def mask_of(self, write_ids: Iterable[int]) -> int:
        mask = 0
        for w in write_ids:
            mask |= 1 << self.bit_of[w]
        return mask

    def ids_of(self, mask: int) -> list[int]:
        out = []
        while mask:
            bit = mask & -mask
            mask ^= bit
            out.append(self.ids[bit.bit_length() - 1])
        return out


@dataclass(frozen=True)
class WriteSubset:
    """A subset of a history's writes, encoded as a k-bit mask."""

    index: WriteIndex
    mask: int

    @classmethod
    def of(cls, index: WriteIndex, write_ids: Iterable[int]) -> "WriteSubset":
        return cls(index, index.mask_of(write_ids))

    def members(self) -> list[int]:
        return self.index.ids_of(self.mask)

    def complement(self) -> "WriteSubset":
        return WriteSubset(self.index, self.index.full_mask & ~self.mask)

    def __contains__(self, write_id: int) -> bool:
        bit = self.index.bit_of.get(write_id)
        return bit is not None and bool(self.mask >> bit & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")


def build_r_snapshot(index: WriteIndex, subset_mask: int, v: int) -> Relation:
    """Order edges placing `v` between a subset and its complement.

    Every write outside subset ∪ {v} precedes every write inside it, and
    `v` additionally precedes every subset member.  `v` must not be a
    subset member.
    """
    vbit = index.bit_of[v]
    if subset_mask >> vbit & 1:
        raise PreconditionViolatedError(
            f"write {v} is already a member of the subset"
        )
    enlarged = subset_mask | (1 << vbit)
    inside = index.ids_of(enlarged)
    outside = index.ids_of(index.full_mask & ~enlarged)
    pairs = {(o, i) for o in outside for i in inside}
    pairs |= {(v, w) for w in index.ids_of(subset_mask)}
    return Relation(pairs)


def conflict_edges(
    h: History, order_pairs: Iterable[tuple[int, int]]
) -> set[tuple[int, int]]:
    """Read-to-write edges induced by a write order.

    For each same-variable order pair (w', w), every read sourced by w'
    gains an edge to w: the read observed a value that `w` overwrites, so
    it must come first.
    """
    events = h.events
    out = set()
    for wa, wb in order_pairs:
        if events[wa].var != events[wb].var:
            continue
        for r in h.readers_of(wa):
            out.add((r, wb))
    return out


def build_base_graphs(
    h: History, derived: "DerivedModel"
) -> tuple[EventGraph, EventGraph]:
    """The two order-free graphs whose acyclicity anchors the recursion.

    First the per-location graph (effective same-variable program order
    plus full reads-from), then the model graph (preserved program order
    plus visible reads-from).
    """
    g_loc = EventGraph(h.n)
    g_loc.add_pairs(derived.po_loc_effective.pairs)
    g_loc.add_pairs(h.rf.pairs)
    g_mm = EventGraph(h.n)
    g_mm.add_pairs(derived.po_mm.pairs)
    g_mm.add_pairs(derived.rf_mm.pairs)
    return g_loc, g_mm


def build_coherence_graphs(
    h: History,
    derived: "DerivedModel",
    index: WriteIndex,
    subset_mask: int,
    v: int,
) -> tuple[EventGraph, EventGraph]:
    """Order-augmented graphs testing `v` as minimum of subset ∪ {v}.

    Both base graphs are extended with the snapshot edges of
    :func:`build_r_snapshot` and the conflict edges they induce.  Their
    joint acyclicity is exactly the condition under which the subset can
    sit on top of a valid write order with `v` at its bottom.
    """
    snapshot = build_r_snapshot(index, subset_mask, v)
    cf = conflict_edges(h, snapshot.pairs)
    g_loc, g_mm = build_base_graphs(h, derived)
    for g in (g_loc, g_mm):
        g.add_pairs(snapshot.pairs)
        g.add_pairs(cf)
    return g_loc, g_mm
