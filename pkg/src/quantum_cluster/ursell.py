"""Ursell functions of small graphs, in exact rational arithmetic.

    phi(H) = (1 / |V(H)|!) * sum over spanning connected edge subsets E of (-1)^|E|
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable

BRUTEFORCE_MAX_VERTICES = 12
FAST_MAX_VERTICES = 20


@dataclass(frozen=True)
class IncompatibilityGraph:
    """Simple graph on vertices ``0..n-1``; ``adjacency[i]`` is a neighbour bitmask."""

    n: int
    adjacency: tuple

    def __post_init__(self):
        if self.n < 1 or len(self.adjacency) != self.n:
            raise ValueError("graph needs n >= 1 and one adjacency mask per vertex")
        for i, row in enumerate(self.adjacency):
            if row >> i & 1:
                raise ValueError(f"self-loop at vertex {i}")
            for j in range(self.n):
                if (row >> j & 1) != (self.adjacency[j] >> i & 1):
                    raise ValueError(f"adjacency is not symmetric at ({i}, {j})")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple]) -> "IncompatibilityGraph":
        adj = [0] * n
        for i, j in edges:
            if i != j:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
        return cls(n, tuple(adj))

    @classmethod
    def from_masks(cls, masks) -> "IncompatibilityGraph":
        """Graph on items whose bitmasks are compared for overlap."""
        n = len(masks)
        adj = [0] * n
        for i in range(n):
            for j in range(i + 1, n):
                if masks[i] & masks[j]:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
        return cls(n, tuple(adj))

    @property
    def edges(self) -> list:
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if self.adjacency[i] >> j & 1]

    def is_connected(self) -> bool:
        full = (1 << self.n) - 1
        seen = frontier = 1
        while frontier:
            nxt = 0
            for i in _bits(frontier):
                nxt |= self.adjacency[i]
            frontier = nxt & ~seen
            seen |= frontier
        return seen == full


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _spanning_connected(n: int, edges: list, chosen: int) -> bool:
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    components = n
    for k in _bits(chosen):
        a, b = find(edges[k][0]), find(edges[k][1])
        if a != b:
            parent[a] = b
            components -= 1
    return components == 1


def ursell_bruteforce(h: IncompatibilityGraph) -> Fraction:
    """Ursell function by visiting every edge subset."""
    if h.n > BRUTEFORCE_MAX_VERTICES:
        raise ValueError(f"brute force limited to {BRUTEFORCE_MAX_VERTICES} vertices, got {h.n}")
    edges = h.edges
    total = 0
    for chosen in range(1 << len(edges)):
        if _spanning_connected(h.n, edges, chosen):
            total += -1 if bin(chosen).count("1") % 2 else 1
    return Fraction(total, math.factorial(h.n))


def ursell_fast(h: IncompatibilityGraph) -> Fraction:
    """Ursell function by subset recursion in ``O(3^n)`` integer steps.

    With ``a(S) = 1`` when ``S`` is independent and ``0`` otherwise, the
    signed count of spanning connected subgraphs obeys

        c(S) = a(S) - sum_{T < S, min(S) in T} c(T) * a(S \\ T).
    """
    if h.n > FAST_MAX_VERTICES:
        raise ValueError(f"fast Ursell limited to {FAST_MAX_VERTICES} vertices, got {h.n}")
    return _ursell_cached(h.n, h.adjacency)


@lru_cache(maxsize=65536)
def _ursell_cached(n: int, adjacency: tuple) -> Fraction:
    size = 1 << n
    indep = bytearray(size)
    indep[0] = 1
    for s in range(1, size):
        low = s & -s
        v = low.bit_length() - 1
        rest = s ^ low
        indep[s] = indep[rest] and not (adjacency[v] & rest)

    c = [0] * size
    for s in range(1, size):
        low = s & -s
        rest = s ^ low
        val = indep[s]
        # proper subsets T of s that contain the lowest vertex
        sub = (rest - 1) & rest if rest else None
        while sub is not None:
            t = low | sub
            if indep[s ^ t]:
                val -= c[t]
            if sub == 0:
                break
            sub = (sub - 1) & rest
        c[s] = val
    return Fraction(c[size - 1], math.factorial(n))
