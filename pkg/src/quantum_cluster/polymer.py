"""Polymers (connected edge multisets), their enumeration, and their weights.

A polymer is a multiset of edges whose support is connected.  Its weight is

    w = (-beta)^n / (n! prod m_e!) * tr[ sum over orderings of the n edges ]

with ``n`` the polymer size and traces normalized over the polymer's own
vertices.  :func:`polymer_weight` evaluates this from powers of signed sums
of the edge operators; :func:`polymer_weight_oracle` sums all orderings
explicitly.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import ResourceError
from .model import SpinModel
from .operators import hermitian_eigenvalues, normalized_trace, tensor_embed

# dense dimension cap for operators built during weight evaluation
MAX_WEIGHT_DIM = 1024
ORACLE_MAX_SIZE = 7


@dataclass(frozen=True)
class Polymer:
    """Edge multiset with connected support.

    ``support`` holds sorted edge indices and ``counts`` the matching
    multiplicities.  ``vertices`` is the sorted vertex set of the support
    and ``vertex_mask`` the same set as a bitmask.
    """

    support: tuple
    counts: tuple
    vertices: tuple
    vertex_mask: int

    @classmethod
    def from_multiplicity(cls, model: SpinModel, multiplicity: dict) -> "Polymer":
        if not multiplicity:
            raise ValueError("a polymer needs at least one edge")
        support = tuple(sorted(multiplicity))
        counts = tuple(int(multiplicity[e]) for e in support)
        if any(c < 1 for c in counts):
            raise ValueError(f"multiplicities must be positive, got {counts}")
        if not is_connected_edge_set(model, support):
            raise ValueError(f"edge set {support} is not connected")
        verts = sorted({x for e in support for x in model.edges[e]})
        return cls(support, counts, tuple(verts), _mask(verts))

    @property
    def size(self) -> int:
        return sum(self.counts)

    @property
    def support_size(self) -> int:
        return len(self.support)

    @property
    def multiplicity(self) -> dict:
        return dict(zip(self.support, self.counts))

    @property
    def edge_sequence(self) -> tuple:
        """Edges in the fixed enumeration order: sorted, repeats adjacent."""
        return tuple(e for e, c in zip(self.support, self.counts) for _ in range(c))


def _mask(items) -> int:
    m = 0
    for i in items:
        m |= 1 << i
    return m


def edge_adjacency(model: SpinModel) -> list[frozenset]:
    """For each edge, the set of other edges sharing a vertex with it."""
    incident = [[] for _ in model.vertices]
    for i, (u, v) in enumerate(model.edges):
        incident[u].append(i)
        incident[v].append(i)
    adj = []
    for i, (u, v) in enumerate(model.edges):
        adj.append(frozenset(incident[u] + incident[v]) - {i})
    return adj


def is_connected_edge_set(model: SpinModel, edges: Sequence[int]) -> bool:
    edges = list(edges)
    if not edges:
        return False
    adj = edge_adjacency(model)
    pool = set(edges)
    stack, seen = [edges[0]], {edges[0]}
    while stack:
        e = stack.pop()
        for f in adj[e] & pool:
            if f not in seen:
                seen.add(f)
                stack.append(f)
    return seen == pool


def _connected_sets(adj: Sequence[frozenset], allowed: frozenset, max_size: int) -> Iterator[tuple]:
    # Edge version of the ESU subgraph enumerator: each connected set is grown
    # from its smallest edge, and only exclusive neighbours are ever added to
    # the extension, so every set is produced exactly once.
    def extend(sub, ext, root, closed):
        yield sub
        if len(sub) == max_size:
            return
        ext = sorted(ext)
        while ext:
            w = ext.pop(0)
            fresh = {u for u in adj[w] if u > root and u in allowed and u not in closed}
            yield from extend(sub + (w,), set(ext) | fresh, root, closed | adj[w] | {w})

    for root in sorted(allowed):
        ext = {f for f in adj[root] if f > root and f in allowed}
        yield from extend((root,), ext, root, adj[root] | {root})


def enumerate_connected_edge_sets(model: SpinModel, max_edges: int, within=None) -> list[tuple]:
    """All connected edge sets with 1..max_edges edges, canonically ordered.

    Sets are sorted tuples of edge indices, ordered by size and then
    lexicographically.  ``within`` restricts the search to a subset of edges.
    """
    if max_edges < 1:
        raise ValueError("max_edges must be >= 1")
    allowed = frozenset(range(model.num_edges) if within is None else within)
    adj = edge_adjacency(model)
    found = [tuple(sorted(s)) for s in _connected_sets(adj, allowed, max_edges)]
    found.sort(key=lambda s: (len(s), s))
    return found


def compositions(k: int, parts: int) -> Iterator[tuple]:
    """Ordered ways to write ``k`` as a sum of ``parts`` positive integers."""
    for cuts in itertools.combinations(range(1, k), parts - 1):
        bounds = (0,) + cuts + (k,)
        yield tuple(b - a for a, b in zip(bounds, bounds[1:]))


def enumerate_polymers(model: SpinModel, max_size: int) -> list[Polymer]:
    """Every polymer of size at most ``max_size``, sorted by (size, support, counts).

    A connected edge set with ``n`` edges carries ``C(k-1, n-1)`` polymers of
    size ``k``, one per composition of ``k`` into ``n`` parts.
    """
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    polymers = []
    for support in enumerate_connected_edge_sets(model, max_size):
        verts = sorted({x for e in support for x in model.edges[e]})
        vmask = _mask(verts)
        for k in range(len(support), max_size + 1):
            for counts in compositions(k, len(support)):
                polymers.append(Polymer(support, counts, tuple(verts), vmask))
    polymers.sort(key=lambda p: (p.size, p.support, p.counts))
    return polymers


def incompatible(a: Polymer, b: Polymer) -> bool:
    """Polymers clash when their supports share a vertex (always true for a == b)."""
    return bool(a.vertex_mask & b.vertex_mask)


# ------------------------------------------------------------------- weights


class TraceCache:
    """Eigenvalues of integer combinations ``sum_e k_e * Phi(e)``.

    Keys are sorted ``((edge, k), ...)`` tuples with ``k != 0``.  Each operator
    is built on the vertices its edges touch; normalized traces do not depend
    on any larger ambient space, so the cache is shared across polymers.
    """

    def __init__(self, model: SpinModel, max_dim: int = MAX_WEIGHT_DIM):
        self.model = model
        self.max_dim = max_dim
        self._eig: dict = {}
        self._embedded: dict = {}

    def operator(self, key) -> tuple:
        model = self.model
        verts = sorted({x for e, _ in key for x in model.edges[e]})
        space = model.space(verts)
        if space.total_dim > self.max_dim:
            raise ResourceError(
                f"operator on edges {[e for e, _ in key]} needs dimension {space.total_dim} > cap {self.max_dim}"
            )
        m = np.zeros((space.total_dim, space.total_dim), dtype=np.complex128)
        for e, k in key:
            op = self._embedded.get((e, space.sites))
            if op is None:
                op = self._embedded[(e, space.sites)] = tensor_embed(model.interactions[e], model.edges[e], space)
            m += k * op
        return m, space

    def eigenvalues(self, key) -> np.ndarray:
        lam = self._eig.get(key)
        if lam is None:
            m, _ = self.operator(key)
            lam = hermitian_eigenvalues(m)
            self._eig[key] = lam
        return lam

    def power_trace(self, key, n: int) -> float:
        return float(np.mean(self.eigenvalues(key) ** n))


def _check_dim(polymer: Polymer, model: SpinModel, max_dim: int):
    dim = model.d ** len(polymer.vertices)
    if dim > max_dim:
        raise ResourceError(
            f"polymer on edges {polymer.support} spans {len(polymer.vertices)} sites "
            f"(dimension {dim} > cap {max_dim})"
        )


def weight_coefficient(polymer: Polymer, model: SpinModel, cache: TraceCache | None = None) -> float:
    """The weight divided by ``beta ** size``.

    The ordering sum is recovered by polarization over signs,

        sum_sigma prod Phi = 2^-n sum_{delta in {+1,-1}^n} prod(delta) (sum_i delta_i Phi_i)^n,

    which cancels far less than the 0/1 subset form.  Sign vectors that flip
    ``j_e`` of the ``m_e`` copies of edge ``e`` give the operator
    ``sum_e (m_e - 2 j_e) Phi(e)`` and are summed together with weight
    ``prod C(m_e, j_e)``.  A vector and its negation give the same term, so
    only one of each pair is diagonalized.
    """
    cache = cache or TraceCache(model)
    _check_dim(polymer, model, cache.max_dim)
    n = polymer.size
    total = 0.0
    for js in itertools.product(*(range(c + 1) for c in polymer.counts)):
        key = tuple((e, c - 2 * j) for e, c, j in zip(polymer.support, polymer.counts, js) if c != 2 * j)
        if not key:
            continue
        mult = 1
        for c, j in zip(polymer.counts, js):
            mult *= math.comb(c, j)
        sign = -1 if sum(js) % 2 else 1
        if key[0][1] < 0:
            key = tuple((e, -k) for e, k in key)
            sign = sign if n % 2 == 0 else -sign
        total += sign * mult * cache.power_trace(key, n)
    denom = math.factorial(n) * 2 ** n
    for c in polymer.counts:
        denom *= math.factorial(c)
    return (total if n % 2 == 0 else -total) / denom


def polymer_weight(polymer: Polymer, model: SpinModel, beta, cache: TraceCache | None = None) -> complex:
    """Polymer weight at inverse temperature ``beta`` by inclusion-exclusion."""
    return complex(beta) ** polymer.size * weight_coefficient(polymer, model, cache)


def ryser_operator_sum(ops: Sequence[np.ndarray]) -> np.ndarray:
    """``(-1)^n sum_{A subset [n]} (-1)^|A| (sum_{i in A} ops[i])^n``.

    Equals the sum over all orderings of the product of ``ops``; subsets are
    visited literally, without grouping repeated operators.
    """
    n = len(ops)
    dim = ops[0].shape[0]
    total = np.zeros((dim, dim), dtype=np.complex128)
    for r in range(1, n + 1):
        for subset in itertools.combinations(range(n), r):
            s = sum(ops[i] for i in subset)
            total += (-1) ** r * np.linalg.matrix_power(s, n)
    return (-1) ** n * total


def polarization_operator_sum(ops: Sequence[np.ndarray]) -> np.ndarray:
    """``2^-n sum_{delta in {+1,-1}^n} prod(delta) (sum_i delta_i ops[i])^n``, visited literally."""
    n = len(ops)
    total = np.zeros_like(ops[0], dtype=np.complex128)
    for signs in itertools.product((1, -1), repeat=n):
        s = sum(d * op for d, op in zip(signs, ops))
        total += math.prod(signs) * np.linalg.matrix_power(s, n)
    return total / 2 ** n


def polymer_weight_oracle(polymer: Polymer, model: SpinModel, beta) -> complex:
    """Polymer weight by explicit summation over all ``n!`` orderings."""
    n = polymer.size
    if n > ORACLE_MAX_SIZE:
        raise ValueError(f"oracle limited to size <= {ORACLE_MAX_SIZE}, got {n}")
    _check_dim(polymer, model, MAX_WEIGHT_DIM)
    space = model.space(polymer.vertices)
    embedded = {e: tensor_embed(model.interactions[e], model.edges[e], space) for e in polymer.support}
    seq = [embedded[e] for e in polymer.edge_sequence]
    acc = np.zeros_like(seq[0])
    for perm in itertools.permutations(range(n)):
        prod = seq[perm[0]]
        for i in perm[1:]:
            prod = prod @ seq[i]
        acc += prod
    denom = math.factorial(n)
    for c in polymer.counts:
        denom *= math.factorial(c)
    return (-complex(beta)) ** n / denom * normalized_trace(acc)


def support_weight_coefficients(polymers: Sequence[Polymer], model: SpinModel, order: int,
                                cache: TraceCache | None = None) -> dict:
    """Sum polymer weights by support: ``{support: coeffs}``.

    ``coeffs[k]`` is the sum of weight coefficients over polymers of size
    ``k`` on that support, for ``k < order``.
    """
    cache = cache or TraceCache(model)
    out: dict = {}
    for p in polymers:
        if p.size >= order:
            continue
        coeffs = out.setdefault(p.support, np.zeros(order))
        coeffs[p.size] += weight_coefficient(p, model, cache)
    return out


def count_sets_containing(model: SpinModel, sets: Sequence[tuple]) -> dict:
    """``{(vertex, n): number of sets with n edges touching vertex}``."""
    counts: Counter = Counter()
    for s in sets:
        verts = {x for e in s for x in model.edges[e]}
        for x in verts:
            counts[(x, len(s))] += 1
    return dict(counts)
