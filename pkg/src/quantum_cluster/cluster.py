"""Cluster enumeration, the truncated cluster expansion, and the estimator.

Every polymer weight is ``beta ** size`` times a real coefficient, so the
truncated expansion ``T_m`` is a polynomial of degree ``m - 1`` in ``beta``.
All routes below compute its coefficient vector first and evaluate it at
``beta`` last.

Routes (all return the same polynomial):

``"polymers"``
    Literal sum over canonical polymer clusters of
    ``ordering_multiplicity * phi(H) * prod(weights)``.
``"supports"``
    The same sum with polymers sharing a support merged.  Incompatibility
    only depends on supports, so a cluster of supports stands for every
    polymer cluster with those supports and carries the product of the
    summed weight polynomials.
``"linked"``
    Clusters grouped by the union of their supports.  For a connected edge
    set ``S`` the clusters living inside ``S`` sum to the logarithm of the
    normalized partition function of the subsystem ``S``; Moebius inversion
    over connected subsets isolates those whose union is exactly ``S``.
``"auto"``
    ``"supports"`` when its cluster count stays below a budget, otherwise
    ``"linked"``.
"""

from __future__ import annotations

import bisect
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import RegionError, ResourceError
from .model import SpinModel, validate_beta
from .operators import hermitian_eigenvalues, tensor_embed
from .polymer import (
    MAX_WEIGHT_DIM,
    Polymer,
    TraceCache,
    enumerate_connected_edge_sets,
    enumerate_polymers,
    support_weight_coefficients,
    weight_coefficient,
)
from .ursell import IncompatibilityGraph, _ursell_cached

METHODS = ("auto", "polymers", "supports", "linked")
AUTO_CLUSTER_BUDGET = 5000


class _BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class Cluster:
    """Canonical multiset of polymer occurrences, sorted by polymer index."""

    indices: tuple
    polymers: tuple

    @property
    def counts(self) -> dict:
        out: dict = {}
        for i in self.indices:
            out[i] = out.get(i, 0) + 1
        return out

    @property
    def total_size(self) -> int:
        return sum(p.size for p in self.polymers)

    @property
    def graph(self) -> IncompatibilityGraph:
        return IncompatibilityGraph.from_masks([p.vertex_mask for p in self.polymers])


def ordering_multiplicity(cluster) -> int:
    """Number of ordered tuples represented by a canonical multiset."""
    indices = cluster.indices if hasattr(cluster, "indices") else tuple(cluster)
    out = math.factorial(len(indices))
    for k in _run_lengths(indices):
        out //= math.factorial(k)
    return out


def _run_lengths(sorted_items) -> list:
    runs, prev, n = [], object(), 0
    for x in sorted_items:
        if x == prev:
            n += 1
        else:
            if n:
                runs.append(n)
            prev, n = x, 1
    if n:
        runs.append(n)
    return runs


def connected_multisets(sizes: Sequence[int], masks: Sequence[int], max_total: int,
                        budget: int | None = None) -> list:
    """Canonical multisets of item indices with a connected overlap graph.

    Items must be ordered by nondecreasing size.  A multiset is grown from
    its smallest index by adding items that overlap the union of the current
    members; partial multisets are deduplicated level by level, so every
    multiset with total size ``< max_total`` appears exactly once.
    """
    found = []
    level = {(i,) for i in range(len(sizes)) if sizes[i] < max_total}
    while level:
        found.extend(level)
        if budget is not None and len(found) > budget:
            raise _BudgetExceeded
        nxt = set()
        for ms in level:
            total = sum(sizes[i] for i in ms)
            union = 0
            for i in ms:
                union |= masks[i]
            stop = bisect.bisect_left(sizes, max_total - total)
            for j in range(ms[0], stop):
                if masks[j] & union:
                    nxt.add(tuple(sorted(ms + (j,))))
        level = nxt
    found.sort(key=lambda ms: (sum(sizes[i] for i in ms), ms))
    return found


def enumerate_clusters(polymers: Sequence[Polymer], max_total: int) -> list[Cluster]:
    """All polymer clusters with total size ``< max_total``.

    ``polymers`` must be sorted by size, as returned by
    :func:`~quantum_cluster.polymer.enumerate_polymers`.
    """
    sizes = [p.size for p in polymers]
    if sizes != sorted(sizes):
        raise ValueError("polymers must be sorted by size")
    masks = [p.vertex_mask for p in polymers]
    return [
        Cluster(ms, tuple(polymers[i] for i in ms))
        for ms in connected_multisets(sizes, masks, max_total)
    ]


def _cluster_factor(indices: tuple, masks: Sequence[int]) -> float:
    # ordering multiplicity times the Ursell function of the overlap graph
    occ = [masks[i] for i in indices]
    adj = tuple(
        sum(1 << j for j in range(len(occ)) if j != i and occ[i] & occ[j]) for i in range(len(occ))
    )
    return float(ordering_multiplicity(indices) * _ursell_cached(len(occ), adj))


# ------------------------------------------------------------------- routes


def _map(fn, items, threads: int) -> list:
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _coefficients_polymers(model, order, threads, diag):
    polymers = enumerate_polymers(model, order - 1)
    cache = TraceCache(model)
    coeff = _map(lambda p: weight_coefficient(p, model, cache), polymers, threads)
    masks = [p.vertex_mask for p in polymers]
    sizes = [p.size for p in polymers]
    clusters = connected_multisets(sizes, masks, order)
    out = np.zeros(order)
    for ms in clusters:
        prod = 1.0
        for i in ms:
            prod *= coeff[i]
        if prod == 0.0:
            continue
        out[sum(sizes[i] for i in ms)] += _cluster_factor(ms, masks) * prod
    diag.update(num_polymers=len(polymers), num_clusters=len(clusters))
    return out


def _coefficients_supports(model, order, threads, diag, budget=None):
    supports = enumerate_connected_edge_sets(model, order - 1)
    sizes = [len(s) for s in supports]
    masks = []
    for s in supports:
        m = 0
        for e in s:
            u, v = model.edges[e]
            m |= (1 << u) | (1 << v)
        masks.append(m)
    clusters = connected_multisets(sizes, masks, order, budget=budget)

    polymers = enumerate_polymers(model, order - 1)
    by_support: dict = {}
    for p in polymers:
        by_support.setdefault(p.support, []).append(p)
    cache = TraceCache(model)
    weights = _map(
        lambda s: support_weight_coefficients(by_support[s], model, order, cache)[s],
        supports, threads,
    )
    out = np.zeros(order)
    for ms in clusters:
        poly = weights[ms[0]]
        for i in ms[1:]:
            poly = np.convolve(poly, weights[i])[:order]
        out += _cluster_factor(ms, masks) * poly
    diag.update(num_polymers=len(polymers), num_supports=len(supports), num_clusters=len(clusters))
    return out


def log_series(z: np.ndarray) -> np.ndarray:
    """Power-series logarithm of ``z`` with ``z[0] == 1``, same length."""
    n = len(z)
    out = np.zeros(n)
    for k in range(1, n):
        acc = z[k] * k
        for j in range(1, k):
            acc -= j * out[j] * z[k - j]
        out[k] = acc / k
    return out


def subsystem_log_series(model: SpinModel, edges: Sequence[int], order: int,
                         embedded: dict | None = None) -> np.ndarray:
    """Taylor coefficients (degree < order) of ``log tr_norm exp(-beta H_S)``.

    ``embedded`` optionally caches edge operators keyed by ``(edge, vertices)``.
    """
    verts = tuple(sorted({x for e in edges for x in model.edges[e]}))
    space = model.space(verts)
    if space.total_dim > MAX_WEIGHT_DIM:
        raise ResourceError(f"edge set {tuple(edges)} spans dimension {space.total_dim} > cap {MAX_WEIGHT_DIM}")
    if embedded is None:
        embedded = {}
    h = np.zeros((space.total_dim, space.total_dim), dtype=np.complex128)
    for e in edges:
        op = embedded.get((e, verts))
        if op is None:
            op = embedded[(e, verts)] = tensor_embed(model.interactions[e], model.edges[e], space)
        h += op
    lam = hermitian_eigenvalues(h)
    z = np.empty(order)
    power = np.ones_like(lam)
    for k in range(order):
        z[k] = (-1) ** k * float(np.mean(power)) / math.factorial(k)
        power = power * lam
    return log_series(z)


def _coefficients_linked(model, order, threads, diag):
    supports = enumerate_connected_edge_sets(model, order - 1)
    embedded: dict = {}
    logs = _map(lambda s: subsystem_log_series(model, s, order, embedded), supports, threads)
    connected_part: dict = {}
    out = np.zeros(order)
    for s, log_s in zip(supports, logs):
        c = log_s.copy()
        if len(s) > 1:
            for t in enumerate_connected_edge_sets(model, len(s) - 1, within=s):
                c -= connected_part[t]
        connected_part[s] = c
        out += c
    diag.update(num_supports=len(supports))
    return out


def expansion_coefficients(model: SpinModel, order: int, method: str = "auto",
                           threads: int = 1) -> tuple[np.ndarray, dict]:
    """Coefficients ``a[0..order-1]`` with ``T_order(beta) = sum a[k] beta^k``."""
    if order < 1:
        raise ValueError("truncation order must be >= 1")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    diag: dict = {}
    if order == 1 or model.num_edges == 0:
        diag["method"] = method if method != "auto" else "supports"
        return np.zeros(order), diag
    if method == "auto":
        try:
            coeffs = _coefficients_supports(model, order, threads, diag, budget=AUTO_CLUSTER_BUDGET)
            method = "supports"
        except _BudgetExceeded:
            diag.clear()
            coeffs = _coefficients_linked(model, order, threads, diag)
            method = "linked"
    elif method == "polymers":
        coeffs = _coefficients_polymers(model, order, threads, diag)
    elif method == "supports":
        coeffs = _coefficients_supports(model, order, threads, diag)
    else:
        coeffs = _coefficients_linked(model, order, threads, diag)
    diag["method"] = method
    return coeffs, diag


def evaluate_polynomial(coeffs: Sequence[float], beta) -> complex:
    beta = complex(beta)
    acc = 0j
    for a in reversed(list(coeffs)):
        acc = acc * beta + a
    return acc


# ------------------------------------------------------------------ results


@dataclass
class ExpansionResult:
    """Truncated expansion value with its a-priori error bound.

    ``log_z = num_vertices * log(d) + t_m`` estimates the log of the
    unnormalized partition function.  ``rigorous`` is false when ``beta``
    lies outside the convergence disc or the order was set by hand.
    """

    beta: complex
    t_m: complex
    order: int
    apriori_error: float
    log_z: complex
    num_vertices: int
    d: int
    coefficients: np.ndarray
    rigorous: bool = True
    diagnostics: dict = field(default_factory=dict)

    @property
    def z_estimate(self) -> complex:
        try:
            return complex(np.exp(self.log_z))
        except OverflowError:
            return complex(math.inf)


def truncated_expansion(model: SpinModel, beta, m: int, method: str = "auto",
                        threads: int = 1) -> ExpansionResult:
    """Sum of all clusters of total size ``< m`` at inverse temperature ``beta``."""
    start = time.perf_counter()
    coeffs, diag = expansion_coefficients(model, m, method=method, threads=threads)
    t_m = evaluate_polynomial(coeffs, beta)
    diag["seconds"] = time.perf_counter() - start
    n = model.num_vertices
    return ExpansionResult(
        beta=complex(beta),
        t_m=t_m,
        order=m,
        apriori_error=n * math.exp(-m),
        log_z=n * math.log(model.d) + t_m,
        num_vertices=n,
        d=model.d,
        coefficients=coeffs,
        diagnostics=diag,
    )


def choose_truncation_order(num_vertices: int, epsilon: float) -> int:
    """Smallest order whose tail bound ``|V| e^-m`` keeps the relative error below ``epsilon``.

    The additive log-error budget is ``log(1 + epsilon)``, further capped at
    ``epsilon / 2`` when ``epsilon >= 1``.
    """
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if num_vertices < 1:
        raise ValueError("need at least one vertex")
    budget = math.log1p(epsilon)
    if epsilon >= 1:
        budget = min(budget, epsilon / 2)
    return max(1, math.ceil(math.log(num_vertices / budget)))


def estimate(model: SpinModel, beta, epsilon: float, override_region: bool = False,
             order: int | None = None, method: str = "auto", threads: int = 1) -> ExpansionResult:
    """Approximate ``log Z`` to multiplicative accuracy ``epsilon``.

    Raises :class:`RegionError` when ``|beta| > 1 / (e^4 Delta)`` unless
    ``override_region`` is set; the result is then marked non-rigorous.
    """
    spec = validate_beta(model, beta)
    if not spec.in_region and not override_region:
        raise RegionError(
            f"|beta| = {abs(spec.value):.6g} exceeds the convergence radius "
            f"1/(e^4 Delta) = {spec.radius_bound:.6g} for Delta = {model.max_degree}; "
            "override the region check to proceed without the error guarantee"
        )
    m = order if order is not None else choose_truncation_order(model.num_vertices, epsilon)
    result = truncated_expansion(model, spec.value, m, method=method, threads=threads)
    result.rigorous = spec.in_region and order is None
    result.diagnostics["epsilon"] = epsilon
    result.diagnostics["radius_bound"] = spec.radius_bound
    return result
