"""Seeded random models shared by the acceptance tests."""

import math

import numpy as np

from quantum_cluster import SpinModel, preset
from quantum_cluster.model import random_interaction


def random_bounded_graph(n, max_degree, seed):
    """Random simple graph on ``n`` vertices with degrees capped at ``max_degree``."""
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    target = int(rng.integers(n - 1, n + 3))
    deg = [0] * n
    edges = []
    for k in rng.permutation(len(pairs)):
        i, j = pairs[k]
        if deg[i] < max_degree and deg[j] < max_degree:
            edges.append((i, j))
            deg[i] += 1
            deg[j] += 1
            if len(edges) == target:
                break
    return sorted(edges)


def random_model(n, edges, seed, d=2):
    rng = np.random.default_rng(seed)
    ops = [random_interaction(rng, d) for _ in edges]
    return SpinModel(tuple(str(i) for i in range(n)), tuple(edges), tuple(ops), d=d)


def oracle_suite():
    """51 labelled models: paths, cycles, cubic graphs, and random graphs with max degree <= 3."""
    models = []
    for n in range(2, 9):
        models.append((f"path{n}", preset("random_hermitian", "path", n=n, seed=100 + n)))
    for n in range(3, 9):
        models.append((f"cycle{n}", preset("random_hermitian", "cycle", n=n, seed=200 + n)))
    for n, seeds in ((4, (0, 1, 2)), (6, (0, 1, 2)), (8, (0, 1))):
        for s in seeds:
            models.append((f"cubic{n}s{s}", preset("random_hermitian", "random_regular", n=n, k=3, seed=s)))
    for s in range(30):
        n = 4 + s % 5
        edges = random_bounded_graph(n, 3, seed=1000 + s)
        models.append((f"bounded{n}s{s}", random_model(n, edges, seed=2000 + s)))
    return models


def region_beta(model, theta=0.0):
    """``exp(i theta) / (e^4 Delta)``, the edge of the convergence disc."""
    return complex(math.cos(theta), math.sin(theta)) / (math.exp(4.0) * model.max_degree)
