"""Spin-model data model, JSON interchange, and reproducible presets."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ModelError
from .operators import (
    HERMITIAN_TOL,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    SiteSpace,
    as_operator,
    hermiticity_defect,
    operator_norm,
)

NORM_TOL = 1e-9
E4 = math.exp(4.0)
# slack on the disc boundary so that e^{i theta} / (e^4 Delta) is not rejected by rounding
REGION_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpinModel:
    """Pairwise quantum spin model on a simple graph.

    ``edges[i] = (u, v)`` holds dense vertex indices and ``interactions[i]``
    acts on ``H_u (x) H_v`` in that order.  ``scale`` is the factor the
    interactions were divided by on ingestion; a user inverse temperature
    ``b`` corresponds to ``scale * b`` for this model.
    """

    vertices: tuple
    edges: tuple
    interactions: tuple
    d: int = 2
    scale: float = 1.0
    degrees: tuple = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        ops = tuple(as_operator(op) for op in self.interactions)
        for op in ops:
            op.setflags(write=False)
        object.__setattr__(self, "interactions", ops)
        self._validate()
        deg = [0] * len(self.vertices)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        object.__setattr__(self, "degrees", tuple(deg))

    def _validate(self):
        n = len(self.vertices)
        if self.d < 2:
            raise ModelError(f"local dimension must be >= 2, got {self.d}")
        if len(set(self.vertices)) != n:
            raise ModelError("duplicate vertex identifiers")
        if len(self.interactions) != len(self.edges):
            raise ModelError("every edge needs exactly one interaction")
        seen = set()
        for i, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise ModelError(f"edge {i} references a vertex outside 0..{n - 1}")
            if u == v:
                raise ModelError(f"edge {i} is a self-loop on {self.vertices[u]!r}")
            key = frozenset((u, v))
            if key in seen:
                raise ModelError(f"edge {i} ({self.vertices[u]}, {self.vertices[v]}) is duplicated")
            seen.add(key)
        for i, op in enumerate(self.interactions):
            where = self.edge_label(i)
            if op.shape != (self.d ** 2, self.d ** 2):
                raise ModelError(f"interaction on {where} has shape {op.shape}, expected dim {self.d ** 2}")
            defect = hermiticity_defect(op)
            if defect > HERMITIAN_TOL:
                raise ModelError(f"interaction on {where} is not Hermitian (defect {defect:.3e})")
            norm = operator_norm(op)
            if norm > 1.0 + NORM_TOL:
                raise ModelError(f"interaction on {where} has operator norm {norm:.6g} > 1")

    def edge_label(self, i: int) -> str:
        u, v = self.edges[i]
        return f"edge {i} ({self.vertices[u]}, {self.vertices[v]})"

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def space(self, vertex_indices=None) -> SiteSpace:
        if vertex_indices is None:
            vertex_indices = range(self.num_vertices)
        return SiteSpace(tuple(vertex_indices), self.d)


@dataclass(frozen=True)
class BetaSpec:
    value: complex
    radius_bound: float
    in_region: bool


def convergence_radius(max_degree: int) -> float:
    """Radius ``1 / (e^4 * Delta)`` of the guaranteed convergence disc."""
    if max_degree <= 0:
        return math.inf
    return 1.0 / (E4 * max_degree)


def validate_beta(model: SpinModel, beta) -> BetaSpec:
    """Check ``|beta|`` against the convergence disc of ``model``.

    Edgeless models have an infinite radius: their normalized partition
    function is identically one.
    """
    beta = complex(beta)
    radius = convergence_radius(model.max_degree)
    return BetaSpec(beta, radius, abs(beta) <= radius * (1.0 + REGION_RTOL))


# ---------------------------------------------------------------- JSON format


def _matrix_to_json(op: np.ndarray) -> dict:
    return {
        "dim": int(op.shape[0]),
        "re": [[float(x) for x in row] for row in op.real],
        "im": [[float(x) for x in row] for row in op.imag],
    }


def model_to_dict(model: SpinModel) -> dict:
    return {
        "d": model.d,
        "vertices": list(model.vertices),
        "edges": [
            {"u": model.vertices[u], "v": model.vertices[v], "phi": _matrix_to_json(op)}
            for (u, v), op in zip(model.edges, model.interactions)
        ],
    }


def emit_model(model: SpinModel) -> str:
    """Serialize ``model`` in the interchange JSON format."""
    return json.dumps(model_to_dict(model), indent=1)


def _require(cond: bool, msg: str):
    if not cond:
        raise ModelError(msg)


def model_from_dict(doc: dict, rescale: bool | None = None) -> SpinModel:
    """Build a validated model from a parsed interchange document.

    With ``rescale`` (or the document's ``"rescale": true``) every interaction
    is divided by the largest operator norm when that exceeds one; the factor
    is kept in :attr:`SpinModel.scale`.
    """
    _require(isinstance(doc, dict), "model document must be a JSON object")
    for key in ("d", "vertices", "edges"):
        _require(key in doc, f"missing required field {key!r}")
    d = doc["d"]
    _require(isinstance(d, int) and not isinstance(d, bool) and d >= 2, f"'d' must be an integer >= 2, got {d!r}")
    names = doc["vertices"]
    _require(isinstance(names, list) and all(isinstance(v, str) for v in names), "'vertices' must be a list of strings")
    index = {}
    for i, name in enumerate(names):
        _require(name not in index, f"vertex {name!r} is listed twice")
        index[name] = i
    if rescale is None:
        rescale = doc.get("rescale", False)
        _require(isinstance(rescale, bool), "'rescale' must be a boolean")
    _require(isinstance(doc["edges"], list), "'edges' must be a list")

    edges, ops = [], []
    for k, e in enumerate(doc["edges"]):
        _require(isinstance(e, dict), f"edge {k} must be an object")
        for key in ("u", "v", "phi"):
            _require(key in e, f"edge {k} is missing field {key!r}")
        u, v = e["u"], e["v"]
        for name in (u, v):
            _require(name in index, f"edge {k} references unknown vertex {name!r}")
        phi = e["phi"]
        _require(isinstance(phi, dict) and {"dim", "re", "im"} <= set(phi), f"edge {k} ({u}, {v}): 'phi' needs dim, re, im")
        dim = phi["dim"]
        _require(dim == d * d, f"edge {k} ({u}, {v}): phi dim {dim} != d^2 = {d * d}")
        try:
            re = np.array(phi["re"], dtype=float)
            im = np.array(phi["im"], dtype=float)
        except (TypeError, ValueError) as exc:
            raise ModelError(f"edge {k} ({u}, {v}): malformed matrix entries: {exc}") from None
        _require(re.shape == (dim, dim) and im.shape == (dim, dim), f"edge {k} ({u}, {v}): matrix must be {dim}x{dim}")
        op = np.empty((dim, dim), dtype=np.complex128)
        op.real, op.imag = re, im
        defect = hermiticity_defect(op)
        _require(defect <= HERMITIAN_TOL, f"edge {k} ({u}, {v}): interaction is not Hermitian (defect {defect:.3e})")
        edges.append((index[u], index[v]))
        ops.append(op)

    scale = 1.0
    norms = [operator_norm(op) for op in ops]
    worst = max(norms, default=0.0)
    if worst > 1.0 + NORM_TOL:
        if not rescale:
            k = norms.index(worst)
            u, v = doc["edges"][k]["u"], doc["edges"][k]["v"]
            raise ModelError(f"edge {k} ({u}, {v}): operator norm {worst:.6g} > 1; set rescale to divide it out")
        scale = worst
        ops = [op / scale for op in ops]
    return SpinModel(tuple(names), tuple(edges), tuple(ops), d=d, scale=scale)


def load_model(document, rescale: bool | None = None) -> SpinModel:
    """Parse a JSON model document (string, bytes, or already-parsed dict)."""
    if isinstance(document, (str, bytes, bytearray)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ModelError(f"model document is not valid JSON: {exc}") from None
    return model_from_dict(document, rescale=rescale)


# -------------------------------------------------------------------- presets

PRESETS = ("tfim", "xxz", "random_hermitian")
GRAPHS = ("path", "cycle", "grid", "random_regular")


def make_graph(kind: str, n: int = 2, rows: int | None = None, cols: int | None = None,
               k: int = 3, seed: int = 0) -> tuple[int, list[tuple[int, int]]]:
    """Vertex count and sorted edge list for a named graph family."""
    if kind == "path":
        if n < 1:
            raise ModelError("path needs n >= 1")
        return n, [(i, i + 1) for i in range(n - 1)]
    if kind == "cycle":
        if n < 3:
            raise ModelError("cycle needs n >= 3")
        return n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    if kind == "grid":
        rows = rows if rows is not None else n
        cols = cols if cols is not None else n
        if rows < 1 or cols < 1:
            raise ModelError("grid needs positive rows and cols")
        edges = []
        for r in range(rows):
            for c in range(cols):
                i = r * cols + c
                if c + 1 < cols:
                    edges.append((i, i + 1))
                if r + 1 < rows:
                    edges.append((i, i + cols))
        return rows * cols, sorted(edges)
    if kind == "random_regular":
        import networkx as nx

        if k < 0 or k >= n or (n * k) % 2:
            raise ModelError(f"no {k}-regular graph on {n} vertices")
        g = nx.random_regular_graph(k, n, seed=seed)
        return n, sorted((min(u, v), max(u, v)) for u, v in g.edges())
    raise ModelError(f"unknown graph family {kind!r}; choose from {GRAPHS}")


def random_interaction(rng: np.random.Generator, d: int = 2) -> np.ndarray:
    """Hermitian part of a complex Gaussian ``d^2 x d^2`` matrix, normalized to norm one."""
    dim = d * d
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    herm = (a + a.conj().T) / 2
    return herm / operator_norm(herm)


def _scaled(term: np.ndarray) -> tuple[np.ndarray, float]:
    norm = operator_norm(term)
    s = max(1.0, norm)
    return term / s, s


def preset(name: str, graph: str = "path", *, n: int = 2, rows: int | None = None,
           cols: int | None = None, k: int = 3, seed: int = 0, d: int = 2,
           J: float = 1.0, h: float = 0.0, jxy: float = 1.0, jz: float = 1.0) -> SpinModel:
    """Deterministic test instance.

    ``tfim``: ``J Z.Z + (h/2)(X.I + I.X)`` on every edge; ``xxz``:
    ``jxy (X.X + Y.Y) + jz Z.Z``.  Both are divided by their norm when it
    exceeds one (recorded in ``scale``).  ``random_hermitian`` draws a
    complex Gaussian matrix per edge from ``numpy.random.default_rng(seed)``,
    takes its Hermitian part and normalizes to operator norm one.
    """
    nv, edges = make_graph(graph, n=n, rows=rows, cols=cols, k=k, seed=seed)
    scale = 1.0
    if name == "tfim":
        if d != 2:
            raise ModelError("tfim is defined for d = 2")
        term = J * np.kron(PAULI_Z, PAULI_Z) + (h / 2) * (np.kron(PAULI_X, PAULI_I) + np.kron(PAULI_I, PAULI_X))
        op, scale = _scaled(term)
        ops = [op] * len(edges)
    elif name == "xxz":
        if d != 2:
            raise ModelError("xxz is defined for d = 2")
        term = jxy * (np.kron(PAULI_X, PAULI_X) + np.kron(PAULI_Y, PAULI_Y)) + jz * np.kron(PAULI_Z, PAULI_Z)
        op, scale = _scaled(term)
        ops = [op] * len(edges)
    elif name == "random_hermitian":
        rng = np.random.default_rng(seed)
        ops = [random_interaction(rng, d) for _ in edges]
    else:
        raise ModelError(f"unknown preset {name!r}; choose from {PRESETS}")
    return SpinModel(tuple(str(i) for i in range(nv)), tuple(edges), tuple(ops), d=d, scale=scale)
