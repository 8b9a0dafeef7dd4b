"""Dense complex-matrix algebra on small tensor-product spaces.

Operators are plain ``numpy`` arrays of dtype ``complex128``.  A
:class:`SiteSpace` fixes the ordering of the tensor factors so that edge
operators can be embedded consistently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .errors import ModelError, NumericError

HERMITIAN_TOL = 1e-12
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
# log2 of the largest dense dimension a SiteSpace may describe
MAX_LOG2_DIM = 30


@dataclass(frozen=True)
class SiteSpace:
    """Ordered tensor product of ``d``-dimensional site spaces."""

    sites: tuple
    d: int

    def __post_init__(self):
        object.__setattr__(self, "sites", tuple(self.sites))
        if self.d < 2:
            raise ModelError(f"local dimension must be >= 2, got {self.d}")
        if len(set(self.sites)) != len(self.sites):
            raise ModelError(f"sites are not distinct: {self.sites}")
        if len(self.sites) * math.log2(self.d) > MAX_LOG2_DIM:
            raise ModelError(
                f"{len(self.sites)} sites of dimension {self.d} exceed 2^{MAX_LOG2_DIM}"
            )

    @property
    def total_dim(self) -> int:
        return self.d ** len(self.sites)

    def index(self, site: Hashable) -> int:
        try:
            return self.sites.index(site)
        except ValueError:
            raise ModelError(f"site {site!r} is not in {self.sites}") from None


def as_operator(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ModelError(f"operator must be a non-empty square matrix, got shape {a.shape}")
    return a


def hermiticity_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation ``|M[i, j] - conj(M[j, i])|``."""
    m = as_operator(m)
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return hermiticity_defect(m) <= tol


def require_hermitian(m: np.ndarray, what: str = "operator") -> np.ndarray:
    m = as_operator(m)
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise ModelError(f"{what} is not Hermitian (max defect {defect:.3e})")
    return m


def tensor_embed(op, edge_sites: Sequence[Hashable], target: SiteSpace) -> np.ndarray:
    """Embed a two-site operator into ``target``, acting as identity elsewhere.

    ``op`` acts on ``H_u (x) H_v`` for ``edge_sites = (u, v)``, with ``u`` as the
    more significant tensor factor.  The result follows ``target.sites`` order.
    """
    op = as_operator(op)
    d = target.d
    if op.shape[0] != d * d:
        raise ModelError(f"edge operator has dim {op.shape[0]}, expected {d * d}")
    u, v = edge_sites
    if u == v:
        raise ModelError(f"edge {edge_sites!r} is a self-loop")
    iu, iv = target.index(u), target.index(v)
    n = len(target.sites)
    rest = [k for k in range(n) if k not in (iu, iv)]

    # op (x) I_rest with axes (u, v, rest...) for both output and input legs
    full = np.kron(op, np.eye(d ** len(rest), dtype=np.complex128))
    full = full.reshape((d,) * (2 * n))
    order = [iu, iv] + rest
    # axis k of `full` (k < n) holds site order[k]; move it to position order[k]
    perm = [0] * (2 * n)
    for k, site_pos in enumerate(order):
        perm[site_pos] = k
        perm[n + site_pos] = n + k
    full = full.transpose(perm)
    dim = target.total_dim
    return np.ascontiguousarray(full.reshape(dim, dim))


def normalized_trace(m, space: SiteSpace | None = None) -> complex:
    """Trace divided by the dimension, so that the identity has trace one."""
    m = as_operator(m)
    if space is not None and m.shape[0] != space.total_dim:
        raise ModelError(f"matrix dim {m.shape[0]} does not match space dim {space.total_dim}")
    return complex(np.trace(m) / m.shape[0])


def jacobi_eigenvalues(
    m, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS
) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix by the cyclic complex Jacobi method.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation.  Iteration stops once the
    off-diagonal Frobenius norm is below ``tol * max(1, ||A||_F)``.
    """
    a = require_hermitian(m).copy()
    n = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = math.sqrt(max(0.0, float(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2))))
        if off <= tol * scale:
            return np.sort(np.diag(a).real)
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                g = abs(apq)
                if g == 0.0:
                    continue
                phase = apq / g
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * g)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane
                u_pp, u_pq = c, s
                u_qp, u_qq = -s * phase.conjugate(), c * phase.conjugate()
                col_p, col_q = a[:, p].copy(), a[:, q].copy()
                a[:, p] = col_p * u_pp + col_q * u_qp
                a[:, q] = col_p * u_pq + col_q * u_qq
                row_p, row_q = a[p, :].copy(), a[q, :].copy()
                a[p, :] = np.conj(u_pp) * row_p + np.conj(u_qp) * row_q
                a[q, :] = np.conj(u_pq) * row_p + np.conj(u_qq) * row_q
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
    raise NumericError(f"Jacobi eigensolver did not converge in {max_sweeps} sweeps")


def hermitian_eigenvalues(m, method: str = "lapack") -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix.

    ``method="jacobi"`` uses :func:`jacobi_eigenvalues`; ``"lapack"`` calls
    ``numpy.linalg.eigvalsh`` and is the fast default for larger matrices.
    """
    m = require_hermitian(m)
    if method == "jacobi":
        return jacobi_eigenvalues(m)
    if method == "lapack":
        try:
            return np.linalg.eigvalsh(m)
        except np.linalg.LinAlgError as exc:
            raise NumericError(str(exc)) from exc
    raise ValueError(f"unknown eigenvalue method {method!r}")


def matrix_power_trace(m, n: int, space: SiteSpace | None = None, method: str = "multiply") -> complex:
    """Normalized trace of ``M**n`` for Hermitian ``M``.

    ``"multiply"`` does ``n - 1`` products; ``"eigen"`` sums ``lambda**n``.
    """
    m = require_hermitian(m)
    if n < 1:
        raise ValueError(f"power must be >= 1, got {n}")
    if space is not None and m.shape[0] != space.total_dim:
        raise ModelError(f"matrix dim {m.shape[0]} does not match space dim {space.total_dim}")
    if method == "eigen":
        lam = hermitian_eigenvalues(m)
        return complex(np.mean(lam ** n))
    if method != "multiply":
        raise ValueError(f"unknown power-trace method {method!r}")
    p = m
    for _ in range(n - 1):
        p = p @ m
    return normalized_trace(p)


def operator_norm(m) -> float:
    lam = hermitian_eigenvalues(m)
    return float(np.max(np.abs(lam)))


# Single-site Pauli matrices, handy for presets and tests.
PAULI_I = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
