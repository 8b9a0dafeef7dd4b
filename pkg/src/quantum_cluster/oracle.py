"""Exact partition functions by full diagonalization, for validation."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .cluster import ExpansionResult, estimate, log_series
from .errors import ResourceError
from .model import SpinModel
from .operators import hermitian_eigenvalues, tensor_embed

MAX_ORACLE_DIM = 2 ** 15


@dataclass
class ExactResult:
    """``z = sum_j exp(-beta * eigenvalues[j])``; ``log_z`` is computed stably."""

    beta: complex
    z: complex
    log_z: complex
    eigenvalues: np.ndarray
    dim: int

    @property
    def log_z_principal(self) -> complex:
        return cmath.log(self.z) if self.z != 0 else complex(-math.inf)


def build_hamiltonian(model: SpinModel) -> np.ndarray:
    """Dense ``H = sum_e Phi(e)`` on the full tensor product space."""
    dim = model.d ** model.num_vertices
    if dim > MAX_ORACLE_DIM:
        raise ResourceError(f"Hilbert space dimension {dim} exceeds oracle cap {MAX_ORACLE_DIM}")
    space = model.space()
    h = np.zeros((dim, dim), dtype=np.complex128)
    for (u, v), op in zip(model.edges, model.interactions):
        h += tensor_embed(op, (u, v), space)
    return h


def spectrum(model: SpinModel) -> np.ndarray:
    return hermitian_eigenvalues(build_hamiltonian(model))


def exact_partition(model: SpinModel, beta, eigenvalues: np.ndarray | None = None) -> ExactResult:
    beta = complex(beta)
    lam = spectrum(model) if eigenvalues is None else eigenvalues
    expo = -beta * lam
    shift = expo[np.argmax(expo.real)]
    s = complex(np.sum(np.exp(expo - shift)))
    log_z = shift + cmath.log(s)
    with np.errstate(over="ignore"):
        z = complex(np.sum(np.exp(expo)))
    return ExactResult(beta, z, log_z, lam, len(lam))


def log_partition_taylor(model: SpinModel, order: int, eigenvalues: np.ndarray | None = None) -> np.ndarray:
    """Taylor coefficients (degree < order) of ``log(Z / d^|X|)`` from the exact spectrum."""
    lam = spectrum(model) if eigenvalues is None else eigenvalues
    z = np.empty(order)
    power = np.ones_like(lam)
    for k in range(order):
        z[k] = (-1) ** k * float(np.mean(power)) / math.factorial(k)
        power = power * lam
    return log_series(z)


def relative_error(log_z_estimate: complex, log_z_exact: complex) -> float:
    """``|exp(estimate - exact) - 1|``; insensitive to the branch of either log."""
    return abs(cmath.exp(log_z_estimate - log_z_exact) - 1.0)


@dataclass
class Comparison:
    estimate: ExpansionResult
    exact: ExactResult
    relative_error: float
    epsilon: float

    @property
    def passed(self) -> bool:
        return self.relative_error <= self.epsilon


def compare(model: SpinModel, beta, epsilon: float, override_region: bool = False,
            order: int | None = None, method: str = "auto", threads: int = 1) -> Comparison:
    est = estimate(model, beta, epsilon, override_region=override_region, order=order,
                   method=method, threads=threads)
    ex = exact_partition(model, beta)
    return Comparison(est, ex, relative_error(est.log_z, ex.log_z), epsilon)
