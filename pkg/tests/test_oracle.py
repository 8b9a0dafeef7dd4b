import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quantum_cluster import ResourceError, build_hamiltonian, compare, exact_partition, preset
from quantum_cluster.oracle import log_partition_taylor, relative_error, spectrum

from conftest import ZZ, model_from_edges
from suite import random_model


def test_hamiltonian_single_edge(zz_edge):
    assert np.allclose(build_hamiltonian(zz_edge), np.diag([1, -1, -1, 1]))


def test_hamiltonian_zz_path(zz_path3):
    h = build_hamiltonian(zz_path3)
    assert np.allclose(h, np.diag(np.diag(h)))
    assert np.allclose(np.diag(h).real, [2, 0, -2, 0, 0, -2, 0, 2])


def test_zz_edge_partition(zz_edge):
    for beta in (0.0, 0.3, 1.7):
        z = exact_partition(zz_edge, beta).z
        assert z == pytest.approx(2 * math.exp(-beta) + 2 * math.exp(beta))


def test_imaginary_beta(zz_edge):
    for theta in (0.2, 1.0, math.pi / 2):
        res = exact_partition(zz_edge, 1j * theta)
        assert abs(res.z) == pytest.approx(4 * abs(math.cos(theta)))


def test_stable_log_at_large_beta(zz_edge):
    res = exact_partition(zz_edge, 800.0)
    assert res.z.real == math.inf
    assert res.log_z.real == pytest.approx(800.0 + math.log(2))


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10**6), re=st.floats(-0.5, 0.5), im=st.floats(-0.5, 0.5))
def test_conjugate_symmetry(seed, re, im):
    model = preset("random_hermitian", "path", n=3, seed=seed)
    lam = spectrum(model)
    a = exact_partition(model, complex(re, im), eigenvalues=lam).z
    b = exact_partition(model, complex(re, -im), eigenvalues=lam).z
    assert a == pytest.approx(b.conjugate(), rel=1e-12, abs=1e-12)


def test_product_of_disjoint_parts():
    a = random_model(2, [(0, 1)], 3)
    b = random_model(3, [(0, 1), (1, 2)], 4)
    joined = model_from_edges(
        5, [(0, 1), (2, 3), (3, 4)], [a.interactions[0], *b.interactions]
    )
    beta = 0.4 - 0.2j
    za, zb = exact_partition(a, beta).z, exact_partition(b, beta).z
    assert exact_partition(joined, beta).z == pytest.approx(za * zb, rel=1e-12)


def test_trace_equals_eigenvalue_sum():
    model = preset("random_hermitian", "cycle", n=4, seed=2)
    h = build_hamiltonian(model)
    assert np.trace(h).real == pytest.approx(spectrum(model).sum(), abs=1e-12)
    assert np.allclose(h, h.conj().T)


def test_taylor_coefficients_single_edge(zz_edge):
    # log cosh(b) = b^2/2 - b^4/12 + ...
    coeffs = log_partition_taylor(zz_edge, 6)
    assert np.allclose(coeffs, [0, 0, 0.5, 0, -1 / 12, 0], atol=1e-15)


def test_dimension_cap():
    with pytest.raises(ResourceError, match="exceeds oracle cap"):
        build_hamiltonian(preset("tfim", "path", n=16))


def test_relative_error_is_branch_free():
    assert relative_error(1.0 + 2j * math.pi, 1.0) == pytest.approx(0, abs=1e-15)
    assert relative_error(math.log(1.1), 0.0) == pytest.approx(0.1)


def test_compare_at_zero(zz_path3):
    cmp = compare(zz_path3, 0.0, 1e-3)
    assert cmp.relative_error == 0
    assert cmp.passed
    assert cmp.exact.log_z == pytest.approx(3 * math.log(2))
    assert cmath.isclose(cmp.exact.log_z_principal, cmp.exact.log_z)
