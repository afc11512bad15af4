import numpy as np
import pytest
from numpy.testing import assert_allclose

from starsteer.errors import DimensionMismatchError, NonHermitianError, PsdViolationError
from starsteer.linalg import (
    IDENT2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    as_density_matrix,
    kron,
    kron_all,
    max_eigenvalue,
    min_eigenvalue,
    partial_trace,
    permute_factors,
    projector,
    spectral_norm_hermitian,
)
from starsteer.states import PHI_PLUS, make_werner


def _rand_density(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def _rand_hermitian(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (a + a.conj().T) / 2


def test_kron_identity():
    assert_allclose(kron(IDENT2, IDENT2), np.eye(4), atol=0)


def test_kron_block_structure():
    expected = np.zeros((4, 4), dtype=complex)
    expected[:2, 2:] = SIGMA_Z
    expected[2:, :2] = SIGMA_Z
    assert_allclose(kron(SIGMA_X, SIGMA_Z), expected, atol=0)


def test_kron_yy_correlator_on_bell_state():
    rho = projector(PHI_PLUS)
    val = np.trace(kron(SIGMA_Y, SIGMA_Y) @ rho)
    assert abs(val - (-1.0)) < 1e-14


def test_kron_associative():
    rng = np.random.default_rng(0)
    # Exact entry equality on exactly-representable products.
    a, b, c = (
        rng.integers(-2, 3, size=(2, 2)) + 1j * rng.integers(-2, 3, size=(2, 2))
        for _ in range(3)
    )
    assert np.array_equal(kron(kron(a, b), c), kron(a, kron(b, c)))
    # Layout agreement within rounding for generic entries.
    a, b, c = (rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)) for _ in range(3))
    assert np.max(np.abs(kron(kron(a, b), c) - kron(a, kron(b, c)))) < 1e-15


def test_kron_trace_multiplicative():
    rng = np.random.default_rng(1)
    for _ in range(20):
        a = _rand_hermitian(rng, 3)
        b = _rand_hermitian(rng, 4)
        assert abs(np.trace(kron(a, b)) - np.trace(a) * np.trace(b)) < 1e-12


def test_partial_trace_bell_reduction():
    rho = projector(PHI_PLUS)
    assert_allclose(partial_trace(rho, [2, 2], keep=[0]), np.eye(2) / 2, atol=1e-14)
    assert_allclose(partial_trace(rho, [2, 2], keep=[1]), np.eye(2) / 2, atol=1e-14)


def test_partial_trace_product_factorization():
    rng = np.random.default_rng(2)
    a = _rand_density(rng, 3)
    b = _rand_density(rng, 2)
    out = partial_trace(kron(a, 5.0 * b), [3, 2], keep=[0])
    assert_allclose(out, a * 5.0, atol=1e-12)


def test_partial_trace_two_pairs_to_edges():
    # Four qubits ordered (A1, B1, A2, B2); tracing both B's leaves rho_A1 ⊗ rho_A2.
    rng = np.random.default_rng(3)
    r1 = _rand_density(rng, 4)
    r2 = _rand_density(rng, 4)
    big = kron(r1, r2)
    reduced = partial_trace(big, [2, 2, 2, 2], keep=[0, 2])
    a1 = partial_trace(r1, [2, 2], keep=[0])
    a2 = partial_trace(r2, [2, 2], keep=[0])
    assert_allclose(reduced, kron(a1, a2), atol=1e-12)


def test_partial_trace_preserves_trace():
    rng = np.random.default_rng(4)
    rho = _rand_density(rng, 12)
    for keep in ([0], [1], [2], [0, 2], [0, 1, 2]):
        out = partial_trace(rho, [2, 3, 2], keep=keep)
        assert abs(np.trace(out) - np.trace(rho)) < 1e-12


def test_partial_trace_all_factors_gives_scalar_trace():
    rng = np.random.default_rng(5)
    rho = _rand_density(rng, 6)
    out = partial_trace(rho, [2, 3], keep=[])
    assert out.shape == (1, 1)
    assert abs(out[0, 0] - np.trace(rho)) < 1e-12


def test_partial_trace_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        partial_trace(np.eye(4, dtype=complex), [2, 3], keep=[0])
    with pytest.raises(DimensionMismatchError):
        partial_trace(np.eye(4, dtype=complex), [2, 2], keep=[2])


def test_max_eigenvalue_examples():
    assert abs(max_eigenvalue(SIGMA_X + SIGMA_Z) - np.sqrt(2)) < 1e-9
    assert abs(max_eigenvalue(SIGMA_X + SIGMA_Y + SIGMA_Z) - np.sqrt(3)) < 1e-9
    assert abs(max_eigenvalue(IDENT2) - 1.0) < 1e-12


def test_min_eigenvalue_examples():
    assert abs(min_eigenvalue(IDENT2) - 1.0) < 1e-12
    assert abs(min_eigenvalue(SIGMA_Z) - (-1.0)) < 1e-12
    # Werner(0.5) eigenvalues are (1-p)/4 three times and (1+3p)/4 once.
    assert abs(min_eigenvalue(np.asarray(make_werner(0.5).rho)) - 0.125) < 1e-10


def test_eigenvalue_rejects_non_hermitian():
    bad = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(NonHermitianError):
        max_eigenvalue(bad)
    with pytest.raises(NonHermitianError):
        min_eigenvalue(bad)


def test_max_eigenvalue_dominates_rayleigh_quotients():
    rng = np.random.default_rng(6)
    for _ in range(25):
        h = _rand_hermitian(rng, 8)
        top = max_eigenvalue(h)
        for _ in range(10):
            v = rng.normal(size=8) + 1j * rng.normal(size=8)
            rq = (v.conj() @ h @ v).real / (v.conj() @ v).real
            assert top >= rq - 1e-9


def test_spectral_norm_hermitian():
    assert abs(spectral_norm_hermitian(-3.0 * SIGMA_Z) - 3.0) < 1e-12


def test_permute_factors_roundtrip():
    rng = np.random.default_rng(7)
    rho = _rand_density(rng, 8)
    order = [2, 0, 1]
    inverse = [order.index(i) for i in range(3)]
    once = permute_factors(rho, [2, 2, 2], order)
    back = permute_factors(once, [2, 2, 2], inverse)
    assert_allclose(back, rho, atol=1e-14)


def test_permute_factors_matches_kron_reorder():
    rng = np.random.default_rng(8)
    a = _rand_density(rng, 2)
    b = _rand_density(rng, 3)
    c = _rand_density(rng, 2)
    big = kron_all([a, b, c])
    perm = permute_factors(big, [2, 3, 2], [1, 2, 0])
    assert_allclose(perm, kron_all([b, c, a]), atol=1e-13)


def test_as_density_matrix_validation():
    with pytest.raises(NonHermitianError):
        as_density_matrix(np.array([[0.5, 0.3], [0.1, 0.5]], dtype=complex))
    with pytest.raises(Exception, match="trace"):
        as_density_matrix(np.eye(2, dtype=complex))
    with pytest.raises(PsdViolationError, match="-0.5"):
        as_density_matrix(np.diag([1.5, -0.5]).astype(complex))
    out = as_density_matrix(np.eye(2, dtype=complex) / 2)
    assert not out.flags.writeable
