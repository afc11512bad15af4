"""Dense complex matrix algebra for multi-qubit operators.

Everything in this package runs on plain ``numpy`` complex arrays in a
fixed row-major layout; this module collects the small set of
operations the rest of the code needs: Kronecker products, partial
traces, factor permutations, Hermitian eigenvalue extremes and
density-matrix validation.

Conventions
-----------
* Factor 0 is the leftmost Kronecker factor throughout the package.
* All dense work is double precision; the largest systems in scope are
  ~6 qubit pairs (4^6 = 4096 dimensional), beyond which the 4^n memory
  wall makes dense storage inappropriate.
* Hermiticity is enforced to 1e-10, PSD to -1e-10 on the minimum
  eigenvalue, eigenvalues are accurate to ~1e-9 (LAPACK Hermitian
  solver on small matrices).
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError, InputError, NonHermitianError, PsdViolationError

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = -1e-10

# Single-qubit constants; used everywhere states and observables are built.
IDENT2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

for _m in (IDENT2, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write=False)


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return a.conj().T


def frozen(a: np.ndarray) -> np.ndarray:
    """Return a read-only complex copy of ``a`` (values are immutable after construction)."""
    out = np.array(a, dtype=complex)
    out.setflags(write=False)
    return out


def is_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    return a.shape[0] == a.shape[1] and np.max(np.abs(a - dagger(a))) <= tol


def require_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL, name: str = "matrix") -> None:
    dev = float(np.max(np.abs(a - dagger(a))))
    if dev > tol:
        raise NonHermitianError(f"{name} is not Hermitian: max |A - A†| = {dev:.3e} > {tol:.1e}")


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with factor 0 on the left."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def kron_all(factors: Iterable[np.ndarray]) -> np.ndarray:
    """Kronecker product of a sequence of operators, left to right."""
    out: np.ndarray | None = None
    for f in factors:
        out = np.asarray(f, dtype=complex) if out is None else np.kron(out, f)
    if out is None:
        raise DimensionMismatchError("kron_all needs at least one factor")
    return out


def partial_trace(rho: np.ndarray, factor_dims: Sequence[int], keep: Iterable[int]) -> np.ndarray:
    """Trace out all tensor factors of ``rho`` not listed in ``keep``.

    ``factor_dims`` specifies the dimension of each factor in the fixed
    left-to-right layout; their product must equal the matrix dimension.
    The result lives on the kept factors in their original order.
    Tracing out every factor yields the 1x1 matrix ``[[Tr rho]]``.
    """
    dims = [int(d) for d in factor_dims]
    if any(d < 1 for d in dims):
        raise DimensionMismatchError(f"factor dims must be positive, got {dims}")
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionMismatchError(
            f"factor dims {dims} give total dimension {total}, but rho is {rho.shape}"
        )
    m = len(dims)
    keep_list = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= m for k in keep_list):
        raise DimensionMismatchError(f"keep indices {keep_list} out of range for {m} factors")

    resh = np.asarray(rho, dtype=complex).reshape(dims + dims)
    keep_set = set(keep_list)
    row_idx = list(range(m))
    col_idx = [i + m if i in keep_set else i for i in range(m)]
    out_idx = keep_list + [k + m for k in keep_list]
    reduced = np.einsum(resh, row_idx + col_idx, out_idx)
    d_out = int(np.prod([dims[k] for k in keep_list])) if keep_list else 1
    return reduced.reshape(d_out, d_out)


def permute_factors(a: np.ndarray, factor_dims: Sequence[int], order: Sequence[int]) -> np.ndarray:
    """Reorder the tensor factors of ``a`` so that new slot j holds old factor order[j].

    This is the single index bijection used to turn the natural source
    order (A1 B1 A2 B2 ...) into the grouped order (A1 ... An B1 ... Bn).
    """
    dims = [int(d) for d in factor_dims]
    m = len(dims)
    total = int(np.prod(dims))
    if a.shape != (total, total):
        raise DimensionMismatchError(f"factor dims {dims} inconsistent with shape {a.shape}")
    if sorted(order) != list(range(m)):
        raise DimensionMismatchError(f"order {list(order)} is not a permutation of 0..{m - 1}")
    resh = np.asarray(a, dtype=complex).reshape(dims + dims)
    axes = list(order) + [m + i for i in order]
    new_dims = [dims[i] for i in order]
    return resh.transpose(axes).reshape(int(np.prod(new_dims)), -1)


def eigvals_hermitian(h: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix (raises if not Hermitian)."""
    require_hermitian(h, tol)
    return np.linalg.eigvalsh(h)


def max_eigenvalue(h: np.ndarray) -> float:
    """Largest eigenvalue of a Hermitian matrix."""
    return float(eigvals_hermitian(h)[-1])


def min_eigenvalue(h: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(eigvals_hermitian(h)[0])


def spectral_norm_hermitian(h: np.ndarray) -> float:
    """Operator (2-)norm of a Hermitian matrix: max |eigenvalue|."""
    w = eigvals_hermitian(h)
    return float(max(abs(w[0]), abs(w[-1])))


def projector(vec: np.ndarray) -> np.ndarray:
    """Rank-1 projector |v><v| onto a normalised vector."""
    v = np.asarray(vec, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def as_density_matrix(rho: np.ndarray, name: str = "rho") -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return a read-only copy.

    Hermiticity and trace are enforced to 1e-10; the minimum eigenvalue
    may dip to -1e-10 to absorb double-precision eigensolver noise.
    """
    a = np.asarray(rho, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatchError(f"{name} must be square, got shape {a.shape}")
    require_hermitian(a, HERMITICITY_TOL, name)
    tr = complex(np.trace(a))
    if abs(tr - 1.0) > TRACE_TOL:
        raise InputError(f"{name} must have trace 1, got {tr:.12g}")
    lo = min_eigenvalue(a)
    if lo < PSD_TOL:
        raise PsdViolationError(f"{name} is not PSD: minimum eigenvalue {lo:.6g} < {PSD_TOL:.1e}")
    return frozen(a)
