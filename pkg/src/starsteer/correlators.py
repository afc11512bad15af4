"""Joint probabilities, assemblages and correlators on star networks.

The central quantity is the expectation value

    ⟨x^{i1} ⊗ x^{i2} ⊗ .. ⊗ x^{in} ⊗ y^{i1..in}⟩

of the edge observables together with the signed central observable.
Two computation paths exist:

* ``correlator_dense`` works on the full 4^n state for any source and
  is the correctness oracle (n <= 5);
* ``correlator_fast`` uses the product structure of Bell-diagonal and
  Werner sources, |⟨..⟩| = Π_k |c_{i_k}| with c_0 := 1, valid for any n.

``correlator`` dispatches to the fast path when every source is
structured and the default Pauli triple is in use.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from . import linalg
from .errors import DimensionMismatchError, InputError, NumericsError, SizeLimitError
from .linalg import kron, kron_all, partial_trace
from .measurements import (
    FixedMeasurement,
    MubTriple,
    as_digits,
    default_mub,
    ghz_projectors,
    pauli_sign,
    sign_exponent,
    y_operator,
)
from .states import StarNetwork, TwoQubitSource, assemble_global

# Dense assemblage/correlator work is capped at n = 5 (4^5 = 1024 dimensional).
MAX_DENSE_PAIRS = 5

IMAG_RESIDUE_TOL = 1e-8
PROJECTOR_TOL = 1e-10
ASSEMBLAGE_PSD_TOL = -1e-10
ASSEMBLAGE_TRACE_TOL = 1e-10


def _real_expectation(value: complex, what: str) -> float:
    # An imaginary residue above tolerance signals a construction bug, not noise.
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise NumericsError(f"{what} has imaginary residue {value.imag:.3e}")
    return float(value.real)


def _require_dense_size(n: int) -> None:
    if n > MAX_DENSE_PAIRS:
        raise SizeLimitError(f"dense path limited to n <= {MAX_DENSE_PAIRS}, got n = {n}")


@dataclass(frozen=True)
class Assemblage:
    """Sub-normalised central-outcome states σ_b on the edge qubits A1..An."""

    n: int
    elements: dict[str, np.ndarray]

    def __getitem__(self, bits: str) -> np.ndarray:
        return self.elements[bits]

    def outcomes(self) -> list[str]:
        return sorted(self.elements)


def assemblage(net: StarNetwork, meas: FixedMeasurement | None = None) -> Assemblage:
    """σ_b = Tr_B[(I_A ⊗ G_b) ρ] for every outcome b of the fixed measurement."""
    n = net.n
    _require_dense_size(n)
    if meas is None:
        meas = ghz_projectors(n)
    if meas.n != n:
        raise DimensionMismatchError(f"measurement acts on {meas.n} qubits, network has {n}")
    rho = assemble_global(net)
    d = 2**n
    ident_a = np.eye(d, dtype=complex)
    elements: dict[str, np.ndarray] = {}
    total_trace = 0.0
    for b, g in meas.projectors.items():
        sigma = partial_trace(kron(ident_a, g) @ rho, [d, d], keep=[0])
        lo = linalg.min_eigenvalue((sigma + linalg.dagger(sigma)) / 2.0)
        if lo < ASSEMBLAGE_PSD_TOL:
            raise NumericsError(f"assemblage element {b} not PSD: min eigenvalue {lo:.3e}")
        total_trace += _real_expectation(complex(np.trace(sigma)), f"Tr σ_{b}")
        elements[b] = linalg.frozen(sigma)
    if abs(total_trace - 1.0) > ASSEMBLAGE_TRACE_TOL:
        raise NumericsError(f"assemblage traces sum to {total_trace:.12g}, expected 1")
    return Assemblage(n=n, elements=elements)


def joint_probability(
    net: StarNetwork,
    edge_projectors: Sequence[np.ndarray],
    outcome: str,
    meas: FixedMeasurement | None = None,
) -> float:
    """p(a, b) = Tr[(Π_1 ⊗ .. ⊗ Π_n ⊗ G_b) ρ] for edge projectors Π_k."""
    n = net.n
    _require_dense_size(n)
    if meas is None:
        meas = ghz_projectors(n)
    if len(edge_projectors) != n:
        raise DimensionMismatchError(f"need {n} edge projectors, got {len(edge_projectors)}")
    for k, pi in enumerate(edge_projectors):
        if pi.shape != (2, 2):
            raise InputError(f"edge projector {k} must be 2x2, got {pi.shape}")
        if np.max(np.abs(pi @ pi - pi)) > PROJECTOR_TOL:
            raise InputError(f"edge operator {k} is not a projector (Π² ≠ Π)")
    rho = assemble_global(net)
    op = kron(kron_all(edge_projectors), meas[outcome])
    p = _real_expectation(complex(np.einsum("ij,ji->", op, rho)), "probability")
    if p < -1e-12:
        raise NumericsError(f"negative probability {p:.3e}")
    return max(p, 0.0)


def correlator_dense(
    net: StarNetwork,
    settings: str | Sequence[int],
    mub: MubTriple | None = None,
    *,
    rho_global: np.ndarray | None = None,
) -> float:
    """⟨⊗_k x^{i_k} ⊗ y^{i1..in}⟩ evaluated on the dense global state."""
    n = net.n
    _require_dense_size(n)
    digits = as_digits(settings)
    if len(digits) != n:
        raise DimensionMismatchError(f"expected {n} setting digits, got {len(digits)}")
    if mub is None:
        mub = default_mub()
    if rho_global is None:
        rho_global = assemble_global(net)
    edge = kron_all([mub.observable(d) for d in digits])
    op = kron(edge, y_operator(n, digits))
    return _real_expectation(complex(np.einsum("ij,ji->", op, rho_global)), "correlator")


def correlator_fast(sources: Sequence[TwoQubitSource], settings: str | Sequence[int]) -> float:
    """Factorised correlator for structured sources: sign · Π_k c_{i_k} with c_0 = 1.

    The sign is the Pauli-string sign of y^{i1..in}, which keeps the
    result consistent with ``correlator_dense`` on class-C/C' strings.
    """
    digits = as_digits(settings)
    if len(digits) != len(sources):
        raise DimensionMismatchError(f"expected {len(sources)} setting digits, got {len(digits)}")
    value = float(pauli_sign(len(sources), digits))
    for src, d in zip(sources, digits):
        if not src.is_structured:
            raise InputError(f"fast correlator needs structured sources, got kind {src.kind!r}")
        if d != 0:
            value *= float(src.bell_c[d - 1])
    return value


def correlator(
    net: StarNetwork,
    settings: str | Sequence[int],
    mub: MubTriple | None = None,
    *,
    rho_global: np.ndarray | None = None,
    method: str = "auto",
) -> float:
    """Dispatch: fast path for structured sources under the default triple, else dense."""
    if method not in ("auto", "dense", "fast"):
        raise InputError(f"method must be auto|dense|fast, got {method!r}")
    if method == "fast" or (method == "auto" and mub is None and net.is_structured):
        return correlator_fast(net.sources, settings)
    return correlator_dense(net, settings, mub, rho_global=rho_global)


def correlator_from_probabilities(
    net: StarNetwork,
    settings: str | Sequence[int],
    mub: MubTriple | None = None,
) -> float:
    """Signed probability sum Σ_{a,b} (-1)^{Σ_k a_k + ℜ} p(a, b).

    Direct test of the displayed identity tying probabilities to the
    operator expectation; agrees with ``correlator_dense`` by
    construction of the sign rule.
    """
    n = net.n
    _require_dense_size(n)
    digits = as_digits(settings)
    if mub is None:
        mub = default_mub()
    meas = ghz_projectors(n)
    rho = assemble_global(net)
    d = 2**n
    total = 0.0
    for edge_outcomes in product((0, 1), repeat=n):
        projs = [mub.outcome_projector(dig, a) for dig, a in zip(digits, edge_outcomes)]
        edge_op = kron_all(projs)
        a_parity = sum(edge_outcomes) % 2
        for b in meas.outcomes():
            op = kron(edge_op, meas[b])
            p = _real_expectation(complex(np.einsum("ij,ji->", op, rho)), "probability")
            total += (-1) ** ((a_parity + sign_exponent(n, digits, b)) % 2) * p
    return total
