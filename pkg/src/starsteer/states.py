"""Two-qubit source states and star-network assembly.

A star network distributes n two-qubit states ρ_{A_kB_k}; edge party k
holds qubit A_k and the central party holds all B qubits.  Supported
source families:

* Werner:        ρ = (1-p)/4 · I₄ + p · |φ⟩⟨φ|,  |φ⟩ = (|00⟩+|11⟩)/√2
* Bell-diagonal: ρ = ¼ (I₄ + Σ_k c_k σ_k⊗σ_k)
* general:       ρ = ¼ (I₄ + Σ_j a_j σ_j⊗I₂ + Σ_j b_j I₂⊗σ_j + Σ_kl c_kl σ_k⊗σ_l)
* raw:           any valid 4x4 density matrix

Every source carries its Pauli decomposition (Bloch vectors and the 3x3
correlation matrix c_kl = Tr[ρ (σ_k⊗σ_l)]), which feeds the factorised
correlator path and the singular-value reduction for general states.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import linalg
from .errors import DimensionMismatchError, InputError, SizeLimitError
from .linalg import IDENT2, PAULIS, frozen, kron, kron_all

# Dense global states are capped at 6 pairs (4^6 = 4096 dimensional).
MAX_PAIRS = 6

PHI_PLUS = frozen(np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2.0))


def pauli_coefficients(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Bloch vectors and correlation matrix of a two-qubit state.

    Coefficient normalisation is fixed to a_j = Tr[ρ (σ_j⊗I)],
    b_j = Tr[ρ (I⊗σ_j)], c_kl = Tr[ρ (σ_k⊗σ_l)].
    """
    a = np.array([np.trace(rho @ kron(PAULIS[j], IDENT2)).real for j in range(3)])
    b = np.array([np.trace(rho @ kron(IDENT2, PAULIS[j])).real for j in range(3)])
    c = np.array(
        [[np.trace(rho @ kron(PAULIS[k], PAULIS[l])).real for l in range(3)] for k in range(3)]
    )
    return a, b, c


@dataclass(frozen=True)
class TwoQubitSource:
    """A validated 4x4 source state plus its Pauli decomposition."""

    rho: np.ndarray
    kind: str  # werner | bell_diagonal | general | raw
    bloch_a: np.ndarray
    bloch_b: np.ndarray
    correlation: np.ndarray

    @property
    def is_structured(self) -> bool:
        """True for the families with diagonal correlation and zero Bloch vectors."""
        return self.kind in ("werner", "bell_diagonal")

    @property
    def bell_c(self) -> np.ndarray:
        """Diagonal correlation coefficients (c1, c2, c3) of a structured source."""
        if not self.is_structured:
            raise InputError(f"source of kind {self.kind!r} has no Bell-diagonal coefficients")
        return np.diagonal(self.correlation)


def frozen_real(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


def _build_source(rho: np.ndarray, kind: str) -> TwoQubitSource:
    rho = linalg.as_density_matrix(rho, name=f"{kind} source")
    a, b, c = pauli_coefficients(rho)
    return TwoQubitSource(rho=rho, kind=kind, bloch_a=frozen_real(a), bloch_b=frozen_real(b),
                          correlation=frozen_real(c))


def make_werner(p: float) -> TwoQubitSource:
    """Werner source (1-p)/4 · I₄ + p |φ⁺⟩⟨φ⁺|; Bell-diagonal with c = (p, -p, p)."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise InputError(f"Werner parameter must lie in [0, 1], got {p}")
    rho = (1.0 - p) / 4.0 * np.eye(4, dtype=complex) + p * linalg.projector(PHI_PLUS)
    src = _build_source(rho, "werner")
    return src


def make_bell_diagonal(c1: float, c2: float, c3: float) -> TwoQubitSource:
    """Bell-diagonal source ¼(I₄ + c₁σ₁⊗σ₁ + c₂σ₂⊗σ₂ + c₃σ₃⊗σ₃).

    Raises PsdViolationError (naming the offending eigenvalue) when
    (c1, c2, c3) falls outside the PSD tetrahedron.
    """
    c = (float(c1), float(c2), float(c3))
    rho = np.eye(4, dtype=complex)
    for ck, sigma in zip(c, PAULIS):
        rho = rho + ck * kron(sigma, sigma)
    return _build_source(rho / 4.0, "bell_diagonal")


def make_general(a: Sequence[float], b: Sequence[float], C: Sequence[Sequence[float]]) -> TwoQubitSource:
    """General two-qubit source from Bloch vectors a, b and correlation matrix C."""
    av = np.asarray(a, dtype=float).reshape(-1)
    bv = np.asarray(b, dtype=float).reshape(-1)
    cm = np.asarray(C, dtype=float)
    if av.shape != (3,) or bv.shape != (3,) or cm.shape != (3, 3):
        raise InputError(
            f"general source needs a(3), b(3), C(3x3); got {av.shape}, {bv.shape}, {cm.shape}"
        )
    rho = np.eye(4, dtype=complex)
    for j in range(3):
        rho = rho + av[j] * kron(PAULIS[j], IDENT2) + bv[j] * kron(IDENT2, PAULIS[j])
    for k in range(3):
        for l in range(3):
            rho = rho + cm[k, l] * kron(PAULIS[k], PAULIS[l])
    return _build_source(rho / 4.0, "general")


def make_raw(rho: np.ndarray) -> TwoQubitSource:
    """Wrap an arbitrary valid 4x4 density matrix; Pauli coefficients extracted by projection."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise DimensionMismatchError(f"raw source must be 4x4, got {rho.shape}")
    return _build_source(rho, "raw")


def correlation_svd(source: TwoQubitSource) -> tuple[float, float, float]:
    """Singular values of the 3x3 correlation matrix, sorted descending.

    These are the |d_k| entering the steering criteria for general
    two-qubit sources; they are invariant under local unitaries.
    """
    sv = np.linalg.svd(source.correlation, compute_uv=False)
    sv = np.sort(np.abs(sv))[::-1]
    return float(sv[0]), float(sv[1]), float(sv[2])


@dataclass(frozen=True)
class StarNetwork:
    """n independent two-qubit sources; global ordering is A1..An then B1..Bn."""

    sources: tuple[TwoQubitSource, ...]

    def __post_init__(self) -> None:
        if not self.sources:
            raise InputError("a star network needs at least one source")

    @property
    def n(self) -> int:
        return len(self.sources)

    @property
    def is_structured(self) -> bool:
        return all(s.is_structured for s in self.sources)


def star_network(sources: Sequence[TwoQubitSource]) -> StarNetwork:
    return StarNetwork(sources=tuple(sources))


def werner_network(p: float, n: int) -> StarNetwork:
    """n identical Werner sources."""
    src = make_werner(p)
    return StarNetwork(sources=(src,) * int(n))


def werner_family(n: int) -> Callable[[float], StarNetwork]:
    """Parameterised generator p ↦ Werner star network, for threshold searches."""
    return lambda p: werner_network(p, n)


def assemble_global(net: StarNetwork) -> np.ndarray:
    """Dense 4^n global state over qubit order A1..An B1..Bn.

    The natural Kronecker order of the product ⊗_k ρ_{A_kB_k} is
    (A1 B1 A2 B2 ...); a single factor permutation regroups it so edge
    observables act on the first n qubits and the central measurement
    on the last n.
    """
    n = net.n
    if n > MAX_PAIRS:
        raise SizeLimitError(f"dense global state limited to n <= {MAX_PAIRS} pairs, got {n}")
    rho = kron_all([s.rho for s in net.sources])
    if n == 1:
        return rho
    order = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    return linalg.permute_factors(rho, [2] * (2 * n), order)


# --- JSON state specification ------------------------------------------------
#
# {"n": 2, "sources": [{"kind": "werner", "p": 0.7},
#                      {"kind": "bell_diagonal", "c": [0.6, -0.6, 0.6]}]}
# kinds: werner(p) | bell_diagonal(c) | general(a, b, C)


def source_from_dict(d: dict) -> TwoQubitSource:
    if not isinstance(d, dict) or "kind" not in d:
        raise InputError(f"source spec must be an object with a 'kind' field, got {d!r}")
    kind = d["kind"]
    try:
        if kind == "werner":
            return make_werner(d["p"])
        if kind == "bell_diagonal":
            c = d["c"]
            if len(c) != 3:
                raise InputError(f"bell_diagonal spec needs 3 coefficients, got {len(c)}")
            return make_bell_diagonal(*c)
        if kind == "general":
            return make_general(d["a"], d["b"], d["C"])
    except KeyError as exc:
        raise InputError(f"source spec of kind {kind!r} is missing field {exc}") from exc
    raise InputError(f"unknown source kind {kind!r}")


def network_from_dict(d: dict) -> StarNetwork:
    if not isinstance(d, dict) or "n" not in d or "sources" not in d:
        raise InputError("network spec must be an object with 'n' and 'sources'")
    sources = [source_from_dict(s) for s in d["sources"]]
    if int(d["n"]) != len(sources):
        raise InputError(f"spec declares n={d['n']} but lists {len(sources)} sources")
    return StarNetwork(sources=tuple(sources))


def network_from_json(path: str | Path) -> StarNetwork:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read state spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc
    return network_from_dict(payload)
