"""Edge-party observables and the central party's fixed GHZ-basis measurement.

The central party measures all n of its qubits jointly in the GHZ basis

    |ψ±_{t1..tn}⟩ = (|t1..tn⟩ ± |t̄1..t̄n⟩)/√2 ,   t1 = 0,

with 2^n rank-1 projectors G labelled by outcome bitstrings: label t
carries |ψ⁺_t⟩⟨ψ⁺_t| and the complemented label t̄ carries |ψ⁻_t⟩⟨ψ⁻_t|.

Signed observables y^{i1..in} are built from the projectors for two
classes of setting strings:

* class C:  alphabet {1, 2}, even number of 2s (zero allowed),
  y = Σ_{t1=0} (-1)^{I·t} (G_t - G_t̄)  with I = (i1-1, .., in-1);
* class C': alphabet {0, 3}, even nonzero number of 3s,
  y = Σ_{t1=0} (-1)^{I0·t} (G_t + G_t̄)  with I0 = (i1, .., in).

Each y equals a signed Pauli string under the positional pairing
1↔σx, 2↔σy, 3↔σz (0↔I₂):  for class C the sign is (-1)^(#2s / 2) and
the factors are σx/σy; for class C' the sign is + and the factors are
σz/I₂.  The sign-rule exponent ℜ ties the operator picture to signed
probability sums: Σ_b (-1)^ℜ G_b reproduces y exactly.

Outcome labels are bitstrings; the map to integers 0..2^n-1 is
big-endian (int(label, 2)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Sequence

import numpy as np

from .errors import InputError, InvalidSettingError, SizeLimitError
from .linalg import IDENT2, PAULIS, dagger, frozen, kron_all, projector

MAX_CENTRAL_QUBITS = 6

MUB_TOL = 1e-12


@dataclass(frozen=True)
class MubTriple:
    """Three 2x2 observables squaring to I₂ with pairwise vanishing HS overlap."""

    obs: tuple[np.ndarray, np.ndarray, np.ndarray]

    def __post_init__(self) -> None:
        if len(self.obs) != 3:
            raise InputError("a MUB triple holds exactly three observables")
        for i, x in enumerate(self.obs):
            if x.shape != (2, 2):
                raise InputError(f"observable {i} must be 2x2, got {x.shape}")
            if np.max(np.abs(x - dagger(x))) > MUB_TOL:
                raise InputError(f"observable {i} is not Hermitian")
            if np.max(np.abs(x @ x - IDENT2)) > MUB_TOL:
                raise InputError(f"observable {i} does not square to the identity")
        for i in range(3):
            for j in range(i + 1, 3):
                overlap = abs(np.trace(self.obs[i] @ self.obs[j]))
                if overlap > MUB_TOL:
                    raise InputError(f"observables {i},{j} are not unbiased: Tr = {overlap:.2e}")

    @classmethod
    def default(cls) -> "MubTriple":
        """The Pauli triple (σx, σy, σz)."""
        return cls(obs=PAULIS)

    @classmethod
    def rotated(cls, u: np.ndarray) -> "MubTriple":
        """Pauli triple conjugated by a 2x2 unitary, for robustness tests."""
        u = np.asarray(u, dtype=complex)
        if u.shape != (2, 2) or np.max(np.abs(u @ dagger(u) - IDENT2)) > 1e-10:
            raise InputError("rotation must be a 2x2 unitary")
        return cls(obs=tuple(frozen(u @ s @ dagger(u)) for s in PAULIS))

    def observable(self, digit: int) -> np.ndarray:
        """Observable for setting digit 1..3; digit 0 is the identity (x⁰ = I₂)."""
        if digit == 0:
            return IDENT2
        if digit in (1, 2, 3):
            return self.obs[digit - 1]
        raise InvalidSettingError(f"setting digit must be in 0..3, got {digit}")

    def outcome_projector(self, digit: int, outcome: int) -> np.ndarray:
        """Projector (I₂ + (-1)^a x)/2 for outcome a of setting digit.

        For digit 0 this degenerates to I₂ (a=0) and 0 (a=1), which
        coarse-grains an unmeasured party without special-casing.
        """
        if outcome not in (0, 1):
            raise InputError(f"outcome must be 0 or 1, got {outcome}")
        return (IDENT2 + (-1) ** outcome * self.observable(digit)) / 2.0


def default_mub() -> MubTriple:
    return MubTriple.default()


# --- outcome bitstrings -------------------------------------------------------


def complement(bits: str) -> str:
    return "".join("1" if ch == "0" else "0" for ch in bits)


def _check_bits(n: int, bits: str) -> str:
    if len(bits) != n or any(ch not in "01" for ch in bits):
        raise InputError(f"outcome must be a {n}-bit string over 0/1, got {bits!r}")
    return bits


@dataclass(frozen=True)
class FixedMeasurement:
    """The 2^n GHZ-basis projectors, keyed by outcome bitstring."""

    n: int
    projectors: dict[str, np.ndarray]

    def outcomes(self) -> list[str]:
        return sorted(self.projectors)

    def __getitem__(self, bits: str) -> np.ndarray:
        return self.projectors[_check_bits(self.n, bits)]


@lru_cache(maxsize=None)
def ghz_projectors(n: int) -> FixedMeasurement:
    """GHZ-basis measurement on n qubits (n <= 6)."""
    if not 1 <= n <= MAX_CENTRAL_QUBITS:
        raise SizeLimitError(f"GHZ measurement supported for 1 <= n <= {MAX_CENTRAL_QUBITS}, got {n}")
    dim = 2**n
    projs: dict[str, np.ndarray] = {}
    for rest in product("01", repeat=n - 1):
        t = "0" + "".join(rest)
        tbar = complement(t)
        e_t = np.zeros(dim, dtype=complex)
        e_tbar = np.zeros(dim, dtype=complex)
        e_t[int(t, 2)] = 1.0
        e_tbar[int(tbar, 2)] = 1.0
        plus = (e_t + e_tbar) / np.sqrt(2.0)
        minus = (e_t - e_tbar) / np.sqrt(2.0)
        projs[t] = frozen(projector(plus))
        projs[tbar] = frozen(projector(minus))
    return FixedMeasurement(n=n, projectors=projs)


# --- setting strings ----------------------------------------------------------


def as_digits(settings: str | Sequence[int]) -> tuple[int, ...]:
    """Normalise a setting specification ('122' or [1,2,2]) to a digit tuple."""
    if isinstance(settings, str):
        if any(ch not in "0123" for ch in settings):
            raise InvalidSettingError(f"setting string must use digits 0-3, got {settings!r}")
        return tuple(int(ch) for ch in settings)
    digits = tuple(int(d) for d in settings)
    if any(d not in (0, 1, 2, 3) for d in digits):
        raise InvalidSettingError(f"setting digits must be in 0..3, got {digits}")
    return digits


def setting_class(settings: str | Sequence[int]) -> str:
    """Classify a setting string as 'C' or 'Cprime'; raise otherwise.

    C uses alphabet {1,2} with an even (possibly zero) number of 2s;
    C' uses alphabet {0,3} with an even, nonzero number of 3s.
    """
    digits = as_digits(settings)
    if all(d in (1, 2) for d in digits):
        if digits.count(2) % 2 == 0:
            return "C"
        raise InvalidSettingError(f"string {digits} has an odd number of 2s")
    if all(d in (0, 3) for d in digits):
        n3 = digits.count(3)
        if n3 % 2 == 0 and n3 > 0:
            return "Cprime"
        raise InvalidSettingError(f"string {digits} needs an even, nonzero number of 3s")
    raise InvalidSettingError(f"string {digits} mixes the C and C' alphabets")


@dataclass(frozen=True)
class SettingString:
    """A validated setting string together with its class tag."""

    digits: tuple[int, ...]
    cls: str

    @classmethod
    def parse(cls, settings: str | Sequence[int]) -> "SettingString":
        digits = as_digits(settings)
        return cls(digits=digits, cls=setting_class(digits))

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits)


def index_sets(n: int) -> tuple[list[str], list[str]]:
    """All class-C and class-C' strings of length n (n >= 2).

    |C| = 2^(n-1) and |C'| = 2^(n-1) - 1.
    """
    if n < 2:
        raise InputError(f"index sets need n >= 2, got {n}")
    c = ["".join(s) for s in product("12", repeat=n) if s.count("2") % 2 == 0]
    cprime = [
        "".join(s)
        for s in product("30", repeat=n)
        if s.count("3") % 2 == 0 and s.count("3") > 0
    ]
    return c, cprime


def diagonal_setting(n: int, digit: int) -> str:
    """The uniform string (i, i, .., i) used by the even-n and line inequalities."""
    if digit not in (1, 2, 3):
        raise InvalidSettingError(f"diagonal settings use digits 1..3, got {digit}")
    return str(digit) * n


# --- signed central observables ----------------------------------------------


def _digit_dot(weights: Sequence[int], bits: Sequence[int]) -> int:
    return sum(w * b for w, b in zip(weights, bits))


@lru_cache(maxsize=None)
def _y_operator_cached(n: int, digits: tuple[int, ...]) -> np.ndarray:
    cls = setting_class(digits)
    meas = ghz_projectors(n)
    dim = 2**n
    y = np.zeros((dim, dim), dtype=complex)
    if cls == "C":
        weights = [d - 1 for d in digits]
        for rest in product((0, 1), repeat=n - 1):
            t_bits = (0,) + rest
            t = "".join(str(b) for b in t_bits)
            sign = (-1) ** _digit_dot(weights, t_bits)
            y = y + sign * (meas[t] - meas[complement(t)])
    else:
        weights = list(digits)
        for rest in product((0, 1), repeat=n - 1):
            t_bits = (0,) + rest
            t = "".join(str(b) for b in t_bits)
            sign = (-1) ** _digit_dot(weights, t_bits)
            y = y + sign * (meas[t] + meas[complement(t)])
    return frozen(y)


def y_operator(n: int, settings: str | Sequence[int]) -> np.ndarray:
    """Signed central observable y^{i1..in} built from the GHZ projectors."""
    return _y_operator_cached(n, as_digits(settings))


def y_pauli_string(n: int, settings: str | Sequence[int]) -> tuple[int, np.ndarray]:
    """The same observable as a signed Pauli string: (sign, ⊗_k σ_{μ_k}).

    Independent construction route used by the factorised correlator
    and as the cross-check against the projector-sum definition.
    """
    digits = as_digits(settings)
    if len(digits) != n:
        raise InvalidSettingError(f"expected {n} digits, got {len(digits)}")
    cls = setting_class(digits)
    if cls == "C":
        sign = (-1) ** (digits.count(2) // 2)
        factors = [PAULIS[0] if d == 1 else PAULIS[1] for d in digits]
    else:
        sign = 1
        factors = [PAULIS[2] if d == 3 else IDENT2 for d in digits]
    return sign, kron_all(factors)


def pauli_sign(n: int, settings: str | Sequence[int]) -> int:
    """Sign relating y^{i1..in} to its positional Pauli string."""
    digits = as_digits(settings)
    try:
        cls = setting_class(digits)
    except InvalidSettingError:
        return 1  # product convention for strings outside C ∪ C'
    return (-1) ** (digits.count(2) // 2) if cls == "C" else 1


def sign_exponent(n: int, settings: str | Sequence[int], outcome: str) -> int:
    """Parity ℜ mod 2 attaching outcome b to the signed observable.

    ℜ = I·Δ + b1 for class C and ℜ = I0·Δ for class C', where Δ = b
    when b1 = 0 and Δ = b̄ when b1 = 1.
    """
    digits = as_digits(settings)
    if len(digits) != n:
        raise InvalidSettingError(f"expected {n} digits, got {len(digits)}")
    cls = setting_class(digits)
    bits = _check_bits(n, outcome)
    if bits[0] == "1":
        bits = complement(bits)
    delta = [int(ch) for ch in bits]
    if cls == "C":
        weights = [d - 1 for d in digits]
        return (_digit_dot(weights, delta) + int(outcome[0])) % 2
    return _digit_dot(list(digits), delta) % 2
