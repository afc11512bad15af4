"""Steering and genuine-steering inequalities on star networks.

Implemented inequality families (LHS vs classical bound; violation
margin tolerance 1e-9):

====================  ============================  =====================
id                    LHS                           bound
====================  ============================  =====================
T1_LINE   (n = 2)     Σ_{i=1..3} |⟨x^i y^i z^i⟩|    1
T2A_ODD_SQ            Σ_C |corr|^{2/n}              2^{n-2}
T2A_ODD_ROOT          Σ_C |corr|^{1/n}              2^{n-2}·√2
T2A_EVEN_SQ           best pair of diagonals,       1
                      Σ |corr|^{2/n}
T2A_EVEN_ROOT         same, exponent 1/n            √2
T2B_ODD_SQ            Σ_{C∪C'} |corr|^{2/n}         2^{n-1} - 1
T2B_ODD_ROOT          Σ_{C∪C'} |corr|^{1/n}         2^{n-2}·√3 + 2^{n-2} - 1
T2B_EVEN_SQ           Σ_{i=1..3} |corr(i..i)|^{2/n} 1
T2B_EVEN_ROOT         same, exponent 1/n            √3
T3_CHSH               Σ_{i=1..4} |J_i|^{1/n}        4
T4_GEN_2SET (n >= 3)  Σ_C |corr|^{1/2}              2^{n-2}·√2
T4_GEN_3SET (n >= 3)  Σ_{C∪C'} |corr|^{1/2}         2^{n-2}·√3 + 2^{n-2} - 1
====================  ============================  =====================

The odd-n and even-n branches are distinct code paths selected by the
network's parity rather than a unified formula, which prevents silent
misuse.  The even-n two-setting LHS takes the maximum over the three
pairings of MUB directions (a relabelling of which two settings are
used).

For T3 the four central observables are the conjugated signed MUB sums
⊗_k (±x¹ ± x² ± x³)* normalised by operator norm (√3 per factor) so
that |⟨B_i⟩| <= 1; conjugation aligns them with the edge triples
through |φ⁺⟩-type sources.  The edge factors stay unnormalised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .correlators import MAX_DENSE_PAIRS, _real_expectation, correlator
from .errors import InputError, SizeLimitError
from .linalg import kron, kron_all
from .measurements import MubTriple, default_mub, diagonal_setting, index_sets
from .states import StarNetwork, assemble_global

VIOLATION_TOL = 1e-9

_EVEN_PAIRS = ((1, 2), (1, 3), (2, 3))
_T3_SIGNS = ((1, 1, 1), (1, 1, -1), (1, -1, 1), (-1, 1, 1))


class InequalityId(str, Enum):
    T1_LINE = "T1_LINE"
    T2A_ODD_SQ = "T2A_ODD_SQ"
    T2A_ODD_ROOT = "T2A_ODD_ROOT"
    T2A_EVEN_SQ = "T2A_EVEN_SQ"
    T2A_EVEN_ROOT = "T2A_EVEN_ROOT"
    T2B_ODD_SQ = "T2B_ODD_SQ"
    T2B_ODD_ROOT = "T2B_ODD_ROOT"
    T2B_EVEN_SQ = "T2B_EVEN_SQ"
    T2B_EVEN_ROOT = "T2B_EVEN_ROOT"
    T3_CHSH = "T3_CHSH"
    T4_GEN_2SET = "T4_GEN_2SET"
    T4_GEN_3SET = "T4_GEN_3SET"


@dataclass(frozen=True)
class InequalityReport:
    id: InequalityId
    n: int
    settings_count: int
    form: str | None
    lhs: float
    bound: float

    @property
    def margin(self) -> float:
        return self.lhs - self.bound

    @property
    def violated(self) -> bool:
        return self.margin > VIOLATION_TOL

    def to_dict(self) -> dict:
        return {
            "id": self.id.value,
            "n": self.n,
            "settings_count": self.settings_count,
            "form": self.form,
            "lhs": self.lhs,
            "bound": self.bound,
            "margin": self.margin,
            "violated": self.violated,
        }


def bound_value(ineq: InequalityId, n: int) -> float:
    """Classical bound of an inequality at network size n."""
    if ineq is InequalityId.T1_LINE:
        return 1.0
    if ineq is InequalityId.T2A_ODD_SQ:
        return 2.0 ** (n - 2)
    if ineq is InequalityId.T2A_ODD_ROOT:
        return 2.0 ** (n - 2) * math.sqrt(2.0)
    if ineq is InequalityId.T2A_EVEN_SQ:
        return 1.0
    if ineq is InequalityId.T2A_EVEN_ROOT:
        return math.sqrt(2.0)
    if ineq is InequalityId.T2B_ODD_SQ:
        return 2.0 ** (n - 1) - 1.0
    if ineq is InequalityId.T2B_ODD_ROOT:
        return 2.0 ** (n - 2) * math.sqrt(3.0) + 2.0 ** (n - 2) - 1.0
    if ineq is InequalityId.T2B_EVEN_SQ:
        return 1.0
    if ineq is InequalityId.T2B_EVEN_ROOT:
        return math.sqrt(3.0)
    if ineq is InequalityId.T3_CHSH:
        return 4.0
    if ineq is InequalityId.T4_GEN_2SET:
        return 2.0 ** (n - 2) * math.sqrt(2.0)
    if ineq is InequalityId.T4_GEN_3SET:
        return 2.0 ** (n - 2) * math.sqrt(3.0) + 2.0 ** (n - 2) - 1.0
    raise InputError(f"unknown inequality {ineq!r}")


def settings_count_of(ineq: InequalityId) -> int:
    if ineq in (InequalityId.T2A_ODD_SQ, InequalityId.T2A_ODD_ROOT,
                InequalityId.T2A_EVEN_SQ, InequalityId.T2A_EVEN_ROOT,
                InequalityId.T4_GEN_2SET):
        return 2
    return 3


def form_of(ineq: InequalityId) -> str | None:
    name = ineq.value
    if name.endswith("_SQ"):
        return "squared"
    if name.endswith("_ROOT"):
        return "root"
    return None


def exponent_of(ineq: InequalityId, n: int) -> float:
    if ineq is InequalityId.T1_LINE:
        return 1.0
    if ineq in (InequalityId.T4_GEN_2SET, InequalityId.T4_GEN_3SET):
        return 0.5
    if form_of(ineq) == "squared":
        return 2.0 / n
    return 1.0 / n  # root forms and T3


def term_strings(ineq: InequalityId, n: int) -> list[str]:
    """Setting strings entering an inequality LHS (except T3 and the even pairs)."""
    if ineq is InequalityId.T1_LINE:
        return [diagonal_setting(2, i) for i in (1, 2, 3)]
    c, cprime = index_sets(n)
    if ineq in (InequalityId.T2A_ODD_SQ, InequalityId.T2A_ODD_ROOT, InequalityId.T4_GEN_2SET):
        return c
    if ineq in (InequalityId.T2B_ODD_SQ, InequalityId.T2B_ODD_ROOT, InequalityId.T4_GEN_3SET):
        return c + cprime
    if ineq in (InequalityId.T2B_EVEN_SQ, InequalityId.T2B_EVEN_ROOT):
        return [diagonal_setting(n, i) for i in (1, 2, 3)]
    raise InputError(f"{ineq.value} has no single term-string list")


def applicable_ids(n: int) -> list[InequalityId]:
    """Inequalities evaluable on an n-party star network."""
    ids: list[InequalityId] = []
    if n == 2:
        ids.append(InequalityId.T1_LINE)
    if n % 2 == 1 and n >= 3:
        ids += [InequalityId.T2A_ODD_SQ, InequalityId.T2A_ODD_ROOT,
                InequalityId.T2B_ODD_SQ, InequalityId.T2B_ODD_ROOT]
    if n % 2 == 0:
        ids += [InequalityId.T2A_EVEN_SQ, InequalityId.T2A_EVEN_ROOT,
                InequalityId.T2B_EVEN_SQ, InequalityId.T2B_EVEN_ROOT]
    ids.append(InequalityId.T3_CHSH)
    if n >= 3:
        ids += [InequalityId.T4_GEN_2SET, InequalityId.T4_GEN_3SET]
    return ids


def check_n(ineq: InequalityId, n: int) -> None:
    if ineq is InequalityId.T1_LINE and n != 2:
        raise InputError(f"{ineq.value} is defined for n = 2, got n = {n}")
    if "ODD" in ineq.value and n % 2 == 0:
        raise InputError(f"{ineq.value} needs odd n, got n = {n}")
    if "EVEN" in ineq.value and n % 2 == 1:
        raise InputError(f"{ineq.value} needs even n, got n = {n}")
    if "ODD" in ineq.value and n < 3:
        raise InputError(f"{ineq.value} needs n >= 3, got n = {n}")
    if ineq in (InequalityId.T4_GEN_2SET, InequalityId.T4_GEN_3SET) and n < 3:
        raise InputError(f"{ineq.value} needs n >= 3, got n = {n}")
    if ineq is InequalityId.T3_CHSH and n < 2:
        raise InputError(f"{ineq.value} needs n >= 2, got n = {n}")


def _use_fast(net: StarNetwork, mub: MubTriple | None, method: str) -> bool:
    if method == "fast":
        return True
    if method == "dense":
        return False
    if method != "auto":
        raise InputError(f"method must be auto|dense|fast, got {method!r}")
    return mub is None and net.is_structured


def _sum_terms(
    net: StarNetwork,
    strings: Sequence[str],
    exponent: float,
    mub: MubTriple | None,
    method: str,
) -> float:
    fast = _use_fast(net, mub, method)
    rho_global = None if fast else assemble_global(net)
    total = 0.0
    for s in strings:
        value = correlator(net, s, mub, rho_global=rho_global,
                           method="fast" if fast else "dense")
        total += abs(value) ** exponent
    return total


def evaluate(
    net: StarNetwork,
    ineq: InequalityId | str,
    mub: MubTriple | None = None,
    *,
    method: str = "auto",
) -> InequalityReport:
    """Evaluate one inequality on a network and report LHS, bound and margin."""
    ineq = InequalityId(ineq)
    n = net.n
    check_n(ineq, n)
    if ineq is InequalityId.T3_CHSH:
        return eval_theorem3(net, mub, method=method)

    e = exponent_of(ineq, n)
    if ineq in (InequalityId.T2A_EVEN_SQ, InequalityId.T2A_EVEN_ROOT):
        # Relabelling freedom: the two measured directions are the best pair.
        lhs = max(
            _sum_terms(net, [diagonal_setting(n, i), diagonal_setting(n, j)], e, mub, method)
            for i, j in _EVEN_PAIRS
        )
    else:
        lhs = _sum_terms(net, term_strings(ineq, n), e, mub, method)
    return InequalityReport(
        id=ineq,
        n=n,
        settings_count=settings_count_of(ineq),
        form=form_of(ineq),
        lhs=lhs,
        bound=bound_value(ineq, n),
    )


def eval_theorem1(net: StarNetwork, mub: MubTriple | None = None, *,
                  method: str = "auto") -> InequalityReport:
    """Line-network inequality Σ_i |⟨x^i ⊗ y^i ⊗ z^i⟩| <= 1 (n = 2)."""
    return evaluate(net, InequalityId.T1_LINE, mub, method=method)


def eval_theorem2(
    net: StarNetwork,
    settings_count: int,
    form: str,
    mub: MubTriple | None = None,
    *,
    method: str = "auto",
) -> InequalityReport:
    """Fixed-measurement steering inequality, branch chosen by the parity of n."""
    if settings_count not in (2, 3):
        raise InputError(f"settings_count must be 2 or 3, got {settings_count}")
    if form not in ("squared", "root"):
        raise InputError(f"form must be 'squared' or 'root', got {form!r}")
    parity = "EVEN" if net.n % 2 == 0 else "ODD"
    part = "T2A" if settings_count == 2 else "T2B"
    suffix = "SQ" if form == "squared" else "ROOT"
    return evaluate(net, InequalityId(f"{part}_{parity}_{suffix}"), mub, method=method)


def eval_theorem3(net: StarNetwork, mub: MubTriple | None = None, *,
                  method: str = "auto") -> InequalityReport:
    """Four-measurement criterion |J1|^{1/n} + .. + |J4|^{1/n} <= 4."""
    n = net.n
    check_n(InequalityId.T3_CHSH, n)
    fast = _use_fast(net, mub, method)
    if fast:
        # Per pair, ⟨(Σ±σ) ⊗ (Σ±σ)*⟩ = c1 - c2 + c3 for every sign pattern
        # (conjugation flips σy), so the four J coincide.
        per_pair = [
            (src.bell_c[0] - src.bell_c[1] + src.bell_c[2]) / math.sqrt(3.0)
            for src in net.sources
        ]
        j = float(np.prod(per_pair))
        js = [j] * 4
    else:
        if n > MAX_DENSE_PAIRS:
            raise SizeLimitError(f"dense path limited to n <= {MAX_DENSE_PAIRS}, got n = {n}")
        triple = default_mub() if mub is None else mub
        rho = assemble_global(net)
        js = []
        for signs in _T3_SIGNS:
            edge_factor = sum(s * x for s, x in zip(signs, triple.obs))
            central_factor = edge_factor.conj() / math.sqrt(3.0)
            op = kron(kron_all([edge_factor] * n), kron_all([central_factor] * n))
            js.append(_real_expectation(complex(np.einsum("ij,ji->", op, rho)), "J"))
    lhs = sum(abs(j) ** (1.0 / n) for j in js)
    return InequalityReport(
        id=InequalityId.T3_CHSH,
        n=n,
        settings_count=3,
        form=None,
        lhs=lhs,
        bound=4.0,
    )


def eval_theorem4(
    net: StarNetwork,
    settings_count: int,
    mub: MubTriple | None = None,
    *,
    method: str = "auto",
) -> InequalityReport:
    """Genuine-steering inequality (square-root exponent), n >= 3."""
    if settings_count not in (2, 3):
        raise InputError(f"settings_count must be 2 or 3, got {settings_count}")
    ineq = InequalityId.T4_GEN_2SET if settings_count == 2 else InequalityId.T4_GEN_3SET
    return evaluate(net, ineq, mub, method=method)
