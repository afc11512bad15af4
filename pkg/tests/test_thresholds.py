import math

import pytest

from starsteer.errors import InputError, NoCrossingError
from starsteer.inequalities import InequalityId, bound_value
from starsteer.states import make_bell_diagonal, star_network, werner_network
from starsteer.thresholds import (
    GENUINE_ENTANGLEMENT_N3,
    N_LOCALITY_3SET,
    N_LOCALITY_4SET,
    bisect_threshold,
    genuine_equation_lhs,
    odd_n_equation_lhs,
    reproduction_table,
    solve_genuine_equation,
    solve_odd_n_equation,
    werner_threshold,
)

I = InequalityId

WERNER_CASES = [
    (2, I.T2B_EVEN_SQ, 1 / math.sqrt(3)),
    (2, I.T2A_EVEN_SQ, 1 / math.sqrt(2)),
    (4, I.T2A_EVEN_SQ, 1 / math.sqrt(2)),
    (3, I.T2B_ODD_ROOT, 0.589),
    (2, I.T3_CHSH, math.sqrt(3) / 3),
    (3, I.T4_GEN_2SET, 2 ** (-1 / 3)),
    (3, I.T4_GEN_3SET, 0.703),
    (4, I.T4_GEN_3SET, 0.769),
]


@pytest.mark.parametrize("n,ineq,expected", WERNER_CASES)
def test_werner_thresholds_dense_bisection(n, ineq, expected):
    result = werner_threshold(n, ineq)
    assert abs(result.p_star - expected) < 1e-3
    assert result.residual <= 1e-8
    assert result.iterations <= 200
    assert 0.0 <= result.p_star <= 1.0
    assert result.bound == bound_value(ineq, n)


def test_solve_odd_n_equation():
    assert abs(solve_odd_n_equation(3) - 0.589) < 1e-3
    # Regression fixture for the next odd size (bracketed root, recorded value).
    assert abs(solve_odd_n_equation(5) - 0.5915724942471533) < 1e-9
    assert odd_n_equation_lhs(3, 0.0) == 0.0
    with pytest.raises(InputError):
        solve_odd_n_equation(4)


def test_solve_genuine_equation():
    assert solve_genuine_equation(3, 2) == 2 ** (-1 / 3)
    assert abs(solve_genuine_equation(3, 2) - 0.79370) < 1e-4
    assert abs(solve_genuine_equation(3, 3) - 0.703) < 1e-3
    assert abs(solve_genuine_equation(4, 3) - 0.769) < 1e-3
    with pytest.raises(InputError):
        solve_genuine_equation(2, 3)
    with pytest.raises(InputError):
        solve_genuine_equation(3, 4)


def test_solved_roots_are_fixed_points():
    rhs3 = 2 * math.sqrt(3) + 1
    p = solve_odd_n_equation(3)
    assert abs(odd_n_equation_lhs(3, p) - rhs3) < 1e-9
    for n in (3, 4):
        rhs = 2.0 ** (n - 2) * math.sqrt(3) + 2.0 ** (n - 2) - 1
        p = solve_genuine_equation(n, 3)
        assert abs(genuine_equation_lhs(n, p) - rhs) < 1e-9


def test_bisection_agrees_with_closed_forms():
    assert abs(werner_threshold(3, I.T2B_ODD_ROOT).p_star - solve_odd_n_equation(3)) < 1e-4
    assert abs(werner_threshold(3, I.T4_GEN_2SET).p_star - solve_genuine_equation(3, 2)) < 1e-4
    assert abs(werner_threshold(3, I.T4_GEN_3SET).p_star - solve_genuine_equation(3, 3)) < 1e-4
    assert abs(werner_threshold(4, I.T4_GEN_3SET).p_star - solve_genuine_equation(4, 3)) < 1e-4


def test_no_crossing_error():
    # A family too noisy to ever violate: LHS stays below the bound on [0, 1].
    def family(p):
        src = make_bell_diagonal(0.5 * p, -0.5 * p, 0.5 * p)
        return star_network([src, src])

    with pytest.raises(NoCrossingError):
        bisect_threshold(family, I.T2B_EVEN_SQ)


def test_non_monotone_scan_warns():
    # Dips near p=0 but still crosses once overall.
    def family(p):
        return werner_network(abs(p - 0.1) / 0.9, 2)

    with pytest.warns(UserWarning, match="decreases"):
        result = bisect_threshold(family, I.T2B_EVEN_SQ, grid_points=41)
    assert result.residual <= 1e-8


def test_ordering_against_cited_constants():
    computed = [
        werner_threshold(2, I.T2B_EVEN_SQ).p_star,
        solve_odd_n_equation(3),
        werner_threshold(2, I.T2A_EVEN_SQ).p_star,
        werner_threshold(2, I.T3_CHSH).p_star,
    ]
    for p_star in computed:
        assert p_star < N_LOCALITY_4SET < N_LOCALITY_3SET


def test_reproduction_table_rows():
    rows = reproduction_table()
    computed = {
        (r["inequality"], r["n"], r["settings"]): r["p_star"]
        for r in rows
        if r["source_tag"] == "computed"
    }
    assert abs(computed[("T2B_EVEN_SQ", 2, 3)] - 1 / math.sqrt(3)) < 1e-3
    assert abs(computed[("T2A_EVEN_SQ", 2, 2)] - 1 / math.sqrt(2)) < 1e-3
    assert abs(computed[("T2A_EVEN_SQ", 4, 2)] - 1 / math.sqrt(2)) < 1e-3
    assert abs(computed[("T2B_ODD_ROOT", 3, 3)] - 0.589) < 1e-3
    assert abs(computed[("T3_CHSH", 2, 3)] - math.sqrt(3) / 3) < 1e-3
    assert abs(computed[("T4_GEN_2SET", 3, 2)] - 0.7937) < 1e-3
    assert abs(computed[("T4_GEN_3SET", 3, 3)] - 0.703) < 1e-3
    assert abs(computed[("T4_GEN_3SET", 4, 3)] - 0.769) < 1e-3
    cited = [r for r in rows if r["source_tag"] == "paper-cited"]
    cited_values = sorted(r["p_star"] for r in cited)
    assert cited_values == sorted([N_LOCALITY_3SET, N_LOCALITY_4SET, GENUINE_ENTANGLEMENT_N3])


def test_threshold_result_serialization():
    result = werner_threshold(2, I.T2B_EVEN_SQ)
    d = result.to_dict()
    assert d["family"] == "werner"
    assert d["source_tag"] == "computed"
    assert set(d) >= {"inequality", "n", "settings", "form", "p_star", "residual", "bound"}
