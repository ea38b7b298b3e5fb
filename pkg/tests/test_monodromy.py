"""Monodromy-type operators on tensor products and the submodule extraction."""

from fractions import Fraction

import pytest

from qlie.linalg import sp_matmul, sp_eq
from qlie.qring import LaurentPoly, RatFunc, h_derivative_at_zero
from qlie.rootdata import build_cartan, highest_root
from qlie.repbuild import adjoint_module, build_irrep
from qlie.classical import build_classical_module, classical_split_casimir_a1
from qlie.monodromy import (
    Monodromy,
    ObstructionDetected,
    adjoint_in_dual_tensor,
    casimir_exponent,
    dual_data,
    extract_A,
    module_data,
    monodromy_on_tensor,
    tensor_pair,
    verify_ad_submodule,
)

A1 = build_cartan("A", 1)
A2 = build_cartan("A", 2)


@pytest.fixture(scope="module")
def a1_fund():
    return build_irrep(A1, (1,))


@pytest.fixture(scope="module")
def a1_mono(a1_fund):
    return monodromy_on_tensor(a1_fund, a1_fund)


# ------------------------------------------------------------ Casimir exponents

@pytest.mark.parametrize("lam,value", [
    ((1,), Fraction(3, 2)),
    ((2,), Fraction(4)),
    ((0,), Fraction(0)),
    ((3,), Fraction(15, 2)),
])
def test_rank_one_casimir_exponents(lam, value):
    assert casimir_exponent(A1, lam) == value


@pytest.mark.parametrize("name,value", [
    (("A", 1), 4),   # simply laced: twice the dual Coxeter number
    (("A", 2), 6),
    (("A", 3), 8),
    (("B", 2), 12),  # scaled by (theta, theta)/2 when theta is long
    (("G", 2), 24),
])
def test_adjoint_casimir_exponents(name, value):
    cd = build_cartan(*name)
    assert casimir_exponent(cd, highest_root(cd)) == value


# ------------------------------------------------------------ operator structure

def test_two_by_two_eigenvalue_exponents(a1_mono):
    assert a1_mono.eigenvalue_q_exponents() == {Fraction(1), Fraction(-3)}
    assert a1_mono.shift == 0


def test_two_by_two_oracle_checks(a1_mono):
    assert a1_mono.checks == {"commutes": True, "vanishes_at_one": True}


def test_two_by_two_matrix_values(a1_mono):
    # diagonal blocks: scalar q on the triplet line, q^{-3} on the singlet part
    m = a1_mono.matrix
    q = RatFunc(LaurentPoly.v_power(2))
    assert m[(0, 0)] == q
    assert m[(3, 3)] == q
    # middle 2x2 block has trace q + q^{-3} and determinant q^{-2}
    tr = m[(1, 1)] + m[(2, 2)]
    det = m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)]
    assert tr == q + RatFunc(LaurentPoly.v_power(-6))
    assert det == RatFunc(LaurentPoly.v_power(-4))


def test_mixed_factors_eigenvalues(a1_fund):
    W = build_irrep(A1, (2,))
    M = monodromy_on_tensor(a1_fund, W)
    assert M.eigenvalue_q_exponents() == {Fraction(2), Fraction(-4)}
    assert M.checks["commutes"] and M.checks["vanishes_at_one"]


def test_minimal_polynomial_annihilates(a1_mono):
    # scalar on each isotypic piece: (M - q)(M - q^{-3}) = 0
    m = a1_mono.matrix
    q = RatFunc(LaurentPoly.v_power(2))
    qm3 = RatFunc(LaurentPoly.v_power(-6))
    first = {p: x for p, x in m.items()}
    for d in range(4):
        first[(d, d)] = first.get((d, d), RatFunc(0)) - q
    second = {p: x for p, x in m.items()}
    for d in range(4):
        second[(d, d)] = second.get((d, d), RatFunc(0)) - qm3
    prod = sp_matmul(first, second)
    assert all(x.is_zero() for x in prod.values())


def test_fractional_exponents_are_recorded_as_a_shift():
    V = build_irrep(A2, (1, 0))
    M = monodromy_on_tensor(V, V)
    assert M.shift == Fraction(2, 3)
    assert M.eigenvalue_q_exponents() == {Fraction(4, 3), Fraction(-8, 3)}
    assert M.checks["commutes"] and M.checks["vanishes_at_one"]


def test_adjoint_square_exponent_spectrum(pipelines):
    V = pipelines["A2"].module
    M = monodromy_on_tensor(V, V)
    assert M.shift == 0
    assert M.eigenvalue_q_exponents() == {
        Fraction(4), Fraction(0), Fraction(-6), Fraction(-12)}
    assert M.checks["commutes"] and M.checks["vanishes_at_one"]


def test_convention_record(a1_mono):
    for key in ("eigenvalue", "pairing", "coproduct", "base", "shift"):
        assert key in a1_mono.convention


# ------------------------------------------------------------ classical content

def test_difference_vanishes_classically(a1_mono):
    m1, classical = extract_A(a1_mono)
    for x in m1.values():
        assert x.eval_at_one() == 0
    assert any(classical.values())


def test_classical_part_is_the_split_casimir(a1_fund, a1_mono):
    _, classical = extract_A(a1_mono)
    W = build_classical_module(A1, (1,))
    oracle = classical_split_casimir_a1(W, W)
    assert classical == oracle


def test_classical_part_is_swap_symmetric(a1_mono):
    _, classical = extract_A(a1_mono)
    for (r, c), x in classical.items():
        ra, rb = divmod(r, 2)
        ca, cb = divmod(c, 2)
        assert classical.get((rb * 2 + ra, cb * 2 + ca)) == x


def test_entrywise_derivative_matches_extract(a1_mono):
    m1, classical = extract_A(a1_mono)
    for p, x in m1.items():
        assert h_derivative_at_zero(x) == classical.get(p, Fraction(0))


# ----------------------------------------------------------- submodule extraction

def test_dual_module_satisfies_the_relations(a1_fund):
    star = dual_data(a1_fund)
    E, F = star.E[0], star.F[0]
    lhs = {}
    for (r, c), x in sp_matmul(E, F).items():
        lhs[(r, c)] = lhs.get((r, c), RatFunc(0)) + x
    for (r, c), x in sp_matmul(F, E).items():
        lhs[(r, c)] = lhs.get((r, c), RatFunc(0)) - x
    lhs = {p: x for p, x in lhs.items() if not x.is_zero()}
    for (r, c), x in lhs.items():
        assert r == c
        w = star.weights[r][0]
        num = LaurentPoly.v_power(2 * w) - LaurentPoly.v_power(-2 * w)
        den = LaurentPoly.v_power(2) - LaurentPoly.v_power(-2)
        assert x == RatFunc(num, den)


def test_dual_weights_are_negated(a1_fund):
    star = dual_data(a1_fund)
    assert star.weights == [(-1,), (1,)]


def test_adjoint_sits_inside_dual_tensor(a1_fund):
    adj, table = adjoint_in_dual_tensor(a1_fund)
    assert adj.dim == 3
    assert len(table) == 3
    for col in table:
        assert any(not x.is_zero() for x in col.values())


@pytest.mark.parametrize("factors", [((1,), (1,)), ((1,), (2,))])
def test_rank_one_submodule_spans_the_adjoint(factors, a1_fund):
    lam, mu = factors
    V = a1_fund if lam == (1,) else build_irrep(A1, lam)
    W = a1_fund if mu == (1,) else build_irrep(A1, mu)
    M = monodromy_on_tensor(V, W)
    rep = verify_ad_submodule(M, V, W)
    assert rep["all"], rep
    assert rep["span_dim"] == 3


def test_rank_two_vector_submodule(pipelines):
    V = build_irrep(A2, (1, 0))
    M = monodromy_on_tensor(V, V)
    rep = verify_ad_submodule(M, V, V)
    assert rep["all"], rep
    assert rep["span_dim"] == 8


def test_rank_two_adjoint_submodule(pipelines):
    V = pipelines["A2"].module
    M = monodromy_on_tensor(V, V)
    rep = verify_ad_submodule(M, V, V)
    assert rep["ad_e"] and rep["ad_f"] and rep["ad_k"]
    assert rep["span_dim"] == 8


def test_budget_guard():
    V = build_irrep(A2, (1, 1))
    with pytest.raises(Exception):
        monodromy_on_tensor(V, V, budget_dim=3)
