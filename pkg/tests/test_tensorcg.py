"""Tensor squares, highest-weight spaces, antisymmetrization and inversion."""

import json

import pytest

from qlie.linalg import rf_rank, sp_matvec
from qlie.qring import RatFunc, q_int
from qlie.rootdata import build_cartan, highest_root, tensor_multiplicity
from qlie.repbuild import adjoint_module
from qlie.tensorcg import (
    ClassicallyZero,
    EmptySpace,
    SingularSystem,
    antisymmetrize_hw,
    cg_embedding,
    highest_weight_space,
    invert_cg,
    symmetrize_hw,
    tensor_square,
    verify_embedding,
)

from conftest import CORE, load_golden, name_to_cartan


@pytest.fixture(scope="module")
def a1_tensor():
    return tensor_square(adjoint_module(build_cartan("A", 1)))


def dense_rank(mat, dim):
    rows = {}
    for (r, c), x in mat.items():
        rows.setdefault(r, {})[c] = x
    return rf_rank([[rows.get(r, {}).get(c, RatFunc(0)) for c in range(dim)] for r in sorted(rows)])


def test_a1_coproduct_raising_rank(a1_tensor):
    # 3x3 -> 5 + 3 + 1: the raising operator has a 3-dimensional kernel
    assert dense_rank(a1_tensor.dE[0], 9) == 6


def test_tensor_weights_are_sums(a1_tensor):
    V = adjoint_module(build_cartan("A", 1))
    for a in range(3):
        for b in range(3):
            p = 3 * a + b
            assert a1_tensor.weights[p] == (V.weights[a][0] + V.weights[b][0],)


def test_coproduct_commutator_identity(a1_tensor):
    from qlie.linalg import sp_matmul, sp_sub, sp_eq

    T = a1_tensor
    lhs = sp_sub(sp_matmul(T.dE[0], T.dF[0]), sp_matmul(T.dF[0], T.dE[0]))
    rhs = {}
    for p in range(9):
        w = T.weights[p][0]
        if w:
            rhs[(p, p)] = RatFunc(q_int(w, 1))
    assert sp_eq(lhs, rhs)


@pytest.mark.parametrize("name", CORE)
def test_highest_weight_space_dimension(name, pipelines, cartan):
    cd = cartan[name]
    theta = highest_root(cd)
    assert len(pipelines[name].hw_basis) == tensor_multiplicity(cd, theta, theta, theta)


@pytest.mark.parametrize("name", CORE)
def test_highest_weight_vectors_are_killed(name, pipelines):
    pipe = pipelines[name]
    for vec in pipe.hw_basis:
        for i in pipe.tensor.dE:
            assert sp_matvec(pipe.tensor.dE[i], vec) == {}


@pytest.mark.parametrize("name", CORE)
def test_highest_weight_vectors_are_regular_at_one(name, pipelines):
    for vec in pipelines[name].hw_basis:
        vals = [x.eval_at_one() for x in vec.values()]
        assert any(vals)


@pytest.mark.parametrize("w", [(-2,), (5,)])
def test_empty_highest_weight_space(w, a1_tensor):
    with pytest.raises(EmptySpace):
        highest_weight_space(a1_tensor, w)


def test_antisymmetrize_fixed_line_for_multiplicity_one(a1_tensor):
    hs = highest_weight_space(a1_tensor, (2,))
    assert len(hs.basis) == 1
    u = hs.basis[0]
    anti = antisymmetrize_hw(a1_tensor, u)
    # multiplicity one: the antisymmetrization stays on the same line
    pairs = set(u) | set(anti)
    items = sorted(pairs)
    p0 = items[0]
    for p in items[1:]:
        lhs = u.get(p0, RatFunc(0)) * anti.get(p, RatFunc(0))
        rhs = u.get(p, RatFunc(0)) * anti.get(p0, RatFunc(0))
        assert lhs == rhs


def test_antisymmetrize_rejects_classically_symmetric_input(a1_tensor):
    V = adjoint_module(build_cartan("A", 1))
    sym = {3 * 0 + 1: RatFunc(1), 3 * 1 + 0: RatFunc(1)}  # v0 (x) v1 + v1 (x) v0
    with pytest.raises(ClassicallyZero):
        antisymmetrize_hw(a1_tensor, sym)


def test_symmetrize_vanishes_on_the_antisymmetric_line(a1_tensor):
    # multiplicity one: the highest-weight line is classically antisymmetric
    hs = highest_weight_space(a1_tensor, (2,))
    with pytest.raises(ClassicallyZero):
        symmetrize_hw(a1_tensor, hs.basis[0])


def test_symmetric_member_is_swap_bar_even(pipelines):
    pipe = pipelines["A2"]
    dim = pipe.module.dim
    assert len(pipe.others) == 1
    sym = pipe.others[0]
    for p, x in sym.items():
        a, b = divmod(p, dim)
        q = dim * b + a
        assert sym[q].qconjugate() == x


def test_antisym_vector_is_swap_bar_odd(a1_tensor):
    hs = highest_weight_space(a1_tensor, (2,))
    anti = antisymmetrize_hw(a1_tensor, hs.basis[0])
    for p, x in anti.items():
        a, b = divmod(p, 3)
        q = 3 * b + a
        assert anti[q].qconjugate() == -x


def test_a2_antisymmetrized_vector_matches_golden(pipelines, golden_dir):
    golden = load_golden(golden_dir, "a2_antisym_hw.json")
    anti = pipelines["A2"].antisym
    assert {str(p): x.to_json() for p, x in sorted(anti.items())} == golden


@pytest.mark.parametrize("name", CORE)
def test_embedding_intertwines(name, pipelines):
    assert verify_embedding(pipelines[name].embedding)


@pytest.mark.parametrize("name", CORE)
def test_embedding_table_is_q_antisymmetric(name, pipelines):
    pipe = pipelines[name]
    dim = pipe.module.dim
    for a in range(dim):
        col = pipe.embedding.table[a]
        for p, x in col.items():
            b, c = divmod(p, dim)
            swapped = col.get(dim * c + b, RatFunc(0))
            assert swapped.qconjugate() == -x


@pytest.mark.parametrize("name", CORE)
def test_embedding_is_classically_nonzero(name, pipelines):
    pipe = pipelines[name]
    for a in range(pipe.module.dim):
        assert any(x.eval_at_one() != 0 for x in pipe.embedding.table[a].values())


def test_inversion_left_inverts_the_embedding(pipelines):
    pipe = pipelines["A2"]
    dim = pipe.module.dim
    constants = pipe.constants
    for a in range(dim):
        out = {}
        for p, x in pipe.embedding.table[a].items():
            b, c = divmod(p, dim)
            for d in range(dim):
                f = constants.get((b, c, d))
                if f is not None:
                    out[d] = out.get(d, RatFunc(0)) + x * f
        for d in range(dim):
            expect = RatFunc(1) if d == a else RatFunc(0)
            assert out.get(d, RatFunc(0)) == expect


def test_duplicate_complement_members_are_singular(pipelines):
    pipe = pipelines["A1"]
    with pytest.raises(SingularSystem):
        invert_cg(pipe.module, pipe.embedding, [pipe.antisym])


def test_multiplicity_two_complement_annihilates(pipelines):
    # rank >= 2 A-series: bracket of the symmetric member must vanish
    pipe = pipelines["A2"]
    dim = pipe.module.dim
    constants = pipe.constants
    assert pipe.others
    for other in pipe.others:
        for d in range(dim):
            acc = RatFunc(0)
            for p, x in other.items():
                b, c = divmod(p, dim)
                f = constants.get((b, c, d))
                if f is not None:
                    acc = acc + x * f
            assert acc == RatFunc(0)


def test_embedding_json_friendly(pipelines):
    table = pipelines["A1"].embedding.table
    blob = json.dumps({str(a): {str(p): x.to_json() for p, x in col.items()} for a, col in enumerate(table)})
    assert blob
