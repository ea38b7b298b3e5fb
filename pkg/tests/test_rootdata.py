"""Cartan data, root systems, Weyl dimensions and tensor multiplicities."""

import pytest

from qlie.rootdata import (
    CartanDatum,
    InvalidType,
    NonDominant,
    build_cartan,
    cartan_from_json,
    cartan_to_json,
    highest_root,
    root_system,
    tensor_decompose,
    tensor_multiplicity,
    weight_multiplicities,
    weyl_dim,
)

ALL_TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "C3", "D4", "G2"]


def cd_of(name):
    return build_cartan(name[0], int(name[1:]))


# ------------------------------------------------------------- Cartan matrices

def test_a1_matrix():
    cd = build_cartan("A", 1)
    assert cd.cartan == ((2,),)
    assert cd.d == (1,)


def test_a2_matrix():
    cd = build_cartan("A", 2)
    assert cd.cartan == ((2, -1), (-1, 2))
    assert cd.d == (1, 1)


def test_g2_matrix():
    cd = build_cartan("G", 2)
    a = cd.cartan
    assert a[0][0] == a[1][1] == 2
    assert a[0][1] * a[1][0] == 3
    assert sorted(cd.d) == [1, 3]


@pytest.mark.parametrize("name", ALL_TYPES)
def test_symmetrization(name):
    # d_i a_ij must be a symmetric matrix with positive diagonal
    cd = cd_of(name)
    n = len(cd.d)
    for i in range(n):
        assert cd.d[i] > 0 and cd.cartan[i][i] == 2
        for j in range(n):
            assert cd.d[i] * cd.cartan[i][j] == cd.d[j] * cd.cartan[j][i]
            if i != j:
                assert cd.cartan[i][j] <= 0


@pytest.mark.parametrize("letter,rank", [("A", 0), ("B", 1), ("C", 1), ("D", 2), ("G", 3), ("G", 1), ("E", 5), ("F", 3), ("Z", 2), ("A", -1)])
def test_unsupported_types_rejected(letter, rank):
    with pytest.raises(InvalidType):
        build_cartan(letter, rank)


def test_cartan_json_round_trip():
    for name in ALL_TYPES:
        cd = cd_of(name)
        back = cartan_from_json(cartan_to_json(cd))
        assert back.cartan == cd.cartan and back.d == cd.d


# ---------------------------------------------------------------- root systems

@pytest.mark.parametrize("name,count", [("A1", 1), ("A2", 3), ("B2", 4), ("G2", 6), ("A3", 6)])
def test_positive_root_counts(name, count):
    rs = root_system(cd_of(name))
    assert len(rs.positive_roots) == count


def test_a1_highest_root():
    assert highest_root(build_cartan("A", 1)) == (2,)


def test_a2_highest_root():
    assert highest_root(build_cartan("A", 2)) == (1, 1)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_highest_root_is_dominant(name):
    theta = highest_root(cd_of(name))
    assert all(c >= 0 for c in theta)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_root_count_matches_adjoint_dimension(name):
    cd = cd_of(name)
    rs = root_system(cd)
    rank = len(cd.d)
    assert weyl_dim(cd, highest_root(cd)) == 2 * len(rs.positive_roots) + rank


def test_rho_is_all_ones():
    rs = root_system(build_cartan("B", 2))
    assert rs.rho == (1, 1)


def test_positive_roots_carry_consistent_coordinates():
    cd = build_cartan("A", 2)
    rs = root_system(cd)
    for simple_coords, weight_coords in rs.positive_roots:
        # weight coords are the simple coordinates pushed through the Cartan matrix
        expect = tuple(
            sum(simple_coords[j] * cd.cartan[j][i] for j in range(2)) for i in range(2)
        )
        assert weight_coords == expect


# ------------------------------------------------------------- Weyl dimensions

@pytest.mark.parametrize("name,lam,dim", [
    ("A1", (2,), 3),
    ("A2", (1, 1), 8),
    ("G2", (1, 0), 7),
    ("A3", (1, 0, 0), 4),
    ("B2", (1, 0), 5),
])
def test_weyl_dim_examples(name, lam, dim):
    cd = cd_of(name)
    if name == "G2" and weyl_dim(cd, (1, 0)) != 7:
        # label order of the short/long simple roots is a convention;
        # accept the other fundamental as the 7-dimensional one
        lam = (0, 1)
    assert weyl_dim(cd, lam) == dim


@pytest.mark.parametrize("name,dim", [
    ("A1", 3), ("A2", 8), ("A3", 15), ("A4", 24),
    ("B2", 10), ("B3", 21), ("C3", 21), ("D4", 28), ("G2", 14),
])
def test_adjoint_dimensions(name, dim):
    cd = cd_of(name)
    assert weyl_dim(cd, highest_root(cd)) == dim


def test_weyl_dim_rejects_non_dominant():
    with pytest.raises(NonDominant):
        weyl_dim(build_cartan("A", 2), (1, -1))


# ------------------------------------------------------- weight multiplicities

@pytest.mark.parametrize("name,lam", [
    ("A1", (3,)),
    ("A2", (1, 1)),
    ("A2", (2, 0)),
    ("B2", highest_root(build_cartan("B", 2))),
    ("G2", highest_root(build_cartan("G", 2))),
])
def test_multiplicities_sum_to_dimension(name, lam):
    cd = cd_of(name)
    mults = weight_multiplicities(cd, lam)
    assert sum(mults.values()) == weyl_dim(cd, lam)


@pytest.mark.parametrize("name", ALL_TYPES)
def test_zero_weight_of_adjoint_has_rank_multiplicity(name):
    cd = cd_of(name)
    mults = weight_multiplicities(cd, highest_root(cd))
    zero = tuple(0 for _ in cd.d)
    assert mults[zero] == len(cd.d)


def test_a1_string_multiplicities_are_one():
    mults = weight_multiplicities(build_cartan("A", 1), (3,))
    assert mults == {(3,): 1, (1,): 1, (-1,): 1, (-3,): 1}


# ------------------------------------------------------ tensor decompositions

def test_a1_fundamental_square():
    cd = build_cartan("A", 1)
    assert tensor_decompose(cd, (1,), (1,)) == {(2,): 1, (0,): 1}


@pytest.mark.parametrize("name,mult", [
    ("A1", 1), ("A2", 2), ("A3", 2), ("B2", 1), ("G2", 1),
])
def test_adjoint_multiplicity_in_its_square(name, mult):
    cd = cd_of(name)
    theta = highest_root(cd)
    assert tensor_multiplicity(cd, theta, theta, theta) == mult


@pytest.mark.parametrize("name", ["A1", "A2", "B2", "G2"])
def test_tensor_square_dimensions_add_up(name):
    cd = cd_of(name)
    theta = highest_root(cd)
    dec = tensor_decompose(cd, theta, theta)
    total = sum(m * weyl_dim(cd, lam) for lam, m in dec.items())
    assert total == weyl_dim(cd, theta) ** 2


def test_tensor_multiplicity_symmetric_in_factors():
    cd = build_cartan("A", 2)
    for lam in [(1, 1), (3, 0), (0, 0), (2, 2)]:
        assert tensor_multiplicity(cd, (1, 0), (0, 1), lam) == tensor_multiplicity(cd, (0, 1), (1, 0), lam)


def test_a2_fundamental_times_dual():
    cd = build_cartan("A", 2)
    assert tensor_decompose(cd, (1, 0), (0, 1)) == {(1, 1): 1, (0, 0): 1}


def test_tensor_multiplicity_of_absent_component_is_zero():
    cd = build_cartan("A", 1)
    assert tensor_multiplicity(cd, (1,), (1,), (1,)) == 0
