import random

import pytest

from mdeg import linalg
from mdeg.arith import TScalar, mpq, parse_scalar
from mdeg.building import GammaConfig, Lattice, QuotientLatticeDatum, diag
from mdeg.multiview import (
    CameraTuple,
    EmptyImageError,
    admissible_tuples,
    brute_force_admissible,
    compare_g_choices,
    component_candidate,
    dim_and_chow,
    factor_matrices,
    kernel_dims,
    target_change,
    vanishes_on_image,
    vision_ideal,
)
from mdeg.polyring import ChowClass, IdealHandle, dimension, ideal_equal, multidegree

from conftest import random_rational_matrix

TRIPLE_CAMERAS = [
    [["1", "0", "0"], ["0", "1", "0"]],
    [["1", "0", "0"], ["0", "0", "t"]],
    [["0", "t", "0"], ["0", "0", "1"]],
]


def random_cameras(rnd, n, d, l):
    while True:
        mats = [random_rational_matrix(rnd, l, d) for _ in range(n)]
        B = CameraTuple(mats)
        if all(r == l for r in B.matrix_ranks()):
            return B


def test_kernel_profile_example():
    prof = kernel_dims(CameraTuple(TRIPLE_CAMERAS))
    assert prof.singles() == (1, 1, 1)
    assert all(prof[I] == 0 for I in [(0, 1), (0, 2), (1, 2), (0, 1, 2)])
    assert prof.to_json()["1,2"] == 0


def test_kernel_profile_single_and_pinholes(rnd):
    assert kernel_dims(CameraTuple([random_rational_matrix(rnd, 2, 5)])).singles() == (3,)
    prof = kernel_dims(random_cameras(rnd, 2, 4, 3))
    assert prof.singles() == (1, 1) and prof[(0, 1)] == 0


def test_admissible_examples(rnd):
    adm = admissible_tuples(kernel_dims(CameraTuple(TRIPLE_CAMERAS)))
    assert adm.r0 == 2
    assert sorted(adm.tuples) == [(0, 1, 1), (1, 0, 1), (1, 1, 0)]
    single = admissible_tuples(kernel_dims(CameraTuple([[[1, 0, 0], [0, 1, 0], [0, 0, 1]]])))
    assert (single.r0, single.tuples) == (2, [(2,)])
    pin = admissible_tuples(kernel_dims(random_cameras(rnd, 2, 4, 3)))
    assert pin.r0 == 3 and sorted(pin.tuples) == [(1, 2), (2, 1)]


def test_dim_and_chow_examples(rnd):
    assert dim_and_chow(kernel_dims(CameraTuple(TRIPLE_CAMERAS)), (2, 2, 2)) == (2, ChowClass.parse((2, 2, 2), "H1 + H2 + H3"))
    p0, cls = dim_and_chow(kernel_dims(CameraTuple([[[1, 0, 0], [0, 1, 0], [0, 0, 1]]])), (3,))
    assert (p0, str(cls)) == (2, "1")
    p0, cls = dim_and_chow(kernel_dims(random_cameras(rnd, 2, 4, 3)), (3, 3))
    assert (p0, str(cls)) == (3, "H1 + H2")
    with pytest.raises(ValueError):
        dim_and_chow(kernel_dims(CameraTuple(TRIPLE_CAMERAS)), (3, 2, 2))


@pytest.mark.parametrize("seed", range(12))
def test_admissible_complete_against_box(seed):
    rnd = random.Random(seed)
    n, d = rnd.choice([(2, 3), (2, 4), (3, 3), (3, 4)])
    mats = []
    for _ in range(n):
        l = rnd.randint(1, d)
        m = random_rational_matrix(rnd, l, d, bound=2)
        if rnd.random() < 0.3:  # force shared kernels now and then
            for r in m:
                r[-1] = mpq(0)
        mats.append(m)
    prof = kernel_dims(CameraTuple(mats))
    a = admissible_tuples(prof)
    b = brute_force_admissible(prof)
    assert (a.r0, sorted(a.tuples)) == (b.r0, sorted(b.tuples))


def test_vision_ideal_example_over_qt():
    B = CameraTuple([[[parse_scalar(x) for x in r] for r in m] for m in TRIPLE_CAMERAS])
    J = vision_ideal(B)
    R = J.ring
    want = IdealHandle(R, [IdealHandle.parse(R, ["x11*x22*x13"]).gens[0] * TScalar.coerce(-1)
                           + IdealHandle.parse(R, ["x21*x12*x23"]).gens[0] * TScalar.t_power(2)])
    assert ideal_equal(J, want)
    assert vanishes_on_image(J, B)


def test_vision_ideal_identity_and_empty():
    J = vision_ideal(CameraTuple([[[1, 0, 0], [0, 1, 0], [0, 0, 1]]]))
    assert J.is_zero()
    with pytest.raises(EmptyImageError):
        vision_ideal(CameraTuple([[[1, 0, 0]], [[0, 0, 0]]]))


def test_two_cameras_into_p1_p2_give_one_bilinear_form(rnd):
    B = CameraTuple([random_rational_matrix(rnd, 2, 3), random_rational_matrix(rnd, 3, 3)])
    J = vision_ideal(B)
    gb = J.groebner()
    assert len(gb) == 1 and gb[0].multidegrees() == {(1, 1)}
    assert vanishes_on_image(J, B)
    assert dimension(J) == 2


def test_two_generic_lines_fill_p1_p1(rnd):
    # a dominant map from P^2 onto P^1 x P^1: no equations at all
    J = vision_ideal(random_cameras(rnd, 2, 3, 2))
    assert J.is_zero()


@pytest.mark.parametrize("seed", range(6))
def test_formula_against_elimination(seed):
    rnd = random.Random(40 + seed)
    n, d = [(2, 3), (2, 4), (3, 3), (3, 4), (2, 4), (3, 4)][seed]
    mats = [random_rational_matrix(rnd, rnd.randint(2, d - (d == 4)), d) for _ in range(n)]
    B = CameraTuple(mats)
    J = vision_ideal(B)
    assert vanishes_on_image(J, B)
    p0, cls = dim_and_chow(kernel_dims(B), B.ranks)
    assert dimension(J) == p0
    assert multidegree(J) == cls and cls.all_ones()


def test_generic_pinholes_dimension(rnd):
    J = vision_ideal(random_cameras(rnd, 2, 4, 3))
    assert dimension(J) == 3
    assert str(multidegree(J)) == "H1 + H2"


# -- component candidates ---------------------------------------------------------


def test_candidate_reference_with_two_t_inverse(triple):
    ref = Lattice(diag("t^-1", "t^-1", 1))
    c = component_candidate(triple, ref)
    assert [[[int(x) for x in r] for r in H] for H in c.reduced] == [
        [[1, 0, 0], [0, 1, 0]],
        [[1, 0, 0], [0, 0, 0]],
        [[0, 1, 0], [0, 0, 1]],
    ]
    assert c.ranks == [2, 1, 2]
    assert c.ideal.strings() == ["x22"]


def test_factor_matrices_match_worked_values(triple):
    G = factor_matrices(triple, Lattice(diag("t^-1", "t^-1", 1)))
    as_text = [[[str(x) for x in r] for r in m] for m in G]
    assert as_text == [
        [["t^-1", "0", "0"], ["0", "t^-1", "0"]],
        [["t^-1", "0", "0"], ["0", "0", "t"]],
        [["0", "1", "0"], ["0", "0", "1"]],
    ]
    normalised = []
    for m in G:
        s = min(x.val() for r in m for x in r if x)
        normalised.append([[str(x * TScalar.t_power(-s)) for x in r] for r in m])
    assert normalised == [
        [["1", "0", "0"], ["0", "1", "0"]],
        [["1", "0", "0"], ["0", "0", "t^2"]],
        [["0", "1", "0"], ["0", "0", "1"]],
    ]
    # at the first lattice the factor matrices are the cameras themselves
    G1 = factor_matrices(triple, Lattice.standard(3))
    assert [[[str(x) for x in r] for r in m] for m in G1] == TRIPLE_CAMERAS


def test_candidate_at_first_lattice_surjects_onto_first_factor(triple):
    c = component_candidate(triple, Lattice.standard(3))
    assert c.ranks[0] == 2
    assert linalg.rank(c.reduced[0]) == 2


def test_single_lattice_candidate_is_everything():
    cfg = GammaConfig(3, [QuotientLatticeDatum(Lattice.standard(3))])
    assert component_candidate(cfg, Lattice.standard(3)).ideal.is_zero()


WORKING_REFS = [diag("t^-1", "t^-1", 1), diag("t", "t^-1", 1), diag("t", "t", 1)]

# residues of these units respect the coordinate split of every factor
LITERAL_UNITS = [
    [[2, 0, 0], [0, -1, 0], [0, 0, 3]],
    [[1, "t", 0], [0, 1, "t"], ["t", 0, 1]],
    [["1 + t", 0, 0], [3, -1, 0], [0, "t^2", 5]],
]
# these mix target coordinates modulo t
MIXING_UNITS = [
    [[1, "t", 0], [0, 1, 0], [2, 0, 1]],
    [[1, 1, 0], [0, 1, 0], [0, 0, 1]],
]


def rebased(cfg, u):
    return GammaConfig(cfg.d, [q.rebase(u) for q in cfg.data])


@pytest.mark.parametrize("u", LITERAL_UNITS)
def test_candidate_independent_of_basis_choice(triple, u):
    other = rebased(triple, u)
    for ref in WORKING_REFS:
        cmp = compare_g_choices(triple, other, Lattice(ref))
        assert cmp.literal_equal, cmp.to_json()


@pytest.mark.parametrize("u", LITERAL_UNITS + MIXING_UNITS)
def test_candidate_change_is_an_isomorphism(triple, u):
    other = rebased(triple, u)
    for ref in WORKING_REFS:
        cmp = compare_g_choices(triple, other, Lattice(ref))
        assert cmp.isomorphic
        assert all(linalg.rank(W) == len(W) for W in cmp.changes)


def test_mixing_choice_is_reported_not_identified(triple, caplog):
    other = rebased(triple, MIXING_UNITS[0])
    cmp = compare_g_choices(triple, other, Lattice(WORKING_REFS[0]))
    assert not cmp.literal_equal and cmp.isomorphic
    assert cmp.to_json()["literal_equal"] is False
    assert "different candidate ideals" in caplog.text


def test_target_change_rejects_unrelated_matrices():
    G = [[TScalar.coerce(1), TScalar.coerce(0), TScalar.coerce(0)]]
    with pytest.raises(ValueError):
        target_change(G, [[TScalar.coerce(0), TScalar.coerce(1), TScalar.coerce(0)]])
    with pytest.raises(ValueError):
        target_change(G, [[TScalar.t_power(1), TScalar.coerce(0), TScalar.coerce(0)]])


@pytest.mark.parametrize("k", [-2, 1, 3])
def test_candidate_homothety_invariant(triple, k):
    ref = Lattice(diag("t", "t^-1", 1))
    base = component_candidate(triple, ref).ideal
    scaled = GammaConfig(3, [q.scale(k) for q in triple.data])
    assert ideal_equal(component_candidate(scaled, ref).ideal, base)
    assert ideal_equal(component_candidate(triple, ref.scale(k)).ideal, base)
