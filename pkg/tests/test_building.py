"""Lattice combinatorics over O = Q[t] localised at t."""

import random
from itertools import combinations

import pytest

from mdeg import linalg
from mdeg.arith import TScalar
from mdeg.building import (
    GammaConfig,
    Lattice,
    LatticeClass,
    LatticeError,
    QuotientLatticeDatum,
    adjacent,
    brute_force_hull,
    convex_hull,
    diag,
    invariant_factors,
    lattice_intersection,
    relative_matrix,
    spread,
    validate_quotient,
)

from conftest import random_tscalar

T = TScalar.t_power


def random_unit_matrix(rnd, d):
    """Product of unitriangular matrices with O-entries: invertible over O."""
    def entry():
        return TScalar.coerce(rnd.randint(-3, 3)) + T(1, rnd.randint(-2, 2))

    low = [[TScalar.coerce(1) if i == j else (entry() if i > j else TScalar.coerce(0)) for j in range(d)] for i in range(d)]
    up = [[TScalar.coerce(1) if i == j else (entry() if i < j else TScalar.coerce(0)) for j in range(d)] for i in range(d)]
    scale = [[TScalar.coerce(rnd.choice([1, -2, 3])) if i == j else TScalar.coerce(0) for j in range(d)] for i in range(d)]
    return linalg.matmul(linalg.matmul(low, scale), up)


def random_lattice(rnd, d, spread_max=2):
    u = random_unit_matrix(rnd, d)
    v = random_unit_matrix(rnd, d)
    a = [rnd.randint(-spread_max, spread_max) for _ in range(d)]
    g = linalg.matmul(linalg.matmul(u, [list(r) for r in diag(*[T(k) for k in a])]), v)
    return Lattice(g), sorted(a, reverse=True)


def random_dense_lattice(rnd, d):
    while True:
        g = [[random_tscalar(rnd) for _ in range(d)] for _ in range(d)]
        if linalg.det(g):
            return Lattice(g)


L1 = Lattice.standard(3)
L2 = Lattice(diag(1, 1, "t^-1"))
L3 = Lattice(diag(1, "t^-1", 1))


def test_invariant_factors_examples():
    assert invariant_factors(L1, L1) == [0, 0, 0]
    assert invariant_factors(L1, L2) == [0, 0, -1]
    assert invariant_factors(L2, L3) == [1, 0, -1]


def test_invariant_factors_of_known_diagonal(rnd):
    for _ in range(20):
        L, a = random_lattice(rnd, 3)
        assert invariant_factors(Lattice.standard(3), L) == a


def _min_minor_val(m, k):
    vals = [det.val() for _, _, det in linalg.minors(m, k) if det]
    return min(vals)


@pytest.mark.parametrize("seed", range(100))
def test_minor_valuation_oracle(seed):
    rnd = random.Random(seed)
    d = [2, 3, 4][seed % 3]
    if d < 4:
        L = random_dense_lattice(rnd, d)
        Lp = random_dense_lattice(rnd, d) if seed % 2 else random_lattice(rnd, d)[0]
    else:
        # unit * diagonal * unit keeps the relative matrix Laurent-polynomial
        L, Lp = random_lattice(rnd, d)[0], random_lattice(rnd, d)[0]
    a = invariant_factors(L, Lp)
    m = relative_matrix(L.g, Lp.g)
    for k in range(1, d + 1):
        # a is sorted descending, so the k smallest exponents are the last k
        assert sum(a[d - k:]) == _min_minor_val(m, k)


@pytest.mark.parametrize("seed", range(100))
def test_invariant_factors_antisymmetric(seed):
    rnd = random.Random(1000 + seed)
    d = rnd.choice([2, 3])
    L, Lp = random_dense_lattice(rnd, d), random_dense_lattice(rnd, d)
    assert invariant_factors(Lp, L) == sorted((-x for x in invariant_factors(L, Lp)), reverse=True)


@pytest.mark.parametrize("seed", range(20))
def test_invariant_factors_unit_invariance(seed):
    rnd = random.Random(2000 + seed)
    L, Lp = random_dense_lattice(rnd, 3), random_dense_lattice(rnd, 3)
    u = random_unit_matrix(rnd, 3)
    base = invariant_factors(L, Lp)
    assert invariant_factors(L.rebase(u), Lp) == base
    assert invariant_factors(L, Lp.rebase(random_unit_matrix(rnd, 3))) == base
    assert L.rebase(u).same_lattice(L)


def test_singular_basis_rejected():
    with pytest.raises(LatticeError):
        Lattice(((1, 0), (2, 0)))


def test_adjacency_examples():
    assert adjacent(L1, L1)
    assert adjacent(L1, L2)
    assert not adjacent(L1, Lattice(diag(1, 1, "t^-2")))
    assert spread(L1, Lattice(diag(1, 1, "t^-2"))) == 2


@pytest.mark.parametrize("seed", range(25))
def test_adjacency_symmetric_and_homothety_invariant(seed):
    rnd = random.Random(3000 + seed)
    L, _ = random_lattice(rnd, 3, spread_max=1)
    Lp, _ = random_lattice(rnd, 3, spread_max=1)
    k, j = rnd.randint(-3, 3), rnd.randint(-3, 3)
    assert adjacent(L, Lp) == adjacent(Lp, L) == adjacent(L.scale(k), Lp.scale(j))


def test_class_canonical_form():
    c = LatticeClass.of(L2)
    assert c == LatticeClass.of(L2.scale(5)) == LatticeClass.of(L2.rebase([[1, 1, 0], [0, 1, 0], [2, 0, 1]]))
    h = c.rep.g
    assert min(h[i][i].val() for i in range(3)) == 0
    assert c != LatticeClass.of(L1)


def test_intersection_examples():
    assert lattice_intersection(L1, L1).same_lattice(L1)
    assert lattice_intersection(L1, L1.scale(1)).same_lattice(L1.scale(1))
    assert lattice_intersection(L1, L2).same_lattice(L1)
    assert lattice_intersection(L2, L3).same_lattice(Lattice(diag(1, 1, 1)))
    assert lattice_intersection(L2, L3, 0, 1).same_lattice(Lattice(diag("t", 1, "t")))


@pytest.mark.parametrize("seed", range(20))
def test_intersection_is_largest_common_sublattice(seed):
    rnd = random.Random(4000 + seed)
    L, Lp = random_dense_lattice(rnd, 3), random_dense_lattice(rnd, 3)
    N = lattice_intersection(L, Lp)
    assert L.contains(N) and Lp.contains(N)
    # index oracle: [L : N] = sum of the positive parts of the exponents of L' relative to L
    a = invariant_factors(L, Lp)
    idx = sum(max(x, 0) for x in a)
    assert invariant_factors(L, N) and sum(invariant_factors(L, N)) == idx


def test_hull_examples():
    assert convex_hull([L1]) == [LatticeClass.of(L1)]
    assert set(convex_hull([L1, L2])) == {LatticeClass.of(L1), LatticeClass.of(L2)}
    far = Lattice(diag(1, 1, "t^-2"))
    hull = convex_hull([L1, far])
    assert LatticeClass.of(Lattice(diag(1, 1, "t^-1"))) in hull
    assert set(brute_force_hull([L1, far], 3)) == set(hull)


@pytest.mark.parametrize("seed", range(20))
def test_hull_idempotent_closed_and_matches_wider_range(seed):
    rnd = random.Random(5000 + seed)
    L, _ = random_lattice(rnd, 3, spread_max=1)
    Lp, _ = random_lattice(rnd, 3, spread_max=1)
    hull = convex_hull([L, Lp])
    assert LatticeClass.of(L) in hull and LatticeClass.of(Lp) in hull
    assert set(convex_hull(hull)) == set(hull)
    S = max((spread(x.rep, y.rep) for x, y in combinations(hull, 2)), default=0)
    assert set(brute_force_hull([L, Lp], S + 2)) == set(hull)


def test_validate_quotient_examples():
    assert validate_quotient(QuotientLatticeDatum(L1, (("0", "0", "1"),))) == []
    bad = validate_quotient(QuotientLatticeDatum(Lattice.standard(3), (("t", "0", "0"),)))
    assert [v.code for v in bad] == ["not_direct_summand"]
    assert validate_quotient(QuotientLatticeDatum(Lattice.standard(2), (("1", "1"),))) == []
    out = validate_quotient(QuotientLatticeDatum(L1, (("t^-1", "0", "0"),)))
    assert out[0].code == "not_contained"
    out = validate_quotient(QuotientLatticeDatum(Lattice.standard(2), (("1", "0"), ("0", "1"))))
    assert "rank" in [v.code for v in out]


def test_example_fixture_validates(triple):
    assert triple.validate() == []
    assert triple.ranks == (2, 2, 2)


def test_quotient_map_kills_sub_and_is_surjective():
    rnd = random.Random(9)
    for _ in range(10):
        L, _ = random_lattice(rnd, 3)
        u = L.columns()
        m = [x + T(1) * y for x, y in zip(u[0], u[1])]  # a primitive vector of L
        q = QuotientLatticeDatum(L, (m,))
        assert validate_quotient(q) == []
        phi = q.quotient_map()
        assert len(phi) == q.rank == 2
        c = q.sub_coordinates()
        assert all(not x for x in linalg.matmul(phi, c)[0] + linalg.matmul(phi, c)[1])
        # some 2x2 minor is a unit of O
        assert any(det and det.val() == 0 for _, _, det in linalg.minors(phi, 2))


def test_gamma_config_dimension_mismatch():
    with pytest.raises(LatticeError):
        GammaConfig(3, [QuotientLatticeDatum(Lattice.standard(2))])
    with pytest.raises(ValueError):
        GammaConfig(3, [])
