import random

import pytest

from mdeg.arith import mpq
from mdeg.building import GammaConfig, Lattice, QuotientLatticeDatum, diag
from mdeg import degeneration
from mdeg.degeneration import (
    CONVENTIONS,
    SampleExhausted,
    ValidationError,
    component_bound,
    component_check,
    config_from_json,
    config_to_json,
    degenerate,
    expected_counts,
    gin_config,
    gin_experiment,
    m_n_ideal,
    minors_ideal,
    mustafin_ideal,
    poly_det,
    specialize_t,
)
from mdeg.polyring import (
    ChowClass,
    IdealHandle,
    MultiPoly,
    VarSpec,
    ideal_equal,
    intersect_all,
    is_monomial_ideal,
)

from conftest import load_fixture, pinhole_config


def parsed(ring, *gens):
    return IdealHandle.parse(ring, list(gens))


@pytest.fixture(scope="module")
def rep3():
    return degenerate(config_from_json(load_fixture("triple.json")))


def test_triple_saturated_and_special(rep3):
    Jp = rep3.mustafin.saturated
    assert ideal_equal(Jp, parsed(Jp.ring, "t^2*x21*x12*x23 - x11*x22*x13"))
    Jt = rep3.special
    assert ideal_equal(Jt, parsed(Jt.ring, "x11*x22*x13"))
    parts = [parsed(Jt.ring, v) for v in ("x11", "x22", "x13")]
    assert ideal_equal(Jt, intersect_all(parts))


def test_triple_certificates(rep3):
    assert rep3.ok()
    assert rep3.dim == rep3.p0 == 2
    assert rep3.multidegree == ChowClass.parse((2, 2, 2), "H1 + H2 + H3")
    assert rep3.component_bound == 3
    assert all(rep3.checks["generic_fibre_recovery"].values())


def test_saturation_only_grows(rep3):
    E, Jp = rep3.mustafin.generic, rep3.mustafin.saturated
    assert Jp.contains(E)


def test_field_route_agrees(triple, rep3):
    J = mustafin_ideal(triple, route="field").saturated
    assert ideal_equal(J, rep3.mustafin.saturated)


def test_unknown_route(triple):
    with pytest.raises(ValueError):
        mustafin_ideal(triple, route="magic")


def test_report_json_and_summary(rep3):
    data = rep3.to_json()
    assert data["special_fibre"] == rep3.special.strings()
    assert data["component_bound"] == 3
    assert data["dimension"] == {"computed": 2, "predicted_p0": 2}
    text = rep3.summary()
    assert "J~" in text and "FAIL" not in text


def test_single_lattice_is_trivial():
    cfg = config_from_json(load_fixture("single.json"))
    rep = degenerate(cfg)
    assert rep.mustafin.saturated.is_zero()
    assert rep.special.is_zero()
    assert rep.dim == 2 and rep.component_bound == 1
    assert rep.ok()


@pytest.mark.parametrize("second", [diag(1, 1, "t"), diag(1, "t", "t"), diag("t", 1, 1)])
def test_minors_route_matches_elimination(second):
    cfg = GammaConfig(3, [QuotientLatticeDatum(Lattice.standard(3)), QuotientLatticeDatum(Lattice(second))])
    a = mustafin_ideal(cfg).saturated
    b = mustafin_ideal(cfg, route="minors").saturated
    assert ideal_equal(a, b)
    # two adjacent lattices: the special fibre is the union of two components
    assert degenerate(cfg).ok()


def test_minors_route_needs_zero_sub(triple):
    with pytest.raises(ValueError):
        minors_ideal(triple)


@pytest.mark.parametrize("k", [-1, 2])
def test_pipeline_homothety_invariant(triple, rep3, k):
    scaled = GammaConfig(3, [triple.data[0].scale(k)] + list(triple.data[1:]), triple.reference)
    assert ideal_equal(mustafin_ideal(scaled).saturated, rep3.mustafin.saturated)


def test_reference_covariance_keeps_invariants(triple, rep3):
    other = degenerate(triple, reference=Lattice(diag("t", "t^-1", 1)))
    assert other.multidegree == rep3.multidegree
    assert other.dim == rep3.dim
    assert other.component_bound == rep3.component_bound
    # target coordinates come from the quotients, so J' does not move either
    assert ideal_equal(other.mustafin.saturated, rep3.mustafin.saturated)


def test_far_reference_is_not_a_component(triple, rep3):
    far = Lattice(diag("t^5", 1, 1))
    (v,) = component_check(rep3.special, triple, [far])
    assert not v.is_component
    assert v.to_json()["is_component"] is False


def test_hull_candidates_find_a_component(triple):
    rep = degenerate(triple, hull=True)
    assert 1 <= rep.components_found <= rep.component_bound
    assert rep.checks["verdict_classes_bounded"]


@pytest.mark.parametrize("seed", range(3))
def test_pinhole_pairs_specialise_class(seed):
    rep = degenerate(pinhole_config(random.Random(seed)))
    assert rep.multidegree == ChowClass.parse((3, 3), "H1 + H2")
    assert rep.dim == rep.p0 == 3
    assert component_bound(rep.cfg) == 2
    assert rep.ok()


def test_specialize_t_at_rational(rep3):
    J = specialize_t(rep3.mustafin.saturated, 2)
    assert ideal_equal(J, parsed(J.ring, "4*x21*x12*x23 - x11*x22*x13"))


def test_config_round_trip(triple):
    back = config_from_json(config_to_json(triple))
    assert config_to_json(back) == config_to_json(triple)
    assert ideal_equal(mustafin_ideal(back).saturated, mustafin_ideal(triple).saturated)


@pytest.mark.parametrize("bad", [
    {},
    {"d": 3},
    {"d": 3, "quotient_lattices": [{"L": [["1", "0"], ["0", "1"]]}]},
    {"d": 3, "quotient_lattices": [{"L": [["1", "0", "0"], ["0", "x", "0"], ["0", "0", "1"]]}]},
])
def test_config_validation(bad):
    with pytest.raises((ValidationError, ValueError)):
        json_cfg = config_from_json(bad)
        degenerate(json_cfg)


def test_strict_mode_raises(triple, monkeypatch):
    monkeypatch.setattr(degeneration, "is_saturated", lambda *a: False)
    with pytest.raises(AssertionError, match="saturated"):
        degenerate(triple, strict=True, recovery=False)


# -- the generic initial ideal --------------------------------------------------


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_m_n_counts(n):
    q, c, r = expected_counts(n)
    assert len(m_n_ideal(n).gens) == q + c + r
    assert len(m_n_ideal(n, "all").gens) == q + 3 * c + r
    assert is_monomial_ideal(m_n_ideal(n, "all"))


def test_m_n_rejects():
    with pytest.raises(ValueError):
        m_n_ideal(1)
    with pytest.raises(ValueError):
        m_n_ideal(3, "sideways")


def test_m_2_is_one_quadric():
    I = m_n_ideal(2)
    assert I.strings() == ["x31*x32"]
    assert all(ideal_equal(I, m_n_ideal(2, c)) for c in CONVENTIONS)


def test_gin_config_shape():
    cfg, mats = gin_config(3, 7)
    assert cfg.n == 3 and cfg.ranks == (3, 3, 3)
    assert cfg.validate() == []
    assert gin_config(3, 7)[1] == mats


def test_gin_redraws_exhausted(monkeypatch):
    monkeypatch.setattr(degeneration, "_draw_rational", lambda rnd, bound=100: mpq(0))
    with pytest.raises(SampleExhausted, match="redraws"):
        gin_config(2, 1, max_redraws=3)


def test_gin_n2():
    g = gin_experiment(2, recovery=False)
    assert g.report.special.strings() == ["x31*x32"]
    assert g.resolved == "min-carries-x3"
    assert all(m["ok"] for m in g.minors)


def test_gin_n3():
    g = gin_experiment(3)
    Jt = g.report.special
    assert is_monomial_ideal(Jt)
    assert g.resolved == "all"
    assert ideal_equal(Jt, m_n_ideal(3, "all").to_ring(Jt.ring))
    assert not g.conventions["min-carries-x3"]["equal"]
    assert all(m["ok"] for m in g.minors)
    assert {len(m["I"]) for m in g.minors} == {2, 3}


def test_poly_det_small():
    R = VarSpec.plain(["a", "b", "c", "d"])
    a, b, c, d = (MultiPoly.var(R, v) for v in "abcd")
    assert poly_det([[a, b], [c, d]]) == a * d - b * c
    one, zero = MultiPoly.const(R, 1), MultiPoly.zero(R)
    assert poly_det([[one, zero, zero], [zero, a, b], [zero, c, d]]) == a * d - b * c
