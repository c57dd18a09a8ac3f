import json
import random
from importlib import resources

import pytest
from hypothesis import settings, strategies as st

from mdeg.arith import TPoly, TScalar, mpq
from mdeg.degeneration import config_from_json

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def load_fixture(name):
    return json.loads(resources.files("mdeg").joinpath("data", name).read_text(encoding="utf-8"))


@pytest.fixture
def triple():
    return config_from_json(load_fixture("triple.json"))


@pytest.fixture
def triple_refs():
    return load_fixture("triple_components.json")


rationals = st.builds(mpq, st.integers(-20, 20), st.integers(1, 12))


@st.composite
def tpolys(draw, max_deg=3, low_max=2):
    cs = draw(st.lists(rationals, min_size=1, max_size=max_deg + 1))
    return TPoly(cs, draw(st.integers(0, low_max)))


@st.composite
def tscalars(draw, nonzero=True):
    num = draw(tpolys())
    if nonzero and not num:
        num = TPoly.const(1)
    den = draw(tpolys())
    if not den:
        den = TPoly.const(1)
    return TScalar(num, den)


def random_tscalar(rnd, low=-2, high=2, terms=2, fractions=True):
    """Small random Laurent-ish element of Q(t), occasionally with a (1 + c t) denominator."""
    e = rnd.randint(low, high)
    num = TPoly([mpq(rnd.randint(-5, 5), rnd.randint(1, 4)) for _ in range(terms)] + [mpq(rnd.choice([-1, 1, 2]))])
    den = TPoly([1, mpq(rnd.randint(-3, 3))]) if fractions and rnd.random() < 0.3 else TPoly.const(1)
    return TScalar(num, den) * TScalar.t_power(e)


def random_rational_matrix(rnd, rows, cols, bound=9):
    return [[mpq(rnd.randint(-bound, bound), rnd.randint(1, 3)) for _ in range(cols)] for _ in range(rows)]


@pytest.fixture
def rnd():
    return random.Random(20240611)


def pinhole_config(rnd, d=4, n=2, spread=2):
    """n pinhole lattices g_i diag(t^e) with M_i the first basis vector."""
    from mdeg import linalg
    from mdeg.building import GammaConfig, Lattice, QuotientLatticeDatum

    data = []
    for _ in range(n):
        while True:
            a = [[mpq(rnd.randint(-5, 5)) for _ in range(d)] for _ in range(d)]
            if linalg.det(a):
                break
        e = [rnd.randint(-spread, spread) for _ in range(d)]
        g = [[TScalar.t_power(e[j], a[r][j]) for j in range(d)] for r in range(d)]
        data.append(QuotientLatticeDatum(Lattice(g), (tuple(g[r][0] for r in range(d)),)))
    return GammaConfig(d, data)


# -- acceptance reporting -----------------------------------------------------

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.skipped):
        return
    n = mark.args[0]
    if hasattr(rep, "wasxfail"):
        status = "FAIL (expected failure, logged)"
    elif rep.passed:
        status = "PASS"
    elif rep.skipped:
        status = "SKIP"
    else:
        status = "FAIL"
    prev = _CRITERIA.get(n)
    # a criterion passes only if every test carrying its mark passed
    if prev is None or prev[0] == "PASS":
        _CRITERIA[n] = (status, item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, name = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n}: {status}  ({name})")
