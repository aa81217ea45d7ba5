import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import single
from linkrel.errors import HazardUndefinedError, ModelValidationError
from linkrel.lifedist import Exponential, LogNormal, Rayleigh
from linkrel.metrics import mean_tttf
from linkrel.rbd import (
    Component,
    Leaf,
    Parallel,
    Series,
    StateVariable,
    SystemModel,
    failure_before,
    find_violations,
    is_series_only,
    system_hazard,
    system_pdf,
    system_survival,
    validate,
    with_retransmission,
)

GRID = np.linspace(0.0, 5.0, 1000)
# mpmath-frozen references at t = 1 (tests/oracles.py)
RW1 = 0.224484994138285703
LN_HAZ1 = 0.254580216918516743
LN_HAZ2 = 0.175711281829819668


def two(a, b, node=Series):
    return SystemModel((Component("a", a), Component("b", b)), node(Leaf("a"), Leaf("b")))


class TestValidate:
    def test_baseline_is_valid(self, link):
        assert validate(link) is link

    def test_unknown_component(self, link):
        bad = SystemModel(link.components, Series(*link.structure.children, Leaf("doppler")))
        with pytest.raises(ModelValidationError) as info:
            validate(bad)
        assert any("unknown component 'doppler'" in v for v in info.value.violations)

    def test_duplicate_reference(self, link):
        bad = SystemModel(link.components, Series(Leaf("pathloss"), Leaf("pathloss"), Leaf("shadowing"), Leaf("multipath")))
        with pytest.raises(ModelValidationError, match="duplicate reference"):
            validate(bad)

    def test_all_violations_reported(self):
        comps = (Component("a", Exponential(1)), Component("a", Exponential(2)), Component("c", Exponential(1)))
        bad = SystemModel(comps, Series(Leaf("a"), Leaf("a"), Parallel(Leaf("zz"))))
        problems = find_violations(bad)
        kinds = " | ".join(problems)
        assert "duplicate component name 'a'" in kinds
        assert "duplicate reference" in kinds
        assert "unknown component 'zz'" in kinds
        assert "needs at least 2 branches" in kinds
        assert "'c' is declared but never referenced" in kinds
        assert len(problems) >= 5

    def test_empty_series_and_blank_name(self):
        bad = SystemModel((Component("  ", Exponential(1)),), Series())
        problems = find_violations(bad)
        assert any("invalid component name" in p for p in problems)
        assert any("empty series" in p for p in problems)


def test_state_variable():
    assert StateVariable(1) == 1 and StateVariable(0) == 0
    with pytest.raises(ValueError):
        StateVariable(2)


class TestSurvival:
    def test_point_values(self, link):
        assert system_survival(link, 0.0) == 1.0
        assert system_survival(link, 1.0) == pytest.approx(RW1, rel=1e-13)
        two_copies = with_retransmission(link, 2)
        assert system_survival(two_copies, 1.0) == pytest.approx(1 - (1 - RW1) ** 2, rel=1e-13)
        assert system_survival(two_copies, 1.0) == pytest.approx(0.3986, abs=5e-5)

    def test_against_oracle(self, link):
        for t in (0.1, 0.5, 2.0, 4.0):
            assert system_survival(link, t) == pytest.approx(float(oracles.link_survival(t)), rel=1e-12)

    def test_series_and_parallel_bounds(self):
        a, b = LogNormal(0.2, 0.8), Rayleigh(1.3)
        ra, rb = a.survival(GRID), b.survival(GRID)
        s = system_survival(two(a, b, Series), GRID)
        p = system_survival(two(a, b, Parallel), GRID)
        assert np.all(s <= np.minimum(ra, rb) + 1e-15)
        assert np.all(p >= np.maximum(ra, rb) - 1e-15)

    def test_pinning(self, link):
        r = system_survival(link, 1.0, pinned={"pathloss": 1.0})
        assert r == pytest.approx(RW1 / math.exp(-1), rel=1e-13)
        assert system_survival(link, 1.0, pinned={"pathloss": 0.0}) == 0.0


class TestDensityAndHazard:
    def test_series_pdf(self, link):
        assert system_pdf(link, 1.0) == pytest.approx(RW1 * (1.25 + LN_HAZ1), rel=1e-12)
        assert system_pdf(link, 1.0) == pytest.approx(0.3378, abs=5e-5)

    def test_single_leaf_pdf_is_component_pdf(self):
        d = LogNormal(0.5, 0.7)
        t = np.linspace(0, 6, 50)
        np.testing.assert_allclose(system_pdf(single(d), t), d.pdf(t), rtol=1e-14)

    def test_rayleigh_leaf_density_zero_at_origin(self):
        assert system_pdf(single(Rayleigh(2.0)), 0.0) == 0.0

    def test_parallel_pdf_is_numeric_derivative(self):
        a, b = Exponential(1.0), Exponential(3.0)
        m = two(a, b, Parallel)
        t = np.linspace(0.1, 4, 40)
        exact = a.pdf(t) * b.cdf(t) + b.pdf(t) * a.cdf(t)
        np.testing.assert_allclose(system_pdf(m, t), exact, rtol=1e-6)
        assert np.all(system_pdf(m, GRID) >= 0)

    def test_hazard_values(self, link):
        assert system_hazard(link, 1.0) == pytest.approx(1.25 + LN_HAZ1, rel=1e-12)
        assert system_hazard(link, 1.0) == pytest.approx(1.50458, abs=5e-6)
        assert system_hazard(link, 2.0) == pytest.approx(1.5 + LN_HAZ2, rel=1e-12)
        for t in (0.0, 3.0, 30.0):
            assert system_hazard(single(Exponential(1.0)), t) == 1.0

    def test_analytic_and_numeric_paths_agree(self, link):
        t = GRID
        ok = np.asarray(system_survival(link, t)) > 1e-6
        np.testing.assert_allclose(
            system_hazard(link, t[ok], method="numeric"),
            system_hazard(link, t[ok], method="analytic"),
            rtol=1e-6,
        )
        np.testing.assert_allclose(
            system_pdf(link, t[ok], method="numeric"),
            system_pdf(link, t[ok], method="analytic"),
            rtol=1e-6,
        )

    def test_numeric_hazard_refuses_dead_system(self, link_retx):
        with pytest.raises(HazardUndefinedError) as info:
            system_hazard(link_retx, np.array([1.0, 40.0]))
        assert info.value.t == 40.0

    def test_analytic_requires_series(self, link_retx):
        with pytest.raises(ValueError):
            system_hazard(link_retx, 1.0, method="analytic")

    def test_series_hazard_propagates_component_error(self):
        with pytest.raises(HazardUndefinedError):
            system_pdf(single(Exponential(1.0)), 900.0)


class TestFailureBefore:
    def test_values(self, link):
        assert failure_before(link, 0.0) == 0.0
        assert failure_before(link, 1.0) == pytest.approx(1 - RW1, rel=1e-13)
        assert failure_before(link, 1.0) == pytest.approx(0.7755, abs=5e-5)
        assert failure_before(link, 40.0) == pytest.approx(1.0, abs=1e-9)


class TestRetransmission:
    def test_structure(self, link):
        m = with_retransmission(link, 2)
        assert len(m.components) == 6
        assert isinstance(m.structure, Parallel) and len(m.structure.children) == 2
        assert all(isinstance(c, Series) and len(c.children) == 3 for c in m.structure.children)
        assert len(set(m.names)) == 6
        assert "pathloss@1" in m.names and "multipath@2" in m.names
        validate(m)
        assert not is_series_only(m.structure)

    def test_parallel_algebra(self, link):
        m = with_retransmission(link, 2)
        base = np.asarray(system_survival(link, GRID))
        np.testing.assert_allclose(system_survival(m, GRID), 1 - (1 - base) ** 2, atol=1e-12, rtol=0)

    def test_three_copies(self, link):
        m = with_retransmission(link, 3)
        base = np.asarray(system_survival(link, GRID))
        np.testing.assert_allclose(system_survival(m, GRID), 1 - (1 - base) ** 3, atol=1e-12, rtol=0)

    @pytest.mark.parametrize("copies", [1, 0, 2.5, True])
    def test_bad_copies(self, link, copies):
        with pytest.raises(ValueError):
            with_retransmission(link, copies)

    def test_mean_near_reported_value(self, link):
        assert mean_tttf(with_retransmission(link, 2)).value == pytest.approx(0.98, abs=0.02)


# Random small block diagrams ---------------------------------------------

_dists = st.one_of(
    st.floats(0.2, 5.0).map(Exponential),
    st.tuples(st.floats(-1.0, 1.5), st.floats(0.3, 1.5)).map(lambda p: LogNormal(*p)),
    st.floats(0.3, 3.0).map(Rayleigh),
)


@st.composite
def small_models(draw):
    counter = iter(range(1000))

    def node(depth):
        if depth >= 2 or draw(st.booleans()):
            return Leaf(f"c{next(counter)}")
        kind = draw(st.sampled_from([Series, Parallel]))
        n = draw(st.integers(2, 3))
        return kind(tuple(node(depth + 1) for _ in range(n)))

    structure = node(0)
    names = []

    def collect(n):
        if isinstance(n, Leaf):
            names.append(n.name)
        else:
            for c in n.children:
                collect(c)

    collect(structure)
    comps = tuple(Component(n, draw(_dists)) for n in names)
    return SystemModel(comps, structure)


@given(small_models())
@settings(max_examples=60, deadline=None)
def test_random_models_monotone_and_bounded(model):
    validate(model)
    r = np.asarray(system_survival(model, np.linspace(0.0, 10.0, 1000)))
    assert np.all((r >= 0) & (r <= 1))
    assert np.all(np.diff(r) <= 1e-15)
    assert r[0] == 1.0


def _check_bounds(node, comps, t):
    """Series <= min(children), Parallel >= max(children), recursively."""
    sub = lambda n: system_survival(SystemModel(comps, n), t)  # noqa: E731
    if isinstance(node, Leaf):
        return
    kids = np.array([np.asarray(sub(c)) for c in node.children])
    me = np.asarray(sub(node))
    if isinstance(node, Series):
        assert np.all(me <= kids.min(axis=0) + 1e-15)
    else:
        assert np.all(me >= kids.max(axis=0) - 1e-15)
    for c in node.children:
        _check_bounds(c, comps, t)


@given(small_models())
@settings(max_examples=40, deadline=None)
def test_random_models_group_bounds(model):
    _check_bounds(model.structure, model.components, np.linspace(0.0, 8.0, 200))


def test_mean_tttf_bounds_series_parallel():
    dists = [Exponential(1.0), LogNormal(0.0, 0.8), Rayleigh(1.5)]
    comps = tuple(Component(f"c{i}", d) for i, d in enumerate(dists))
    leaves = tuple(Leaf(c.name) for c in comps)
    means = [d.moments().mean for d in dists]
    s = mean_tttf(SystemModel(comps, Series(leaves))).value
    p = mean_tttf(SystemModel(comps, Parallel(leaves))).value
    assert s <= min(means) + 1e-8
    assert p >= max(means) - 1e-8
