import numpy as np
import pytest

from linkrel import fading_link_model
from linkrel.lifedist import Exponential, LogNormal, Rayleigh
from linkrel.rbd import Component, Leaf, Parallel, Series, SystemModel, with_retransmission


@pytest.fixture
def link():
    return fading_link_model()


@pytest.fixture
def link_retx(link):
    return with_retransmission(link, 2)


def single(dist, name="x"):
    return SystemModel((Component(name, dist),), Leaf(name))


def param_sets(n=100, seed=20240514):
    """Fixed, reproducible spread of parameters for each family."""
    rng = np.random.default_rng(seed)
    rates = 10 ** rng.uniform(-1.5, 1.5, n)
    mus = rng.uniform(-2.0, 3.0, n)
    sigmas = rng.uniform(0.25, 2.5, n)
    scales = 10 ** rng.uniform(-1.0, 1.5, n)
    return (
        [Exponential(r) for r in rates]
        + [LogNormal(m, s) for m, s in zip(mus, sigmas)]
        + [Rayleigh(s) for s in scales]
    )


def bulk_grid(d, lo=1e-3, hi=1 - 1e-6, n=1000):
    """Times spanning the body of ``d`` (between two quantiles)."""
    return np.geomspace(d.ppf(lo), d.ppf(hi), n)


# Acceptance reporting: one PASS/FAIL line per criterion in the summary.
_criteria: dict[int, list] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and title")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    n, text = marker.args
    entry = _criteria.setdefault(n, [text, True])
    entry[1] = entry[1] and call.excinfo is None


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        text, ok = _criteria[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}")
