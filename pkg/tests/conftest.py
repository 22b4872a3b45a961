import numpy as np
import pytest

from syntaxirl import kernels
from syntaxirl.graph import build_graph


def random_connected_graph(rng, n, extra=0.2, weighted=False):
    """Random spanning tree plus each remaining pair with probability ``extra``."""
    perm = rng.permutation(n)
    pairs = set()
    for i in range(1, n):
        j = int(rng.integers(0, i))
        a, b = int(perm[i]), int(perm[j])
        pairs.add((min(a, b), max(a, b)))
    for a in range(n):
        for b in range(a + 1, n):
            if (a, b) not in pairs and rng.random() < extra:
                pairs.add((a, b))
    edges = [(a, b, float(rng.uniform(0.5, 5.0)) if weighted else 1.0) for a, b in sorted(pairs)]
    return build_graph(edges, n)


def random_walk(rng, g, length, allow_stay=False):
    z = [int(rng.integers(0, g.node_count))]
    while len(z) < length:
        options = list(g.neighbors(z[-1])) + ([z[-1]] if allow_stay else [])
        z.append(int(rng.choice(options)))
    return z


def path_graph(n):
    return build_graph([(i, i + 1, 1.0) for i in range(n - 1)], n)


def star_graph(leaves):
    return build_graph([(0, i, 1.0) for i in range(1, leaves + 1)], leaves + 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture(params=kernels.available_backends())
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    mod = kernels.get_backend(request.param)
    for name in ("soft_backward", "forward_svf", "local_depth_sums"):
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


# -- acceptance criterion reporting -------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _CRITERIA.get(number, (title, "PASS"))[1]
        status = "PASS" if rep.passed and prev == "PASS" else "FAIL"
        _CRITERIA[number] = (title, status)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, status = _CRITERIA[number]
        terminalreporter.write_line(f"{status}  criterion {number:>2}: {title}")
