import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wordrank.corpus import Token, TokenizedDocument  # noqa: E402
from wordrank.graph import Edge, WordGraph, load_graph  # noqa: E402

_criteria = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion reported in the summary")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker and (report.when == "call" or (report.when == "setup" and report.outcome != "passed")):
        _criteria.append((marker.args[0], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _criteria:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else outcome.upper()}  {name}")


def make_graph(n, edges, start=0, end=None):
    return WordGraph(n, [Edge(*e) for e in edges], start, n - 1 if end is None else end)


def doc_of(*sentences, tag="NN"):
    return TokenizedDocument(tuple(tuple(Token(w, tag) for w in s.split()) for s in sentences))


@pytest.fixture
def lattice():
    from importlib import resources

    return load_graph(resources.files("wordrank.data").joinpath("lattice.graph").read_text(encoding="utf-8"))


@pytest.fixture
def diamond():
    return make_graph(4, [(0, 1, "x", 1.0), (0, 2, "x", 2.0), (1, 3, "y", 1.0), (2, 3, "y", 1.0)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
