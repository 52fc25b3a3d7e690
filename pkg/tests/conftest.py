import random

import pytest

from helpers import h_tree, random_tree
from treembed.tree import build_tree, star_tree

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def htree():
    return h_tree()


@pytest.fixture
def unit_star():
    def make(k):
        return star_tree(*([1] * k))
    return make


@pytest.fixture
def path3():
    return build_tree([("a", "b", 1), ("b", "c", 2)])


@pytest.fixture(scope="session")
def random_trees():
    rng = random.Random(20240611)
    return [random_tree(rng) for _ in range(200)]


def pytest_configure(config):
    config.addinivalue_line("markers", "acceptance(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is None or report.when != "call":
        return
    number, title = mark.args
    verdict = "PASS" if report.passed else "FAIL"
    ACCEPTANCE_LINES.append(f"criterion {number}: {verdict}  {title}  ({report.duration:.2f}s)")
    ACCEPTANCE_LINES.sort(key=lambda line: int(line.split()[1].rstrip(":")))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
