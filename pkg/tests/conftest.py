import re
from functools import lru_cache

import pytest

from grouprings.corpus import data_text
from grouprings.pipeline import RunConfig, load_group_text

GROUP_FILES = {
    "S3": "s3.txt",
    "D8": "d8.txt",
    "D16": "d16.txt",
    "Q8": "q8.txt",
    "C7C3": "c7c3.txt",
    "C5C4": "c5c4.txt",
}

EXTRA = {
    "A4": "a: (1 2)(3 4)\nc: (1 2 3)",
    "S4": "a: (1 2 3 4)\nb: (1 2)",
    "C6": "g: (1 2 3 4 5 6)",
    "C2xC2": "a: (1 2)\nb: (3 4)",
}


@lru_cache(maxsize=None)
def group(name):
    if name in GROUP_FILES:
        return load_group_text(data_text(GROUP_FILES[name]), RunConfig(), name=name)
    return load_group_text(EXTRA[name], RunConfig(), name=name)


@pytest.fixture(params=sorted(GROUP_FILES))
def corpus_group(request):
    return group(request.param)


_CRITERION = re.compile(r"test_criterion_(\d+)")
_results = {}


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m or "test_acceptance" not in report.nodeid:
        return
    n = int(m.group(1))
    if report.when == "call":
        _results[n] = _results.get(n, True) and report.passed
    elif report.failed or report.skipped:
        _results[n] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if _results[n] else 'FAIL'}")
