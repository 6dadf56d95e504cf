from __future__ import annotations

import re

from hypothesis import HealthCheck, settings

settings.register_profile(
    "filtra",
    deadline=None,
    derandomize=True,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("filtra")

_CRITERION = re.compile(r"test_criterion_(\d+)")
_titles: dict[str, tuple[int, str]] = {}
_outcomes: dict[str, str] = {}


def pytest_collection_modifyitems(session, config, items):
    for item in items:
        m = _CRITERION.match(item.name)
        if m and item.fspath.basename == "test_acceptance.py":
            doc = (item.function.__doc__ or "").strip().splitlines()
            _titles[item.nodeid] = (int(m.group(1)), doc[0] if doc else item.name)


def pytest_runtest_logreport(report):
    if report.nodeid not in _titles:
        return
    if report.when == "call" or report.failed:
        if _outcomes.get(report.nodeid) != "FAIL":
            _outcomes[report.nodeid] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _titles:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (num, title) in sorted(_titles.items(), key=lambda kv: kv[1][0]):
        outcome = _outcomes.get(nodeid, "NOT RUN")
        terminalreporter.write_line(f"criterion {num:2d}: {outcome}  {title}")
