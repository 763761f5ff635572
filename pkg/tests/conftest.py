import pytest

from wdstab import _backend

BACKENDS = _backend.available()


@pytest.fixture(params=BACKENDS, ids=[k.NAME for k in BACKENDS])
def kern(request):
    return request.param


# -- acceptance summary: one line per criterion ------------------------------
_criteria = {}


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    number = _criterion_of.get(report.nodeid)
    if number is None:
        return
    ok = report.outcome == "passed"
    prev = _criteria.get(number, True)
    _criteria[number] = prev and ok


_criterion_of = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _criterion_of[item.nodeid] = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        status = "PASS" if _criteria[number] else "FAIL"
        terminalreporter.write_line(f"criterion {number:>2}: {status}")
