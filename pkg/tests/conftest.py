import pytest

_results: dict[int, tuple[str, str]] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, name = mark.args
    if rep.when == "call" or rep.failed:
        status = "PASS" if rep.passed else "FAIL"
        if _results.get(number, ("", "PASS"))[1] == "PASS":
            _results[number] = (name, status)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        name, status = _results[number]
        terminalreporter.write_line(f"{status} {number:2d} {name}")
