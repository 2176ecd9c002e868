"""Acceptance bookkeeping: one PASS/FAIL line per ``criterion`` marked test."""
import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when not in ("setup", "call"):
        return
    n, title = marker.args
    detail = dict(item.user_properties).get("detail", "")
    if rep.failed:
        _CRITERIA[n] = ("FAIL", title, detail)
    elif rep.when == "call" and n not in _CRITERIA:
        _CRITERIA[n] = ("PASS", title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        verdict, title, detail = _CRITERIA[n]
        line = f"criterion {n:2d} {verdict}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)


@pytest.fixture
def detail(record_property):
    """Attach a one-line summary of realized values to the acceptance line."""

    def note(text):
        record_property("detail", text)

    return note
