"""Per-criterion summary for the acceptance suite.

Tests tagged ``@pytest.mark.criterion(n, "title")`` are grouped by ``n``; a
criterion passes when every test carrying it passes.
"""
import pytest

_results = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    n, title = mark.args
    entry = _results.setdefault(n, {"title": title, "ok": True, "seconds": 0.0, "tests": 0})
    if rep.when == "call":
        entry["tests"] += 1
        entry["seconds"] += rep.duration
    if rep.failed:
        entry["ok"] = False


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_results):
        e = _results[n]
        status = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2}: {status}  {e['title']}  ({e['seconds']:.2f}s)")
    passed = sum(e["ok"] for e in _results.values())
    terminalreporter.write_line(f"{passed}/{len(_results)} criteria pass")
