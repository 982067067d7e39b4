"""Collects the acceptance results and prints one line per criterion."""

_DOCS = {}
_RESULTS = {}


def pytest_collection_modifyitems(config, items):
    for item in items:
        if "test_acceptance" not in item.nodeid:
            continue
        doc = (getattr(item, "obj", None).__doc__ or "").strip().splitlines()
        _DOCS[item.nodeid] = doc[0] if doc else item.name


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    _RESULTS[report.nodeid] = (report.outcome, report.duration)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for nodeid in sorted(_RESULTS):
        outcome, duration = _RESULTS[nodeid]
        word = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(
            "%s  %s  (%.2fs)" % (word, _DOCS.get(nodeid, nodeid), duration))
