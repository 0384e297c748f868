"""Shared pytest hooks: per-criterion pass/fail summary for the acceptance suite."""

_results = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if name.startswith("test_criterion_"):
        _results[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_results, key=lambda n: int(n.split("_")[2])):
        label = name.replace("test_criterion_", "criterion ")
        outcome = _results[name].upper()
        terminalreporter.write_line("%-60s %s" % (label, outcome))
