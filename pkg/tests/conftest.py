from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")



_CRITERIA = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if not name.startswith("test_criterion_"):
        return
    i = int(name.rsplit("_", 1)[-1])
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        if hasattr(report, "wasxfail"):
            status = "FAIL (expected, see notes)" if report.outcome == "skipped" else "PASS (unexpected)"
        else:
            status = {"passed": "PASS", "failed": "FAIL"}.get(report.outcome, report.outcome.upper())
        _CRITERIA[i] = status


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for i in sorted(_CRITERIA):
        terminalreporter.write_line(f"criterion {i}: {_CRITERIA[i]}")
