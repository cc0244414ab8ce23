import sys


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance criteria pass/fail lines into the summary."""
    for name in ("tests.test_acceptance", "test_acceptance"):
        mod = sys.modules.get(name)
        if mod is not None and getattr(mod, "ACCEPTANCE_LINES", None):
            terminalreporter.section("acceptance criteria")
            for line in mod.ACCEPTANCE_LINES:
                terminalreporter.write_line(line)
            break
