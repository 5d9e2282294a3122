def pytest_terminal_summary(terminalreporter):
    """Echo the one-line acceptance verdicts after capture is released."""
    try:
        from test_acceptance import VERDICT_LINES
    except ImportError:
        return
    if VERDICT_LINES:
        terminalreporter.section("acceptance verdicts")
        for line in sorted(VERDICT_LINES):
            terminalreporter.write_line(line)
