def pytest_terminal_summary(terminalreporter):
    """Echo one line per acceptance criterion after the run."""
    try:
        from test_acceptance import REPORT
    except ImportError:
        return
    if REPORT:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in REPORT:
            terminalreporter.write_line(line)
