import sys


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance-criterion result lines into the terminal summary
    so they survive output capture."""
    lines = []
    for name, mod in list(sys.modules.items()):
        if name.rpartition(".")[2] == "test_acceptance" and mod is not None:
            lines = getattr(mod, "RESULTS", [])
            if lines:
                break
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
