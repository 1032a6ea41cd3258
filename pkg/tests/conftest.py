from mpmath import mp, mpf

ACCEPTANCE_LINES = []


def close(a, b, tol, bits=256):
    """|a - b| <= tol, compared at ``bits`` rather than the 53-bit global default."""
    with mp.workprec(bits + 20):
        return abs(mpf(a) - mpf(b)) <= mpf(tol)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
