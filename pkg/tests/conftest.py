"""Shared pytest wiring.

Collects acceptance-criterion outcomes during the run and prints one
line per criterion in the terminal summary, so the gate status is
visible even in a long -v listing.
"""

_ACCEPTANCE = []


def record_criterion(cid: int, title: str, passed: bool) -> None:
    _ACCEPTANCE.append((cid, title, passed))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for cid, title, passed in sorted(_ACCEPTANCE):
        terminalreporter.write_line(
            "criterion %2d: %s - %s" % (cid, "PASS" if passed else "FAIL", title))
