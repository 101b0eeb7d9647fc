import pytest

from recvc import make_layout

# Worked example: plain sharing of a 27-bit message.
M = "011011010110110011100101101"
EXAMPLE_SHARES = (
    "102012012010201201201020102",
    "110020022120111210101221001",
    "121001002200021222001122200",
)

# Recursive example: M_1, M_2, M_3 hidden in the shares of M.
HIDDEN = ("1", "010", "110101101")
RECURSIVE_SHARES = (
    "011122102011101221001121202",
    "020101122121021200101022100",
    "002110112201211212201220001",
)
# level k -> the embedded share strings for players 1, 2, 3
EMBEDDED = {
    3: ("011122102", "121021200", "201220001"),
    2: ("011", "021", "001"),
    1: ("0", "2", "1"),
}


def syms(s):
    return tuple(int(c) for c in s)


def bitstr(bits):
    return "".join(map(str, bits))


class ScriptedSource:
    """Returns pre-chosen option indices and records every requested range."""

    def __init__(self, picks=()):
        self.picks = list(picks)
        self.requests = []

    def randbelow(self, m):
        self.requests.append(m)
        pick = self.picks.pop(0) if self.picks else 0
        assert 0 <= pick < m
        return pick


@pytest.fixture
def four_level_layout():
    return make_layout((1, 3, 9, 27))


@pytest.fixture
def recursive_shares():
    return tuple(syms(s) for s in RECURSIVE_SHARES)


_acceptance = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance.append((marker.args[0], marker.args[1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_acceptance):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number:>2}: {title}")
