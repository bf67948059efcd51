import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from arrowlab import AlternativeSet, profile_space  # noqa: E402
from arrowlab.lattice import PreferenceLattice  # noqa: E402

from acceptance_log import ACCEPTANCE_LINES  # noqa: E402


@pytest.fixture(scope="session")
def alts3():
    return AlternativeSet.default(3)


@pytest.fixture(scope="session")
def pref3(alts3):
    return PreferenceLattice(alts3)


@pytest.fixture(scope="session")
def space2(alts3):
    return profile_space(alts3, 2)


@pytest.fixture(scope="session")
def space3(alts3):
    return profile_space(alts3, 3)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
