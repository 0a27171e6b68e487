import numpy as np
import pytest

from crackfgm.material import SI3N4, SUS304, FgmSpec, ThermalState, isotropic
from crackfgm.section import integrate_section

STEEL = isotropic("steel", 200e9, 0.3, 7800.0, alpha=1.2e-5)


@pytest.fixture
def steel_section():
    return integrate_section(FgmSpec(STEEL, STEEL, 0.0, 0.3), ThermalState(), 0.1)


@pytest.fixture
def fgm_section():
    return integrate_section(FgmSpec(SI3N4, SUS304, 1.0), ThermalState(600.0, 300.0), 0.1)


@pytest.fixture
def distorted_quad():
    corners = np.array([[0.0, 0.0], [1.2, 0.1], [1.0, 0.9], [-0.1, 1.1]])
    mids = 0.5 * (corners + np.roll(corners, -1, axis=0))
    return np.vstack([corners, mids])


# One line per acceptance criterion, filled by test_acceptance.py and printed
# after the run so the verdicts appear in the captured pytest output.
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
