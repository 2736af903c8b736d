import numpy as np
import pytest

from sskit.rayleigh import CensoringScheme, RayleighParams, RngStream, sample_progressive

R1 = (0,) * 9 + (20,)
R2 = (20,) + (0,) * 9
R3 = (2,) * 10


def draw_pair(seed, removals_x=R1, removals_y=R1, lam=1.0, alpha=1.0, mu=1.0):
    root = RngStream(seed, 7)
    xs = sample_progressive(RayleighParams(mu, lam), CensoringScheme.from_removals(removals_x),
                            root.substream(0))
    ys = sample_progressive(RayleighParams(mu, alpha), CensoringScheme.from_removals(removals_y),
                            root.substream(1))
    return xs, ys


@pytest.fixture
def pair():
    return draw_pair(11)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one summary line per acceptance criterion, echoed at the end of the run
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
