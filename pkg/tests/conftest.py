import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from boxball.config import BoxBallConfig

settings.register_profile(
    "default",
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def configs(draw, max_boxes=120):
    bits = draw(st.lists(st.booleans(), max_size=max_boxes))
    return BoxBallConfig.from_bits(np.array(bits, dtype=bool))


@st.composite
def dense_configs(draw, max_boxes=200):
    """Bernoulli(p) configurations with p itself drawn, so all regimes show up."""
    n = draw(st.integers(1, max_boxes))
    p = draw(st.sampled_from([0.1, 0.3, 0.5, 0.7, 0.9]))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = np.random.default_rng(seed)
    return BoxBallConfig.from_bits(rng.random(n) < p)


def random_configs(count, max_boxes=200, ps=(0.3, 0.5, 0.7), seed=2024):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_boxes + 1))
        p = ps[int(rng.integers(len(ps)))]
        out.append(BoxBallConfig.from_bits(rng.random(n) < p))
    return out


GOLDEN = [
    {2, 3, 5, 6, 7, 11},
    {4, 8, 9, 10, 12, 13},
    {5, 11, 14, 15, 16, 17},
    {6, 12, 18, 19, 20, 21},
]

# two excursions from 0, so the path splits at box 2
SPLIT = {1, 3, 4, 5, 7, 8}


@pytest.fixture
def golden():
    return BoxBallConfig(GOLDEN[0])


@pytest.fixture
def split():
    return BoxBallConfig(SPLIT)


# one summary line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
