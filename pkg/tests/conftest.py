import math

import pytest
from hypothesis import strategies as st

from cmvtrace import validate_word
from cmvtrace.cli import draw_word

EVEN_PERIODS = (2, 4, 6, 8)


def seeded_words(p, count, radius=0.9, base_seed=42):
    """The same deterministic ensemble the sweep command draws."""
    return [draw_word(p, radius, base_seed + i) for i in range(count)]


def disk_coefficients(max_radius=0.93):
    """Complex numbers drawn by (radius, angle) so the disk is well covered."""
    return st.builds(
        lambda r, t: complex(r * math.cos(t), r * math.sin(t)),
        st.floats(0.0, max_radius),
        st.floats(0.0, 2.0 * math.pi, exclude_max=True),
    )


@st.composite
def words(draw, periods=EVEN_PERIODS, max_radius=0.93):
    p = draw(st.sampled_from(periods))
    return validate_word([draw(disk_coefficients(max_radius)) for _ in range(p)])


def unimodulars():
    return st.builds(
        lambda t: complex(math.cos(t), math.sin(t)),
        st.floats(0.0, 2.0 * math.pi, exclude_max=True),
    )


@pytest.fixture
def fixture_word():
    """The p = 2 hand-checked word used throughout."""
    return validate_word([0.5, 0.0])


@pytest.fixture
def quad_word():
    """A p = 4 word with a complex terminating coefficient."""
    return validate_word([0.5, 0.0, 0.0, 0.3j])
