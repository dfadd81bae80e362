import os

import hypothesis
import pytest
from hypothesis import strategies as st

from fusionwalk.rootsys import build_root_system


hypothesis.settings.register_profile("default", max_examples=40, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=300, deadline=None)
hypothesis.settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SMALL_SYSTEMS = [("A", 1), ("A", 2), ("A", 3), ("B", 2), ("B", 3), ("C", 2), ("C", 3), ("D", 3), ("D", 4)]


@st.composite
def systems(draw, pool=SMALL_SYSTEMS):
    fam, rank = draw(st.sampled_from(pool))
    return build_root_system(fam, rank)


@st.composite
def alcove_weights(draw, rs, k):
    from fusionwalk.alcove_markov import enumerate_alcove

    return draw(st.sampled_from(enumerate_alcove(rs, k).weights))


@pytest.fixture(params=SMALL_SYSTEMS, ids=lambda p: f"{p[0]}{p[1]}")
def small_rs(request):
    return build_root_system(*request.param)


# acceptance report ---------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[num])
