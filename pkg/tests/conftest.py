import math

import numpy as np
import pytest

from meshgame import build_mesh, generate_scenario

# Acceptance results collected by tests/test_acceptance.py and echoed after
# the run so the per-criterion verdicts are visible in plain pytest output.
ACCEPTANCE_RESULTS: dict[str, tuple[bool, str]] = {}


def record_acceptance(criterion: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[criterion] = (ok, detail)
    assert ok, f"{criterion}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[criterion]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{criterion}: {verdict} - {detail}")


@pytest.fixture
def fan5():
    return generate_scenario("fan5")


@pytest.fixture
def fan4():
    return generate_scenario("fan4")


def make_strip(bad_vertex_shift=None):
    """Strip of 11 near-equilateral triangles between two horizontal rows.

    bad_vertex_shift, when given, displaces the top-row vertex above the
    (2,3) bottom edge; (0.45, -0.25) squashes exactly one element (index 2)
    below quality 0.6 while every other element stays above it.
    """
    h = math.sqrt(3) / 2
    bottom = [(float(i), 0.0) for i in range(7)]
    top = [(i + 0.5, h) for i in range(6)]
    verts = np.array(bottom + top)
    if bad_vertex_shift is not None:
        dx, dy = bad_vertex_shift
        verts[9] = (2.5 + dx, h + dy)
    lower = [[i, i + 1, 7 + i] for i in range(6)]
    upper = [[7 + i, i + 1, 7 + i + 1] for i in range(5)]
    return build_mesh(verts, np.array(lower + upper, dtype=np.int64))


@pytest.fixture
def strip_one_bad():
    return make_strip(bad_vertex_shift=(0.45, -0.25))
