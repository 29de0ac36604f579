import sys
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from umagma.classify import enumerate_points  # noqa: E402
from umagma.magma import enumerate_magmas, trivial_magma  # noqa: E402

CRITERIA: dict[int, tuple[bool, str]] = {}


@lru_cache(maxsize=None)
def order2_magmas():
    return tuple(enumerate_magmas(2))


@lru_cache(maxsize=None)
def points_x2(B, zero_x=None):
    """Every point from a two-element X to B with |A| <= 4."""
    return tuple(enumerate_points(2, B, 4, zero_x=zero_x))


@lru_cache(maxsize=None)
def partners(B):
    """Points whose middle magma is exactly ``B`` (|Y| <= 2, |C| <= 2)."""
    out = []
    for y in (1, 2):
        for C in (trivial_magma(),) + order2_magmas():
            out.extend(pt for pt in enumerate_points(y, C, B.size, zero_x=None) if pt.A == B)
    return tuple(out)


def all_points_x2():
    return [pt for B in order2_magmas() for pt in points_x2(B)]


@pytest.fixture
def criterion():
    """Record the outcome of an acceptance criterion for the summary table."""

    class Recorder:
        def __call__(self, number: int, passed: bool, detail: str = ""):
            CRITERIA[number] = (passed, detail)
            assert passed, f"criterion {number} failed: {detail}"

    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        passed, detail = CRITERIA[number]
        terminalreporter.write_line(
            f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
