import time

import numpy as np
import pytest

from extgeom.algebra import preset
from extgeom.geometry import Tetrad, TetradGeometry
from extgeom.random_fields import killing_tetrad, random_tetrad
from extgeom.report import points_for

TETRAD_SEEDS = tuple(range(100, 110))

# criterion number -> (passed, message); filled by test_acceptance
ACCEPTANCE: dict = {}


class Bed:
    """A tetrad-generated su2xu1 configuration with its sample points."""

    def __init__(self, H, seed):
        self.preset = preset("su2xu1")
        self.chart = self.preset.chart
        self.seed = seed
        self.pts = points_for(self.chart, 64, seed)
        t0 = time.perf_counter()
        self.tet = Tetrad(H)
        self.geo = TetradGeometry.build(self.tet, self.preset.fiber_fields, self.preset.constants)
        self.build_time = time.perf_counter() - t0


@pytest.fixture(scope="session")
def su2xu1():
    return preset("su2xu1")


@pytest.fixture(scope="session")
def tetrad_beds():
    p = preset("su2xu1")
    return [Bed(random_tetrad(p.chart, np.random.default_rng(s)), s) for s in TETRAD_SEEDS]


@pytest.fixture(scope="session")
def tetrad_bed(tetrad_beds):
    return tetrad_beds[0]


@pytest.fixture(scope="session")
def killing_bed():
    p = preset("su2xu1")
    return Bed(killing_tetrad(p, np.random.default_rng(14)), 14)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {msg}")
