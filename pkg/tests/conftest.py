from __future__ import annotations

import numpy as np
import pytest

import reflectsim as rs

# canonical 150 GHz setup: quarter-wave lattice, source 60 deg off normal
DESIGN_GHZ = 150.0
INCIDENCE_DEG = -60.0
FEED_DISTANCE_M = 0.0193
FEED_GAIN_DBI = 25.0


@pytest.fixture(scope="session")
def f0():
    return rs.frequency_point_ghz(DESIGN_GHZ)


@pytest.fixture(scope="session")
def spacing(f0):
    return f0.wavelength / 4.0


@pytest.fixture(scope="session")
def grid36(f0, spacing):
    return rs.make_grid(0.036, 0.036, spacing)


@pytest.fixture(scope="session")
def grid18(f0, spacing):
    return rs.make_grid(0.018, 0.018, spacing)


@pytest.fixture(scope="session")
def grid9(spacing):
    # 9 x 9 lattice whose element centres include the origin and (dx, 0)
    return rs.make_grid(9.5 * spacing, 9.5 * spacing, spacing)


@pytest.fixture(scope="session")
def incidence():
    return rs.Direction.from_degrees(INCIDENCE_DEG, 0.0)


@pytest.fixture(scope="session")
def broadside():
    return rs.Direction.from_degrees(0.0, 0.0)


@pytest.fixture(scope="session")
def horn_feed():
    pos = rs.feed_position_polar(FEED_DISTANCE_M, rs.Direction.from_degrees(INCIDENCE_DEG, 0.0))
    return rs.make_feed(pos, rs.feed_q_from_gain(FEED_GAIN_DBI))


def assert_wrapped_close(a, b, atol):
    """Assert phases equal modulo 2*pi."""
    d = np.mod(np.asarray(a) - np.asarray(b) + np.pi, 2 * np.pi) - np.pi
    np.testing.assert_allclose(d, 0.0, atol=atol)
