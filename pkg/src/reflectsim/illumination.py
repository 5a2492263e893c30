"""Complex element excitations and feed power bookkeeping.

The illumination is the incident field sampled at the element centres. For
a far source it is a unit-amplitude phase ramp; for a point feed it carries
the cos^q pattern taper, the 1/d spreading loss and the spherical phase
-k*d. Spillover is the fraction of the feed's radiated power whose rays
actually strike the surface rectangle.
"""

import hashlib
import warnings
from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, direction_cosines

HEMISPHERE_MIN_GAIN_DBI = 3.01  # directivity 2 of the q = 0 pattern
_SPILLOVER_CELLS = 512  # fixed angular tessellation per axis


@dataclass(frozen=True)
class Illumination:
    """Complex excitation per element, shape (nx, ny), at one frequency."""

    amplitudes: np.ndarray = field(repr=False)
    frequency: object
    kind: str

    def digest(self):
        h = hashlib.sha256()
        h.update(self.amplitudes.tobytes())
        h.update(np.float64(self.frequency.frequency).tobytes())
        return h.hexdigest()[:16]


def _sealed(arr):
    arr.flags.writeable = False
    return arr


def plane_wave_illumination(grid, incident, f):
    """Unit plane wave arriving from `incident` sampled on the lattice.

    Elements nearer the source are reached earlier, so the phase advances
    with the projection onto the arrival direction:

        a_i = exp(+j * k * (x_i*u_inc + y_i*v_inc))
    """
    ui, vi = direction_cosines(incident)
    X, Y = grid.meshes()
    amps = np.exp(1j * f.wavenumber * (X * ui + Y * vi))
    return Illumination(_sealed(amps), f, "plane-wave")


def feed_illumination(grid, feed, f):
    """Spherical-wave excitation from a cos^q point feed.

    Field amplitude follows cos^(q/2)(psi)/d with psi the angle off the feed
    boresight, phase is -k*d; the result is normalized to max |a| = 1.
    Elements behind the feed pattern's forward hemisphere get amplitude 0.
    """
    X, Y = grid.meshes()
    px, py, pz = feed.position
    rx, ry, rz = X - px, Y - py, -pz
    d = np.sqrt(rx * rx + ry * ry + rz * rz)
    cos_psi = (rx * feed.boresight[0] + ry * feed.boresight[1] + rz * feed.boresight[2]) / d
    cos_psi = np.clip(cos_psi, 0.0, 1.0)
    taper = cos_psi ** (feed.q / 2.0) / d
    amps = taper * np.exp(-1j * f.wavenumber * d)
    peak = np.abs(amps).max()
    if peak == 0.0:
        raise ValueError("feed illuminates no element; check boresight")
    amps = amps / peak
    return Illumination(_sealed(amps), f, "feed")


def feed_q_from_gain(gain_dbi):
    """Invert broadside gain 2*(q + 1) to the pattern exponent q.

    Gains below the hemispherical minimum of 3.01 dBi have no q >= 0 and are
    rejected. Values in the rounding sliver just above the threshold clamp
    to q = 0.
    """
    gain_dbi = float(gain_dbi)
    if not np.isfinite(gain_dbi) or gain_dbi < HEMISPHERE_MIN_GAIN_DBI:
        raise ValueError(
            f"feed gain must be >= {HEMISPHERE_MIN_GAIN_DBI} dBi, got {gain_dbi}"
        )
    return max(0.0, 10.0 ** (gain_dbi / 10.0) / 2.0 - 1.0)


def spillover_efficiency(feed, grid):
    """Fraction of the feed's radiated power intercepted by the surface.

    Integrates the cos^q power pattern over a fixed 512 x 512 midpoint
    tessellation of the feed's forward hemisphere (polar angle psi around
    the boresight by azimuth alpha) and classifies each cell by whether its
    central ray strikes the occupied surface rectangle. Both numerator and
    denominator use the same rule, so the result lies in [0, 1] and reaches
    1 when the surface subtends the whole radiating hemisphere.
    """
    if grid.aperture_area == 0.0 or grid.n_elements == 0:
        warnings.warn("zero-area surface intercepts no power", stacklevel=2)
        return 0.0

    b = feed.boresight
    ref = np.array([0.0, 0.0, 1.0]) if abs(b[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(b, ref)
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(b, e1)

    n = _SPILLOVER_CELLS
    psi = (np.arange(n) + 0.5) * (np.pi / 2) / n
    alpha = (np.arange(n) + 0.5) * TWO_PI / n
    sin_psi = np.sin(psi)[:, None]
    cos_psi = np.cos(psi)[:, None]
    ca, sa = np.cos(alpha)[None, :], np.sin(alpha)[None, :]

    # ray direction per cell, feed-local frame back to xyz
    dirs = (
        sin_psi * ca * e1[:, None, None]
        + sin_psi * sa * e2[:, None, None]
        + cos_psi * np.ones_like(ca) * b[:, None, None]
    )
    weight = np.cos(psi)[:, None] ** feed.q * sin_psi  # dpsi dalpha constant

    dz = dirs[2]
    going_down = dz < 0.0
    safe_dz = np.where(going_down, dz, -1.0)
    t = np.where(going_down, -feed.position[2] / safe_dz, 0.0)
    hx = feed.position[0] + t * dirs[0]
    hy = feed.position[1] + t * dirs[1]
    half_x = grid.nx * grid.dx / 2.0
    half_y = grid.ny * grid.dy / 2.0
    hit = going_down & (np.abs(hx) <= half_x) & (np.abs(hy) <= half_y)

    total = weight.sum() * n  # weight is constant over alpha
    captured = (weight * hit).sum()
    return float(captured / total)
