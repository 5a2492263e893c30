"""Element phase profile synthesis.

A profile is the per-element reflection phase programmed into the surface at
the design frequency. It compensates the phase of the arriving wave (plane
or spherical) and adds the linear term that steers the outgoing beam, so the
stored phases are frequency independent; evaluating the surface off the
design frequency is what produces beam squint.
"""

import hashlib
from dataclasses import dataclass, field

import numpy as np

from .geometry import TWO_PI, direction_cosines

PLANE_WAVE = "plane-wave"
SPHERICAL_FEED = "spherical-feed"


@dataclass(frozen=True)
class PhaseProfile:
    """Per-element phases in [0, 2*pi), shape (nx, ny).

    mode records which synthesis produced it; bits is the quantizer depth or
    None for a continuous profile.
    """

    phases: np.ndarray = field(repr=False)
    design_frequency: object
    mode: str
    bits: int = None

    def digest(self):
        h = hashlib.sha256()
        h.update(self.phases.tobytes())
        h.update(np.float64(self.design_frequency.frequency).tobytes())
        return h.hexdigest()[:16]


def _wrap(phases):
    # mod can round a tiny negative input up to exactly 2*pi
    out = np.mod(phases, TWO_PI)
    out[out >= TWO_PI] = 0.0
    out.flags.writeable = False
    return out


def plane_wave_profile(grid, incident, reflect, f0):
    """Profile steering an incident plane wave into a reflected plane wave.

    The arriving wave advances in phase toward its source, so the
    compensation-plus-steering phase at element (x, y) is

        phi = -k0 * (x*(u_inc + u_ref) + y*(v_inc + v_ref))   (mod 2*pi)

    which for a broadside reflection is the classical linear reflectarray
    phase ramp against the angle of arrival.

    Parameters
    ----------
    grid : SurfaceGeometry
    incident, reflect : Direction
    f0 : FrequencyPoint
        Design frequency.
    """
    ui, vi = direction_cosines(incident)
    ur, vr = direction_cosines(reflect)
    X, Y = grid.meshes()
    phases = -f0.wavenumber * (X * (ui + ur) + Y * (vi + vr))
    return PhaseProfile(_wrap(phases), f0, PLANE_WAVE)


def spherical_feed_profile(grid, feed, reflect, f0):
    """Profile collimating a point feed into a reflected plane wave.

    The feed's spherical wave reaches element i with phase -k0*d_i, so the
    element adds +k0*d_i to flatten the wavefront and the same steering term
    as the plane-wave case:

        phi = k0*d_i - k0*(x*u_ref + y*v_ref)   (mod 2*pi)
    """
    ur, vr = direction_cosines(reflect)
    X, Y = grid.meshes()
    px, py, pz = feed.position
    d = np.sqrt((X - px) ** 2 + (Y - py) ** 2 + pz**2)
    phases = f0.wavenumber * d - f0.wavenumber * (X * ur + Y * vr)
    return PhaseProfile(_wrap(phases), f0, SPHERICAL_FEED)


def quantize_profile(profile, bits):
    """Snap each phase to the nearest of 2**bits uniform levels.

    Distance is circular, so phases just below 2*pi snap to level 0. Exact
    ties go to the lower level. Quantizing an already quantized profile is
    the identity.
    """
    bits = int(bits)
    if bits < 1:
        raise ValueError(f"bits must be >= 1, got {bits}")
    n = 2**bits
    step = TWO_PI / n
    m = np.ceil(profile.phases / step - 0.5).astype(np.int64) % n
    phases = m * step
    phases.flags.writeable = False
    return PhaseProfile(phases, profile.design_frequency, profile.mode, bits)
