"""Frequencies, directions, element lattices and feed placement.

All quantities are SI internally: metres, hertz, radians. Conversions from
the mm / GHz / degree interface units happen at construction time only.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import GeometryError

SPEED_OF_LIGHT = 299_792_458.0  # m/s, exact
TWO_PI = 2.0 * np.pi


def _frozen(arr):
    """Return a float64 copy of arr that cannot be written to."""
    out = np.array(arr, dtype=np.float64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class FrequencyPoint:
    """A single evaluation frequency with its derived wave quantities.

    Attributes
    ----------
    frequency : float
        Hz.
    wavelength : float
        Free-space wavelength, m.
    wavenumber : float
        2*pi / wavelength, rad/m.
    """

    frequency: float
    wavelength: float
    wavenumber: float


def frequency_point(frequency):
    """Build a FrequencyPoint from a frequency in Hz.

    Parameters
    ----------
    frequency : float
        Must be finite and strictly positive.
    """
    frequency = float(frequency)
    if not np.isfinite(frequency) or frequency <= 0.0:
        raise ValueError(f"frequency must be finite and > 0, got {frequency}")
    wavelength = SPEED_OF_LIGHT / frequency
    return FrequencyPoint(frequency, wavelength, TWO_PI / wavelength)


def frequency_point_ghz(frequency_ghz):
    """frequency_point with the argument in GHz."""
    return frequency_point(float(frequency_ghz) * 1e9)


@dataclass(frozen=True)
class Direction:
    """Propagation or arrival direction in the forward hemisphere.

    theta is the polar angle off the surface normal and is signed: within a
    fixed phi half-plane, negative theta means the mirrored half-plane
    (phi + pi). phi is the azimuth in [0, 2*pi). Radians.
    """

    theta: float
    phi: float

    def __post_init__(self):
        if not np.isfinite(self.theta) or abs(self.theta) > np.pi / 2 + 1e-12:
            raise GeometryError(f"|theta| must be <= pi/2, got {self.theta}")
        if not np.isfinite(self.phi):
            raise GeometryError("phi must be finite")
        phi = float(np.mod(self.phi, TWO_PI))
        if phi >= TWO_PI:  # mod of a tiny negative can round up to 2*pi
            phi = 0.0
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "theta", float(self.theta))

    @classmethod
    def from_degrees(cls, theta_deg, phi_deg=0.0):
        return cls(np.radians(theta_deg), np.radians(phi_deg))

    @property
    def theta_deg(self):
        return np.degrees(self.theta)

    @property
    def phi_deg(self):
        return np.degrees(self.phi)


def direction_cosines(direction):
    """Return (u, v) = (sin(theta) cos(phi), sin(theta) sin(phi)).

    The pair always satisfies u^2 + v^2 <= 1 for a real direction.
    """
    st = np.sin(direction.theta)
    return st * np.cos(direction.phi), st * np.sin(direction.phi)


def direction_from_cosines(u, v):
    """Inverse of direction_cosines, with theta >= 0 and phi in [0, 2*pi)."""
    r2 = u * u + v * v
    if r2 > 1.0 + 1e-12:
        raise GeometryError(f"(u, v) outside the unit disk: u={u} v={v}")
    theta = np.arcsin(min(np.sqrt(r2), 1.0))
    phi = np.arctan2(v, u) if r2 > 0.0 else 0.0
    return Direction(theta, phi)


def signed_theta_in_plane(u, v, phi_plane):
    """Signed polar angle of (u, v) folded into the phi_plane cut.

    Points whose azimuth lies within 90 deg of phi_plane get positive theta,
    points on the opposite half-plane negative theta.
    """
    r = min(np.hypot(u, v), 1.0)
    theta = np.arcsin(r)
    if r == 0.0:
        return 0.0
    dphi = np.mod(np.arctan2(v, u) - phi_plane, TWO_PI)
    return theta if np.cos(dphi) >= 0.0 else -theta


@dataclass(frozen=True)
class SurfaceGeometry:
    """Rectangular lattice of reflecting elements centred on the origin.

    x and y hold the element centre coordinates along each axis in metres;
    the full lattice is their Cartesian product. aperture_area is the
    occupied area nx*dx * ny*dy.
    """

    nx: int
    ny: int
    dx: float
    dy: float
    x: np.ndarray = field(repr=False)
    y: np.ndarray = field(repr=False)
    aperture_area: float

    @property
    def n_elements(self):
        return self.nx * self.ny

    def meshes(self):
        """Element coordinate meshes X, Y of shape (nx, ny)."""
        return np.meshgrid(self.x, self.y, indexing="ij")

    def digest(self):
        """Short content fingerprint used for provenance tracking."""
        import hashlib

        h = hashlib.sha256()
        h.update(np.asarray([self.nx, self.ny], dtype=np.int64).tobytes())
        h.update(np.asarray([self.dx, self.dy], dtype=np.float64).tobytes())
        return h.hexdigest()[:16]


def make_grid(size_x, size_y, spacing):
    """Fill a size_x by size_y rectangle (metres) with a square lattice.

    The element count per axis is floor(size / spacing); the lattice is
    centred so that its centroid sits on the origin. A relative tolerance of
    1e-12 absorbs one-ulp shortfalls when size is an exact multiple of
    spacing.
    """
    size_x, size_y, spacing = float(size_x), float(size_y), float(spacing)
    if not (np.isfinite(spacing) and spacing > 0.0):
        raise GeometryError(f"spacing must be finite and > 0, got {spacing}")
    if size_x < spacing or size_y < spacing:
        raise GeometryError(
            f"surface {size_x} x {size_y} m too small for spacing {spacing} m"
        )
    nx = int(np.floor(size_x / spacing * (1.0 + 1e-12)))
    ny = int(np.floor(size_y / spacing * (1.0 + 1e-12)))
    x = (np.arange(nx) - (nx - 1) / 2.0) * spacing
    y = (np.arange(ny) - (ny - 1) / 2.0) * spacing
    area = nx * spacing * ny * spacing
    return SurfaceGeometry(nx, ny, spacing, spacing, _frozen(x), _frozen(y), area)


@dataclass(frozen=True)
class FeedSpec:
    """Point feed above the surface plane with a cos^q power pattern.

    position is the feed phase centre (m); boresight the unit vector the
    pattern is centred on. The broadside directivity of the cos^q pattern is
    2*(q + 1), so gain_dbi is derived rather than stored.
    """

    position: np.ndarray = field(repr=False)
    q: float
    boresight: np.ndarray = field(repr=False)

    @property
    def gain_dbi(self):
        return 10.0 * np.log10(2.0 * (self.q + 1.0))


def make_feed(position, q, boresight=None):
    """Validated FeedSpec constructor.

    position must lie strictly above the surface plane (z > 0). boresight
    defaults to pointing at the surface centre and must aim into the
    half-space containing the surface (negative z component).
    """
    position = np.asarray(position, dtype=np.float64)
    if position.shape != (3,):
        raise GeometryError("feed position must be a 3-vector")
    if not np.all(np.isfinite(position)) or position[2] <= 0.0:
        raise GeometryError("feed must sit strictly above the surface plane")
    if q < 0.0 or not np.isfinite(q):
        raise GeometryError(f"pattern exponent q must be >= 0, got {q}")
    if boresight is None:
        boresight = -position
    boresight = np.asarray(boresight, dtype=np.float64)
    norm = np.linalg.norm(boresight)
    if boresight.shape != (3,) or norm == 0.0 or not np.isfinite(norm):
        raise GeometryError("boresight must be a nonzero 3-vector")
    boresight = boresight / norm
    if boresight[2] >= 0.0:
        raise GeometryError("boresight must point toward the surface plane")
    return FeedSpec(_frozen(position), float(q), _frozen(boresight))


def feed_position_polar(distance, direction):
    """Feed position at a given distance along a Direction from the origin."""
    u, v = direction_cosines(direction)
    w = np.cos(direction.theta)
    return np.array([distance * u, distance * v, distance * w])
