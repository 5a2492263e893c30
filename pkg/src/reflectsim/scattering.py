"""Radiation patterns of the programmed surface.

The scattered far field is the phased sum over elements

    E(u, v) = sum_i a_i * exp(j*phi_i) * exp(j*k*(x_i*u + y_i*v)) * cos(theta)**q_e

with a_i the illumination, phi_i the frequency-independent profile phase and
k the evaluation wavenumber. pattern_direct evaluates the sum literally for
any direction list; pattern_fft factorizes it over a (u, v) raster, which is
algebraically identical on the raster points.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .geometry import TWO_PI

RAW = "raw"
DIRECTIVITY = "directivity"
REALIZED_GAIN = "realized-gain"


@dataclass(frozen=True)
class PlaneCut:
    """Principal-plane cut: fixed azimuth, signed theta samples in radians."""

    phi: float
    theta: np.ndarray = field(repr=False)

    @classmethod
    def from_step(cls, phi=0.0, step_deg=0.25, span_deg=90.0):
        """Uniform signed cut covering [-span, +span] degrees inclusive."""
        n = int(round(2 * span_deg / step_deg)) + 1
        theta = np.radians(np.linspace(-span_deg, span_deg, n))
        theta.flags.writeable = False
        return cls(float(np.radians(phi)), theta)

    def direction_cosines(self):
        st = np.sin(self.theta)
        return st * np.cos(self.phi), st * np.sin(self.phi)

    def cos_theta(self):
        return np.cos(self.theta)

    @property
    def n_samples(self):
        return self.theta.shape[0]


@dataclass(frozen=True)
class UVRaster:
    """Cartesian (u, v) raster given by its two sample axes.

    Samples with u^2 + v^2 > 1 are invisible and carry field value 0.
    """

    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)

    @classmethod
    def square(cls, n=512):
        """n x n cell-centred raster covering the [-1, 1] square."""
        ax = -1.0 + (np.arange(n) + 0.5) * (2.0 / n)
        ax.flags.writeable = False
        return cls(ax, ax)

    def meshes(self):
        return np.meshgrid(self.u, self.v, indexing="ij")

    def cos_theta(self):
        U, V = self.meshes()
        return np.sqrt(np.clip(1.0 - U * U - V * V, 0.0, 1.0))

    def visible(self):
        U, V = self.meshes()
        return U * U + V * V <= 1.0

    @property
    def shape(self):
        return (self.u.shape[0], self.v.shape[0])


@dataclass(frozen=True)
class Provenance:
    """Content fingerprints of the inputs a pattern was computed from."""

    grid: str
    profile: str
    illumination: str


@dataclass(frozen=True)
class RadiationPattern:
    """Complex field samples on a PlaneCut or UVRaster at one frequency."""

    values: np.ndarray = field(repr=False)
    angles: object
    frequency: object
    element_exponent: float
    provenance: Provenance
    normalization: str = RAW

    def is_cut(self):
        return isinstance(self.angles, PlaneCut)

    def magnitude_db(self):
        mag = np.abs(self.values)
        with np.errstate(divide="ignore"):
            return 20.0 * np.log10(mag)

    def nearest_sample(self, direction):
        """Field value at the grid point nearest to a Direction."""
        st = np.sin(direction.theta)
        u = st * np.cos(direction.phi)
        v = st * np.sin(direction.phi)
        if self.is_cut():
            cut = self.angles
            # fold the direction into the signed cut convention
            proj = u * np.cos(cut.phi) + v * np.sin(cut.phi)
            theta_signed = np.arcsin(np.clip(proj, -1.0, 1.0))
            i = int(np.argmin(np.abs(cut.theta - theta_signed)))
            return self.values[i]
        i = int(np.argmin(np.abs(self.angles.u - u)))
        j = int(np.argmin(np.abs(self.angles.v - v)))
        return self.values[i, j]


def _element_factor(cos_theta, q_e, visible=None):
    f = np.where(cos_theta > 0.0, cos_theta, 0.0) ** q_e
    if visible is not None:
        f = np.where(visible, f, 0.0)
    return f


def _weights(profile, illum):
    if profile.phases.shape != illum.amplitudes.shape:
        raise ValueError(
            f"profile {profile.phases.shape} and illumination "
            f"{illum.amplitudes.shape} cover different lattices"
        )
    return illum.amplitudes * np.exp(1j * profile.phases)


def _check_inputs(grid, profile, illum, f):
    if (grid.nx, grid.ny) != profile.phases.shape:
        raise ValueError("profile does not match the surface lattice")
    if illum.frequency.frequency != f.frequency:
        raise ValueError(
            f"illumination computed at {illum.frequency.frequency} Hz, "
            f"pattern requested at {f.frequency} Hz"
        )


def pattern_direct(grid, profile, illum, f, angles, element_exponent=1.0):
    """Evaluate the scattering sum sample by sample.

    Works for both cut and raster angular grids; the reference path every
    faster evaluation must reproduce.
    """
    _check_inputs(grid, profile, illum, f)
    w = _weights(profile, illum).ravel()
    X, Y = grid.meshes()
    xs, ys = X.ravel(), Y.ravel()

    if isinstance(angles, PlaneCut):
        us, vs = angles.direction_cosines()
        e = _kernels.pattern_sum(xs, ys, w, f.wavenumber, us, vs)
        e = e * _element_factor(angles.cos_theta(), element_exponent)
    elif isinstance(angles, UVRaster):
        U, V = angles.meshes()
        e = _kernels.pattern_sum(xs, ys, w, f.wavenumber, U.ravel(), V.ravel())
        e = e.reshape(angles.shape)
        e = e * _element_factor(angles.cos_theta(), element_exponent, angles.visible())
    else:
        raise TypeError(f"unsupported angular grid type {type(angles).__name__}")

    e.flags.writeable = False
    return RadiationPattern(
        e,
        angles,
        f,
        float(element_exponent),
        Provenance(grid.digest(), profile.digest(), illum.digest()),
    )


def pattern_fft(grid, profile, illum, f, raster, element_exponent=1.0):
    """Factorized raster evaluation, identical to pattern_direct on the raster.

    The regular lattice makes the sum separable into two dense
    one-dimensional transforms, which is exact for arbitrary raster axes
    (off-design frequencies are incompatible with power-of-two transform
    sampling, so no zero-padded FFT grid is assumed).
    """
    if not isinstance(raster, UVRaster):
        raise TypeError("pattern_fft requires a UVRaster angular grid")
    _check_inputs(grid, profile, illum, f)
    w2d = _weights(profile, illum)
    ax = np.exp(1j * f.wavenumber * np.outer(grid.x, raster.u))
    ay = np.exp(1j * f.wavenumber * np.outer(grid.y, raster.v))
    e = _kernels.mft(w2d, ax, ay)
    e = e * _element_factor(raster.cos_theta(), element_exponent, raster.visible())
    e.flags.writeable = False
    return RadiationPattern(
        e,
        raster,
        f,
        float(element_exponent),
        Provenance(grid.digest(), profile.digest(), illum.digest()),
    )


def _same_axes(a, b):
    if isinstance(a, PlaneCut) and isinstance(b, PlaneCut):
        return a.phi == b.phi and np.array_equal(a.theta, b.theta)
    if isinstance(a, UVRaster) and isinstance(b, UVRaster):
        return np.array_equal(a.u, b.u) and np.array_equal(a.v, b.v)
    return False


def composite_with_specular(anomalous, flat, rho):
    """Coherent sum of the programmed pattern and a weighted flat-plate one.

    E_total = E_anomalous + rho * E_flat. rho is the real amplitude weight
    standing in for the unconverted specular reflection; both inputs must be
    raw patterns on identical angular grids at the same frequency.
    """
    rho = float(rho)
    if not np.isfinite(rho) or rho < 0.0:
        raise ValueError(f"rho must be finite and >= 0, got {rho}")
    if anomalous.normalization != RAW or flat.normalization != RAW:
        raise ValueError("composite requires raw (unnormalized) patterns")
    if anomalous.frequency.frequency != flat.frequency.frequency:
        raise ValueError("patterns computed at different frequencies")
    if anomalous.element_exponent != flat.element_exponent:
        raise ValueError("patterns use different element factors")
    if not _same_axes(anomalous.angles, flat.angles):
        raise ValueError("patterns sampled on different angular grids")
    e = anomalous.values + rho * flat.values
    e.flags.writeable = False
    prov = anomalous.provenance
    return RadiationPattern(
        e,
        anomalous.angles,
        anomalous.frequency,
        anomalous.element_exponent,
        Provenance(prov.grid, f"{prov.profile}+rho={rho!r}*flat", prov.illumination),
        RAW,
    )
