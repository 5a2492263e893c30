"""Figures of merit: directivity, gain, beamwidth, SIR, squint, losses.

The directivity integral runs over the forward hemisphere only (the
ground plane keeps the back half dark):

    D = 4 pi |E_peak|^2 / integral |E|^2 dOmega .

On a (u, v) raster, dOmega = du dv / cos(theta) diverges at the visible
rim, so per-cell solid angles are integrated exactly in v (arcsin
differences) and with 8-point Gauss-Legendre in u.  Cells whose centre
falls outside the unit disk still cover a sliver of real solid angle;
that weight is folded onto the nearest visible sample of the same row
(nearest-neighbour extension of the field across the rim).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

import numpy as np

from .errors import BeamTooWideError, CalibrationRangeError, NoRealSolutionError
from .geometry import Direction, direction_cosines, direction_from_cosines, frequency_point
from .scattering import RadiationPattern, composite_with_specular

FOUR_PI = 4.0 * np.pi
HALF_POWER_DB = 10.0 * np.log10(2.0)

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(8)
_weights_cache = {}


def _cell_edges(centers):
    e = np.empty(centers.size + 1)
    e[1:-1] = 0.5 * (centers[1:] + centers[:-1])
    e[0] = centers[0] - (e[1] - centers[0])
    e[-1] = centers[-1] + (centers[-1] - e[-2])
    return e


def _raw_cell_weights(u, v):
    """Exact solid angle of every raster cell clipped to the unit disk."""
    ue, ve = _cell_edges(u), _cell_edges(v)
    u1 = np.clip(ue[:-1], -1.0, 1.0)
    u2 = np.clip(ue[1:], -1.0, 1.0)
    v1, v2 = ve[:-1], ve[1:]
    half = 0.5 * (u2 - u1)
    mid = 0.5 * (u1 + u2)
    w = np.zeros((u.size, v.size))
    for xg, wg in zip(_GAUSS_X, _GAUSS_W):
        uu = mid + half * xg
        a = np.sqrt(np.clip(1.0 - uu * uu, 0.0, None))[:, None]
        safe = np.where(a > 0.0, a, 1.0)
        hi = np.clip(v2[None, :], -a, a)
        lo = np.clip(v1[None, :], -a, a)
        w += (wg * half)[:, None] * (np.arcsin(hi / safe) - np.arcsin(lo / safe))
    return w


def solid_angle_weights(raster):
    """Per-sample quadrature weights; sum equals 2 pi to rounding."""
    u = np.asarray(raster.u, float)
    v = np.asarray(raster.v, float)
    key = (u.tobytes(), v.tobytes())
    cached = _weights_cache.get(key)
    if cached is not None:
        return cached

    w = _raw_cell_weights(u, v)
    visible = raster.visible()
    # fold rim slivers onto the nearest visible sample, per u-row;
    # rows with no visible sample cascade their weight inward
    order = np.argsort(-np.abs(u))
    carry = np.zeros_like(w)
    for i in order:
        stray = np.where(visible[i], 0.0, w[i] + carry[i])
        if not stray.any():
            w[i] += carry[i] * visible[i]
            continue
        vis_j = np.flatnonzero(visible[i])
        w[i] = np.where(visible[i], w[i] + carry[i], 0.0)
        if vis_j.size:
            for j in np.flatnonzero(stray):
                w[i, vis_j[np.argmin(np.abs(v[vis_j] - v[j]))]] += stray[j]
        else:
            inward = i + 1 if u[i] < 0 else i - 1
            if 0 <= inward < u.size:
                carry[inward] += stray
    w.flags.writeable = False
    if len(_weights_cache) > 8:
        _weights_cache.clear()
    _weights_cache[key] = w
    return w


def total_radiated_power(pattern: RadiationPattern) -> float:
    """Hemisphere integral of |E|^2 for a raster pattern."""
    if pattern.is_cut():
        raise TypeError("total power needs full 2-D coverage, got a plane cut")
    w = solid_angle_weights(pattern.angles)
    return float((np.abs(pattern.values) ** 2 * w).sum())


def _parabolic(y_minus, y_zero, y_plus):
    """Vertex offset in [-0.5, 0.5] sample units and refined power value.

    Fits the parabola in the log-power domain, which is exact for a
    Gaussian beam top and refuses to extrapolate across zeros (pattern
    discontinuities at the visible rim).
    """
    with np.errstate(divide="ignore"):
        logs = np.log10(np.array([y_minus, y_zero, y_plus], float))
    if not np.all(np.isfinite(logs)):
        return 0.0, y_zero
    den = logs[0] - 2.0 * logs[1] + logs[2]
    if den >= 0.0:
        return 0.0, y_zero
    off = float(np.clip(0.5 * (logs[0] - logs[2]) / den, -0.5, 0.5))
    return off, float(10.0 ** (logs[1] - 0.25 * (logs[0] - logs[2]) * off))


def _refined_raster_peak(pattern):
    """(u, v, |E|^2) of the interpolated peak; ties go to the first sample."""
    power = np.abs(pattern.values) ** 2
    i, j = np.unravel_index(int(np.argmax(power)), power.shape)
    u_ax, v_ax = pattern.angles.u, pattern.angles.v
    pk = power[i, j]
    u, v = u_ax[i], v_ax[j]
    if 0 < i < power.shape[0] - 1:
        off, val = _parabolic(power[i - 1, j], power[i, j], power[i + 1, j])
        u = u_ax[i] + off * (u_ax[i + 1] - u_ax[i])
        pk *= val / power[i, j]
    if 0 < j < power.shape[1] - 1:
        off, val = _parabolic(power[i, j - 1], power[i, j], power[i, j + 1])
        v = v_ax[j] + off * (v_ax[j + 1] - v_ax[j])
        pk *= val / power[i, j]
    return float(u), float(v), float(pk)


def ideal_aperture_gain(area: float, f) -> float:
    """10 log10(4 pi A / lambda^2), the zero-loss aperture gain in dB."""
    if not area > 0:
        raise ValueError(f"aperture area must be positive, got {area!r}")
    return float(10.0 * np.log10(FOUR_PI * area / f.wavelength**2))


def directivity_from_pattern(pattern: RadiationPattern):
    """Peak direction and peak directivity (dB) of a raster pattern."""
    if pattern.is_cut():
        raise TypeError(
            "directivity needs full 2-D angular coverage, got a plane cut"
        )
    p_total = total_radiated_power(pattern)
    if p_total == 0.0:
        raise ValueError("pattern radiates no power")
    u, v, pk = _refined_raster_peak(pattern)
    r2 = u * u + v * v
    if r2 > 1.0:
        scale = 1.0 / math.sqrt(r2)
        u, v = u * scale, v * scale
    peak_dir = direction_from_cosines(u, v)
    d_db = 10.0 * np.log10(FOUR_PI * pk / p_total)
    return peak_dir, float(d_db)


def realized_gain(pattern: RadiationPattern, spillover: float) -> float:
    """Peak directivity reduced by the spillover fraction, in dB."""
    if not 0.0 < spillover <= 1.0:
        raise ValueError(f"spillover must be in (0, 1], got {spillover!r}")
    _, d_db = directivity_from_pattern(pattern)
    return float(d_db + 10.0 * np.log10(spillover))


def aperture_efficiency(realized_gain_db: float, ideal_gain_db: float) -> float:
    """eta = 10^((realized - ideal)/10)."""
    if not (np.isfinite(realized_gain_db) and np.isfinite(ideal_gain_db)):
        raise ValueError("gains must be finite")
    return float(10.0 ** ((realized_gain_db - ideal_gain_db) / 10.0))


def peak_and_hpbw(pattern: RadiationPattern) -> Tuple[float, float]:
    """Interpolated peak angle and -3 dB beamwidth of a cut, in degrees."""
    if not pattern.is_cut():
        raise TypeError("beamwidth extraction expects a single plane cut")
    theta = np.degrees(pattern.angles.theta)
    power = np.abs(pattern.values) ** 2
    i = int(np.argmax(power))
    peak_deg = theta[i]
    pk = power[i]
    if 0 < i < power.size - 1:
        off, pk = _parabolic(power[i - 1], power[i], power[i + 1])
        peak_deg = theta[i] + off * (theta[1] - theta[0])

    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(power / pk)
    level = -HALF_POWER_DB

    def crossing(side):
        idx = np.arange(i, -1, -1) if side < 0 else np.arange(i, power.size)
        below = np.flatnonzero(db[idx] < level)
        if below.size == 0:
            raise BeamTooWideError(
                "no -3 dB crossing inside the cut on the "
                + ("left" if side < 0 else "right")
            )
        k_out = idx[below[0]]
        k_in = k_out - side
        # linear interpolation on the dB curve between the straddling samples
        frac = (level - db[k_in]) / (db[k_out] - db[k_in])
        return theta[k_in] + frac * (theta[k_out] - theta[k_in])

    left = crossing(-1)
    right = crossing(+1)
    return float(peak_deg), float(right - left)


def sir(pattern: RadiationPattern, main: Direction, specular: Direction) -> float:
    """20 log10 |E(main)| / |E(specular)| by nearest sample; inf if clean."""
    e_main = abs(pattern.nearest_sample(main))
    e_spec = abs(pattern.nearest_sample(specular))
    if e_spec == 0.0:
        return math.inf
    if e_main == 0.0:
        return -math.inf
    return float(20.0 * np.log10(e_main / e_spec))


def beam_squint_angle(f0, f1, theta0: float) -> float:
    """Angle-space drift model: theta1 = arcsin((lambda1/lambda0) sin theta0)."""
    arg = (f1.wavelength / f0.wavelength) * math.sin(theta0)
    if abs(arg) > 1.0:
        raise NoRealSolutionError(
            f"sin(theta1) = {arg:.6f} lies outside [-1, 1]: evanescent regime"
        )
    return math.asin(arg)


def squint_stationary_phase(f0, f1, incident: Direction, reflect: Direction):
    """Direction-cosine drift of a frequency-fixed phase profile.

    The profile freezes the gradient at f0; re-radiating at f1 moves the
    stationary point to u = (f0/f1)(u_inc + u_ref) - u_inc, likewise v.
    """
    ui, vi = direction_cosines(incident)
    ur, vr = direction_cosines(reflect)
    ratio = f0.frequency / f1.frequency
    u = ratio * (ui + ur) - ui
    v = ratio * (vi + vr) - vi
    if u * u + v * v > 1.0:
        raise NoRealSolutionError(
            f"predicted peak (u, v) = ({u:.4f}, {v:.4f}) outside the unit disk"
        )
    return float(u), float(v)


@dataclass(frozen=True)
class SquintRow:
    frequency_ghz: float
    peak_deg: Optional[float]
    gain_db: Optional[float]
    angle_model_deg: Optional[float]
    stationary_model_deg: Optional[float]
    error: Optional[str] = None


@dataclass(frozen=True)
class SquintReport:
    design_frequency_ghz: float
    rows: Tuple[SquintRow, ...]


@dataclass(frozen=True)
class PatternMetrics:
    peak_direction: Direction
    peak_directivity_db: float
    realized_gain_db: float
    hpbw_deg: float
    sir_db: Optional[float] = None
    aperture_efficiency: Optional[float] = None

    def __post_init__(self):
        if self.aperture_efficiency is not None and not (
            0.0 < self.aperture_efficiency <= 1.02
        ):
            raise ValueError(
                f"aperture efficiency {self.aperture_efficiency:.4f} outside (0, 1.02]"
            )
        if not self.hpbw_deg > 0:
            raise ValueError("beamwidth must be positive")


def _signed_theta_deg(u, v, phi_plane):
    proj = u * math.cos(phi_plane) + v * math.sin(phi_plane)
    return math.degrees(math.asin(min(1.0, max(-1.0, proj))))


def frequency_sweep(config, frequencies) -> SquintReport:
    """Reuse the design-frequency profile across a frequency list.

    Each row reports the simulated raster peak (signed angle in the
    source plane), peak directivity, and both closed-form predictions.
    Failures are recorded per row; the sweep continues.
    """
    from .pipeline import build_setup

    frequencies = tuple(float(f) for f in frequencies)
    if not frequencies:
        raise ValueError("frequency list is empty")
    f0_hz = config.frequency
    if not any(abs(f - f0_hz) <= 1e-6 * f0_hz for f in frequencies):
        raise ValueError("sweep must include the design frequency")

    setup = build_setup(config)
    phi_plane = setup.source_direction.phi
    theta0 = setup.source_direction.theta
    spill = setup.spillover
    rows = []
    for f_hz in frequencies:
        f = frequency_point(f_hz)
        angle_model = None
        stationary = None
        peak_deg = None
        gain_db = None
        err_parts = []
        try:
            theta1 = beam_squint_angle(setup.f0, f, theta0)
            offset = theta1 - theta0
            angle_model = math.degrees(setup.config.reflect.theta + offset)
        except NoRealSolutionError as exc:
            err_parts.append(str(exc))
        try:
            us, vs = squint_stationary_phase(
                setup.f0, f, setup.source_direction, setup.config.reflect
            )
            stationary = _signed_theta_deg(us, vs, phi_plane)
        except NoRealSolutionError as exc:
            err_parts.append(str(exc))
        try:
            pat = setup.pattern(f=f)
            u, v, _ = _refined_raster_peak(pat)
            peak_deg = _signed_theta_deg(u, v, phi_plane)
            _, d_db = directivity_from_pattern(pat)
            gain_db = d_db + 10.0 * np.log10(spill)
        except Exception as exc:  # keep sweeping, report per row
            err_parts.append(f"pattern failed: {exc}")
        rows.append(
            SquintRow(
                frequency_ghz=f_hz / 1e9,
                peak_deg=peak_deg,
                gain_db=gain_db,
                angle_model_deg=angle_model,
                stationary_model_deg=stationary,
                error="; ".join(err_parts) or None,
            )
        )
    return SquintReport(design_frequency_ghz=f0_hz / 1e9, rows=tuple(rows))


def _specular_gain_db(setup, anom, flat, rho, spill):
    total = composite_with_specular(anom, flat, rho)
    e_spec = abs(total.nearest_sample(setup.specular_direction))
    p_total = total_radiated_power(total)
    if e_spec == 0.0:
        return -math.inf
    return float(
        10.0 * np.log10(FOUR_PI * e_spec**2 / p_total) + 10.0 * np.log10(spill)
    )


def _sir_db(setup, anom, flat, rho):
    total = composite_with_specular(anom, flat, rho)
    return sir(total, setup.config.reflect, setup.specular_direction)


def calibrate_specular(config, target: dict) -> float:
    """Bisect rho in [0, 1] until the chosen metric meets the target.

    target is {"sir_db": x} or {"specular_gain_db": x}; a specular-gain
    target of -inf returns rho = 0 directly.  Stops within 0.01 dB.
    """
    from .pipeline import build_setup

    if set(target) == {"sir_db"}:
        goal = float(target["sir_db"])
        kind = "sir_db"
    elif set(target) == {"specular_gain_db"}:
        goal = float(target["specular_gain_db"])
        kind = "specular_gain_db"
    else:
        raise ValueError(
            "target must be exactly one of {'sir_db': x} or {'specular_gain_db': x}"
        )
    if kind == "specular_gain_db" and goal == -math.inf:
        return 0.0
    if not np.isfinite(goal):
        raise ValueError(f"target must be finite, got {goal!r}")

    setup = build_setup(config)
    anom = setup.pattern()
    flat = setup.flat_pattern()
    spill = setup.spillover

    def metric(rho):
        if kind == "sir_db":
            return _sir_db(setup, anom, flat, rho)
        return _specular_gain_db(setup, anom, flat, rho, spill)

    lo, hi = 0.0, 1.0
    m_lo, m_hi = metric(lo), metric(hi)
    lo_v, hi_v = (m_lo, m_hi) if m_lo <= m_hi else (m_hi, m_lo)
    if not lo_v <= goal <= hi_v:
        raise CalibrationRangeError(
            f"target {kind} = {goal} dB unreachable for rho in [0, 1]",
            achievable=(lo_v, hi_v),
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        m_mid = metric(mid)
        if abs(m_mid - goal) <= 0.01:
            return mid
        # keep the bracket: metric is continuous, endpoints straddle the goal
        if (m_mid < goal) == (m_lo < goal):
            lo, m_lo = mid, m_mid
        else:
            hi, m_hi = mid, m_mid
    raise CalibrationRangeError(
        f"bisection failed to settle within 0.01 dB of {goal} dB",
        achievable=(lo_v, hi_v),
    )


def quantization_loss(config, bits: int) -> float:
    """Main-lobe peak-intensity cost (dB) of quantizing the phase profile.

    Both patterns use the same illumination and frequency; the loss is
    the ratio of refined peak intensities.  Power scattered into image
    lobes counts as lost even when those lobes fall outside visible
    space, which is where a half-wave lattice puts them.
    """
    from .pipeline import build_setup
    from .synthesis import quantize_profile

    if int(bits) != bits or bits < 1:
        raise ValueError(f"bits must be a positive integer, got {bits!r}")
    base = replace(config, quantization_bits=None)
    setup = build_setup(base)
    _, _, pk_cont = _refined_raster_peak(setup.pattern())
    quant = quantize_profile(setup.profile, int(bits))
    _, _, pk_quant = _refined_raster_peak(setup.pattern(profile=quant))
    if pk_quant == 0.0:
        return math.inf
    return float(10.0 * np.log10(pk_cont / pk_quant))


def normalize_pattern(pattern, normalization, *, total_power=None, spillover=1.0):
    """Rescale field values so |E|^2 reads as directivity or realized gain.

    Raster patterns integrate their own total power; cuts must be given
    the total power of the raster pattern they were cut from.
    """
    from .scattering import DIRECTIVITY, RAW, REALIZED_GAIN

    if normalization == RAW:
        return replace(pattern, normalization=RAW)
    if normalization not in (DIRECTIVITY, REALIZED_GAIN):
        raise ValueError(f"unknown normalization {normalization!r}")
    if total_power is None:
        if pattern.is_cut():
            raise TypeError("a cut cannot self-normalize: pass total_power")
        total_power = total_radiated_power(pattern)
    if not total_power > 0:
        raise ValueError("total power must be positive")
    scale = math.sqrt(FOUR_PI / total_power)
    if normalization == REALIZED_GAIN:
        if not 0.0 < spillover <= 1.0:
            raise ValueError(f"spillover must be in (0, 1], got {spillover!r}")
        scale *= math.sqrt(spillover)
    return replace(
        pattern, values=pattern.values * scale, normalization=normalization
    )


def compute_pattern_metrics(config) -> PatternMetrics:
    """Full evaluation of one configuration at its design frequency."""
    from .pipeline import build_setup

    setup = build_setup(config)
    anom = setup.pattern()
    rho = config.rho if config.rho is not None else 0.0
    pattern = anom
    if rho > 0.0:
        pattern = composite_with_specular(anom, setup.flat_pattern(), rho)

    peak_dir, d_db = directivity_from_pattern(pattern)
    spill = setup.spillover
    realized = d_db + 10.0 * float(np.log10(spill))
    ideal = ideal_aperture_gain(setup.grid.aperture_area, setup.f0)
    eta = aperture_efficiency(realized, ideal)

    cut_angles = setup.cut(phi_deg=math.degrees(peak_dir.phi))
    cut = setup.pattern(angles=cut_angles)
    if rho > 0.0:
        flat_cut = setup.flat_pattern(angles=cut_angles)
        cut = composite_with_specular(cut, flat_cut, rho)
    _, hpbw = peak_and_hpbw(cut)

    sir_db = sir(pattern, setup.config.reflect, setup.specular_direction)
    return PatternMetrics(
        peak_direction=peak_dir,
        peak_directivity_db=d_db,
        realized_gain_db=realized,
        hpbw_deg=hpbw,
        sir_db=sir_db,
        aperture_efficiency=eta,
    )
