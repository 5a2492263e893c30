"""Assemble a runnable simulation from a parsed configuration.

Owns the synthesize -> illuminate -> radiate wiring so that metrics,
sweeps and the CLI all see one canonical construction of the surface.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .config import SimulationConfig
from .geometry import (
    Direction,
    FeedSpec,
    FrequencyPoint,
    SurfaceGeometry,
    direction_cosines,
    direction_from_cosines,
    frequency_point,
    make_feed,
    make_grid,
)
from .illumination import (
    feed_illumination,
    feed_q_from_gain,
    plane_wave_illumination,
    spillover_efficiency,
)
from .scattering import PlaneCut, UVRaster, pattern_direct, pattern_fft
from .synthesis import (
    PLANE_WAVE,
    SPHERICAL_FEED,
    PhaseProfile,
    plane_wave_profile,
    quantize_profile,
    spherical_feed_profile,
)

_BROADSIDE = Direction(0.0, 0.0)


@dataclass(frozen=True)
class SimSetup:
    """Everything derived from one SimulationConfig, built exactly once."""

    config: SimulationConfig
    f0: FrequencyPoint
    grid: SurfaceGeometry
    source_direction: Direction          # direction toward the source
    specular_direction: Direction        # mirror-law lobe of a flat plate
    feed: Optional[FeedSpec]
    profile: PhaseProfile                # quantized when the config says so
    flat_profile: PhaseProfile           # all-zero surrogate for a bare plate
    raster: UVRaster = field(repr=False)

    @property
    def spillover(self):
        """Fraction of feed power hitting the surface; 1 for plane waves."""
        if self.feed is None:
            return 1.0
        return spillover_efficiency(self.feed, self.grid)

    def illumination_at(self, f):
        if self.feed is not None:
            return feed_illumination(self.grid, self.feed, f)
        return plane_wave_illumination(self.grid, self.source_direction, f)

    def pattern(self, f=None, angles=None, profile=None, fast=True):
        f = self.f0 if f is None else f
        angles = self.raster if angles is None else angles
        profile = self.profile if profile is None else profile
        illum = self.illumination_at(f)
        q_e = self.config.element_exponent
        if fast and isinstance(angles, UVRaster):
            return pattern_fft(self.grid, profile, illum, f, angles, element_exponent=q_e)
        return pattern_direct(self.grid, profile, illum, f, angles, element_exponent=q_e)

    def flat_pattern(self, f=None, angles=None):
        return self.pattern(f=f, angles=angles, profile=self.flat_profile)

    def cut(self, phi_deg=0.0, span_deg=90.0):
        return PlaneCut.from_step(phi_deg, self.config.theta_step_deg, span_deg)


def build_setup(config: SimulationConfig) -> SimSetup:
    f0 = frequency_point(config.frequency)
    spacing = config.spacing_over_lambda * f0.wavelength
    grid = make_grid(config.size_x, config.size_y, spacing)

    if config.has_feed:
        feed = make_feed(np.array(config.feed_position), feed_q_from_gain(config.feed_gain_dbi))
        d = np.linalg.norm(feed.position)
        source = direction_from_cosines(feed.position[0] / d, feed.position[1] / d)
        if source.phi >= np.pi:
            # signed-theta form: keep the cut azimuth in [0, pi) so sweep
            # angles share the sign convention of an [incidence] config
            source = Direction(-source.theta, source.phi - np.pi)
    else:
        feed = None
        source = config.incidence

    u_src, v_src = direction_cosines(source)
    specular = direction_from_cosines(-u_src, -v_src)

    if config.mode == SPHERICAL_FEED:
        profile = spherical_feed_profile(grid, feed, config.reflect, f0)
    else:
        profile = plane_wave_profile(grid, source, config.reflect, f0)
    if config.quantization_bits is not None:
        profile = quantize_profile(profile, config.quantization_bits)
    flat_profile = plane_wave_profile(grid, _BROADSIDE, _BROADSIDE, f0)

    return SimSetup(
        config=config,
        f0=f0,
        grid=grid,
        source_direction=source,
        specular_direction=specular,
        feed=feed,
        profile=profile,
        flat_profile=flat_profile,
        raster=UVRaster.square(config.raster_size),
    )
