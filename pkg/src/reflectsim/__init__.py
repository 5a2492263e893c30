"""Reflectarray scattering simulator.

Synthesizes element phase profiles for reconfigurable reflecting surfaces,
computes their radiation patterns across frequency, and quantifies hardware
impairments (specular residual, beam squint, spillover, amplitude taper) as
reproducible metrics.
"""

from ._kernels import active_backend
from .errors import (
    BeamTooWideError,
    CalibrationRangeError,
    ConfigError,
    GeometryError,
    NoRealSolutionError,
)
from .geometry import (
    SPEED_OF_LIGHT,
    Direction,
    FeedSpec,
    FrequencyPoint,
    SurfaceGeometry,
    direction_cosines,
    direction_from_cosines,
    feed_position_polar,
    frequency_point,
    frequency_point_ghz,
    make_feed,
    make_grid,
)
from .illumination import (
    Illumination,
    feed_illumination,
    feed_q_from_gain,
    plane_wave_illumination,
    spillover_efficiency,
)
from .config import SimulationConfig, load_config, parse_config
from .io import (
    UNBOUNDED,
    export_illumination_csv,
    export_metrics_report,
    export_pattern_csv,
    export_profile_csv,
    export_sweep_json,
    read_pattern_csv,
    read_pattern_cut,
)
from .metrics import (
    PatternMetrics,
    SquintReport,
    SquintRow,
    aperture_efficiency,
    beam_squint_angle,
    calibrate_specular,
    compute_pattern_metrics,
    directivity_from_pattern,
    frequency_sweep,
    ideal_aperture_gain,
    normalize_pattern,
    peak_and_hpbw,
    quantization_loss,
    realized_gain,
    sir,
    squint_stationary_phase,
    total_radiated_power,
)
from .pipeline import SimSetup, build_setup
from .scattering import (
    DIRECTIVITY,
    RAW,
    REALIZED_GAIN,
    PlaneCut,
    RadiationPattern,
    UVRaster,
    composite_with_specular,
    pattern_direct,
    pattern_fft,
)
from .synthesis import (
    PLANE_WAVE,
    SPHERICAL_FEED,
    PhaseProfile,
    plane_wave_profile,
    quantize_profile,
    spherical_feed_profile,
)

__version__ = "0.1.0"
