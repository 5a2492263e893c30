"""Key-value configuration files describing a complete simulation.

Format: INI-like sections, one ``key = value`` per line, ``#`` comments.
Units follow the conventions of the hardware literature: sizes in mm,
frequencies in GHz, angles in degrees.  Everything is converted to SI
once, here, so the rest of the package never sees a mixed unit.

Sections::

    [surface]    size_x_mm, size_y_mm, spacing_over_lambda (default 0.25)
    [design]     frequency_ghz, mode (plane-wave | spherical-feed),
                 reflect_theta_deg, reflect_phi_deg,
                 quantization_bits (optional), rho (optional)
    [incidence]  theta_deg, phi_deg          -- exactly one of these two
    [feed]       x_mm, y_mm, z_mm, gain_dbi  -- sections must be present
    [pattern]    theta_step_deg (0.25), raster_size (512),
                 element_exponent (1.0)
    [sweep]      frequencies_ghz (comma list, must contain the design
                 frequency; defaults to just the design frequency)
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import ConfigError
from .geometry import Direction
from .synthesis import PLANE_WAVE, SPHERICAL_FEED

_MIN_FEED_GAIN_DBI = 3.011  # hemispherical floor of the cos^q feed model

# section -> {key: (required, parser)} ; None marks a section-level rule
_SCHEMA = {
    "surface": {
        "size_x_mm": True,
        "size_y_mm": True,
        "spacing_over_lambda": False,
    },
    "design": {
        "frequency_ghz": True,
        "mode": False,
        "reflect_theta_deg": False,
        "reflect_phi_deg": False,
        "quantization_bits": False,
        "rho": False,
    },
    "incidence": {"theta_deg": True, "phi_deg": False},
    "feed": {"x_mm": False, "y_mm": False, "z_mm": True, "gain_dbi": True},
    "pattern": {
        "theta_step_deg": False,
        "raster_size": False,
        "element_exponent": False,
    },
    "sweep": {"frequencies_ghz": False},
}


@dataclass(frozen=True)
class SimulationConfig:
    """Parsed, validated, unit-converted simulation description."""

    size_x: float                      # m
    size_y: float                      # m
    spacing_over_lambda: float
    frequency: float                   # Hz
    mode: str
    reflect: Direction
    quantization_bits: Optional[int]
    rho: Optional[float]
    incidence: Optional[Direction]
    feed_position: Optional[Tuple[float, float, float]]   # m
    feed_gain_dbi: Optional[float]
    theta_step_deg: float
    raster_size: int
    element_exponent: float
    frequencies: Tuple[float, ...]     # Hz, includes the design frequency
    sha256: str

    @property
    def has_feed(self):
        return self.feed_position is not None

    @property
    def hash8(self):
        return self.sha256[:8]


def _tokenize(text):
    """Yield (lineno, section, key, value) triples; raise on malformed lines."""
    section = None
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SCHEMA:
                raise ConfigError(f"unknown section '[{section}]'", line=lineno)
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        if section is None:
            raise ConfigError("key outside any [section]", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        if key not in _SCHEMA[section]:
            raise ConfigError(
                f"unknown key in [{section}]", key=key, line=lineno
            )
        if (section, key) in seen:
            raise ConfigError(f"duplicate key in [{section}]", key=key, line=lineno)
        seen.add((section, key))
        yield lineno, section, key, value


def _to_float(value, key, lineno):
    try:
        out = float(value)
    except ValueError:
        raise ConfigError(f"expected a number, got {value!r}", key=key, line=lineno)
    if not out == out or out in (float("inf"), float("-inf")):
        raise ConfigError("value must be finite", key=key, line=lineno)
    return out


def _to_int(value, key, lineno):
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"expected an integer, got {value!r}", key=key, line=lineno)


def _require(values, section, key):
    if (section, key) not in values:
        raise ConfigError(f"missing required key in [{section}]", key=key)


def _angle_in_range(deg, key, lineno):
    if not -90.0 <= deg <= 90.0:
        raise ConfigError("angle outside [-90, 90] degrees", key=key, line=lineno)
    return deg


def parse_config(text):
    """Parse configuration text into a SimulationConfig.

    Errors carry the offending key and line number where one exists.
    """
    values = {}
    lines = {}
    sections = set()
    for lineno, section, key, value in _tokenize(text):
        values[(section, key)] = value
        lines[(section, key)] = lineno
        sections.add(section)

    if "design" not in sections:
        raise ConfigError("missing section [design]", key="frequency_ghz")
    if "surface" not in sections:
        raise ConfigError("missing section [surface]", key="size_x_mm")
    has_inc = "incidence" in sections
    has_feed = "feed" in sections
    if has_inc and has_feed:
        raise ConfigError(
            "config must specify exactly one of [incidence] or [feed], not both"
        )
    if not (has_inc or has_feed):
        raise ConfigError("config must specify one of [incidence] or [feed]")

    def get(section, key, default=None, conv=_to_float):
        if (section, key) not in values:
            return default
        lineno = lines[(section, key)]
        return conv(values[(section, key)], key, lineno), lineno

    for section in sections:
        for key, required in _SCHEMA[section].items():
            if required:
                _require(values, section, key)

    size_x, ln = get("surface", "size_x_mm")
    size_y, ln2 = get("surface", "size_y_mm")
    if size_x <= 0:
        raise ConfigError("size must be positive", key="size_x_mm", line=ln)
    if size_y <= 0:
        raise ConfigError("size must be positive", key="size_y_mm", line=ln2)
    spacing, ln = get("surface", "spacing_over_lambda", (0.25, None))
    if spacing <= 0 or spacing > 1:
        raise ConfigError(
            "element spacing must be in (0, 1] wavelengths",
            key="spacing_over_lambda",
            line=ln,
        )

    freq_ghz, ln = get("design", "frequency_ghz")
    if freq_ghz <= 0:
        raise ConfigError("frequency must be positive", key="frequency_ghz", line=ln)

    mode = PLANE_WAVE
    if ("design", "mode") in values:
        lineno = lines[("design", "mode")]
        mode = values[("design", "mode")].lower()
        if mode not in (PLANE_WAVE, SPHERICAL_FEED):
            raise ConfigError(
                f"mode must be '{PLANE_WAVE}' or '{SPHERICAL_FEED}'",
                key="mode",
                line=lineno,
            )
    if mode == SPHERICAL_FEED and not has_feed:
        raise ConfigError(
            f"mode '{SPHERICAL_FEED}' requires a [feed] section", key="mode"
        )

    r_th, ln = get("design", "reflect_theta_deg", (0.0, None))
    _angle_in_range(r_th, "reflect_theta_deg", ln)
    r_ph = get("design", "reflect_phi_deg", (0.0, None))[0]
    reflect = Direction.from_degrees(r_th, r_ph)

    bits = None
    if ("design", "quantization_bits") in values:
        lineno = lines[("design", "quantization_bits")]
        bits = _to_int(values[("design", "quantization_bits")], "quantization_bits", lineno)
        if bits < 1:
            raise ConfigError(
                "quantization_bits must be >= 1", key="quantization_bits", line=lineno
            )

    rho = None
    if ("design", "rho") in values:
        rho, lineno = get("design", "rho")
        if not 0.0 <= rho <= 1.0:
            raise ConfigError("rho must be in [0, 1]", key="rho", line=lineno)

    incidence = None
    feed_position = None
    feed_gain = None
    if has_inc:
        th, ln = get("incidence", "theta_deg")
        _angle_in_range(th, "theta_deg", ln)
        ph = get("incidence", "phi_deg", (0.0, None))[0]
        incidence = Direction.from_degrees(th, ph)
    else:
        x_mm = get("feed", "x_mm", (0.0, None))[0]
        y_mm = get("feed", "y_mm", (0.0, None))[0]
        z_mm, ln = get("feed", "z_mm")
        if z_mm <= 0:
            raise ConfigError("feed must sit above the surface", key="z_mm", line=ln)
        feed_gain, ln = get("feed", "gain_dbi")
        if feed_gain < _MIN_FEED_GAIN_DBI:
            raise ConfigError(
                f"feed gain below the {_MIN_FEED_GAIN_DBI} dBi hemispherical floor",
                key="gain_dbi",
                line=ln,
            )
        feed_position = (x_mm * 1e-3, y_mm * 1e-3, z_mm * 1e-3)

    step, ln = get("pattern", "theta_step_deg", (0.25, None))
    if step <= 0 or step > 10:
        raise ConfigError(
            "theta_step_deg must be in (0, 10]", key="theta_step_deg", line=ln
        )
    raster_size, ln = get("pattern", "raster_size", (512, None), conv=_to_int)
    if raster_size < 2:
        raise ConfigError("raster_size must be >= 2", key="raster_size", line=ln)
    q_e, ln = get("pattern", "element_exponent", (1.0, None))
    if q_e < 0:
        raise ConfigError(
            "element_exponent must be >= 0", key="element_exponent", line=ln
        )

    freq_hz = freq_ghz * 1e9
    frequencies = (freq_hz,)
    if ("sweep", "frequencies_ghz") in values:
        lineno = lines[("sweep", "frequencies_ghz")]
        items = [s.strip() for s in values[("sweep", "frequencies_ghz")].split(",")]
        parsed = tuple(
            _to_float(s, "frequencies_ghz", lineno) * 1e9 for s in items if s
        )
        if not parsed:
            raise ConfigError("empty frequency list", key="frequencies_ghz", line=lineno)
        if any(f <= 0 for f in parsed):
            raise ConfigError(
                "frequencies must be positive", key="frequencies_ghz", line=lineno
            )
        if not any(abs(f - freq_hz) <= 1e-6 * freq_hz for f in parsed):
            raise ConfigError(
                "sweep must include the design frequency",
                key="frequencies_ghz",
                line=lineno,
            )
        frequencies = parsed

    return SimulationConfig(
        size_x=size_x * 1e-3,
        size_y=size_y * 1e-3,
        spacing_over_lambda=spacing,
        frequency=freq_hz,
        mode=mode,
        reflect=reflect,
        quantization_bits=bits,
        rho=rho,
        incidence=incidence,
        feed_position=feed_position,
        feed_gain_dbi=feed_gain,
        theta_step_deg=step,
        raster_size=raster_size,
        element_exponent=q_e,
        frequencies=frequencies,
        sha256=hashlib.sha256(text.encode()).hexdigest(),
    )


def load_config(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
