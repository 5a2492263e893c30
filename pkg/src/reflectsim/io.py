"""Deterministic CSV and JSON serialization.

Floats in CSV use repr(), the shortest digit string that round-trips
exactly, so export -> read -> export is byte stable.  JSON reports round
to 6 significant digits and carry provenance (config hash, tool version,
timestamp); the timestamp is the one field excluded from byte identity.
"""

from __future__ import annotations

import json
import math
from datetime import datetime, timezone

import numpy as np

from .scattering import RAW, PlaneCut, Provenance, RadiationPattern

UNBOUNDED = "unbounded"


def _fmt(x):
    return repr(float(x))


def export_profile_csv(profile, grid, path):
    """Element phases in degrees, one row per element, row-major in x."""
    X, Y = grid.meshes()
    deg = np.degrees(profile.phases)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x_mm,y_mm,phase_deg\n")
        for i in range(grid.nx):
            for j in range(grid.ny):
                fh.write(f"{_fmt(X[i, j] * 1e3)},{_fmt(Y[i, j] * 1e3)},{_fmt(deg[i, j])}\n")


def export_illumination_csv(illum, grid, path):
    """Element excitations: linear amplitude and phase in degrees."""
    X, Y = grid.meshes()
    amps = np.abs(illum.amplitudes)
    deg = np.degrees(np.angle(illum.amplitudes))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("x_mm,y_mm,amp_linear,phase_deg\n")
        for i in range(grid.nx):
            for j in range(grid.ny):
                fh.write(
                    f"{_fmt(X[i, j] * 1e3)},{_fmt(Y[i, j] * 1e3)},"
                    f"{_fmt(amps[i, j])},{_fmt(deg[i, j])}\n"
                )


def _pattern_rows(pattern):
    if pattern.is_cut():
        cut = pattern.angles
        phi_deg = math.degrees(cut.phi)
        for i, th in enumerate(np.degrees(cut.theta)):
            yield th, phi_deg, pattern.values[i]
        return
    raster = pattern.angles
    visible = raster.visible()
    for i, u in enumerate(raster.u):
        for j, v in enumerate(raster.v):
            if not visible[i, j]:
                continue
            r = min(1.0, math.hypot(u, v))
            theta = math.degrees(math.asin(r))
            phi = math.degrees(math.atan2(v, u)) % 360.0
            yield theta, phi, pattern.values[i, j]


def export_pattern_csv(pattern, path):
    """Write a pattern as CSV; normalized patterns gain a gain_db column.

    Cuts export every sample; rasters export the visible samples in
    row-major order.
    """
    with_gain = pattern.normalization != RAW
    header = "theta_deg,phi_deg,re,im" + (",gain_db" if with_gain else "")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for theta, phi, value in _pattern_rows(pattern):
            row = f"{_fmt(theta)},{_fmt(phi)},{_fmt(value.real)},{_fmt(value.imag)}"
            if with_gain:
                mag = abs(value)
                gain = 20.0 * math.log10(mag) if mag > 0 else -math.inf
                row += f",{_fmt(gain)}"
            fh.write(row + "\n")


def read_pattern_csv(path):
    """Read an exported pattern CSV into a dict of numpy arrays."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        cols = {name: [] for name in header}
        for line in fh:
            line = line.strip()
            if not line:
                continue
            for name, tok in zip(header, line.split(",")):
                cols[name].append(float(tok))
    out = {name: np.array(vals) for name, vals in cols.items()}
    out["values"] = out["re"] + 1j * out["im"]
    return out


def read_pattern_cut(path, frequency=None):
    """Rebuild a plane-cut RadiationPattern from its CSV export."""
    data = read_pattern_csv(path)
    phi = np.unique(data["phi_deg"])
    if phi.size != 1:
        raise ValueError(f"{path} is not a single plane cut (phi varies)")
    theta = np.radians(data["theta_deg"])
    steps = np.diff(theta)
    if theta.size < 2 or not np.allclose(steps, steps[0], rtol=1e-9, atol=1e-12):
        raise ValueError(f"{path} does not hold a uniform cut")
    cut = PlaneCut(float(np.radians(phi[0])), theta)
    norm = "directivity" if "gain_db" in data else RAW
    return RadiationPattern(
        values=data["values"],
        angles=cut,
        frequency=frequency,
        element_exponent=float("nan"),
        provenance=Provenance("csv", "csv", str(path)),
        normalization=norm,
    )


def _round6(x):
    if x is None:
        return None
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isinf(x):
        return UNBOUNDED if x > 0 else "-" + UNBOUNDED
    return float(f"{x:.6g}")


def _squint_rows(report):
    return [
        {
            "frequency_ghz": _round6(row.frequency_ghz),
            "peak_deg": _round6(row.peak_deg),
            "gain_db": _round6(row.gain_db),
            "angle_model_deg": _round6(row.angle_model_deg),
            "stationary_model_deg": _round6(row.stationary_model_deg),
            "error": row.error,
        }
        for row in report.rows
    ]


def _provenance(config_sha256, generated_at):
    from . import __version__

    if generated_at is None:
        generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return {
        "config_sha256": config_sha256,
        "tool_version": __version__,
        "generated_at": generated_at,
    }


def export_sweep_json(report, path, *, config_sha256, generated_at=None):
    doc = {
        "design_frequency_ghz": _round6(report.design_frequency_ghz),
        "rows": _squint_rows(report),
        "provenance": _provenance(config_sha256, generated_at),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def export_metrics_report(
    metrics,
    squint_report,
    path,
    *,
    config_sha256,
    rho=0.0,
    generated_at=None,
):
    """JSON report with the fixed metric keys plus sweep and provenance."""
    doc = {
        "peak_deg": _round6(math.degrees(metrics.peak_direction.theta)),
        "directivity_db": _round6(metrics.peak_directivity_db),
        "realized_gain_db": _round6(metrics.realized_gain_db),
        "hpbw_deg": _round6(metrics.hpbw_deg),
        "sir_db": _round6(metrics.sir_db),
        "eta": _round6(metrics.aperture_efficiency),
        "rho": _round6(rho),
        "squint": {
            "design_frequency_ghz": _round6(squint_report.design_frequency_ghz),
            "rows": _squint_rows(squint_report),
        },
        "provenance": _provenance(config_sha256, generated_at),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return doc
