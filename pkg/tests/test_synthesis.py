"""Phase profile synthesis and quantization.

Covers: the linear compensation ramp value at the canonical element, zero
profiles for normal incidence, row/column structure of the ramp, reciprocity
under swapping arrival and departure, spherical-feed phases including the
far-feed limit, bit-identical regeneration, and the circular quantizer with
its tie and wrap rules.
"""

from __future__ import annotations

import numpy as np
import pytest

import reflectsim as rs
from conftest import assert_wrapped_close

TWO_PI = 2 * np.pi


def center_index(grid):
    ix = int(np.argmin(np.abs(grid.x)))
    iy = int(np.argmin(np.abs(grid.y)))
    assert abs(grid.x[ix]) < 1e-15 and abs(grid.y[iy]) < 1e-15
    return ix, iy


def test_profile_zero_at_origin_element(grid9, f0, incidence, broadside):
    prof = rs.plane_wave_profile(grid9, incidence, broadside, f0)
    ix, iy = center_index(grid9)
    assert prof.phases[ix, iy] == 0.0


def test_profile_canonical_ramp_value(grid9, f0, incidence, broadside):
    # quarter-wave element, source 60 deg off normal in the x-z plane:
    # compensation phase (pi/2)*sin(60 deg) = 1.36035 rad
    prof = rs.plane_wave_profile(grid9, incidence, broadside, f0)
    ix, iy = center_index(grid9)
    np.testing.assert_allclose(grid9.x[ix + 1], f0.wavelength / 4, rtol=1e-12)
    np.testing.assert_allclose(prof.phases[ix + 1, iy], 1.360350, atol=1e-6)
    np.testing.assert_allclose(
        prof.phases[ix + 1, iy], np.pi / 2 * np.sin(np.radians(60)), rtol=1e-12
    )


def test_profile_zero_for_normal_in_normal_out(grid9, f0, broadside):
    prof = rs.plane_wave_profile(grid9, broadside, broadside, f0)
    assert np.all(prof.phases == 0.0)


def test_profile_independent_of_y_for_inplane_geometry(grid36, f0, incidence, broadside):
    prof = rs.plane_wave_profile(grid36, incidence, broadside, f0)
    assert np.all(prof.phases == prof.phases[:, :1])


def test_profile_row_is_arithmetic_progression(grid36, f0, incidence, broadside):
    prof = rs.plane_wave_profile(grid36, incidence, broadside, f0)
    ui, _ = rs.direction_cosines(incidence)
    step = -f0.wavenumber * grid36.dx * ui
    diffs = np.diff(prof.phases, axis=0)
    assert_wrapped_close(diffs, step, atol=1e-9)


def test_profile_swap_is_reciprocal(grid9, f0):
    # a surface steering A -> B applies the same phases as one steering B -> A
    a = rs.Direction.from_degrees(-60, 0)
    b = rs.Direction.from_degrees(25, 40)
    p1 = rs.plane_wave_profile(grid9, a, b, f0)
    p2 = rs.plane_wave_profile(grid9, b, a, f0)
    np.testing.assert_array_equal(p1.phases, p2.phases)


def test_profile_mirrored_arrival_negates(grid9, f0, broadside):
    p1 = rs.plane_wave_profile(grid9, rs.Direction.from_degrees(-60, 0), broadside, f0)
    p2 = rs.plane_wave_profile(grid9, rs.Direction.from_degrees(60, 0), broadside, f0)
    assert_wrapped_close(p1.phases + p2.phases, 0.0, atol=1e-9)


def test_profile_phases_in_range(f0):
    rng = np.random.default_rng(23)
    g = rs.make_grid(0.012, 0.012, f0.wavelength / 4)
    for _ in range(20):
        inc = rs.Direction(rng.uniform(-1.3, 1.3), rng.uniform(0, TWO_PI))
        ref = rs.Direction(rng.uniform(-1.3, 1.3), rng.uniform(0, TWO_PI))
        prof = rs.plane_wave_profile(g, inc, ref, f0)
        assert np.all(prof.phases >= 0.0) and np.all(prof.phases < TWO_PI)


def test_profile_regeneration_is_bit_identical(grid36, f0, incidence, broadside):
    p1 = rs.plane_wave_profile(grid36, incidence, broadside, f0)
    p2 = rs.plane_wave_profile(grid36, incidence, broadside, f0)
    np.testing.assert_array_equal(p1.phases, p2.phases)
    assert p1.digest() == p2.digest()


def test_spherical_profile_origin_element(grid9, f0, broadside):
    # k0 * 0.0193 m = 60.674713 rad, wrapped to 4.126046
    feed = rs.make_feed([0.0, 0.0, 0.0193], 157.0)
    prof = rs.spherical_feed_profile(grid9, feed, broadside, f0)
    ix, iy = center_index(grid9)
    np.testing.assert_allclose(prof.phases[ix, iy], 4.126046, atol=1e-6)
    np.testing.assert_allclose(
        prof.phases[ix, iy], np.mod(f0.wavenumber * 0.0193, TWO_PI), rtol=1e-12
    )


def test_spherical_profile_symmetry(grid36, f0, broadside):
    feed = rs.make_feed([0.0, 0.0, 0.0193], 100.0)
    prof = rs.spherical_feed_profile(grid36, feed, broadside, f0)
    np.testing.assert_allclose(prof.phases, prof.phases[::-1, :], atol=1e-9)
    np.testing.assert_allclose(prof.phases, prof.phases[:, ::-1], atol=1e-9)


@pytest.mark.parametrize("reflect_deg", [(0.0, 0.0), (20.0, 0.0)])
def test_spherical_far_feed_converges_to_plane_profile(grid18, grid36, f0, reflect_deg):
    # far-feed limit: once the constant path phase is removed the spherical
    # profile reduces to the plane-wave one; the residual quadratic term
    # k*r_perp^2/(2R) bounds how far. 18 mm aperture at 10 m stays under
    # 0.05 rad, the 36 mm one needs a proportionally larger distance.
    direction = rs.Direction.from_degrees(-60, 0)
    reflect = rs.Direction.from_degrees(*reflect_deg)
    for grid, dist, tol in ((grid18, 10.0, 0.05), (grid36, 100.0, 0.01)):
        feed = rs.make_feed(rs.feed_position_polar(dist, direction), 157.0)
        sph = rs.spherical_feed_profile(grid, feed, reflect, f0)
        pla = rs.plane_wave_profile(grid, direction, reflect, f0)
        delta = sph.phases - pla.phases
        rel = np.mod(delta - delta[0, 0] + np.pi, TWO_PI) - np.pi
        assert np.max(np.abs(rel)) < tol


def test_quantize_examples(grid9, f0, incidence, broadside):
    base = rs.plane_wave_profile(grid9, incidence, broadside, f0)

    def quantized_value(phase, bits):
        p = rs.PhaseProfile(np.full((1, 1), phase), f0, "plane-wave")
        return rs.quantize_profile(p, bits).phases[0, 0]

    assert quantized_value(0.1, 1) == 0.0
    np.testing.assert_allclose(quantized_value(3.0, 1), np.pi, rtol=1e-12)
    np.testing.assert_allclose(quantized_value(2.0, 2), np.pi / 2, rtol=1e-12)
    assert rs.quantize_profile(base, 2).bits == 2


def test_quantize_wraps_circularly():
    p = rs.PhaseProfile(np.array([[6.0]]), rs.frequency_point_ghz(150), "plane-wave")
    assert rs.quantize_profile(p, 1).phases[0, 0] == 0.0  # nearer 2*pi than pi


def test_quantize_exact_ties_go_to_lower_level():
    f = rs.frequency_point_ghz(150)
    p = rs.PhaseProfile(np.array([[np.pi / 2, np.pi / 4, 3 * np.pi / 4]]), f, "plane-wave")
    q1 = rs.quantize_profile(p, 1).phases[0]
    assert q1[0] == 0.0  # pi/2 is equidistant from 0 and pi
    q2 = rs.quantize_profile(p, 2).phases[0]
    assert q2[1] == 0.0
    np.testing.assert_allclose(q2[2], np.pi / 2, rtol=1e-12)


def test_quantize_idempotent():
    rng = np.random.default_rng(31)
    f = rs.frequency_point_ghz(150)
    for bits in (1, 2, 3, 4):
        p = rs.PhaseProfile(rng.uniform(0, TWO_PI, (16, 16)), f, "plane-wave")
        q1 = rs.quantize_profile(p, bits)
        q2 = rs.quantize_profile(q1, bits)
        np.testing.assert_array_equal(q1.phases, q2.phases)


def test_quantize_never_moves_more_than_half_step():
    rng = np.random.default_rng(37)
    f = rs.frequency_point_ghz(150)
    for bits in (1, 2, 3):
        p = rs.PhaseProfile(rng.uniform(0, TWO_PI, (32, 32)), f, "plane-wave")
        q = rs.quantize_profile(p, bits)
        d = np.abs(np.mod(q.phases - p.phases + np.pi, TWO_PI) - np.pi)
        assert np.max(d) <= np.pi / 2**bits + 1e-12


def test_quantize_outputs_are_levels():
    rng = np.random.default_rng(41)
    f = rs.frequency_point_ghz(150)
    p = rs.PhaseProfile(rng.uniform(0, TWO_PI, (8, 8)), f, "plane-wave")
    q = rs.quantize_profile(p, 2)
    levels = np.arange(4) * np.pi / 2
    assert np.all(np.isin(q.phases, levels))
    assert np.all(q.phases >= 0.0) and np.all(q.phases < TWO_PI)


@pytest.mark.parametrize("bits", [0, -1])
def test_quantize_rejects_bad_depth(grid9, f0, incidence, broadside, bits):
    prof = rs.plane_wave_profile(grid9, incidence, broadside, f0)
    with pytest.raises(ValueError):
        rs.quantize_profile(prof, bits)
