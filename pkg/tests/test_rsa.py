"""Wall asymmetry channels: form-level, local, and spectral agreement."""
import math

import numpy as np
import pytest

from wallindex.charclasses import chern_character
from wallindex.forms import Form, FormError, integrate
from wallindex.grids import Grid
from wallindex.rsa import (
    WallData,
    bulk_integral,
    flat_wall_report,
    frame_interface_term,
    generalized_rsa,
    realized_gauge_curvature,
    realized_gauge_potential,
    rsa_gauge_only,
    wall_connections,
)


def wall_config(n, jump=0.0, twist=0, rank=1, background=None):
    g = Grid.torus((n, n))
    sigma = g.wall_grid()
    jf = None
    if jump != 0.0:
        arr = (-2j * math.pi * jump / sigma.lengths[0]) \
            * np.broadcast_to(np.eye(rank, dtype=complex),
                              sigma.shape + (rank, rank)).copy()
        jf = Form(sigma, 1, {(0,): arr}, "gauge", rank)
    return WallData(g, rank=rank, gauge_background=background,
                    gauge_jump=jf, twist_flux=twist)


def band_field(grid, band, rng):
    out = np.zeros(grid.shape, dtype=complex)
    for _ in range(3):
        ks = rng.integers(-band, band + 1, size=grid.dim)
        amp = rng.normal() + 1j * rng.normal()
        phase = np.zeros(grid.shape)
        for ax, k in enumerate(ks):
            x = grid.coordinates(ax) * (2 * math.pi / grid.lengths[ax]) * k
            shape = [1] * grid.dim
            shape[ax] = -1
            phase = phase + x.reshape(shape)
        out = out + amp * np.exp(1j * phase)
    return out


def rand_gauge(grid, rng, d, scale=0.3):
    comps = {}
    for ax in range(grid.dim):
        m = np.zeros(grid.shape + (d, d), dtype=complex)
        for a in range(d):
            for b in range(a, d):
                f = band_field(grid, 1, rng)
                if a == b:
                    m[..., a, a] = 1j * f.real
                else:
                    m[..., a, b] = f
                    m[..., b, a] = -f.conj()
        comps[(ax,)] = scale * m
    return Form(grid, 1, comps, "gauge", d)


def rand_frame(grid, rng, d, scale=0.3):
    comps = {}
    for ax in range(grid.dim):
        m = np.zeros(grid.shape + (d, d), dtype=complex)
        for a in range(d):
            for b in range(a + 1, d):
                f = band_field(grid, 1, rng).real
                m[..., a, b] = f
                m[..., b, a] = -f
        comps[(ax,)] = scale * m
    return Form(grid, 1, comps, "frame", d)


class TestWallConnections:
    def test_jump_is_the_prescribed_one(self):
        w = wall_config(16, jump=0.3)
        conn = wall_connections(w)
        d = conn["gauge_plus"] - conn["gauge_minus"]
        assert np.max(np.abs(d.component((0,)) - w.gauge_jump.component((0,)))) == 0.0

    def test_twist_leaves_wall_connections_alone(self):
        rng = np.random.default_rng(11)
        g = Grid.torus((16, 16))
        bg = rand_gauge(g, rng, 1)
        plain = wall_connections(WallData(g, 1, gauge_background=bg))
        twisted = wall_connections(WallData(g, 1, gauge_background=bg, twist_flux=2))
        for key in plain:
            a = plain[key].component((0,))
            b = twisted[key].component((0,))
            assert np.max(np.abs(a - b)) == 0.0

    def test_realized_seam_defects(self):
        # the jump shows up as the wall discontinuity; the twist seam is as
        # large as the ramp drop, one flux unit per winding
        assert abs(realized_gauge_potential(wall_config(16, jump=0.3))
                   .jump_defect() - 0.3) < 1e-13
        assert abs(realized_gauge_potential(wall_config(16, twist=2))
                   .jump_defect() - 2.0) < 1e-13

    def test_twist_needs_two_torus(self):
        with pytest.raises(FormError):
            WallData(Grid.torus((8, 8, 8, 8)), rank=1, twist_flux=1)


class TestChannels:
    def test_constant_jump_value(self):
        w = wall_config(16, jump=0.3)
        assert generalized_rsa(w, "ahat_plus") == pytest.approx(-0.6, abs=1e-12)
        assert generalized_rsa(w, "ahat_minus") == pytest.approx(-0.6, abs=1e-12)

    def test_reduced_path_is_identical(self):
        w = wall_config(16, jump=0.7)
        assert rsa_gauge_only(w) == generalized_rsa(w, "ahat_plus")

    def test_reduced_path_rejects_frame_jump(self):
        rng = np.random.default_rng(5)
        g = Grid.torus((8, 8, 8, 8))
        w = WallData(g, rank=1, frame_jump=rand_frame(g.wall_grid(), rng, 4))
        with pytest.raises(FormError):
            rsa_gauge_only(w)

    def test_twist_carries_flux_not_asymmetry(self):
        w = wall_config(16, twist=2)
        assert bulk_integral(w) == pytest.approx(2.0, abs=1e-12)
        assert generalized_rsa(w) == pytest.approx(0.0, abs=1e-12)
        ch = chern_character(realized_gauge_curvature(w))
        val = integrate(ch.degree_part(2), "full")
        assert val.real == pytest.approx(2.0, abs=1e-12)
        assert abs(val.imag) < 1e-13

    def test_jump_sawtooth_carries_compensating_flux(self):
        w = wall_config(16, jump=0.3)
        assert bulk_integral(w) == pytest.approx(-0.3, abs=1e-12)
        ch = chern_character(realized_gauge_curvature(w))
        assert integrate(ch.degree_part(2), "full").real \
            == pytest.approx(-0.3, abs=1e-12)

    def test_frame_term_vanishes_for_product_frame(self):
        assert frame_interface_term(wall_config(16, jump=0.4)) == 0.0

    def test_unknown_variant_rejected(self):
        with pytest.raises(ValueError):
            generalized_rsa(wall_config(16, jump=0.3), "ahat_both")


class TestReport:
    def test_constant_jump_all_channels(self):
        rep = flat_wall_report(wall_config(16, jump=0.3))
        assert rep.value == pytest.approx(-0.6, abs=1e-12)
        assert rep.variants["ahat_minus"] == pytest.approx(-0.6, abs=1e-12)
        assert rep.variants["reduced"] == rep.value
        assert rep.seeley == pytest.approx(-0.6, abs=1e-8)
        assert rep.spectral_difference == pytest.approx(-0.6, abs=1e-8)
        assert rep.flow_offset == 0
        assert rep.matched_residual < 1e-8

    def test_integer_winding_shows_crossing(self):
        # value -2 while the endpoint spectra coincide: one crossing, and
        # the report says so instead of forcing the numbers together
        rep = flat_wall_report(wall_config(16, jump=1.0))
        assert rep.value == pytest.approx(-2.0, abs=1e-12)
        assert rep.spectral_difference == pytest.approx(0.0, abs=1e-10)
        assert rep.flow_offset == 1
        assert rep.matched_residual < 1e-10

    def test_large_jump_offset(self):
        rep = flat_wall_report(wall_config(16, jump=1.7))
        assert rep.value == pytest.approx(-3.4, abs=1e-12)
        assert rep.seeley == pytest.approx(-3.4, abs=1e-8)
        assert rep.spectral_difference == pytest.approx(-1.4, abs=1e-8)
        assert rep.flow_offset == 1
        assert rep.matched_residual < 1e-8

    def test_dict_round_trip(self):
        d = flat_wall_report(wall_config(16, jump=0.3)).to_dict()
        assert d["flow_offset"] == 0
        assert d["spectral_plus"]["kernel_dim"] == 0
        assert d["frame_term"] == 0.0

    def test_rank_two_band_limited(self):
        rng = np.random.default_rng(20260817)
        g = Grid.torus((16, 16))
        sigma = g.wall_grid()
        w = WallData(g, rank=2,
                     gauge_background=rand_gauge(g, rng, 2),
                     gauge_jump=rand_gauge(sigma, rng, 2))
        rep = flat_wall_report(w)
        assert abs(rep.variants["ahat_plus"] - rep.variants["ahat_minus"]) < 1e-9
        assert rep.matched_residual < 1e-8
        assert abs(rep.seeley - rep.value) < 1e-8


class TestFourDim:
    def _config(self):
        rng = np.random.default_rng(20260817)
        g = Grid.torus((8, 8, 8, 8))
        sigma = g.wall_grid()
        return WallData(g, rank=2,
                        gauge_background=rand_gauge(g, rng, 2),
                        gauge_jump=rand_gauge(sigma, rng, 2),
                        frame_background=rand_frame(g, rng, 4),
                        frame_jump=rand_frame(sigma, rng, 4))

    def test_variants_agree_with_frame_jump(self):
        w = self._config()
        vp = generalized_rsa(w, "ahat_plus")
        vm = generalized_rsa(w, "ahat_minus")
        # on a 3-dim cross-section the two arrangements differ only in
        # degrees past the top, so the agreement is exact, not just 1e-6
        assert vp == pytest.approx(vm, abs=1e-12)
        assert vp == pytest.approx(-1.840832520460, abs=1e-9)

    def test_frame_term_dies_by_degree_counting(self):
        # lowest frame transgression degree is 3 and the character jump
        # starts at degree 2; nothing fits in three dimensions
        assert frame_interface_term(self._config()) == 0.0

    def test_report_has_no_circle_channels(self):
        rep = flat_wall_report(self._config())
        assert rep.seeley is None
        assert rep.spectral_difference is None
        assert set(rep.variants) == {"ahat_plus", "ahat_minus"}
