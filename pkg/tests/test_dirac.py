"""Chiral torus operator: construction, spectra, kernels, index."""
import math

import numpy as np
import pytest

from wallindex.dirac import (
    AmbiguousKernelError,
    DiracSpectrum,
    build_dirac,
    free_spectrum,
    index_predicted,
    index_report,
    index_spectral,
    spectrum,
)
from wallindex.forms import Form, ext_d
from wallindex.grids import Grid
from wallindex.rsa import WallData


def wall_config(n, jump=0.0, twist=0, rank=1, background=None):
    """Constant tangential jump of strength `jump` plus integer seam twist."""
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


class TestBuild:
    def test_free_spectrum_matches_closed_form(self):
        op = build_dirac(wall_config(12))
        lam = np.sort(np.linalg.eigvalsh(op.matrix))
        assert np.max(np.abs(lam - free_spectrum(op.grid))) < 1e-12

    def test_hermitian_and_anticommuting(self):
        rng = np.random.default_rng(3)
        g = Grid.torus((12, 12))
        z = np.zeros(g.shape + (1, 1), dtype=complex)
        x = g.coordinates(0)[:, None]
        y = g.coordinates(1)[None, :]
        bg = Form(g, 1, {
            (0,): z + (-0.2j * np.cos(x + 2 * y))[..., None, None],
            (1,): z + (0.3j * np.sin(2 * x - y))[..., None, None],
        }, "gauge", 1)
        op = build_dirac(wall_config(12, jump=0.4, twist=1, background=bg))
        assert np.max(np.abs(op.matrix - op.matrix.conj().T)) < 1e-12
        anti = op.chirality[:, None] * op.matrix \
            + op.matrix * op.chirality[None, :]
        assert np.max(np.abs(anti)) == 0.0

    def test_constant_potential_shifts_momenta(self):
        # spectrum(A = -i c dy) equals the free one with k_y shifted by c;
        # the shifted multiset is symmetric under c -> -c so the sorted
        # comparison fixes no sign
        c = 0.37
        g = Grid.torus((12, 12))
        bg = Form(g, 1, {(1,): (-1j * c) * np.ones(g.shape + (1, 1), dtype=complex)},
                  "gauge", 1)
        op = build_dirac(WallData(g, rank=1, gauge_background=bg))
        lam = np.sort(np.linalg.eigvalsh(op.matrix))
        ks = g.wavenumbers(0)
        ky = g.wavenumbers(1)
        mags = np.sqrt(ks[:, None] ** 2 + (ky[None, :] - c) ** 2).ravel()
        oracle = np.sort(np.concatenate([mags, -mags]))
        assert np.max(np.abs(lam - oracle)) < 1e-12

    def test_rank_two_diagonal_potential(self):
        shifts = (0.37, -0.21)
        g = Grid.torus((12, 12))
        arr = np.zeros(g.shape + (2, 2), dtype=complex)
        arr[..., 0, 0] = -1j * shifts[0]
        arr[..., 1, 1] = -1j * shifts[1]
        bg = Form(g, 1, {(1,): arr}, "gauge", 2)
        op = build_dirac(WallData(g, rank=2, gauge_background=bg))
        lam = np.sort(np.linalg.eigvalsh(op.matrix))
        ks = g.wavenumbers(0)
        ky = g.wavenumbers(1)
        pieces = []
        for c in shifts:
            mags = np.sqrt(ks[:, None] ** 2 + (ky[None, :] - c) ** 2).ravel()
            pieces += [mags, -mags]
        assert np.max(np.abs(lam - np.sort(np.concatenate(pieces)))) < 1e-12

    def test_difference_scheme_dispersion(self):
        # centered differences on the projected band carry the sin(kh)/h
        # symbol exactly
        n = 12
        op = build_dirac(wall_config(n), discretization="finite-difference")
        lam = np.sort(np.linalg.eigvalsh(op.matrix))
        g = op.grid
        h = g.lengths[0] / n
        kk = np.arange(-(n // 4), n // 4 + 1) * (2 * math.pi / g.lengths[0])
        sym = np.sin(kk * h) / h
        mags = np.sqrt(sym[:, None] ** 2 + sym[None, :] ** 2).ravel()
        oracle = np.sort(np.concatenate([mags, -mags]))
        assert lam.shape == oracle.shape
        assert np.max(np.abs(lam - oracle)) < 1e-12

    def test_rejects_unsupported_grids(self):
        g4 = Grid.torus((8, 8, 8, 8))
        with pytest.raises(Exception):
            build_dirac(WallData(g4, rank=1))


class TestSpectrum:
    def test_free_kernel_pairing(self):
        # constant modes carry one kernel direction per chirality; the
        # self-paired corner modes are resolution ghosts
        sp = spectrum(build_dirac(wall_config(12)))
        idx, n_plus, n_minus, n_ghost = index_spectral(sp)
        assert (idx, n_plus, n_minus, n_ghost) == (0, 1, 1, 6)
        assert len(sp.kernel_values) == 8
        assert np.all(np.abs(np.abs(sp.kernel_chirality) - 1.0) < 1e-9)

    def test_eigenvalue_pairing_residual(self):
        sp = spectrum(build_dirac(wall_config(12, jump=0.4, twist=1)))
        assert sp.pairing_residual < 1e-9

    def test_ambiguous_kernel_raises(self):
        sp = DiracSpectrum(eigenvalues=np.zeros(2), kernel_values=np.zeros(1),
                           kernel_chirality=np.array([0.5]),
                           kernel_resolved=np.array([1.0]), tau=0.05,
                           pairing_residual=0.0, gap=1.0)
        with pytest.raises(AmbiguousKernelError):
            index_spectral(sp)

    def test_gap_reported(self):
        sp = spectrum(build_dirac(wall_config(16, jump=0.3)))
        assert len(sp.kernel_values) == 0
        assert 0.1 < sp.gap < 0.2


class TestIndex:
    @pytest.mark.parametrize("m", [-2, -1, 1, 2])
    def test_flux_sweep(self, m):
        rep = index_report(wall_config(16, twist=m))
        assert rep.spectral == m
        assert rep.predicted_rounded == m
        assert abs(rep.predicted - m) < 1e-10
        assert rep.kernel_dim == 2 * abs(m)
        assert rep.n_ghost == abs(m)

    def test_pure_flux_kernel_is_machine_accurate(self):
        sp = spectrum(build_dirac(wall_config(16, twist=1)))
        assert np.max(np.abs(sp.kernel_values)) < 1e-10
        assert sp.gap > 0.4

    def test_jump_only_gapped(self):
        rep = index_report(wall_config(16, jump=0.3))
        assert rep.spectral == 0
        assert rep.kernel_dim == 0
        assert abs(rep.predicted) < 1e-10

    def test_integer_winding_jump_is_trivial(self):
        # gauge-equivalent to the free field
        rep = index_report(wall_config(16, jump=1.0))
        assert rep.spectral == 0
        assert rep.predicted_rounded == 0

    def test_jump_with_twist(self):
        rep = index_report(wall_config(16, twist=1, jump=0.3))
        assert rep.spectral == 1
        assert abs(rep.predicted - 1.0) < 1e-10
        sp = spectrum(build_dirac(wall_config(16, twist=1, jump=0.3)))
        # the jump kinks the kernel mode; accuracy drops to the Gibbs scale
        assert 1e-6 < np.max(np.abs(sp.kernel_values)) < 0.02

    def test_threshold_window(self):
        op = build_dirac(wall_config(16, twist=1))
        for tau in (1e-8, 1e-4, 0.05):
            idx, _, _, _ = index_spectral(spectrum(op, tau=tau))
            assert idx == 1

    def test_refinement_stability(self):
        assert index_report(wall_config(16, twist=1)).spectral \
            == index_report(wall_config(24, twist=1)).spectral

    def test_predicted_decomposition(self):
        rep = index_predicted(wall_config(16, twist=2))
        assert abs(rep.bulk_term - 2.0) < 1e-10
        assert abs(rep.wall_term) < 1e-10
        assert rep.frame_term == 0.0
        rep = index_predicted(wall_config(16, jump=0.3))
        assert abs(rep.bulk_term + 0.3) < 1e-10
        assert abs(rep.wall_term - 0.3) < 1e-10

    def test_report_round_trip(self):
        d = index_report(wall_config(16, twist=1)).to_dict()
        assert d["spectral"] == 1 and d["n_ghost"] == 1
        assert d["gap"] > 0.4 and d["pairing_residual"] < 1e-9


class TestGaugeCovariance:
    def _background(self, g):
        x = g.coordinates(0)[:, None]
        y = g.coordinates(1)[None, :]
        z = np.zeros(g.shape + (1, 1), dtype=complex)
        return Form(g, 1, {
            (0,): z + (-0.3j * np.cos(2 * x - y + 0.4))[..., None, None],
            (1,): z + (0.2j * np.sin(x + y))[..., None, None],
        }, "gauge", 1)

    def _phase(self, g):
        x = g.coordinates(0)[:, None]
        y = g.coordinates(1)[None, :]
        return 0.4 * np.cos(x) + 0.4 * np.sin(y - 0.7)

    def test_site_unitary_conjugation_exact(self):
        g = Grid.torus((16, 16))
        op = build_dirac(WallData(g, 1, gauge_background=self._background(g)))
        u = np.exp(1j * self._phase(g)).ravel()
        u2 = np.concatenate([u, u])
        conj = (u2.conj()[:, None] * op.matrix) * u2[None, :]
        lam = np.sort(np.linalg.eigvalsh(op.matrix))
        lam_c = np.sort(np.linalg.eigvalsh(conj))
        assert np.max(np.abs(lam - lam_c)) < 1e-12

    def test_field_transformation_matches_on_low_modes(self):
        # transforming the field (rather than the matrix) is covariant only
        # up to band-edge truncation; the physical window converges as h^2
        res = {}
        for n in (16, 32):
            g = Grid.torus((n, n))
            bg = self._background(g)
            chif = Form(g, 0, {(): self._phase(g)[..., None, None] + 0j},
                        "gauge", 1)
            dchi = ext_d(chif)
            bg2 = Form(g, 1, {
                (0,): bg.component((0,)) + 1j * dchi.component((0,)),
                (1,): bg.component((1,)) + 1j * dchi.component((1,)),
            }, "gauge", 1)
            lam1 = np.sort(np.linalg.eigvalsh(
                build_dirac(WallData(g, 1, gauge_background=bg)).matrix))
            lam2 = np.sort(np.linalg.eigvalsh(
                build_dirac(WallData(g, 1, gauge_background=bg2)).matrix))
            sel = np.abs(lam1) <= 2.0
            res[n] = np.max(np.abs(lam1[sel] - lam2[sel]))
        assert res[16] < 1e-3
        assert res[32] < 1e-4
        assert res[16] / res[32] > 4.0
