"""Shared builders for band-limited random fields on small tori."""
from __future__ import annotations

import numpy as np
import pytest

from wallindex.grids import Grid
from wallindex.forms import Form


def band_limited_field(grid: Grid, rng: np.random.Generator, band: int,
                       value_dim: int = 1, real: bool = False) -> np.ndarray:
    """Random field with Fourier support in |k_axis| <= band per axis.

    Built from explicit low modes so products of a few such fields stay
    below the sampling limit and spectral calculus on them is exact.
    """
    shape = grid.shape + (value_dim, value_dim)
    out = np.zeros(shape, dtype=complex)
    mesh = np.meshgrid(*[grid.coordinates(m) for m in range(grid.dim)], indexing="ij")
    for _ in range(3):
        kvec = rng.integers(-band, band + 1, size=grid.dim)
        coeff = rng.standard_normal((value_dim, value_dim)) \
            + 1j * rng.standard_normal((value_dim, value_dim))
        phase = sum(2j * np.pi * k / grid.lengths[m] * mesh[m] for m, k in enumerate(kvec))
        wave = np.exp(phase)[..., None, None] * coeff
        out += wave + np.conj(wave) if real else wave
    return out


def random_form(grid: Grid, rng, degree: int, band: int = 2,
                kind: str = "scalar", value_dim: int = 1,
                anti_hermitian: bool = False) -> Form:
    from itertools import combinations
    comps = {}
    for idx in combinations(range(grid.dim), degree):
        arr = band_limited_field(grid, rng, band, value_dim)
        if anti_hermitian:
            arr = 0.5 * (arr - np.conj(np.swapaxes(arr, -1, -2)))
        comps[idx] = arr
    return Form(grid, degree, comps, kind, value_dim)


@pytest.fixture
def rng():
    return np.random.default_rng(20260817)
