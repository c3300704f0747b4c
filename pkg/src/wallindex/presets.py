"""Named field configurations.

Every run starts from one of a handful of presets: deterministic builders
that turn a few scalars (jump height, flux quantum, winding number, seed)
into full wall data. Seeded randomness goes through one band-limited
generator so that a config file pins the fields bit for bit.
"""
from __future__ import annotations

import math

import numpy as np

from .forms import Form
from .grids import Grid
from .rsa import WallData

__all__ = [
    "PRESETS",
    "FRAME_PRESETS",
    "band_limited_field",
    "random_gauge",
    "random_frame",
    "constant_jump",
    "build_wall",
]

# name -> (parameter hint, one-line description)
PRESETS = {
    "free": ("", "no background, no jump; index 0"),
    "constant-jump": ("jump=c", "constant gauge jump of height c across the wall"),
    "flux": ("flux=m", "m flux quanta through the torus, no wall jump"),
    "pure-gauge": ("winding=k", "integer-winding jump, removable by a gauge move"),
    "random-band-limited": ("seed=s [scale, band]", "seeded smooth background and jump"),
}

FRAME_PRESETS = {
    "zero": ("", "flat product frame"),
    "random-band-limited": ("frame_seed=s", "seeded smooth frame background and jump"),
}


def band_limited_field(grid: Grid, band: int, rng) -> np.ndarray:
    """Three random Fourier modes with wavenumbers up to the band."""
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


def random_gauge(grid: Grid, rng, d: int, scale: float = 0.3,
                 band: int = 1) -> Form:
    """Band-limited anti-Hermitian connection, one matrix per axis."""
    comps = {}
    for ax in range(grid.dim):
        m = np.zeros(grid.shape + (d, d), dtype=complex)
        for a in range(d):
            for b in range(a, d):
                f = band_limited_field(grid, band, rng)
                if a == b:
                    m[..., a, a] = 1j * f.real
                else:
                    m[..., a, b] = f
                    m[..., b, a] = -f.conj()
        comps[(ax,)] = scale * m
    return Form(grid, 1, comps, "gauge", d)


def random_frame(grid: Grid, rng, d: int, scale: float = 0.3,
                 band: int = 1) -> Form:
    """Band-limited real antisymmetric frame connection."""
    comps = {}
    for ax in range(grid.dim):
        m = np.zeros(grid.shape + (d, d), dtype=complex)
        for a in range(d):
            for b in range(a + 1, d):
                f = band_limited_field(grid, band, rng).real
                m[..., a, b] = f
                m[..., b, a] = -f
        comps[(ax,)] = scale * m
    return Form(grid, 1, comps, "frame", d)


def constant_jump(sigma: Grid, height: float, rank: int) -> Form:
    """Jump -2 pi i c / L_y dy on the unit of the gauge bundle; height c
    counts windings of the removable gauge move."""
    arr = (-2j * math.pi * height / sigma.lengths[0]) \
        * np.broadcast_to(np.eye(rank, dtype=complex),
                          sigma.shape + (rank, rank)).copy()
    return Form(sigma, 1, {(0,): arr}, "gauge", rank)


def _require_number(params: dict, key: str, preset: str):
    if key not in params:
        raise ValueError(f"preset {preset!r} needs the {key!r} parameter")
    val = params[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ValueError(f"parameter {key!r} must be a number, got {val!r}")
    return val


def build_wall(dimension: int = 2, points: int = 16, lengths=None,
               wall_axis: int = 0, wall_index: int = 0, rank: int = 1,
               gauge: str = "free", frame: str = "zero", **params) -> WallData:
    """Assemble wall data for a named gauge preset and frame preset.

    Unknown preset names and missing parameters raise ValueError; physical
    impossibilities (flux off a two-torus) surface as FormError from the
    field constructors.
    """
    if gauge not in PRESETS:
        raise ValueError(f"unknown gauge preset {gauge!r}; see 'presets'")
    if frame not in FRAME_PRESETS:
        raise ValueError(f"unknown frame preset {frame!r}; see 'presets'")
    if lengths is None:
        lengths = (2.0 * math.pi,) * dimension
    if len(lengths) != dimension:
        raise ValueError("lengths must list one period per axis")
    g = Grid((points,) * dimension, tuple(float(x) for x in lengths),
             wall_axis=wall_axis, wall_index=wall_index)
    sigma = g.wall_grid()

    background = None
    jump_form = None
    twist = 0
    if gauge == "constant-jump":
        height = _require_number(params, "jump", gauge)
        jump_form = constant_jump(sigma, float(height), rank)
        twist = int(params.get("flux", 0))
    elif gauge == "flux":
        twist = int(_require_number(params, "flux", gauge))
        if twist == 0:
            raise ValueError("preset 'flux' needs a nonzero flux quantum")
    elif gauge == "pure-gauge":
        winding = _require_number(params, "winding", gauge)
        if winding != int(winding):
            raise ValueError("winding must be an integer")
        jump_form = constant_jump(sigma, float(winding), rank)
    elif gauge == "random-band-limited":
        seed = int(_require_number(params, "seed", gauge))
        scale = float(params.get("scale", 0.3))
        band = int(params.get("band", 1))
        rng = np.random.default_rng(seed)
        background = random_gauge(g, rng, rank, scale=scale, band=band)
        jump_form = random_gauge(sigma, rng, rank, scale=scale, band=band)

    frame_background = None
    frame_jump = None
    if frame == "random-band-limited":
        fseed = int(_require_number(params, "frame_seed", frame))
        fscale = float(params.get("frame_scale", 0.3))
        rng = np.random.default_rng(fseed)
        frame_background = random_frame(g, rng, dimension, scale=fscale)
        frame_jump = random_frame(sigma, rng, dimension, scale=fscale)

    return WallData(g, rank=rank, gauge_background=background,
                    gauge_jump=jump_form, frame_background=frame_background,
                    frame_jump=frame_jump, twist_flux=twist)
