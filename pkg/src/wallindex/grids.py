"""Flat periodic grids with an optional marked wall plane.

A grid is a uniform sampling of a flat torus T^n. One coordinate axis may
carry a wall: a grid-aligned plane that splits the torus into two open
half-domains. Cross-section grids (the wall itself) are grids of one
dimension less and carry no wall of their own.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = ["Grid"]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid, optionally with a marked wall plane.

    shape        points per axis (manifold grids: even, >= 8 per axis)
    lengths      circumference per axis (default 2*pi each)
    wall_axis    axis carrying the wall, or None
    wall_index   grid index of the wall plane along wall_axis
    orientation  +1 or -1, global sign of the volume form
    """

    shape: tuple[int, ...]
    lengths: tuple[float, ...]
    wall_axis: int | None = None
    wall_index: int | None = None
    orientation: int = 1

    def __post_init__(self):
        if not 1 <= len(self.shape) <= 4:
            raise ValueError(f"grid dimension {len(self.shape)} outside 1..4")
        if len(self.lengths) != len(self.shape):
            raise ValueError("lengths/shape mismatch")
        if any(x <= 0 for x in self.lengths):
            raise ValueError("axis lengths must be positive")
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")
        if self.wall_axis is not None:
            if not 0 <= self.wall_axis < len(self.shape):
                raise ValueError("wall_axis out of range")
            if self.wall_index is None or not 0 <= self.wall_index < self.shape[self.wall_axis]:
                raise ValueError("wall_index out of range")

    @classmethod
    def torus(cls, points, lengths=None, wall_axis=0, wall_index=None, orientation=1):
        """Manifold grid: dimension 2 or 4, even point counts >= 8, with a wall.

        `points` is an int (same count on every axis) or a sequence.
        The wall defaults to the midplane of `wall_axis`.
        """
        if isinstance(points, int):
            raise TypeError("pass points per axis as a sequence, e.g. (24, 24)")
        shape = tuple(int(p) for p in points)
        n = len(shape)
        if n not in (2, 4):
            raise ValueError(f"manifold dimension must be 2 or 4, got {n}")
        for p in shape:
            if p < 8 or p % 2:
                raise ValueError(f"points per axis must be even and >= 8, got {p}")
        if lengths is None:
            lengths = (TWO_PI,) * n
        if wall_index is None:
            wall_index = shape[wall_axis] // 2
        return cls(shape, tuple(float(x) for x in lengths), wall_axis, wall_index, orientation)

    @classmethod
    def circle(cls, points, length=TWO_PI, orientation=1):
        """One-dimensional cross-section grid (no wall)."""
        return cls((int(points),), (float(length),), None, None, orientation)

    @property
    def dim(self) -> int:
        return len(self.shape)

    @property
    def npoints(self) -> int:
        return int(np.prod(self.shape))

    def spacing(self, axis: int) -> float:
        return self.lengths[axis] / self.shape[axis]

    @property
    def cell_volume(self) -> float:
        return float(np.prod([self.spacing(m) for m in range(self.dim)]))

    def coordinates(self, axis: int) -> np.ndarray:
        """Sample coordinates along one axis, x_j = j * L / N."""
        return np.arange(self.shape[axis]) * self.spacing(axis)

    def wavenumbers(self, axis: int) -> np.ndarray:
        """Angular wavenumbers in FFT layout; the self-paired top mode is zeroed.

        With an even point count the +N/2 and -N/2 modes coincide, so a real
        antisymmetric derivative must send that mode to zero.
        """
        n = self.shape[axis]
        k = TWO_PI * np.fft.fftfreq(n, d=self.spacing(axis))
        if n % 2 == 0:
            k[n // 2] = 0.0
        return k

    @property
    def wall_position(self) -> float:
        if self.wall_axis is None:
            raise ValueError("grid has no wall")
        return self.wall_index * self.spacing(self.wall_axis)

    def wall_grid(self) -> "Grid":
        """Cross-section grid of the wall plane (one dimension less, no wall)."""
        if self.wall_axis is None:
            raise ValueError("grid has no wall")
        w = self.wall_axis
        shape = self.shape[:w] + self.shape[w + 1:]
        lengths = self.lengths[:w] + self.lengths[w + 1:]
        return Grid(shape, lengths, None, None, self.orientation)

    def with_orientation(self, orientation: int) -> "Grid":
        return replace(self, orientation=orientation)

    def wall_slicer(self):
        """Index tuple selecting the wall plane from a grid-shaped array."""
        if self.wall_axis is None:
            raise ValueError("grid has no wall")
        sl = [slice(None)] * self.dim
        sl[self.wall_axis] = self.wall_index
        return tuple(sl)
