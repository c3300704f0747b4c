"""Collar interpolation across the wall: thin-cylinder integrals of
characteristic densities and their zero-thickness limits.

A wall jump can be smoothed by gluing in a collar Sigma x [0, eps] and
interpolating the connection through a flat-ended profile,

    A_eps = B1 + s B2 + f(s/eps) B3,

with B1 the base restriction, B3 the jump, and an optional bounded linear
term B2 switched on by configs that probe the remainder. The curvature
splits as F_eps = ds ^ (B2 + f'/eps B3) + theta(s), so the transverse
derivative is carried analytically by the profile and nothing is ever
differenced across the thin direction. The top-degree density then has
exactly one ds factor, and the collar integral reduces to two transverse
quadratures: the B3 channel is integrated in the profile variable
t = f(s/eps), which removes eps entirely when B2 and omega2 vanish, and
the B2 channel stays in s/eps with an explicit factor of eps. In the clean
case the integral equals the transgression pairing

    int_Sigma omega1 ^ TV(B1 + B3, B1)

node for node; with B2 on, the difference shrinks linearly in eps.

Running one collar for the frame jump and one for the gauge jump, each
weighted by the other sector's closed factor, rebuilds the wall asymmetry
from nothing but interpolation, which is how the two assembly variants
arise: the weighting sides swap with the interpolation order.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charclasses import (
    InvariantPolynomial,
    a_hat,
    a_hat_polynomial,
    chern_character,
    chern_character_polynomial,
    curvature,
    polarization_eval,
    transgression,
)
from .forms import Form, FormError, MixedForm, integrate, wedge
from .grids import Grid
from .rsa import WallData, wall_connections

__all__ = [
    "SmoothProfile",
    "CylinderConfig",
    "smoothing_profile",
    "paste_cylinder",
    "cylinder_integral",
    "collar_limit",
    "rsa_via_cylinders",
]


def _bump(u):
    """exp(-1/(u(1-u))) on (0,1), zero outside; underflows to exact zero
    well before the endpoints."""
    u = np.asarray(u, dtype=float)
    inside = (u > 0.0) & (u < 1.0)
    out = np.zeros_like(u)
    ui = u[inside]
    out[inside] = np.exp(-1.0 / ui - 1.0 / (1.0 - ui))
    return out


def _bump_derivative(u: float, order: int) -> float:
    """Closed-form derivatives of the bump via g = 1/u + 1/(1-u):
    b' = -g' b, b'' = (g'^2 - g'') b, b''' = (-g'^3 + 3 g' g'' - g''') b."""
    if not 0.0 < u < 1.0:
        return 0.0
    v = 1.0 - u
    b = math.exp(-1.0 / u - 1.0 / v)
    if b == 0.0:
        return 0.0
    g1 = -1.0 / u ** 2 + 1.0 / v ** 2
    if order == 0:
        return b
    if order == 1:
        return -g1 * b
    g2 = 2.0 / u ** 3 + 2.0 / v ** 3
    if order == 2:
        return (g1 ** 2 - g2) * b
    g3 = -6.0 / u ** 4 + 6.0 / v ** 4
    if order == 3:
        return (-g1 ** 3 + 3.0 * g1 * g2 - g3) * b
    raise ValueError("bump derivatives implemented through order 3")


class SmoothProfile:
    """Monotone ramp f(t) = int_0^t b / int_0^1 b with all endpoint
    derivatives flat; b is the standard bump."""

    _nodes, _weights = np.polynomial.legendre.leggauss(64)

    def __init__(self):
        self._norm = self._raw_integral(1.0)

    def _raw_integral(self, t: float) -> float:
        u = 0.5 * t * (self._nodes + 1.0)
        return float(0.5 * t * np.sum(self._weights * _bump(u)))

    def value(self, t: float) -> float:
        if t <= 0.0:
            return 0.0
        if t >= 1.0:
            return 1.0
        return self._raw_integral(t) / self._norm

    def derivative(self, t: float, order: int = 1) -> float:
        """d^m f / dt^m for m = 1..4; identically zero outside (0,1)."""
        if not 1 <= order <= 4:
            raise ValueError("profile derivatives available for orders 1..4")
        return _bump_derivative(t, order - 1) / self._norm

    def inverse(self, y: float) -> float:
        """Solve f(t) = y by bisection; f' vanishes at the endpoints, so
        Newton steps are not trustworthy there."""
        if not 0.0 <= y <= 1.0:
            raise ValueError("profile values live in [0, 1]")
        lo, hi = 0.0, 1.0
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            if self.value(mid) < y:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


def smoothing_profile(t: float, profile: SmoothProfile | None = None) -> tuple:
    """(value, first derivative) of the standard ramp at t."""
    p = profile if profile is not None else _DEFAULT_PROFILE
    return p.value(t), p.derivative(t, 1)


_DEFAULT_PROFILE = SmoothProfile()


@dataclass
class CylinderConfig:
    """One collar: base connection, jump, optional bounded linear term,
    even-degree weight omega = omega1 + s omega2, and the polynomial whose
    density is integrated. The base, jump and omega1 never depend on the
    transverse coordinate or the thickness; only B2 and omega2 do, through
    the explicit factor of s."""

    b1: Form
    b3: Form
    polynomial: InvariantPolynomial
    omega1: MixedForm | Form
    eps: float = 0.1
    n_t: int = 32
    b2: Form | None = None
    omega2: MixedForm | Form | None = None
    profile: SmoothProfile | None = None

    def __post_init__(self):
        if self.b1.degree != 1 or self.b3.degree != 1:
            raise FormError("collar connections must be 1-forms")
        if self.b1.grid != self.b3.grid:
            raise FormError("collar forms must share the cross-section grid")
        if self.b2 is not None and self.b2.degree != 1:
            raise FormError("the linear term must be a 1-form")
        if self.eps <= 0.0:
            raise FormError("collar thickness must be positive")
        if self.n_t < 8:
            raise FormError("transverse quadrature needs at least 8 nodes")
        if self.profile is None:
            self.profile = _DEFAULT_PROFILE

    @property
    def sigma(self) -> Grid:
        return self.b1.grid


def _as_mixed(omega, grid: Grid) -> MixedForm:
    if isinstance(omega, MixedForm):
        return omega
    return MixedForm(grid, {omega.degree: omega})


def _active_orders(poly: InvariantPolynomial, dim: int) -> list:
    """Polynomial orders whose single-ds density can fit on the
    cross-section: the slice form has degree 2k - 1."""
    return [k for k, c in sorted(poly.coefficients.items())
            if c != 0.0 and 2 * k - 1 <= dim]


def _slice_density(cfg: CylinderConfig, direction: Form, t: float,
                   s: float) -> float:
    """Cross-section integral of omega ^ sum_k k Vtilde_k(direction,
    theta, ..., theta) at fixed transverse position."""
    sigma = cfg.sigma
    orders = _active_orders(cfg.polynomial, sigma.dim)
    if not orders:
        return 0.0
    a = cfg.b1 + cfg.b3 * t
    if cfg.b2 is not None:
        a = a + cfg.b2 * s
    theta = None
    if any(k >= 2 for k in orders) and sigma.dim >= 2:
        theta = curvature(a).curvature
    total = MixedForm(sigma, {})
    for k in orders:
        if k >= 2 and theta is None:
            continue
        args = [direction] + [theta] * (k - 1)
        term = polarization_eval(cfg.polynomial, k, args) * float(k)
        total = total + MixedForm(sigma, {term.degree: term})
    omega = _as_mixed(cfg.omega1, sigma)
    if cfg.omega2 is not None:
        omega = omega + _as_mixed(cfg.omega2, sigma) * s
    val = integrate(wedge(omega, total).degree_part(sigma.dim), "full")
    if abs(val.imag) > 1e-9 * max(1.0, abs(val)):
        raise AssertionError(f"collar slice density came out non-real ({val:.3e})")
    return float(val.real)


def cylinder_integral(cfg: CylinderConfig) -> float:
    """Collar integral of omega ^ V(F_eps), top degree.

    The jump channel runs over Gauss nodes in t = f(s/eps); when nothing
    else depends on s the thickness cancels identically, which is the
    zero-thickness identity at any eps. The linear channel runs over Gauss
    nodes in s/eps and carries the explicit factor of eps."""
    x, wts = np.polynomial.legendre.leggauss(cfg.n_t)
    nodes = 0.5 * (x + 1.0)
    wts = 0.5 * wts
    s_dependent = (cfg.b2 is not None and cfg.b2.max_abs() > 0.0) \
        or (cfg.omega2 is not None and cfg.omega2.max_abs() > 0.0)
    out = 0.0
    if cfg.b3.max_abs() > 0.0:
        for t_i, w_i in zip(nodes, wts):
            s_i = cfg.eps * cfg.profile.inverse(t_i) if s_dependent else 0.0
            out += w_i * _slice_density(cfg, cfg.b3, float(t_i), s_i)
    if cfg.b2 is not None and cfg.b2.max_abs() > 0.0:
        for u_j, v_j in zip(nodes, wts):
            t_j = cfg.profile.value(float(u_j))
            out += cfg.eps * v_j * _slice_density(cfg, cfg.b2, t_j,
                                                  cfg.eps * float(u_j))
    return out


def collar_limit(cfg: CylinderConfig, quad_order: int = 8) -> float:
    """Zero-thickness value: the cross-section pairing of omega1 with the
    transgression from the base connection to base plus jump."""
    tv = transgression(cfg.polynomial, cfg.b1 + cfg.b3, cfg.b1, quad_order)
    val = integrate(wedge(_as_mixed(cfg.omega1, cfg.sigma), tv)
                    .degree_part(cfg.sigma.dim), "full")
    if abs(val.imag) > 1e-9 * max(1.0, abs(val)):
        raise AssertionError(f"collar limit came out non-real ({val:.3e})")
    return float(val.real)


def _closed_character(conn: Form, rank: int) -> MixedForm:
    sigma = conn.grid
    if sigma.dim >= 2:
        return chern_character(curvature(conn).curvature)
    return chern_character(None, grid=sigma, value_dim=rank)


def _closed_a_hat(conn: Form) -> MixedForm:
    sigma = conn.grid
    if sigma.dim >= 2:
        return a_hat(curvature(conn).curvature)
    return a_hat(grid=sigma)


def paste_cylinder(w: WallData, eps: float = 0.1, n_t: int = 32) -> CylinderConfig:
    """Gauge collar for a continuous frame: interpolate the gauge jump
    against the frame's closed factor restricted to the wall."""
    conn = wall_connections(w)
    return CylinderConfig(b1=conn["gauge_minus"], b3=w.gauge_jump,
                          polynomial=chern_character_polynomial(),
                          omega1=_closed_a_hat(conn["frame_minus"]),
                          eps=eps, n_t=n_t)


def rsa_via_cylinders(w: WallData, order: str = "frame-first",
                      eps: float = 0.1, n_t: int = 32,
                      quad_order: int = 8) -> float:
    """Wall asymmetry rebuilt from two collars in a row.

    'frame-first' interpolates the frame jump while the gauge connection
    waits on its minus side, then the gauge jump under the plus-side
    frame; this lands on the same arrangement as the 'ahat_plus' assembly.
    'gauge-first' swaps the waiting sides and lands on 'ahat_minus'. Each
    collar is evaluated at its zero-thickness value.
    """
    if order not in ("frame-first", "gauge-first"):
        raise ValueError(f"unknown interpolation order {order!r}")
    conn = wall_connections(w)
    if order == "frame-first":
        gauge_weight = conn["gauge_minus"]
        frame_weight = conn["frame_plus"]
    else:
        gauge_weight = conn["gauge_plus"]
        frame_weight = conn["frame_minus"]
    frame_collar = CylinderConfig(b1=conn["frame_minus"], b3=w.frame_jump,
                                  polynomial=a_hat_polynomial(),
                                  omega1=_closed_character(gauge_weight, w.rank),
                                  eps=eps, n_t=n_t)
    gauge_collar = CylinderConfig(b1=conn["gauge_minus"], b3=w.gauge_jump,
                                  polynomial=chern_character_polynomial(),
                                  omega1=_closed_a_hat(frame_weight),
                                  eps=eps, n_t=n_t)
    return -2.0 * (collar_limit(frame_collar, quad_order)
                   + collar_limit(gauge_collar, quad_order))
