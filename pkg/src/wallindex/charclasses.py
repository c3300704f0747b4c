"""Invariant polynomials of curvature: Chern character, A-roof, transgressions.

Normalizations, with F and R the (anti-Hermitian / antisymmetric) curvature
2-forms:

    ch(F)   = tr exp(iF/2pi)
            = r + (i/2pi) tr F - 1/(8 pi^2) tr(F ^ F) + ...
    A(R)    = 1 + 1/(192 pi^2) tr(R ^ R) + ...   (four-form truncation)

Both are truncated at the grid dimension, so on a 2- or 4-torus only the
terms written above survive. The transgression TV(A1, A0) is computed from
the polarized polynomial along the straight path A_t = A0 + t(A1 - A0),

    TV(A1, A0) = sum_k k * int_0^1 dt  V_k(A1 - A0, F_t, ..., F_t),

with V_k the symmetrized multilinear extension of the tr(F^k) coefficient.
The t-integrand is polynomial in t of degree < 2k, so a Gauss-Legendre rule
of modest order evaluates the integral exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .forms import CutForm, Form, FormError, MixedForm, ext_d, wedge

__all__ = [
    "InvariantPolynomial",
    "CurvaturePair",
    "chern_character_polynomial",
    "a_hat_polynomial",
    "curvature",
    "chern_character",
    "a_hat",
    "pontryagin_density",
    "polarization_eval",
    "transgression",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class InvariantPolynomial:
    """V(F) = unit + sum_k coefficients[k] * tr(F^k).

    ``unit_tr`` scales tr(1) (rank term, as in the Chern character);
    ``unit_one`` is a bare constant (as in the A-roof genus).
    """

    name: str
    coefficients: dict
    unit_tr: complex = 0.0
    unit_one: complex = 0.0

    def max_order(self) -> int:
        return max(self.coefficients, default=0)


def chern_character_polynomial(max_order: int = 2) -> InvariantPolynomial:
    # exp expansion: coefficient of tr(F^k) is (i/2pi)^k / k!
    coeffs = {k: (1j / TWO_PI) ** k / math.factorial(k) for k in range(1, max_order + 1)}
    return InvariantPolynomial("chern-character", coeffs, unit_tr=1.0)


def a_hat_polynomial() -> InvariantPolynomial:
    # Four-form truncation: first Pontryagin term only.
    return InvariantPolynomial("a-hat", {2: 1.0 / (192.0 * math.pi ** 2)}, unit_one=1.0)


@dataclass
class CurvaturePair:
    """Connection 1-form together with its curvature F = dA + A^A."""

    connection: Form
    curvature: Form

    def bianchi_residual(self) -> float:
        """Max-norm of dF + A^F - F^A; zero up to aliasing for smooth data.

        On a 2-manifold every 3-form vanishes identically and the residual
        is zero by degree counting.
        """
        a, f = self.connection, self.curvature
        if f.degree >= f.grid.dim:
            return 0.0
        resid = ext_d(f) + wedge(a, f) - wedge(f, a)
        return resid.max_abs()


def curvature(a: Form) -> CurvaturePair:
    """F = dA + A ^ A for a connection 1-form in either sector."""
    if a.degree != 1:
        raise FormError("curvature expects a connection 1-form")
    return CurvaturePair(a, ext_d(a) + wedge(a, a))


def _eval_polynomial(poly: InvariantPolynomial, f, grid, value_dim, truncate_at=None) -> MixedForm:
    top = grid.dim if truncate_at is None else min(truncate_at, grid.dim)
    unit = poly.unit_one + poly.unit_tr * value_dim
    out = MixedForm(grid, {0: Form.constant(grid, unit)})
    power = None
    for k in range(1, poly.max_order() + 1):
        if 2 * k > top:
            break
        power = f if power is None else wedge(power, f)
        ck = poly.coefficients.get(k, 0.0)
        if ck != 0.0:
            out = out + power.trace() * ck
    return out


def chern_character(f=None, truncate_at: int | None = None, *,
                    grid=None, value_dim: int | None = None) -> MixedForm:
    """ch(F) as a mixed form of even degrees, truncated at the grid dimension.

    ``f`` is the curvature 2-form (Form or CutForm, gauge sector). On a
    manifold of dimension below two there is no curvature form at all; pass
    f=None with grid and value_dim to get the pure rank term.
    """
    if f is None:
        if grid is None or value_dim is None:
            raise FormError("chern_character needs a curvature or (grid, value_dim)")
        return MixedForm(grid, {0: Form.constant(grid, float(value_dim))})
    if f.kind not in ("gauge", "scalar"):
        raise FormError("chern character expects gauge-sector curvature")
    poly = chern_character_polynomial()
    return _eval_polynomial(poly, f, f.grid, f.value_dim, truncate_at)


def a_hat(r=None, grid=None, truncate_at: int | None = None) -> MixedForm:
    """A-roof form of a frame curvature; with r=None, the unit mixed form."""
    if r is None:
        if grid is None:
            raise FormError("a_hat needs a curvature or a grid")
        return MixedForm(grid, {0: Form.constant(grid, 1.0)})
    if r.kind not in ("frame", "scalar"):
        raise FormError("a_hat expects frame-sector curvature")
    return _eval_polynomial(a_hat_polynomial(), r, r.grid, r.value_dim, truncate_at)


def pontryagin_density(f, r=None) -> MixedForm:
    """Index density A(R) ^ ch(F) truncated at the grid dimension."""
    grid = f.grid
    ch = chern_character(f)
    ar = a_hat(r, grid=grid)
    return wedge(ar, ch).truncate(grid.dim)


def polarization_eval(poly: InvariantPolynomial, k: int, args) -> Form:
    """Symmetrized multilinear extension of the tr(F^k) term.

    V_k(a_1, ..., a_k) = coefficients[k]/k! * sum over orderings of
    tr(a_s1 ^ ... ^ a_sk). Exact symmetrization; k is small here (<= 2).
    """
    if len(args) != k:
        raise FormError(f"polarization of order {k} needs {k} arguments")
    ck = poly.coefficients.get(k, 0.0)
    grid = args[0].grid
    deg = sum(a.degree for a in args)
    if ck == 0.0:
        return Form.zero(grid, deg)
    acc = None
    for order in permutations(range(k)):
        prod = args[order[0]]
        for i in order[1:]:
            prod = wedge(prod, args[i])
        term = prod.trace()
        acc = term if acc is None else acc + term
    return acc * (ck / math.factorial(k))


def transgression(poly: InvariantPolynomial, a1: Form, a0: Form, quad_order: int = 8) -> MixedForm:
    """TV(A1, A0) along the straight path, satisfying
    d TV(A1, A0) = V(F1) - V(F0) for closed V.

    Gauss-Legendre in t is exact once 2*quad_order - 1 >= 2*max_order - 2.
    """
    if a1.degree != 1 or a0.degree != 1:
        raise FormError("transgression expects connection 1-forms")
    if a1.grid != a0.grid:
        raise FormError("transgression requires a common grid")
    grid = a1.grid
    eta = a1 - a0
    active = [(k, ck) for k, ck in poly.coefficients.items()
              if ck != 0.0 and 2 * k - 1 <= grid.dim]
    nodes, weights = np.polynomial.legendre.leggauss(quad_order)
    # map from (-1, 1) to (0, 1)
    tvals = 0.5 * (nodes + 1.0)
    weights = 0.5 * weights
    out = MixedForm(grid)
    for t, w in zip(tvals, weights):
        at = a0 + eta * t
        # a curvature factor only appears in k >= 2 terms, which degree
        # counting already rules out on a circle
        ft = curvature(at).curvature if any(k >= 2 for k, _ in active) else None
        for k, ck in active:
            term = polarization_eval(poly, k, [eta] + [ft] * (k - 1))
            out = out + term * (k * w)
    return out
