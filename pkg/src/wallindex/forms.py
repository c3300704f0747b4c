"""Differential forms on flat periodic grids, with wall-cut variants.

Forms are stored componentwise over strictly increasing multi-indices, with
matrix values in a single sector: plain functions ('scalar'), connection or
curvature data ('gauge'), or frame data ('frame'). Mixing gauge and frame
values in one pointwise product is a bug in the caller and raises.

Two container types:

* ``Form``: smooth periodic samples, supports the exterior derivative
  (spectral, exact on band-limited data).
* ``CutForm``: samples that jump across the wall plane. Off the wall the
  base samples are authoritative; on the wall plane the two one-sided
  limits are stored separately. CutForms support pointwise algebra and
  integration but never ``ext_d``: the distributional derivative across
  the wall is exactly what the cut bookkeeping exists to avoid.

Integration domains: 'full' (whole torus; for a CutForm this is the torus
minus the wall, with the wall plane entering through the mean of its two
one-sided limits), 'upper'/'lower' (half-domains on either side of the
wall, split at the antipodal plane so the two halves plus the zero-measure
wall reproduce the full integral exactly), and 'wall' (restrict, then
integrate the cross-section).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .grids import Grid

__all__ = [
    "Form",
    "CutForm",
    "MixedForm",
    "FormError",
    "SectorMixError",
    "TopDegreeError",
    "wedge",
    "ext_d",
    "integrate",
    "restrict_to_wall",
    "extend_from_wall",
    "cut_from_profile",
    "as_cut",
    "form_to_payload",
    "form_from_payload",
]


class FormError(ValueError):
    pass


class SectorMixError(FormError):
    pass


class TopDegreeError(FormError):
    pass


def _perm_sign(seq) -> int:
    inv = 0
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                inv += 1
    return -1 if inv % 2 else 1


def _combine_kind(ka: str, kb: str) -> str:
    if ka == "scalar":
        return kb
    if kb == "scalar":
        return ka
    if ka != kb:
        raise SectorMixError(f"cannot multiply {ka}-valued by {kb}-valued form")
    return ka


def _pmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # Pointwise product of (..., d1, d1) and (..., d2, d2) values where a
    # scalar sector has d == 1. Matrix @ matrix otherwise.
    if a.shape[-1] == 1 and b.shape[-1] == 1:
        return a * b
    if a.shape[-1] == 1:
        return a[..., 0, 0][..., None, None] * b
    if b.shape[-1] == 1:
        return a * b[..., 0, 0][..., None, None]
    return a @ b


def _wedge_dicts(n: int, p: int, q: int, ac: dict, bc: dict) -> dict:
    """Componentwise wedge over manifold indices 0..n-1; shape-agnostic."""
    out = {}
    for bigidx in combinations(range(n), p + q):
        acc = None
        for sub in combinations(bigidx, p):
            rest = tuple(x for x in bigidx if x not in sub)
            if sub not in ac or rest not in bc:
                continue
            term = _pmul(ac[sub], bc[rest])
            if _perm_sign(sub + rest) < 0:
                term = -term
            acc = term if acc is None else acc + term
        if acc is not None:
            out[bigidx] = acc
    return out


def _validate_idx(idx, degree: int, n: int):
    if len(idx) != degree:
        raise FormError(f"index {idx} has wrong length for degree {degree}")
    if any(not 0 <= m < n for m in idx):
        raise FormError(f"index {idx} out of range for dimension {n}")
    if any(idx[i] >= idx[i + 1] for i in range(len(idx) - 1)):
        raise FormError(f"index {idx} must be strictly increasing")


@dataclass
class Form:
    """Degree-p form: sparse dict of components over increasing multi-indices.

    Component arrays have shape grid.shape + (value_dim, value_dim); missing
    components are zero. value_dim is 1 for the scalar sector.
    """

    grid: Grid
    degree: int
    comps: dict = field(default_factory=dict)
    kind: str = "scalar"
    value_dim: int = 1

    def __post_init__(self):
        if not 0 <= self.degree <= self.grid.dim:
            raise TopDegreeError(f"degree {self.degree} outside 0..{self.grid.dim}")
        if self.kind not in ("scalar", "gauge", "frame"):
            raise FormError(f"unknown value kind {self.kind!r}")
        if self.kind == "scalar" and self.value_dim != 1:
            raise FormError("scalar sector requires value_dim 1")
        want = self.grid.shape + (self.value_dim, self.value_dim)
        clean = {}
        for idx, arr in self.comps.items():
            idx = tuple(int(m) for m in idx)
            _validate_idx(idx, self.degree, self.grid.dim)
            arr = np.asarray(arr, dtype=complex)
            if arr.shape != want:
                raise FormError(f"component {idx} has shape {arr.shape}, want {want}")
            clean[idx] = arr
        self.comps = clean

    @classmethod
    def zero(cls, grid: Grid, degree: int, kind: str = "scalar", value_dim: int = 1) -> "Form":
        return cls(grid, degree, {}, kind, value_dim)

    @classmethod
    def constant(cls, grid: Grid, value: complex) -> "Form":
        arr = np.full(grid.shape + (1, 1), complex(value))
        return cls(grid, 0, {(): arr})

    def component(self, idx) -> np.ndarray:
        idx = tuple(int(m) for m in idx)
        if idx in self.comps:
            return self.comps[idx]
        srt = tuple(sorted(idx))
        if len(set(idx)) != len(idx):
            raise FormError(f"repeated index in {idx}")
        arr = self.comps.get(srt)
        if arr is None:
            return np.zeros(self.grid.shape + (self.value_dim, self.value_dim), dtype=complex)
        return arr if _perm_sign(idx) > 0 else -arr

    def map_components(self, fn) -> "Form":
        return Form(self.grid, self.degree, {i: fn(a) for i, a in self.comps.items()},
                    self.kind, self.value_dim)

    def __add__(self, other):
        if isinstance(other, CutForm):
            return as_cut(self) + other
        if not isinstance(other, Form):
            return NotImplemented
        if (other.grid != self.grid or other.degree != self.degree):
            raise FormError("can only add forms of equal grid and degree")
        kind = _combine_kind(self.kind, other.kind)
        if self.value_dim != other.value_dim:
            raise FormError("value dimension mismatch in addition")
        out = dict(self.comps)
        for idx, arr in other.comps.items():
            out[idx] = out[idx] + arr if idx in out else arr
        return Form(self.grid, self.degree, out, kind, self.value_dim)

    def __sub__(self, other):
        return self + (other * (-1.0))

    def __mul__(self, scalar):
        s = complex(scalar)
        return self.map_components(lambda a: a * s)

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def trace(self) -> "Form":
        """Matrix trace of the values; result lives in the scalar sector."""
        out = {}
        for idx, arr in self.comps.items():
            out[idx] = np.trace(arr, axis1=-2, axis2=-1)[..., None, None]
        return Form(self.grid, self.degree, out, "scalar", 1)

    def max_abs(self) -> float:
        if not self.comps:
            return 0.0
        return max(float(np.max(np.abs(a))) for a in self.comps.values())

    def anti_hermitian_defect(self) -> float:
        if not self.comps:
            return 0.0
        return max(float(np.max(np.abs(a + np.conj(np.swapaxes(a, -1, -2)))))
                   for a in self.comps.values())


@dataclass
class CutForm:
    """Form with a jump across the wall plane of its grid.

    ``base`` holds the samples; its values on the wall plane itself are not
    authoritative. The one-sided limits live in ``wall_minus``/``wall_plus``
    as plane-shaped arrays per component; a component missing from a side
    dict falls back to the base slice (continuous there).
    """

    base: Form
    wall_minus: dict = field(default_factory=dict)
    wall_plus: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.base.grid.wall_axis is None:
            raise FormError("CutForm requires a grid with a wall")
        plane = self._plane_shape()
        for side in (self.wall_minus, self.wall_plus):
            for idx, arr in list(side.items()):
                idx = tuple(int(m) for m in idx)
                _validate_idx(idx, self.degree, self.grid.dim)
                arr = np.asarray(arr, dtype=complex)
                if arr.shape != plane:
                    raise FormError(f"wall override {idx} has shape {arr.shape}, want {plane}")
                side[idx] = arr

    def _plane_shape(self):
        g = self.base.grid
        w = g.wall_axis
        return g.shape[:w] + g.shape[w + 1:] + (self.base.value_dim, self.base.value_dim)

    @property
    def grid(self) -> Grid:
        return self.base.grid

    @property
    def degree(self) -> int:
        return self.base.degree

    @property
    def kind(self) -> str:
        return self.base.kind

    @property
    def value_dim(self) -> int:
        return self.base.value_dim

    def side_component(self, idx, side: str) -> np.ndarray:
        """One-sided wall-plane value of a component ('-' or '+')."""
        idx = tuple(int(m) for m in idx)
        over = self.wall_minus if side == "-" else self.wall_plus
        if idx in over:
            return over[idx]
        return self.base.component(idx)[self.grid.wall_slicer()]

    def side_components(self, side: str) -> dict:
        keys = set(self.base.comps)
        keys.update(self.wall_minus if side == "-" else self.wall_plus)
        return {idx: self.side_component(idx, side) for idx in keys}

    def jump_defect(self) -> float:
        """Max pointwise |plus - minus| over the wall plane."""
        keys = set(self.wall_minus) | set(self.wall_plus)
        if not keys:
            return 0.0
        return max(float(np.max(np.abs(self.side_component(i, "+") - self.side_component(i, "-"))))
                   for i in keys)

    def __add__(self, other):
        other = as_cut(other) if isinstance(other, Form) else other
        if not isinstance(other, CutForm):
            return NotImplemented
        base = self.base + other.base
        minus = {}
        plus = {}
        for idx in set(self.wall_minus) | set(other.wall_minus):
            minus[idx] = self.side_component(idx, "-") + other.side_component(idx, "-")
        for idx in set(self.wall_plus) | set(other.wall_plus):
            plus[idx] = self.side_component(idx, "+") + other.side_component(idx, "+")
        return CutForm(base, minus, plus)

    def __sub__(self, other):
        return self + (other * (-1.0))

    def __mul__(self, scalar):
        s = complex(scalar)
        return CutForm(self.base * s,
                       {i: a * s for i, a in self.wall_minus.items()},
                       {i: a * s for i, a in self.wall_plus.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def trace(self) -> "CutForm":
        tr = lambda a: np.trace(a, axis1=-2, axis2=-1)[..., None, None]
        return CutForm(self.base.trace(),
                       {i: tr(a) for i, a in self.wall_minus.items()},
                       {i: tr(a) for i, a in self.wall_plus.items()})


def as_cut(form: Form) -> CutForm:
    """View a smooth form as a cut form with equal one-sided limits."""
    return CutForm(form, {}, {})


def wedge(a, b):
    """Exterior product. Accepts Form/CutForm/MixedForm in either slot."""
    if isinstance(a, MixedForm) or isinstance(b, MixedForm):
        return _mixed_wedge(a, b)
    kind = _combine_kind(a.kind, b.kind)
    vd = max(a.value_dim, b.value_dim)
    if a.value_dim != b.value_dim and min(a.value_dim, b.value_dim) != 1:
        raise FormError("value dimension mismatch in wedge")
    if a.grid != b.grid:
        raise FormError("wedge requires a common grid")
    n = a.grid.dim
    p, q = a.degree, b.degree
    if p + q > n:
        raise TopDegreeError(f"wedge degree {p}+{q} exceeds dimension {n}")
    if isinstance(a, Form) and isinstance(b, Form):
        comps = _wedge_dicts(n, p, q, a.comps, b.comps)
        return Form(a.grid, p + q, comps, kind, vd)
    ca, cb = (as_cut(a) if isinstance(a, Form) else a), (as_cut(b) if isinstance(b, Form) else b)
    base = Form(a.grid, p + q, _wedge_dicts(n, p, q, ca.base.comps, cb.base.comps), kind, vd)
    minus = _wedge_dicts(n, p, q, ca.side_components("-"), cb.side_components("-"))
    plus = _wedge_dicts(n, p, q, ca.side_components("+"), cb.side_components("+"))
    return CutForm(base, minus, plus)


def _spectral_derivative(arr: np.ndarray, grid: Grid, axis: int) -> np.ndarray:
    k = grid.wavenumbers(axis)
    shape = [1] * arr.ndim
    shape[axis] = len(k)
    return np.fft.ifft(np.fft.fft(arr, axis=axis) * (1j * k).reshape(shape), axis=axis)


def ext_d(a):
    """Exterior derivative via spectral differentiation (Form / MixedForm only)."""
    if isinstance(a, MixedForm):
        parts = [ext_d(f) for p, f in a.parts.items() if p < a.grid.dim]
        return MixedForm.from_parts(a.grid, parts)
    if isinstance(a, CutForm):
        raise FormError("ext_d is undefined for cut forms; differentiate the smooth pieces")
    n = a.grid.dim
    if a.degree >= n:
        raise TopDegreeError("ext_d on a top-degree form")
    out = {}
    for idx, arr in a.comps.items():
        for m in range(n):
            if m in idx:
                continue
            pos = sum(1 for x in idx if x < m)
            newidx = tuple(sorted(idx + (m,)))
            term = _spectral_derivative(arr, a.grid, m)
            if pos % 2:
                term = -term
            out[newidx] = out[newidx] + term if newidx in out else term
    return Form(a.grid, a.degree + 1, out, a.kind, a.value_dim)


def _wall_axis_weights(grid: Grid, domain: str):
    """Trapezoid weights along the wall axis and the wall-plane extra weight.

    Returns (weights, wall_minus_weight, wall_plus_weight). The half-domains
    are split at the plane antipodal to the wall, which gets half weight from
    each side; the wall plane itself carries only its one-sided limits.
    """
    w = grid.wall_axis
    nn = grid.shape[w]
    h = grid.spacing(w)
    j0 = grid.wall_index
    ja = (j0 + nn // 2) % nn
    wt = np.zeros(nn)
    if domain == "full":
        wt[:] = h
        wt[j0] = 0.0
        return wt, 0.5 * h, 0.5 * h
    ell = (np.arange(nn) - j0) % nn
    if domain == "upper":
        wt[(ell >= 1) & (ell < nn // 2)] = h
        wt[ja] = 0.5 * h
        return wt, 0.0, 0.5 * h
    if domain == "lower":
        wt[ell > nn // 2] = h
        wt[ja] = 0.5 * h
        return wt, 0.5 * h, 0.0
    raise FormError(f"unknown domain {domain!r}")


def integrate(a, domain: str = "full") -> complex:
    """Integrate a top-degree form over the requested domain.

    'full' integrates over the whole grid ('torus minus wall' for a CutForm).
    'upper'/'lower' need a wall. 'wall' restricts first (mean of the two
    sides for a CutForm) and integrates the cross-section.
    """
    grid = a.grid
    if domain == "wall":
        if isinstance(a, CutForm):
            half = restrict_to_wall(a, "-") + restrict_to_wall(a, "+")
            return integrate(half * 0.5, "full")
        return integrate(restrict_to_wall(a), "full")
    if a.degree != grid.dim:
        raise TopDegreeError(f"integrating a degree-{a.degree} form over a {grid.dim}-dim domain")
    top = tuple(range(grid.dim))
    if grid.wall_axis is None:
        if domain != "full":
            raise FormError("half-domain integration requires a wall")
        if isinstance(a, CutForm):
            raise FormError("cut form on a grid without a wall")
        arr = a.comps.get(top)
        if arr is None:
            return 0j
        vals = np.trace(arr, axis1=-2, axis2=-1) if a.value_dim > 1 else arr[..., 0, 0]
        return complex(grid.orientation * grid.cell_volume * vals.sum())
    wax = grid.wall_axis
    wt, wm, wp = _wall_axis_weights(grid, domain)
    cell_t = grid.cell_volume / grid.spacing(wax)

    def _scalarize(arr):
        return np.trace(arr, axis1=-2, axis2=-1) if arr.shape[-1] > 1 else arr[..., 0, 0]

    cut = isinstance(a, CutForm)
    arr = (a.base if cut else a).comps.get(top)
    total = 0j
    if arr is not None:
        vals = _scalarize(arr)
        shape = [1] * vals.ndim
        shape[wax] = grid.shape[wax]
        total += (vals * wt.reshape(shape)).sum()
    if cut:
        pm = _scalarize(a.side_component(top, "-"))
        pp = _scalarize(a.side_component(top, "+"))
        total += wm * pm.sum() + wp * pp.sum()
    else:
        if arr is not None:
            plane = _scalarize(arr[grid.wall_slicer()])
            total += (wm + wp) * plane.sum()
    return complex(grid.orientation * cell_t * total)


def restrict_to_wall(a, side: str = "-") -> Form:
    """Pull back to the wall plane: drop components with a wall-axis leg,
    evaluate the rest on the plane (one-sided for a CutForm), and renumber
    the remaining axes onto the cross-section grid."""
    grid = a.grid
    if grid.wall_axis is None:
        raise FormError("grid has no wall")
    w = grid.wall_axis
    sigma = grid.wall_grid()
    if a.degree > sigma.dim:
        raise TopDegreeError("restriction exceeds cross-section dimension")
    out = {}
    keys = set(a.base.comps) | set(a.wall_minus) | set(a.wall_plus) if isinstance(a, CutForm) \
        else set(a.comps)
    for idx in keys:
        if w in idx:
            continue
        plane = a.side_component(idx, side) if isinstance(a, CutForm) \
            else a.comps[idx][grid.wall_slicer()]
        newidx = tuple(m if m < w else m - 1 for m in idx)
        out[newidx] = np.array(plane)
    return Form(sigma, a.degree, out, a.kind, a.value_dim)


def extend_from_wall(a: Form, grid: Grid) -> Form:
    """Extend a cross-section form to the manifold, constant along the wall
    axis, with components renumbered back to manifold axes."""
    if grid.wall_axis is None:
        raise FormError("grid has no wall")
    w = grid.wall_axis
    if a.grid != grid.wall_grid():
        raise FormError("form does not live on this grid's cross-section")
    out = {}
    for idx, arr in a.comps.items():
        newidx = tuple(m if m < w else m + 1 for m in idx)
        ext = np.broadcast_to(np.expand_dims(arr, axis=w),
                              grid.shape + (a.value_dim, a.value_dim))
        out[newidx] = np.array(ext)
    return Form(grid, a.degree, out, a.kind, a.value_dim)


def cut_from_profile(a: Form, profile: np.ndarray, minus, plus) -> CutForm:
    """Multiply a smooth form by a wall-axis profile with a jump.

    ``profile`` holds the off-wall samples along the wall axis (its wall-plane
    entry is ignored); ``minus``/``plus`` are the one-sided limits at the wall.
    """
    grid = a.grid
    if grid.wall_axis is None:
        raise FormError("grid has no wall")
    w = grid.wall_axis
    profile = np.asarray(profile, dtype=complex)
    if profile.shape != (grid.shape[w],):
        raise FormError("profile must be sampled along the wall axis")
    shape = [1] * (grid.dim + 2)
    shape[w] = grid.shape[w]
    prof = profile.reshape(shape)
    base = a.map_components(lambda arr: arr * prof)
    sl = grid.wall_slicer()
    minus_d = {idx: complex(minus) * arr[sl] for idx, arr in a.comps.items()}
    plus_d = {idx: complex(plus) * arr[sl] for idx, arr in a.comps.items()}
    return CutForm(base, minus_d, plus_d)


class MixedForm:
    """Formal sum of forms of distinct degrees on one grid."""

    def __init__(self, grid: Grid, parts: dict | None = None):
        self.grid = grid
        self.parts = {}
        for p, f in (parts or {}).items():
            if f.grid != grid:
                raise FormError("mixed-form part on a different grid")
            if f.degree != p:
                raise FormError("mixed-form part filed under wrong degree")
            self.parts[int(p)] = f

    @classmethod
    def from_parts(cls, grid: Grid, forms) -> "MixedForm":
        out = cls(grid)
        for f in forms:
            out = out + f
        return out

    def degree_part(self, p: int):
        if not 0 <= p <= self.grid.dim:
            raise TopDegreeError(f"degree {p} outside 0..{self.grid.dim}")
        return self.parts.get(p) or Form.zero(self.grid, p)

    @property
    def degrees(self):
        return sorted(self.parts)

    def truncate(self, max_degree: int) -> "MixedForm":
        return MixedForm(self.grid, {p: f for p, f in self.parts.items() if p <= max_degree})

    def __add__(self, other):
        if isinstance(other, (Form, CutForm)):
            other = MixedForm(other.grid, {other.degree: other})
        if not isinstance(other, MixedForm):
            return NotImplemented
        parts = dict(self.parts)
        for p, f in other.parts.items():
            parts[p] = parts[p] + f if p in parts else f
        return MixedForm(self.grid, parts)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (other * (-1.0))

    def __mul__(self, scalar):
        return MixedForm(self.grid, {p: f * scalar for p, f in self.parts.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * (-1.0)

    def trace(self) -> "MixedForm":
        return MixedForm(self.grid, {p: f.trace() for p, f in self.parts.items()})

    def max_abs(self) -> float:
        vals = [0.0]
        for f in self.parts.values():
            base = f.base if isinstance(f, CutForm) else f
            vals.append(base.max_abs())
        return max(vals)


def _mixed_wedge(a, b) -> MixedForm:
    if isinstance(a, (Form, CutForm)):
        a = MixedForm(a.grid, {a.degree: a})
    if isinstance(b, (Form, CutForm)):
        b = MixedForm(b.grid, {b.degree: b})
    n = a.grid.dim
    out = MixedForm(a.grid)
    for p, fa in a.parts.items():
        for q, fb in b.parts.items():
            if p + q > n:
                continue
            out = out + wedge(fa, fb)
    return out


def form_to_payload(a: Form) -> dict:
    """JSON-ready description of a smooth form."""
    comps = {}
    for idx, arr in sorted(a.comps.items()):
        key = ",".join(str(m) for m in idx)
        comps[key] = {"re": np.real(arr).tolist(), "im": np.imag(arr).tolist()}
    return {
        "degree": a.degree,
        "kind": a.kind,
        "value_dim": a.value_dim,
        "shape": list(a.grid.shape),
        "lengths": list(a.grid.lengths),
        "components": comps,
    }


def form_from_payload(payload: dict, grid: Grid) -> Form:
    if list(grid.shape) != list(payload["shape"]):
        raise FormError("payload shape does not match grid")
    comps = {}
    for key, val in payload["components"].items():
        idx = tuple(int(t) for t in key.split(",")) if key else ()
        comps[idx] = np.asarray(val["re"], dtype=float) + 1j * np.asarray(val["im"], dtype=float)
    return Form(grid, int(payload["degree"]), comps, payload["kind"], int(payload["value_dim"]))
