"""Full-precision ground-truth evaluators and basis conversions.

These are the oracles every texture path is measured against: Bernstein
and de Casteljau evaluation, the reduced-lerp difference-term evaluation,
rational (homogeneous) curves, tensor-product surfaces, de Boor evaluation
of B-splines, knot-insertion conversion to piecewise Bezier form, and
power <-> Bernstein basis conversion.

Curve evaluators broadcast over the parameter: a scalar t yields one
(channels,) point, an (n,) array yields (n, channels).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np

from .core import (
    ChannelMismatchError,
    ControlPolygon,
    DomainError,
    HomogeneousDivideError,
    UnsupportedDegreeError,
    lerp,
)


@lru_cache(maxsize=None)
def pascal_row(n: int) -> Tuple[int, ...]:
    """Row n of Pascal's triangle as exact integers."""
    row = [1]
    for _ in range(n):
        row = [1] + [a + b for a, b in zip(row, row[1:])] + [1]
    return tuple(row)


def eval_bernstein(poly: ControlPolygon, t):
    """Evaluate sum_i C(d,i) (1-t)^(d-i) t^i b_i."""
    d = poly.degree
    row = pascal_row(d)
    tt = np.asarray(t, dtype=float)[..., None]
    s = 1.0 - tt
    acc = row[0] * s**d * poly.points[0]
    for i in range(1, d + 1):
        acc = acc + row[i] * s ** (d - i) * tt**i * poly.points[i]
    return acc


def eval_decasteljau(poly: ControlPolygon, t):
    """Evaluate by repeated pairwise linear interpolation of the polygon."""
    tt = np.asarray(t, dtype=float)[..., None, None]
    beta = np.broadcast_to(poly.points, tt.shape[:-2] + poly.points.shape).astype(float)
    for _ in range(poly.degree):
        beta = beta[..., :-1, :] * (1.0 - tt) + beta[..., 1:, :] * tt
    return beta[..., 0, :]


@dataclass(frozen=True)
class SeilerTerms:
    """Difference terms d_1 .. d_(degree-1) for the reduced-lerp evaluation.

    For cubics the two auxiliary points s1 = b0 + d1 and s2 = b3 + d2 are
    also provided, since they are what the 2x2 texture layout stores.
    """

    degree: int
    diffs: Tuple[np.ndarray, ...]
    s1: Optional[np.ndarray] = None
    s2: Optional[np.ndarray] = None

    def diff(self, i: int) -> np.ndarray:
        """The term d_i, 1-based."""
        return self.diffs[i - 1]


def seiler_terms(poly: ControlPolygon) -> SeilerTerms:
    """Compute the difference terms for degrees 2 through 5.

    d_1 and d_(d-1) have a closed form at every degree. The inner terms
    d_2 / d_(d-2) have known closed forms only for degrees 4 and 5 (for a
    cubic, d_2 is already covered by the d_(d-1) rule). All four forms were
    checked against the Bernstein expansion before being trusted here; the
    degree-4/5 forms are exercised by property tests as well.
    """
    d = poly.degree
    if not 2 <= d <= 5:
        raise UnsupportedDegreeError(
            f"difference terms have closed forms for degrees 2..5, got degree {d}"
        )
    b = poly.points
    d1 = d * (b[1] - b[0]) - (b[d] - b[0])
    dd1 = d * (b[d - 1] - b[d]) - (b[0] - b[d])
    if d == 2:
        diffs = (d1,)
    elif d == 3:
        diffs = (d1, dd1)
    else:
        c2 = pascal_row(d)[2]
        c2m = pascal_row(d - 2)[2]
        d2 = (
            c2 * (b[2] - b[1])
            - c2m * (b[1] - b[0])
            - (d - 3) * (b[d - 1] - b[d])
            - 3 * (b[d - 1] - b[1])
        )
        dd2 = (
            c2 * (b[d - 2] - b[d - 1])
            - c2m * (b[d - 1] - b[d])
            - (d - 3) * (b[1] - b[0])
            - 3 * (b[1] - b[d - 1])
        )
        if d == 4:
            diffs = (d1, d2, dd1)
        else:
            diffs = (d1, d2, dd2, dd1)
    s1 = b[0] + d1 if d == 3 else None
    s2 = b[3] + dd1 if d == 3 else None
    return SeilerTerms(degree=d, diffs=diffs, s1=s1, s2=s2)


def eval_seiler(poly: ControlPolygon, t):
    """Reduced-lerp evaluation C(t) = L(b0, bd, t) + (1-t) t D_1(t).

    The recursion D_i is zero when 2i = d+1, equals d_i when 2i = d, and is
    otherwise L(d_i, d_(d-i), t) + (1-t) t D_(i+1)(t). A degree-d curve
    costs d lerps this way.
    """
    terms = seiler_terms(poly)
    d = poly.degree
    tt = np.asarray(t, dtype=float)[..., None]
    st = (1.0 - tt) * tt

    def rec(i: int):
        if 2 * i == d + 1:
            return 0.0
        if 2 * i == d:
            return terms.diff(i)
        return lerp(terms.diff(i), terms.diff(d - i), tt) + st * rec(i + 1)

    return lerp(poly.points[0], poly.points[d], tt) + st * rec(1)


def eval_rational(num: ControlPolygon, weights, t):
    """Rational curve via the homogeneous trick.

    Evaluates the curve with control points (w_i b_i, w_i) in the Bernstein
    basis, then divides the point part by the weight part.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.shape[0] != num.points.shape[0]:
        raise ChannelMismatchError("one weight per control point required")
    if np.any(w <= 0.0):
        raise DomainError("rational weights must all be positive")
    hom = ControlPolygon(np.concatenate([num.points * w[:, None], w[:, None]], axis=1))
    val = eval_bernstein(hom, t)
    den = val[..., -1:]
    if np.any(np.abs(den) <= 1e-12):
        raise HomogeneousDivideError("homogeneous weight vanished at evaluation")
    return val[..., :-1] / den


def eval_tensor_surface(grid_points, u, v):
    """Tensor-product surface point: rows evaluated at u, the resulting
    column polygon evaluated at v.

    `grid_points` is (rows, cols) of scalars or (rows, cols, channels).
    """
    try:
        g = np.asarray(grid_points, dtype=float)
    except ValueError as exc:
        raise DomainError("control grid is ragged") from exc
    if g.dtype == object:
        raise DomainError("control grid is ragged")
    if g.ndim == 2:
        g = g[..., None]
    if g.ndim != 3:
        raise DomainError("control grid must be 2-D (scalars) or 3-D (vectors)")
    rows = [eval_bernstein(ControlPolygon(g[i]), u) for i in range(g.shape[0])]
    stacked = np.stack(rows, axis=0)
    m = g.shape[0] - 1
    row = pascal_row(m)
    vv = np.asarray(v, dtype=float)[..., None]
    s = 1.0 - vv
    acc = row[0] * s**m * stacked[0]
    for i in range(1, m + 1):
        acc = acc + row[i] * s ** (m - i) * vv**i * stacked[i]
    return acc


@dataclass(frozen=True)
class BSplineCurve:
    """B-spline with a non-decreasing knot vector.

    knot count = control count + degree + 1; the valid parameter domain is
    [knots[degree], knots[control_count]].
    """

    control_points: np.ndarray
    knots: np.ndarray
    degree: int

    def __post_init__(self):
        pts = np.asarray(self.control_points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        knots = np.asarray(self.knots, dtype=float)
        if self.degree < 1:
            raise UnsupportedDegreeError("spline degree must be >= 1")
        if knots.ndim != 1 or knots.shape[0] != pts.shape[0] + self.degree + 1:
            raise DomainError("knot count must equal control count + degree + 1")
        if np.any(np.diff(knots) < 0):
            raise DomainError("knots must be non-decreasing")
        pts = np.ascontiguousarray(pts)
        pts.setflags(write=False)
        knots = np.ascontiguousarray(knots)
        knots.setflags(write=False)
        object.__setattr__(self, "control_points", pts)
        object.__setattr__(self, "knots", knots)

    @property
    def domain(self) -> Tuple[float, float]:
        return (float(self.knots[self.degree]), float(self.knots[self.control_points.shape[0]]))


def _find_span(knots: np.ndarray, degree: int, n_ctrl: int, t: float) -> int:
    """Knot span index k with knots[k] <= t < knots[k+1].

    The right domain end maps into the last nonzero span (NURBS Book A2.1
    convention).
    """
    if t >= knots[n_ctrl]:
        k = n_ctrl - 1
        while knots[k] == knots[k + 1]:
            k -= 1
        return k
    lo, hi = degree, n_ctrl
    while True:
        k = (lo + hi) // 2
        if t < knots[k]:
            hi = k
        elif t >= knots[k + 1]:
            lo = k + 1
        else:
            return k


def eval_deboor(spline: BSplineCurve, t: float) -> np.ndarray:
    """Standard de Boor recursion at parameter t."""
    a, b = spline.domain
    if not a <= t <= b:
        raise DomainError(f"t={t} outside spline domain [{a}, {b}]")
    p = spline.degree
    U = spline.knots
    n_ctrl = spline.control_points.shape[0]
    k = _find_span(U, p, n_ctrl, t)
    d = [spline.control_points[j + k - p].astype(float) for j in range(p + 1)]
    for r in range(1, p + 1):
        for j in range(p, r - 1, -1):
            i = j + k - p
            alpha = (t - U[i]) / (U[i + p - r + 1] - U[i])
            d[j] = (1.0 - alpha) * d[j - 1] + alpha * d[j]
    return d[p]


def insert_knot(spline: BSplineCurve, u: float) -> BSplineCurve:
    """Insert one knot at u (Boehm's construction), leaving the curve unchanged."""
    a, b = spline.domain
    if not a <= u <= b:
        raise DomainError(f"knot {u} outside spline domain [{a}, {b}]")
    p = spline.degree
    U = spline.knots
    P = spline.control_points
    n_ctrl = P.shape[0]
    k = _find_span(U, p, n_ctrl, u)
    Q = np.empty((n_ctrl + 1, P.shape[1]), dtype=float)
    Q[: k - p + 1] = P[: k - p + 1]
    for i in range(k - p + 1, k + 1):
        alpha = (u - U[i]) / (U[i + p] - U[i])
        Q[i] = (1.0 - alpha) * P[i - 1] + alpha * P[i]
    Q[k + 1 :] = P[k:]
    new_knots = np.insert(U, k + 1, u)
    return BSplineCurve(Q, new_knots, p)


def boehm_to_bezier(spline: BSplineCurve) -> List[Tuple[ControlPolygon, Tuple[float, float]]]:
    """Convert a B-spline to its piecewise Bezier segments by knot insertion.

    Every distinct knot value inside the closed domain is raised to
    multiplicity = degree (one insertion at a time), after which each
    nonzero span [U_k, U_k+1] reads its Bezier points directly off the
    refined control polygon. Returns (segment, (span start, span end))
    pairs in parameter order; adjacent segments share their join point.
    """
    a, b = spline.domain
    if not a < b:
        raise DomainError("spline domain is empty")
    p = spline.degree
    work = spline
    for val in np.unique(spline.knots):
        if not a <= val <= b:
            continue
        while int(np.count_nonzero(work.knots == val)) < p:
            work = insert_knot(work, float(val))
    U = work.knots
    P = work.control_points
    out: List[Tuple[ControlPolygon, Tuple[float, float]]] = []
    for k in range(p, P.shape[0]):
        if U[k] < U[k + 1] and U[k] >= a and U[k + 1] <= b:
            out.append((ControlPolygon(P[k - p : k + 1]), (float(U[k]), float(U[k + 1]))))
    return out


def eval_bezier_segments(segments, t: float) -> np.ndarray:
    """Evaluate a piecewise Bezier list (as returned by boehm_to_bezier)."""
    if not segments:
        raise DomainError("no segments to evaluate")
    lo = segments[0][1][0]
    hi = segments[-1][1][1]
    if not lo <= t <= hi:
        raise DomainError(f"t={t} outside piecewise domain [{lo}, {hi}]")
    for poly, (s0, s1) in segments:
        if t < s1 or s1 == hi:
            return eval_bernstein(poly, (t - s0) / (s1 - s0))
    raise DomainError("unreachable span")  # pragma: no cover


def power_to_bernstein(coeffs) -> ControlPolygon:
    """Convert power-basis coefficients (ascending powers of t) to control
    points: b_j = sum_{i<=j} [C(j,i)/C(d,i)] a_i."""
    a = np.asarray(coeffs, dtype=float)
    if a.ndim == 1:
        a = a[:, None]
    if a.shape[0] == 1:
        # a bare constant becomes a degree-1 curve (polygons need two points)
        a = np.concatenate([a, np.zeros_like(a)], axis=0)
    d = a.shape[0] - 1
    if d > 8:
        raise UnsupportedDegreeError("basis conversion is supported up to degree 8")
    row_d = pascal_row(d)
    b = np.empty_like(a)
    for j in range(d + 1):
        row_j = pascal_row(j)
        b[j] = sum(row_j[i] / row_d[i] * a[i] for i in range(j + 1))
    return ControlPolygon(b)


def bernstein_to_power(poly: ControlPolygon) -> np.ndarray:
    """Inverse of power_to_bernstein: a_k = C(d,k) sum_{i<=k} (-1)^(k-i) C(k,i) b_i."""
    d = poly.degree
    if d > 8:
        raise UnsupportedDegreeError("basis conversion is supported up to degree 8")
    b = poly.points
    row_d = pascal_row(d)
    a = np.empty_like(b)
    for k in range(d + 1):
        row_k = pascal_row(k)
        acc = np.zeros(b.shape[1])
        for i in range(k + 1):
            acc = acc + (-1) ** (k - i) * row_k[i] * b[i]
        a[k] = row_d[k] * acc
    return a


def elevate_degree(poly: ControlPolygon, target_degree: int) -> ControlPolygon:
    """Degree-elevate a curve without changing its trace."""
    if target_degree < poly.degree:
        raise UnsupportedDegreeError("cannot lower the degree by elevation")
    pts = poly.points
    for d in range(poly.degree, target_degree):
        new = np.empty((d + 2, pts.shape[1]), dtype=float)
        new[0] = pts[0]
        new[d + 1] = pts[d]
        for i in range(1, d + 1):
            w = i / (d + 1)
            new[i] = w * pts[i - 1] + (1.0 - w) * pts[i]
        pts = new
    return ControlPolygon(pts)
