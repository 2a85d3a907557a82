"""Evaluate encoded curves through the emulated sampler.

Each evaluator applies its layout's coordinate mapping, performs the
lookup(s), and inverse-transforms the result back into curve space.
Parameters broadcast like the reference evaluators: scalar in, one point
out; (n,) array in, (n, channels) out.
"""

from __future__ import annotations

import numpy as np

from .core import (
    DomainError,
    EncodedCurve,
    HomogeneousDivideError,
    Layout,
    LayoutError,
    SamplerConfig,
    lerp,
    remap_unit_to_texel_span,
)
from .sampler import sample_bilinear, sample_trilinear


def _require_layout(curve: EncodedCurve, *layouts: Layout):
    if curve.layout not in layouts:
        names = ", ".join(l.value for l in layouts)
        raise LayoutError(f"expected layout in ({names}), got {curve.layout.value}")


def _unit_param(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > 1.0) or not np.all(np.isfinite(t)):
        raise DomainError("parameter outside [0, 1]")
    return t


def _zigzag_coords(curve: EncodedCurve, global_t):
    """Column/row coordinates for a zig-zag grid.

    The v direction ascends with local t on even segments and descends on
    odd ones (that orientation is a convention of this implementation, not
    something grids from other tools can be assumed to share). Integer
    global_t resolves to the right-hand segment at local t = 0, except the
    final parameter which clamps into the last segment.
    """
    n = curve.segment_count
    gt = np.asarray(global_t, dtype=float)
    if np.any(gt < 0.0) or np.any(gt > n) or not np.all(np.isfinite(gt)):
        raise DomainError(f"zig-zag parameter outside [0, {n}]")
    k = np.minimum(np.floor(gt), n - 1).astype(np.int64)
    lt = gt - k
    u = (k + 0.5 + lt) / (n + 1)
    even = k % 2 == 0
    v = np.where(even, remap_unit_to_texel_span(lt, 2), remap_unit_to_texel_span(1.0 - lt, 2))
    return u, v


def _seiler_coords(layout: Layout, t):
    """(t, st[, st]) mapping, with the pixel-center remap applied after the
    s*t product. The second coordinate can only reach [0.25, 0.375] because
    s*t never exceeds 0.25; that window is asserted on every evaluation."""
    t = _unit_param(t)
    m = (1.0 - t) * t
    rt = remap_unit_to_texel_span(t, 2)
    rm = remap_unit_to_texel_span(m, 2)
    assert np.all(m <= 0.25) and np.all(rm >= 0.25) and np.all(rm <= 0.375)
    if layout is Layout.SEILER_3D:
        return rt, rm, rm
    return rt, rm


def parameter_coords(curve: EncodedCurve, t):
    """Normalized sample coordinates the texture path uses for parameter t.

    Rational curves resolve through their inner layout. Exposed so error
    analysis can probe the exact cells a sweep will touch.
    """
    layout = curve.layout
    if layout is Layout.RATIONAL_HOMOGENEOUS:
        layout = curve.inner_layout
    if layout is Layout.DC_QUAD_2X2:
        r = remap_unit_to_texel_span(_unit_param(t), 2)
        return r, r
    if layout is Layout.DC_CUBIC_2X2X2:
        r = remap_unit_to_texel_span(_unit_param(t), 2)
        return r, r, r
    if layout in (Layout.SEILER_2D, Layout.SEILER_3D):
        return _seiler_coords(layout, t)
    if layout is Layout.DC_ZIGZAG:
        return _zigzag_coords(curve, t)
    raise LayoutError(f"{layout.value} is not a 1-parameter curve layout")


def eval_dc(curve: EncodedCurve, t, cfg: SamplerConfig):
    """Evaluate a de Casteljau packing: one read at (t, t) or (t, t, t)."""
    _require_layout(curve, Layout.DC_QUAD_2X2, Layout.DC_CUBIC_2X2X2)
    r = remap_unit_to_texel_span(_unit_param(t), 2)
    if curve.layout is Layout.DC_QUAD_2X2:
        raw, _ = sample_bilinear(curve.grid, r, r, cfg)
    else:
        raw, _ = sample_trilinear(curve.grid, r, r, r, cfg)
    return curve.transform.invert(raw)


def eval_dc_zigzag(curve: EncodedCurve, global_t, cfg: SamplerConfig):
    """Evaluate a zig-zag packing at global parameter in [0, segment_count]."""
    _require_layout(curve, Layout.DC_ZIGZAG)
    u, v = _zigzag_coords(curve, global_t)
    raw, _ = sample_bilinear(curve.grid, u, v, cfg)
    return curve.transform.invert(raw)


def eval_seiler_tex(curve: EncodedCurve, t, cfg: SamplerConfig):
    """Evaluate a difference-term packing at (t, st) or (t, st, st)."""
    _require_layout(curve, Layout.SEILER_2D, Layout.SEILER_3D)
    coords = _seiler_coords(curve.layout, t)
    if curve.layout is Layout.SEILER_2D:
        raw, _ = sample_bilinear(curve.grid, coords[0], coords[1], cfg)
    else:
        raw, _ = sample_trilinear(curve.grid, coords[0], coords[1], coords[2], cfg)
    return curve.transform.invert(raw)


def eval_dc_cubic_hybrid(curve: EncodedCurve, t, cfg: SamplerConfig):
    """Split-precision cubic: two bilinear reads, final lerp at exact t.

    The two quadratic slices go through the (possibly quantized) sampler,
    but the last interpolation level runs at full precision with the
    unquantized parameter, trading one extra read for accuracy.
    """
    _require_layout(curve, Layout.DC_CUBIC_2X2X2)
    t = _unit_param(t)
    r = remap_unit_to_texel_span(t, 2)
    near, _ = sample_bilinear(curve.grid.slice2d(0), r, r, cfg)
    far, _ = sample_bilinear(curve.grid.slice2d(1), r, r, cfg)
    tc = t[..., None] if t.ndim else t
    raw = lerp(near, far, tc)
    return curve.transform.invert(raw)


def eval_bilinear_patch(curve: EncodedCurve, u, v, cfg: SamplerConfig):
    """Evaluate a bilinear patch: one read at (remapped u, remapped v)."""
    _require_layout(curve, Layout.BILINEAR_PATCH)
    ru = remap_unit_to_texel_span(_unit_param(u), 2)
    rv = remap_unit_to_texel_span(_unit_param(v), 2)
    raw, _ = sample_bilinear(curve.grid, ru, rv, cfg)
    return curve.transform.invert(raw)


def eval_bicubic_rgba(curve: EncodedCurve, u, v, cfg: SamplerConfig):
    """Evaluate a bicubic packing: one trilinear read at (u, u, u) yields
    the four isoline control points in the channels; the cross-direction
    cubic in v runs at full precision."""
    _require_layout(curve, Layout.BICUBIC_RGBA)
    r = remap_unit_to_texel_span(_unit_param(u), 2)
    raw, _ = sample_trilinear(curve.grid, r, r, r, cfg)
    iso = curve.transform.invert(raw)
    vv = _unit_param(v)
    s = 1.0 - vv
    out = (
        s**3 * iso[..., 0]
        + 3.0 * s**2 * vv * iso[..., 1]
        + 3.0 * s * vv**2 * iso[..., 2]
        + vv**3 * iso[..., 3]
    )
    return out[..., None]


def eval_rational_tex(curve: EncodedCurve, t, cfg: SamplerConfig):
    """Evaluate a homogeneous packing, then divide point by weight.

    The inverse transform runs before the divide (it is what undoes the
    encode-time map exactly); the weight channel is guaranteed identity by
    the encoder, so the decoded weight is the true weight polynomial value.
    """
    _require_layout(curve, Layout.RATIONAL_HOMOGENEOUS)
    if curve.transform.scale[-1] != 1.0 or curve.transform.offset[-1] != 0.0:
        raise LayoutError("rational curves must keep an identity transform on the weight channel")
    inner = curve.inner_layout
    if inner is Layout.SEILER_2D:
        coords = _seiler_coords(inner, t)
        raw, _ = sample_bilinear(curve.grid, coords[0], coords[1], cfg)
    elif inner is Layout.DC_QUAD_2X2:
        r = remap_unit_to_texel_span(_unit_param(t), 2)
        raw, _ = sample_bilinear(curve.grid, r, r, cfg)
    else:
        r = remap_unit_to_texel_span(_unit_param(t), 2)
        raw, _ = sample_trilinear(curve.grid, r, r, r, cfg)
    hom = curve.transform.invert(raw)
    den = hom[..., -1:]
    if np.any(np.abs(den) <= 1e-9):
        raise HomogeneousDivideError("decoded weight too close to zero to divide by")
    return hom[..., :-1] / den
