"""Bit-exact software emulation of GPU fixed-function linear filtering.

Coordinate model: normalized coordinates convert to texel space as
coord * extent - 0.5, placing texel values at cell centers. Neighbor
indices clamp to the edge; the fractional position along each axis is
quantized to subtexel fixed point before the blend, which runs in float64.

All entry points accept scalar coordinates or equal-length coordinate
arrays; array calls return stacked results.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import (
    DomainError,
    LayoutError,
    SamplerConfig,
    TexelFormat,
    TexelGrid,
    lerp,
)


def quantize_texel(v: float, fmt: TexelFormat) -> float:
    """Quantize one value to the storage format.

    unorm formats clamp to [0, 1] and round half away from zero onto the
    k/levels lattice; the tie decision is made in exact rational arithmetic
    so it never depends on a double rounding of v*levels. float32 rounds to
    the nearest 32-bit float.
    """
    if fmt is TexelFormat.FLOAT32:
        return float(np.float32(v))
    levels = fmt.levels
    v = min(max(float(v), 0.0), 1.0)
    scaled = Fraction(v) * levels
    k = scaled.numerator // scaled.denominator
    if scaled - k >= Fraction(1, 2):
        k += 1
    return k / levels


def quantize_fraction(f, cfg: SamplerConfig):
    """Quantize a fractional texel position to fixed point.

    Scaling by 2^bits is exact in binary floating point, so the floor and
    the half-way comparison below are exact decisions. Under nearest
    rounding the result may reach 1.0, which is a legal weight.
    """
    if cfg.subtexel_bits == 0:
        return f
    step = float(1 << cfg.subtexel_bits)
    scaled = np.asarray(f, dtype=float) * step
    base = np.floor(scaled)
    if cfg.subtexel_rounding == "nearest":
        base = base + (scaled - base >= 0.5)
    return base / step


@dataclass(frozen=True)
class SampleTrace:
    """Which texels a lookup touched and with what quantized weights.

    `texel_indices` holds (x, y, z) per corner (4 bilinear, 8 trilinear);
    `fractions` holds the post-quantization fraction per axis, so the
    weight pair along each axis is (1 - f, f) by construction.
    """

    texel_indices: tuple
    fractions: tuple
    raw_value: np.ndarray

    @property
    def weights(self) -> tuple:
        return tuple((1.0 - np.asarray(f, dtype=float), np.asarray(f, dtype=float))
                     for f in self.fractions)


def texel_cell(coord, extent: int):
    """Unclamped base index and fractional position along one axis."""
    pos = np.asarray(coord, dtype=float) * extent - 0.5
    base = np.floor(pos)
    return base.astype(np.int64), pos - base


def _clamp_pair(base, extent: int):
    i0 = np.clip(base, 0, extent - 1)
    i1 = np.clip(base + 1, 0, extent - 1)
    return i0, i1


def _col(f):
    """Shape a fraction for broadcasting against (..., channels) texels."""
    f = np.asarray(f, dtype=float)
    return f[..., None] if f.ndim else f


def _require_finite(x, name: str):
    if not np.all(np.isfinite(np.asarray(x, dtype=float))):
        raise DomainError(f"{name} must be finite")


def sample_bilinear(grid: TexelGrid, u, v, cfg: SamplerConfig):
    """One emulated bilinear fetch at normalized (u, v) on a 2-D grid.

    Two horizontal lerps blend the top and bottom texel pairs at the
    quantized x fraction, then one vertical lerp blends those at the
    quantized y fraction.
    """
    if grid.depth != 1:
        raise LayoutError("bilinear sampling requires a 2-D grid")
    _require_finite(u, "u")
    _require_finite(v, "v")
    bx, fx = texel_cell(u, grid.width)
    by, fy = texel_cell(v, grid.height)
    fxq = quantize_fraction(fx, cfg)
    fyq = quantize_fraction(fy, cfg)
    x0, x1 = _clamp_pair(bx, grid.width)
    y0, y1 = _clamp_pair(by, grid.height)
    plane = grid.data[0]
    fxc, fyc = _col(fxq), _col(fyq)
    top = lerp(plane[y0, x0], plane[y0, x1], fxc)
    bottom = lerp(plane[y1, x0], plane[y1, x1], fxc)
    value = lerp(top, bottom, fyc)
    z = np.zeros_like(x0)
    trace = SampleTrace(
        texel_indices=((x0, y0, z), (x1, y0, z), (x0, y1, z), (x1, y1, z)),
        fractions=(fxq, fyq),
        raw_value=value,
    )
    return value, trace


def sample_trilinear(grid: TexelGrid, u, v, w, cfg: SamplerConfig):
    """One emulated trilinear fetch on a 3-D grid.

    Built literally as lerp(bilinear(near slice), bilinear(far slice), fw)
    with the quantized depth fraction, so the decomposition identity holds
    exactly.
    """
    if grid.depth < 2:
        raise LayoutError("trilinear sampling requires a 3-D grid")
    _require_finite(u, "u")
    _require_finite(v, "v")
    _require_finite(w, "w")
    bx, fx = texel_cell(u, grid.width)
    by, fy = texel_cell(v, grid.height)
    bz, fz = texel_cell(w, grid.depth)
    fxq = quantize_fraction(fx, cfg)
    fyq = quantize_fraction(fy, cfg)
    fzq = quantize_fraction(fz, cfg)
    x0, x1 = _clamp_pair(bx, grid.width)
    y0, y1 = _clamp_pair(by, grid.height)
    z0, z1 = _clamp_pair(bz, grid.depth)
    data = grid.data
    fxc, fyc, fzc = _col(fxq), _col(fyq), _col(fzq)
    near = lerp(
        lerp(data[z0, y0, x0], data[z0, y0, x1], fxc),
        lerp(data[z0, y1, x0], data[z0, y1, x1], fxc),
        fyc,
    )
    far = lerp(
        lerp(data[z1, y0, x0], data[z1, y0, x1], fxc),
        lerp(data[z1, y1, x0], data[z1, y1, x1], fxc),
        fyc,
    )
    value = lerp(near, far, fzc)
    trace = SampleTrace(
        texel_indices=(
            (x0, y0, z0), (x1, y0, z0), (x0, y1, z0), (x1, y1, z0),
            (x0, y0, z1), (x1, y0, z1), (x0, y1, z1), (x1, y1, z1),
        ),
        fractions=(fxq, fyq, fzq),
        raw_value=value,
    )
    return value, trace


def blend_with_fractions(grid: TexelGrid, bases, fractions):
    """Blend the cell at integer `bases` using explicit per-axis fractions.

    Bypasses coordinate conversion and quantization entirely; used to probe
    what the blend would return at arbitrary fraction combinations. Uses the
    exact lerp order of the sampling paths above, so results are bitwise
    comparable with them.
    """
    if len(bases) != len(fractions):
        raise LayoutError("one base index and one fraction per axis")
    if len(bases) == 2:
        bx, by = bases
        fx, fy = fractions
        x0, x1 = _clamp_pair(np.asarray(bx, dtype=np.int64), grid.width)
        y0, y1 = _clamp_pair(np.asarray(by, dtype=np.int64), grid.height)
        plane = grid.data[0]
        fxc, fyc = _col(fx), _col(fy)
        top = lerp(plane[y0, x0], plane[y0, x1], fxc)
        bottom = lerp(plane[y1, x0], plane[y1, x1], fxc)
        return lerp(top, bottom, fyc)
    if len(bases) == 3:
        bx, by, bz = bases
        fx, fy, fz = fractions
        x0, x1 = _clamp_pair(np.asarray(bx, dtype=np.int64), grid.width)
        y0, y1 = _clamp_pair(np.asarray(by, dtype=np.int64), grid.height)
        z0, z1 = _clamp_pair(np.asarray(bz, dtype=np.int64), grid.depth)
        data = grid.data
        fxc, fyc, fzc = _col(fx), _col(fy), _col(fz)
        near = lerp(
            lerp(data[z0, y0, x0], data[z0, y0, x1], fxc),
            lerp(data[z0, y1, x0], data[z0, y1, x1], fxc),
            fyc,
        )
        far = lerp(
            lerp(data[z1, y0, x0], data[z1, y0, x1], fxc),
            lerp(data[z1, y1, x0], data[z1, y1, x1], fxc),
            fyc,
        )
        return lerp(near, far, fzc)
    raise LayoutError("blend supports 2 or 3 axes")
