from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from texcurve import (
    DomainError,
    LayoutError,
    SamplerConfig,
    TexelFormat,
    TexelGrid,
    quantize_fraction,
    quantize_texel,
    remap_unit_to_texel_span,
    sample_bilinear,
    sample_trilinear,
)

IDEAL = SamplerConfig.ideal()
BITS8 = SamplerConfig(subtexel_bits=8)

unit = st.floats(min_value=0.0, max_value=1.0)


def unorm_oracle(v: float, levels: int) -> float:
    """Independent integer-arithmetic rounding oracle (half away from zero)."""
    v = min(max(v, 0.0), 1.0)
    q = Fraction(v) * levels
    k, rem = divmod(q.numerator, q.denominator)
    if Fraction(rem, q.denominator) >= Fraction(1, 2):
        k += 1
    return k / levels


def grid2(rows, fmt=TexelFormat.FLOAT32):
    rows = np.asarray(rows, dtype=float)
    return TexelGrid((rows.shape[1], rows.shape[0], 1), 1, fmt, rows[..., None])


def grid3(slices, fmt=TexelFormat.FLOAT32):
    s = np.asarray(slices, dtype=float)
    return TexelGrid((s.shape[2], s.shape[1], s.shape[0]), 1, fmt, s[..., None])


class TestQuantizeTexel:
    def test_half_rounds_away(self):
        # round(0.5 * 255) = round(127.5) -> 128 under half-away
        assert quantize_texel(0.5, TexelFormat.UNORM8) == 128 / 255
        assert quantize_texel(0.5, TexelFormat.UNORM8) == unorm_oracle(0.5, 255)

    def test_endpoint_exact(self):
        assert quantize_texel(1.0, TexelFormat.UNORM8) == 1.0
        assert quantize_texel(0.0, TexelFormat.UNORM16) == 0.0

    def test_clamps_below(self):
        assert quantize_texel(-0.25, TexelFormat.UNORM8) == 0.0
        assert quantize_texel(1.75, TexelFormat.UNORM8) == 1.0

    def test_float32_rounding(self):
        v = 0.1
        assert quantize_texel(v, TexelFormat.FLOAT32) == float(np.float32(v))

    @given(st.floats(min_value=-0.5, max_value=1.5, allow_nan=False))
    def test_matches_integer_oracle(self, v):
        assert quantize_texel(v, TexelFormat.UNORM8) == unorm_oracle(v, 255)
        assert quantize_texel(v, TexelFormat.UNORM16) == unorm_oracle(v, 65535)


class TestQuantizeFraction:
    def test_nearest_example(self):
        # floor(0.3 * 256 + 1/2) computed with exact rationals is 77
        exact = Fraction(0.3) * 256 + Fraction(1, 2)
        assert exact.numerator // exact.denominator == 77
        assert quantize_fraction(0.3, BITS8) == 77 / 256

    def test_exactly_representable(self):
        assert quantize_fraction(0.5, BITS8) == 0.5

    def test_zero_bits_is_identity(self):
        for f in (0.0, 0.123456, 0.999):
            assert quantize_fraction(f, IDEAL) == f

    def test_floor_mode(self):
        cfg = SamplerConfig(subtexel_bits=8, subtexel_rounding="floor")
        assert quantize_fraction(0.3, cfg) == 76 / 256

    def test_nearest_may_reach_one(self):
        assert quantize_fraction(0.9999, BITS8) == 1.0

    @given(unit, unit, st.integers(min_value=1, max_value=24))
    def test_monotone(self, f1, f2, bits):
        cfg = SamplerConfig(subtexel_bits=bits)
        lo, hi = sorted((f1, f2))
        assert quantize_fraction(lo, cfg) <= quantize_fraction(hi, cfg)

    @given(unit, st.integers(min_value=1, max_value=24))
    def test_against_rational_oracle(self, f, bits):
        cfg = SamplerConfig(subtexel_bits=bits)
        q = Fraction(f) * (1 << bits) + Fraction(1, 2)
        expect = (q.numerator // q.denominator) / (1 << bits)
        assert quantize_fraction(f, cfg) == expect


class TestSampleBilinear:
    def test_constant_grid(self, rng):
        g = grid2([[0.625, 0.625], [0.625, 0.625]])
        for _ in range(8):
            u, v = rng.uniform(0, 1, 2)
            val, _ = sample_bilinear(g, u, v, BITS8)
            assert val[0] == 0.625

    def test_center_of_saddle(self):
        # brute-force expansion A s^2 + (B+C) s t + D t^2 at s = t = 0.5
        g = grid2([[0.0, 1.0], [1.0, 0.0]])
        val, _ = sample_bilinear(g, 0.5, 0.5, IDEAL)
        assert val[0] == pytest.approx(0.5, abs=1e-15)

    def test_quantized_saddle_against_rational_expansion(self):
        g = grid2([[0.0, 1.0], [1.0, 0.0]])
        u = float(remap_unit_to_texel_span(0.3, 2))
        val, trace = sample_bilinear(g, u, u, BITS8)
        # independent oracle: push the exact coordinate through the
        # pipeline in rational arithmetic, then expand the blend
        tx = Fraction(u) * 2 - Fraction(1, 2)
        frac = tx - (tx.numerator // tx.denominator)
        q = frac * 256 + Fraction(1, 2)
        f = Fraction(q.numerator // q.denominator, 256)
        expect = 2 * f * (1 - f)  # B and C are 1, A and D are 0
        assert Fraction(float(trace.fractions[0])) == f
        assert val[0] == pytest.approx(float(expect), abs=1e-15)

    def test_rejects_3d_grid(self):
        g = grid3([[[0.0, 0.0], [0.0, 0.0]], [[1.0, 1.0], [1.0, 1.0]]])
        with pytest.raises(LayoutError):
            sample_bilinear(g, 0.5, 0.5, IDEAL)

    def test_rejects_non_finite(self):
        g = grid2([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(DomainError):
            sample_bilinear(g, float("nan"), 0.5, IDEAL)
        with pytest.raises(DomainError):
            sample_bilinear(g, 0.5, float("inf"), IDEAL)

    @given(
        st.lists(st.floats(min_value=-2.0, max_value=2.0), min_size=4, max_size=4),
        st.floats(min_value=0.25, max_value=0.7499),
        st.floats(min_value=0.25, max_value=0.7499),
    )
    @settings(max_examples=200)
    def test_expansion_identity(self, texels, u, v):
        # bits=0, interior cell: result equals
        # (A(1-fu)+B fu)(1-fv) + (C(1-fu)+D fu) fv with the exact fractions
        a, b, c, d = texels
        g = grid2([[a, b], [c, d]])
        val, trace = sample_bilinear(g, u, v, IDEAL)
        fu, fv = (float(f) for f in trace.fractions)
        expect = (a * (1 - fu) + b * fu) * (1 - fv) + (c * (1 - fu) + d * fu) * fv
        assert val[0] == pytest.approx(expect, abs=4 * np.spacing(max(1.0, abs(expect))))

    def test_edge_clamp_independence(self, rng):
        g = grid2(rng.uniform(0, 1, (2, 2)))
        ref = None
        for u in np.linspace(0.0, 0.5 / 2, 7):
            val, _ = sample_bilinear(g, float(u), 0.4, IDEAL)
            if ref is None:
                ref = val
            assert np.array_equal(val, ref)

    def test_vectorized_matches_scalar(self, rng):
        g = grid2(rng.uniform(0, 1, (2, 2)))
        us = rng.uniform(0, 1, 32)
        vs = rng.uniform(0, 1, 32)
        batch, _ = sample_bilinear(g, us, vs, BITS8)
        for i in range(32):
            single, _ = sample_bilinear(g, us[i], vs[i], BITS8)
            assert np.array_equal(batch[i], single)

    def test_trace_weights_sum_to_one(self):
        g = grid2([[0.0, 1.0], [1.0, 0.0]])
        _, trace = sample_bilinear(g, 0.37, 0.81, BITS8)
        for w0, w1 in trace.weights:
            assert float(w0) + float(w1) == 1.0


class TestSampleTrilinear:
    def test_constant(self):
        g = grid3(np.full((2, 2, 2), 0.375))
        val, _ = sample_trilinear(g, 0.2, 0.7, 0.4, BITS8)
        assert val[0] == 0.375

    def test_pure_depth_lerp(self):
        g = grid3([np.zeros((2, 2)), np.ones((2, 2))])
        w = float(remap_unit_to_texel_span(0.5, 2))
        val, _ = sample_trilinear(g, 0.5, 0.5, w, IDEAL)
        assert val[0] == 0.5

    def test_cubic_grid_bernstein_value(self):
        # packing of b=[0,1,1,0]; 3 s^2 t + 3 s t^2 with b1=b2=1 at t=0.5 is 0.75
        g = grid3([[[0.0, 1.0], [1.0, 1.0]], [[1.0, 1.0], [1.0, 0.0]]])
        r = float(remap_unit_to_texel_span(0.5, 2))
        val, _ = sample_trilinear(g, r, r, r, IDEAL)
        assert val[0] == pytest.approx(0.75, abs=1e-15)

    def test_rejects_2d_grid(self):
        g = grid2([[0.0, 1.0], [1.0, 0.0]])
        with pytest.raises(LayoutError):
            sample_trilinear(g, 0.5, 0.5, 0.5, IDEAL)

    def test_decomposition_is_exact(self, rng):
        data = rng.uniform(0, 1, (2, 2, 2))
        g = grid3(data)
        for _ in range(16):
            u, v, w = rng.uniform(0, 1, 3)
            tri, trace = sample_trilinear(g, u, v, w, BITS8)
            z_near = int(trace.texel_indices[0][2])
            z_far = int(trace.texel_indices[4][2])
            near, _ = sample_bilinear(g.slice2d(z_near), u, v, BITS8)
            far, _ = sample_bilinear(g.slice2d(z_far), u, v, BITS8)
            fz = float(trace.fractions[2])
            assert tri[0] == near[0] * (1.0 - fz) + far[0] * fz
