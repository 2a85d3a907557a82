import numpy as np
import pytest

from texcurve import (
    ChannelMismatchError,
    ControlPolygon,
    DomainError,
    JoinError,
    Layout,
    RangeError,
    TexelFormat,
    UnsupportedDegreeError,
    encode_bicubic_rgba,
    encode_bilinear_patch,
    encode_dc_cubic,
    encode_dc_quadratic,
    encode_dc_zigzag,
    encode_rational,
    encode_seiler,
    fit_range,
    quantize_texel,
    zigzag_residuals,
)
from conftest import random_c0_quadratics

F32 = TexelFormat.FLOAT32
U8 = TexelFormat.UNORM8


def plane(curve):
    return curve.grid.data[0, :, :, 0]


class TestDcQuadratic:
    def test_row_placement(self):
        enc = encode_dc_quadratic(ControlPolygon([0.0, 1.0, 0.0]), F32)
        assert np.array_equal(plane(enc), [[0.0, 1.0], [1.0, 0.0]])
        assert enc.layout is Layout.DC_QUAD_2X2

    def test_constant(self):
        enc = encode_dc_quadratic(ControlPolygon([0.25, 0.25, 0.25]), F32)
        assert np.all(enc.grid.data == 0.25)

    def test_unorm8_quantization(self):
        enc = encode_dc_quadratic(ControlPolygon([0.0, 0.5, 1.0]), U8)
        expect = {0.0, quantize_texel(0.5, U8), 1.0}
        assert set(enc.grid.data.reshape(-1)) == expect
        assert quantize_texel(0.5, U8) == 128 / 255

    def test_wrong_degree(self):
        with pytest.raises(UnsupportedDegreeError):
            encode_dc_quadratic(ControlPolygon([0.0, 1.0, 1.0, 0.0]), F32)

    def test_out_of_range_unorm(self):
        with pytest.raises(RangeError):
            encode_dc_quadratic(ControlPolygon([0.0, 1.5, 0.0]), U8)


class TestDcCubic:
    def test_slice_placement(self):
        enc = encode_dc_cubic(ControlPolygon([0.0, 1.0, 1.0, 0.0]), F32)
        assert np.array_equal(enc.grid.data[0, :, :, 0], [[0.0, 1.0], [1.0, 1.0]])
        assert np.array_equal(enc.grid.data[1, :, :, 0], [[1.0, 1.0], [1.0, 0.0]])

    def test_constant(self):
        enc = encode_dc_cubic(ControlPolygon(np.full(4, 0.5)), F32)
        assert np.all(enc.grid.data == 0.5)

    def test_texel_budget(self):
        enc = encode_dc_cubic(ControlPolygon([0.0, 1.0, 1.0, 0.0]), F32)
        assert enc.grid.texel_count == 8


class TestZigzag:
    def test_single_segment_explicit_seed(self):
        enc = encode_dc_zigzag([ControlPolygon([0.0, 1.0, 0.0])], F32, seed=1.0)
        assert np.array_equal(plane(enc), [[0.0, 1.0], [1.0, 0.0]])

    def test_two_segments(self):
        segs = [ControlPolygon([0.0, 1.0, 0.0]), ControlPolygon([0.0, 0.5, 0.0])]
        enc = encode_dc_zigzag(segs, F32, seed=1.0)
        assert np.array_equal(plane(enc), [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0]])
        assert enc.segment_count == 2

    def test_constant_segments(self):
        c = 0.3
        segs = [ControlPolygon([c, c, c])] * 3
        enc = encode_dc_zigzag(segs, F32, seed=c)
        assert np.all(np.asarray(enc.grid.data) == np.float64(np.float32(c)))

    def test_c0_violation(self):
        segs = [ControlPolygon([0.0, 1.0, 0.5]), ControlPolygon([0.4, 0.5, 0.0])]
        with pytest.raises(JoinError):
            encode_dc_zigzag(segs, F32)

    def test_storage_is_two_texels_per_extra_segment(self, rng):
        for n in range(1, 9):
            segs = random_c0_quadratics(rng, n)
            enc = encode_dc_zigzag(segs, F32)
            assert enc.grid.texel_count == 2 * (n + 1)
            assert enc.grid.dims == (n + 1, 2, 1)

    def test_constraint_audit(self, rng):
        for fmt in (F32, U8):
            segs = random_c0_quadratics(rng, 5, lo=0.2, hi=0.8)
            enc = encode_dc_zigzag(segs, fmt, seed=0.5, rescale=fmt.is_unorm)
            res = zigzag_residuals(enc, segs)
            step = fmt.quant_step(float(np.max(np.abs(enc.grid.data))))
            assert np.max(res) <= step + 1e-15

    def test_range_error_names_texel(self):
        # middle point at 0.9 with seed 0 pushes the solved texel to 1.8
        segs = [ControlPolygon([0.0, 0.9, 0.0])]
        with pytest.raises(RangeError, match="texel"):
            encode_dc_zigzag(segs, U8, seed=0.0)

    def test_seed_search_recovers_feasibility(self):
        segs = [ControlPolygon([0.0, 0.9, 0.0])]
        enc = encode_dc_zigzag(segs, U8, optimize_seed=True)
        assert np.all(enc.grid.data >= 0.0) and np.all(enc.grid.data <= 1.0)

    def test_seed_search_conflicts_with_seed(self):
        with pytest.raises(DomainError):
            encode_dc_zigzag([ControlPolygon([0.0, 0.5, 0.0])], F32, seed=0.5, optimize_seed=True)


class TestSeiler:
    def test_cubic_hump_rows(self):
        enc = encode_seiler(ControlPolygon([0.0, 1.0, 1.0, 0.0]), F32)
        assert np.array_equal(plane(enc), [[0.0, 0.0], [3.0, 3.0]])
        assert enc.layout is Layout.SEILER_2D

    def test_cubic_line_rows(self):
        enc = encode_seiler(ControlPolygon([0.0, 1 / 3, 2 / 3, 1.0]), F32)
        assert np.allclose(plane(enc), [[0.0, 1.0], [0.0, 1.0]], atol=1e-15)

    def test_quadratic_constant(self):
        enc = encode_seiler(ControlPolygon([0.4, 0.4, 0.4]), F32)
        assert np.all(np.asarray(plane(enc)) == np.float64(np.float32(0.4)))

    def test_quartic_table_rows(self, rng):
        from texcurve import seiler_terms

        poly = ControlPolygon(rng.uniform(-1, 1, 5))
        terms = seiler_terms(poly)
        b = poly.points[:, 0]
        d1, d2, d3 = (t[0] for t in terms.diffs)
        enc = encode_seiler(poly, F32)
        near = enc.grid.data[0, :, :, 0]
        far = enc.grid.data[1, :, :, 0]
        f32 = lambda x: float(np.float32(x))
        assert np.array_equal(near, [[f32(b[0]), f32(b[4])], [f32(b[0]), f32(b[4])]])
        assert np.array_equal(far, [[f32(b[0] + d1), f32(b[4] + d3)],
                                    [f32(b[0] + d1 + d2), f32(b[4] + d3 + d2)]])

    def test_four_texels_for_cubic(self):
        enc = encode_seiler(ControlPolygon([0.0, 1.0, 1.0, 0.0]), F32)
        assert enc.grid.texel_count == 4

    def test_degree_cap(self, rng):
        with pytest.raises(UnsupportedDegreeError):
            encode_seiler(ControlPolygon(rng.uniform(0, 1, 7)), F32)

    def test_unorm_range_reports_magnitude(self):
        with pytest.raises(RangeError, match="span"):
            encode_seiler(ControlPolygon([0.0, 1.0, 1.0, 0.0]), U8)

    def test_rescale_makes_unorm_encodable(self):
        enc = encode_seiler(ControlPolygon([0.0, 1.0, 1.0, 0.0]), U8, rescale=True)
        assert not enc.transform.is_identity
        assert np.all(enc.grid.data >= 0.0) and np.all(enc.grid.data <= 1.0)


class TestPatchAndBicubic:
    def test_patch_identity_placement(self):
        enc = encode_bilinear_patch([[0.0, 1.0], [1.0, 0.0]], F32)
        assert np.array_equal(plane(enc), [[0.0, 1.0], [1.0, 0.0]])

    def test_patch_constant(self):
        enc = encode_bilinear_patch(np.full((2, 2), 0.7), F32)
        assert np.all(np.asarray(enc.grid.data) == np.float64(np.float32(0.7)))

    def test_bicubic_constant(self):
        enc = encode_bicubic_rgba(np.full((4, 4), 0.5), F32)
        assert np.all(enc.grid.data == 0.5)
        assert enc.grid.channels == 4

    def test_bicubic_separable_rows_identical_channels(self, rng):
        row = rng.uniform(0, 1, 4)
        enc = encode_bicubic_rgba(np.tile(row, (4, 1)), F32)
        for c in range(1, 4):
            assert np.array_equal(enc.grid.data[..., c], enc.grid.data[..., 0])

    def test_bicubic_channel_overflow(self, rng):
        with pytest.raises(ChannelMismatchError):
            encode_bicubic_rgba(rng.uniform(0, 1, (4, 4, 2)), F32)


class TestRational:
    def test_unit_weights_weight_channel(self):
        enc = encode_rational(ControlPolygon([0.0, 1.0, 0.0]), np.ones(3), F32)
        assert enc.layout is Layout.RATIONAL_HOMOGENEOUS
        assert enc.inner_layout is Layout.SEILER_2D
        # quadratic difference-term row adds d1 to both columns; with unit
        # weights the weight channel's d1 is 0, so it decodes to 1 everywhere
        assert np.all(enc.grid.data[..., -1] == 1.0)

    def test_channel_overflow(self, rng):
        poly = ControlPolygon(rng.uniform(0, 1, (3, 4)))
        with pytest.raises(ChannelMismatchError):
            encode_rational(poly, np.ones(3), F32)

    def test_nonpositive_weights(self):
        with pytest.raises(DomainError):
            encode_rational(ControlPolygon([0.0, 1.0, 0.0]), [1.0, 0.0, 1.0], F32)

    def test_dc_scheme_cubic(self, rng):
        poly = ControlPolygon(rng.uniform(0, 1, (4, 2)))
        enc = encode_rational(poly, np.ones(4), F32, scheme="dc")
        assert enc.inner_layout is Layout.DC_CUBIC_2X2X2
        assert enc.grid.depth == 2


class TestFitRange:
    def test_identity_when_in_range(self):
        tf = fit_range(np.array([[0.0], [0.25], [1.0]]), U8)
        assert tf.is_identity

    def test_affine_fit(self):
        tf = fit_range(np.array([[-1.0], [3.0]]), U8)
        assert tf.scale[0] == 0.25
        assert tf.apply(np.array([-1.0]))[0] == 0.0
        assert tf.apply(np.array([3.0]))[0] == 1.0

    def test_degenerate_constant(self):
        tf = fit_range(np.array([[5.0], [5.0]]), U8)
        assert tf.scale[0] == 1.0
        assert tf.offset[0] == -5.0

    def test_per_channel_independence(self):
        vals = np.array([[0.5, -1.0], [0.75, 3.0]])
        tf = fit_range(vals, U8)
        assert tf.scale[0] == 1.0 and tf.offset[0] == 0.0
        assert tf.scale[1] == 0.25
