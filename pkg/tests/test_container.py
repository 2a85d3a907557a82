import numpy as np
import pytest

from texcurve import LayoutError, TexelFormat, read_ctex, write_ctex
from texcurve.container import curve_from_bytes, curve_to_bytes, sidecar_text
from texcurve.encoder import (
    encode_bicubic_rgba,
    encode_dc_cubic,
    encode_dc_quadratic,
    encode_dc_zigzag,
    encode_rational,
    encode_seiler,
)
from conftest import random_c0_quadratics, random_polygon


def build_corpus(rng):
    curves = []
    for fmt in TexelFormat:
        lo, hi = (0.0, 1.0) if fmt.is_unorm else (-1.0, 1.0)
        curves.append(encode_dc_quadratic(random_polygon(rng, 2, 3, lo, hi), fmt))
        curves.append(encode_dc_cubic(random_polygon(rng, 3, 2, lo, hi), fmt))
        curves.append(
            encode_dc_zigzag(
                random_c0_quadratics(rng, 4, 2, 0.25, 0.75), fmt, seed=0.5, rescale=fmt.is_unorm
            )
        )
        curves.append(encode_seiler(random_polygon(rng, 5, 1, lo, hi), fmt, rescale=fmt.is_unorm))
        curves.append(
            encode_rational(
                random_polygon(rng, 3, 2, 0.1, 0.9),
                rng.uniform(0.5, 1.0, 4),
                fmt,
                scheme="dc" if fmt.is_unorm else "seiler",
            )
        )
    curves.append(encode_bicubic_rgba(rng.uniform(0, 1, (4, 4)), TexelFormat.UNORM16))
    return curves


def test_round_trip_bit_exact(rng, tmp_path):
    for i, curve in enumerate(build_corpus(rng)):
        path = tmp_path / f"c{i}.ctex"
        write_ctex(curve, path)
        back = read_ctex(path)
        assert back.layout is curve.layout
        assert back.inner_layout is curve.inner_layout
        assert back.degree == curve.degree
        assert back.segment_count == curve.segment_count
        assert back.grid.dims == curve.grid.dims
        assert back.grid.fmt is curve.grid.fmt
        assert np.array_equal(back.grid.data, curve.grid.data)
        assert np.array_equal(back.transform.scale, curve.transform.scale)
        assert np.array_equal(back.transform.offset, curve.transform.offset)
        # serialized form is reproducible byte for byte
        assert curve_to_bytes(back) == curve_to_bytes(curve)


def test_bad_magic_rejected():
    with pytest.raises(LayoutError):
        curve_from_bytes(b"NOPE!" + b"\x00" * 64)


def test_truncated_rejected():
    with pytest.raises(LayoutError):
        curve_from_bytes(b"CTE")


def test_sidecar_contents(rng):
    curve = encode_seiler(random_polygon(rng, 3, 1), TexelFormat.FLOAT32)
    text = sidecar_text(curve)
    assert "layout: seiler_2d" in text
    assert "degree: 3" in text
    assert "dims: 2 2 1" in text
    assert "format: float32" in text
