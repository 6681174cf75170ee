import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lfdepth.core import DepthMap
from lfdepth.pfm import INVALID_SENTINEL, PfmFormatError, read_pfm, write_pfm


def test_roundtrip_bit_exact(tmp_path):
    rng = np.random.default_rng(7)
    values = rng.standard_normal((9, 13)).astype(np.float32) * 12.5
    valid = rng.random((9, 13)) > 0.2
    path = tmp_path / "map.pfm"
    write_pfm(DepthMap(values, valid), path)
    back = read_pfm(path)
    assert np.array_equal(back.valid, valid)
    assert np.array_equal(back.values[valid], values[valid])


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_roundtrip_random_shapes(tmp_path_factory, h, w, seed):
    rng = np.random.default_rng(seed)
    values = rng.standard_normal((h, w)).astype(np.float32)
    path = tmp_path_factory.mktemp("pfm") / "m.pfm"
    write_pfm(DepthMap(values, np.ones((h, w), bool)), path)
    back = read_pfm(path)
    assert np.array_equal(back.values, values)


def test_little_endian_header_accepted(tmp_path):
    path = tmp_path / "le.pfm"
    payload = np.arange(4, dtype="<f4").tobytes()
    path.write_bytes(b"Pf\n2 2\n-1.0\n" + payload)
    m = read_pfm(path)
    assert m.shape == (2, 2)
    # bottom-to-top row order
    assert np.array_equal(m.values, [[2.0, 3.0], [0.0, 1.0]])


def test_big_endian_read(tmp_path):
    path = tmp_path / "be.pfm"
    payload = np.arange(4, dtype=">f4").tobytes()
    path.write_bytes(b"Pf\n2 2\n1.0\n" + payload)
    assert np.array_equal(read_pfm(path).values, [[2.0, 3.0], [0.0, 1.0]])


def test_color_pfm_rejected(tmp_path):
    path = tmp_path / "c.pfm"
    path.write_bytes(b"PF\n1 1\n-1.0\n" + b"\x00" * 12)
    with pytest.raises(PfmFormatError):
        read_pfm(path)


def test_truncated_payload_rejected(tmp_path):
    path = tmp_path / "t.pfm"
    path.write_bytes(b"Pf\n4 4\n-1.0\n" + b"\x00" * 10)
    with pytest.raises(PfmFormatError):
        read_pfm(path)


def test_garbage_header_rejected(tmp_path):
    path = tmp_path / "g.pfm"
    path.write_bytes(b"P6\n4 4\n255\n" + b"\x00" * 48)
    with pytest.raises(PfmFormatError):
        read_pfm(path)


def test_non_finite_values_rejected(tmp_path):
    bad = np.array([[np.inf, 0.0]], np.float32)
    with pytest.raises(PfmFormatError):
        write_pfm(bad, tmp_path / "x.pfm")


def test_sentinel_documented_value():
    assert INVALID_SENTINEL == np.float32(-1e30)
