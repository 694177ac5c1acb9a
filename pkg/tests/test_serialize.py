import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from renormlab.serialize import csv_text, dumps, fmt, hexed, ppm_bytes, read_ppm


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_hex_roundtrip(x):
    d = json.loads(dumps(hexed("v", x)))
    assert float.fromhex(d["v_hex"]) == x
    assert float(fmt(x)) == x


def test_dumps_numpy_and_sets():
    out = json.loads(dumps({"b": np.int64(3), "a": {2, 1}, "c": np.arange(3), "d": np.bool_(True)}))
    assert out == {"a": [1, 2], "b": 3, "c": [0, 1, 2], "d": True}
    # keys sorted, so identical objects serialize identically
    assert dumps({"x": 1, "y": 2}) == dumps({"y": 2, "x": 1})


def test_csv_layout():
    text = csv_text(["n", "a_n", "delta_n"], [(0, 2.0, None), (1, 0.1, 4.5)])
    assert text == "n,a_n,delta_n\n0,2,\n1,0.10000000000000001,4.5\n"
    assert "\r" not in text


def test_ppm_format():
    mask = np.zeros((3, 4), bool)
    mask[1, 2] = True
    data = ppm_bytes(mask)
    assert data.startswith(b"P6\n4 3\n255\n")
    assert len(data) == len(b"P6\n4 3\n255\n") + 4 * 3 * 3
    w, h, pix = read_ppm(data)
    assert (w, h) == (4, 3)
    assert pix[1, 2].tolist() == [0, 0, 0]
    assert pix[0, 0].tolist() == [255, 255, 255]


def test_read_ppm_rejects_truncated():
    with pytest.raises(ValueError):
        read_ppm(ppm_bytes(np.zeros((2, 2), bool))[:-1])
