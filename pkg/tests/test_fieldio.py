"""Binary snapshots and CSV export."""

import struct

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fractl import RealField, TorusGrid
from fractl.fieldio import (
    SnapshotFormatError,
    from_bytes,
    read_csv,
    read_snapshot,
    to_bytes,
    write_csv,
    write_snapshot,
)


@given(dim=st.sampled_from([1, 2]), n=st.sampled_from([8, 16]), length=st.floats(0.1, 10.0),
       complex_values=st.booleans(), seed=st.integers(0, 2**31))
def test_bytes_round_trip_is_exact(dim, n, length, complex_values, seed):
    g = TorusGrid(dim, n, length)
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(g.shape)
    if complex_values:
        v = v + 1j * rng.standard_normal(g.shape)
    back = from_bytes(to_bytes(RealField(g, v)))
    assert back.grid == g
    np.testing.assert_array_equal(back.values, v)


def test_header_layout():
    g = TorusGrid(2, 8, 1.5)
    blob = to_bytes(RealField(g, np.arange(64.0).reshape(8, 8)))
    assert blob[:4] == b"FSF1"
    assert struct.unpack_from("<III", blob, 4) == (2, 8, 0)
    assert struct.unpack_from("<d", blob, 16) == (1.5,)
    assert struct.unpack_from("<2d", blob, 24) == (0.0, 1.0)
    assert len(blob) == 24 + 64 * 8


@pytest.mark.parametrize("mutate,match", [
    (lambda b: b"XXXX" + b[4:], "magic"),
    (lambda b: b[:10], "truncated"),
    (lambda b: b[:-8], "expected"),
])
def test_corrupt_snapshots(mutate, match):
    blob = to_bytes(RealField(TorusGrid(1, 8), np.ones(8)))
    with pytest.raises(SnapshotFormatError, match=match):
        from_bytes(mutate(blob))


def test_file_round_trip(tmp_path, grid2d, rng):
    f = RealField(grid2d, rng.standard_normal(grid2d.shape))
    write_snapshot(tmp_path / "f.bin", f)
    np.testing.assert_array_equal(read_snapshot(tmp_path / "f.bin").values, f.values)


@pytest.mark.parametrize("complex_values", [False, True])
def test_csv_round_trip(tmp_path, grid2d, rng, complex_values):
    v = rng.standard_normal(grid2d.shape)
    if complex_values:
        v = v - 2j * v[::-1]
    write_csv(tmp_path / "f.csv", RealField(grid2d, v))
    header = (tmp_path / "f.csv").read_text().splitlines()[0]
    assert header == ("i0,i1,real,imag" if complex_values else "i0,i1,value")
    np.testing.assert_array_equal(read_csv(tmp_path / "f.csv", grid2d).values, v)
