import json
import math

import numpy as np
import pytest

from strot.errors import FieldShapeError
from strot.grid import GridSpec, PhysicalField, SpectralField
from strot.io import read_field, read_json, write_csv, write_field, write_json

GRID = GridSpec(2.5, 2 * math.pi, 4, 2)


@pytest.mark.parametrize("cls", [PhysicalField, SpectralField])
def test_field_round_trip_is_bit_exact(tmp_path, cls):
    rng = np.random.default_rng(0)
    data = rng.standard_normal(GRID.shape(3)) + 1j * rng.standard_normal(GRID.shape(3))
    path = tmp_path / "f.strf"
    write_field(path, cls(GRID, data))
    back = read_field(path)
    assert type(back) is cls
    assert back.grid == GRID
    assert np.array_equal(back.coeffs if cls is SpectralField else back.samples, data)


def test_corrupt_files_are_rejected(tmp_path):
    path = tmp_path / "f.strf"
    write_field(path, PhysicalField.zeros(GRID, 1))
    raw = path.read_bytes()
    (tmp_path / "short.strf").write_bytes(raw[:10])
    (tmp_path / "magic.strf").write_bytes(b"XXXX" + raw[4:])
    (tmp_path / "trunc.strf").write_bytes(raw[:-16])
    for name in ("short", "magic", "trunc"):
        with pytest.raises(FieldShapeError):
            read_field(tmp_path / f"{name}.strf")


def test_json_is_sorted_and_handles_numpy(tmp_path):
    path = tmp_path / "r.json"
    write_json(path, {"b": np.float64(1.5), "a": np.arange(3), 2: 1 + 2j, "c": np.bool_(True)})
    text = path.read_text()
    assert text.index('"2"') < text.index('"a"') < text.index('"b"')
    assert read_json(path) == {"2": [1.0, 2.0], "a": [0, 1, 2], "b": 1.5, "c": True}
    assert json.loads(text)["a"] == [0, 1, 2]


def test_csv_keeps_full_float_precision(tmp_path):
    path = tmp_path / "t.csv"
    write_csv(path, ["x", "y"], [[0.1 + 0.2, "ok"]])
    assert path.read_text().splitlines() == ["x,y", "0.30000000000000004,ok"]
