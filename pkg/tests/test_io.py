import json

import numpy as np
import pytest

from becfocus import io


class TestWavefunctionFormat:
    def test_round_trip(self, tmp_path, rng):
        values = rng.standard_normal(257) + 1j * rng.standard_normal(257)
        path = tmp_path / "state.gpef"
        io.write_wavefunction(path, values)
        back = io.read_wavefunction(path)
        assert np.array_equal(back, values)

    def test_header_layout(self, tmp_path):
        path = tmp_path / "state.gpef"
        io.write_wavefunction(path, np.array([1 + 2j]))
        raw = path.read_bytes()
        assert raw[:4] == b"GPEF"
        assert int.from_bytes(raw[4:8], "little") == 1
        assert int.from_bytes(raw[8:16], "little") == 1
        assert len(raw) == 16 + 16

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "bogus.gpef"
        path.write_bytes(b"NOPE" + b"\x00" * 16)
        with pytest.raises(ValueError, match="not a wave-function"):
            io.read_wavefunction(path)

    def test_rejects_truncation(self, tmp_path):
        path = tmp_path / "state.gpef"
        io.write_wavefunction(path, np.ones(8, dtype=complex))
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ValueError, match="truncated"):
            io.read_wavefunction(path)


class TestCSV:
    def test_provenance_and_digits(self, tmp_path):
        path = tmp_path / "out.csv"
        io.write_csv(path, {"t": np.array([1 / 3]), "d": np.array([2e-7])},
                     "abc123", ["note"])
        text = path.read_text().splitlines()
        assert text[0].startswith("# becfocus")
        assert text[1] == "# config_hash: abc123"
        assert text[2] == "# note"
        assert text[3] == "t,d"
        assert text[4] == "0.333333333,2e-07"

    def test_length_mismatch(self, tmp_path):
        with pytest.raises(ValueError):
            io.write_csv(tmp_path / "x.csv",
                         {"a": np.arange(3), "b": np.arange(4)}, "h")


class TestJSON:
    def test_provenance_fields(self, tmp_path):
        path = tmp_path / "out.json"
        io.write_json(path, {"x": np.float64(1.5), "arr": np.arange(3)}, "ff00")
        doc = json.loads(path.read_text())
        assert doc["tool"] == "becfocus"
        assert doc["config_hash"] == "ff00"
        assert doc["x"] == 1.5
        assert doc["arr"] == [0, 1, 2]

    def test_non_finite_sanitized(self, tmp_path):
        path = tmp_path / "out.json"
        io.write_json(path, {"bad": float("nan"), "inf": float("inf")}, "h")
        doc = json.loads(path.read_text())
        assert doc["bad"] is None and doc["inf"] is None


class TestConfigHash:
    def test_stable_and_order_insensitive(self):
        a = io.config_hash({"x": 1, "y": [1, 2]})
        b = io.config_hash({"y": [1, 2], "x": 1})
        assert a == b
        assert io.config_hash({"x": 2, "y": [1, 2]}) != a
