import numpy as np
import pytest

from terracast.formats import (
    config_hash,
    params_checksum,
    read_raster,
    read_report,
    read_weights,
    render_table,
    worker_count,
    write_raster,
    write_report,
    write_weights,
)


class TestTcrRaster:
    def test_round_trip_multichannel(self, tmp_path):
        rng = np.random.default_rng(0)
        data = rng.random((4, 13, 17)).astype(np.float32)
        p = tmp_path / "r.tcr"
        write_raster(p, data)
        back = read_raster(p)
        assert back.shape == (4, 13, 17)
        np.testing.assert_array_equal(back, data)

    def test_round_trip_single_channel_2d(self, tmp_path):
        data = np.arange(12, dtype=np.float32).reshape(3, 4)
        p = tmp_path / "r.tcr"
        write_raster(p, data)
        back = read_raster(p)
        assert back.shape == (1, 3, 4)
        np.testing.assert_array_equal(back[0], data)

    def test_byte_identical_writes(self, tmp_path):
        data = np.random.default_rng(1).random((2, 8, 8)).astype(np.float32)
        p1, p2 = tmp_path / "a.tcr", tmp_path / "b.tcr"
        write_raster(p1, data)
        write_raster(p2, data)
        assert p1.read_bytes() == p2.read_bytes()

    def test_checksum_detects_corruption(self, tmp_path):
        p = tmp_path / "r.tcr"
        write_raster(p, np.ones((1, 4, 4), dtype=np.float32))
        raw = bytearray(p.read_bytes())
        raw[20] ^= 0xFF
        p.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="checksum"):
            read_raster(p)

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "r.tcr"
        p.write_bytes(b"NOPE" + b"\x00" * 32)
        with pytest.raises(ValueError, match="magic"):
            read_raster(p)


class TestWeights:
    def test_round_trip(self, tmp_path):
        rng = np.random.default_rng(2)
        params = [rng.standard_normal((3, 4)), rng.standard_normal(4), rng.standard_normal((4, 2))]
        header = {"name": "N2", "n_classes": 3, "layers": [{"kind": "dense", "units": 4}]}
        p = tmp_path / "w.tcw"
        write_weights(p, header, params)
        header2, params2 = read_weights(p)
        assert header2["name"] == "N2"
        assert len(params2) == 3
        for a, b in zip(params, params2):
            np.testing.assert_array_equal(a, b)

    def test_checksum_mismatch(self, tmp_path):
        p = tmp_path / "w.tcw"
        write_weights(p, {"name": "x"}, [np.ones(3)])
        raw = bytearray(p.read_bytes())
        raw[-12] ^= 0x01  # corrupt inside the parameter block
        p.write_bytes(bytes(raw))
        with pytest.raises(ValueError, match="checksum"):
            read_weights(p)

    def test_params_checksum_sensitivity(self):
        a = [np.zeros(4), np.ones(2)]
        b = [np.zeros(4), np.ones(2)]
        assert params_checksum(a) == params_checksum(b)
        b[1][0] = 2.0
        assert params_checksum(a) != params_checksum(b)


class TestConfigHashAndReports:
    def test_hash_stable_under_key_order(self):
        assert config_hash({"a": 1, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1})
        assert config_hash({"a": 1}) != config_hash({"a": 2})

    def test_report_round_trip(self, tmp_path):
        p = tmp_path / "report.jsonl"
        recs = [{"k": 1, "name": "x"}, {"k": 2, "nested": {"a": [1, 2]}}]
        write_report(p, recs)
        assert read_report(p) == recs

    def test_render_table(self):
        text = render_table("Results", ["model", "acc"], [["N2", 0.82], ["N1", 0.66]])
        lines = text.splitlines()
        assert lines[0] == "Results"
        assert "model" in lines[1] and "N2" in lines[3]


class TestWorkerCount:
    def test_default_and_env(self, monkeypatch):
        monkeypatch.delenv("TERRACAST_THREADS", raising=False)
        assert worker_count() == 1
        monkeypatch.setenv("TERRACAST_THREADS", "4")
        assert worker_count() == 4
        monkeypatch.setenv("TERRACAST_THREADS", "0")
        assert worker_count() == 1
        monkeypatch.setenv("TERRACAST_THREADS", "junk")
        assert worker_count() == 1
