"""
Tests for sample and grid file codecs.
"""

import json

import numpy as np
import pandas as pd
import pytest

from core.grid_io import read_propensity_csv, write_propensity_csv
from core.parquet_reader import read_records, read_samples
from core.sample_writer import BatchWriter, sample_summary, write_json, write_samples
from schemas.phase_space import GridGeometry, GridKind, PhaseSpaceGrid
from schemas.photocurrent import PhotocurrentSample, SampleBatch
from services.phasespace.propensity import gaussian_filter
from utils.errors import InvalidArgumentError


@pytest.fixture
def batch(rng) -> SampleBatch:
    counts = rng.poisson(25.0, size=(50, 4))
    return SampleBatch(
        scheme="eight-port",
        counts=counts,
        z1=rng.normal(size=50),
        z2=rng.normal(size=50) * 1e-7,
    )


@pytest.mark.parametrize("fmt", ["csv", "json", "parquet"])
def test_sample_files_reload(batch, tmp_path, fmt):
    path = write_samples(batch, tmp_path / f"samples.{fmt}", fmt)
    loaded = read_samples(path, scheme="eight-port")
    np.testing.assert_array_equal(loaded.counts, batch.counts)
    np.testing.assert_array_equal(loaded.z1, batch.z1)
    np.testing.assert_array_equal(loaded.z2, batch.z2)
    assert loaded.scheme == "eight-port"


def test_csv_layout(batch, tmp_path):
    path = write_samples(batch, tmp_path / "samples.csv")
    raw = path.read_bytes()
    assert b"\r\n" not in raw
    assert raw.splitlines()[0] == b"i1,i2,i3,i4,z1,z2"
    assert len(raw.splitlines()) == 51
    frame = pd.read_csv(path)
    assert frame["i1"].dtype == np.int64


def test_json_samples_keep_scheme(batch, tmp_path):
    path = write_samples(batch, tmp_path / "run.json", "json")
    payload = json.loads(path.read_text())
    assert payload["columns"] == ["i1", "i2", "i3", "i4", "z1", "z2"]
    assert read_samples(path).scheme == "eight-port"


def test_parquet_stores_scheme_metadata(batch, tmp_path):
    path = write_samples(batch, tmp_path / "run.parquet", "parquet")
    assert read_samples(path).scheme == "eight-port"
    records = read_records(path, PhotocurrentSample)
    assert len(records) == 50
    assert records[0].counts == tuple(int(c) for c in batch.counts[0])


def test_batch_writer_streams_row_groups(batch, tmp_path):
    path = tmp_path / "stream.parquet"
    with BatchWriter(path, batch_size=20) as writer:
        for start in range(0, 50, 10):
            writer.add_batch(SampleBatch(
                scheme=batch.scheme,
                counts=batch.counts[start:start + 10],
                z1=batch.z1[start:start + 10],
                z2=batch.z2[start:start + 10],
            ))
    loaded = read_samples(path)
    np.testing.assert_array_equal(loaded.z1, batch.z1)


def test_unknown_formats(batch, tmp_path):
    with pytest.raises(InvalidArgumentError, match="Unknown sample format"):
        write_samples(batch, tmp_path / "samples.xml", "xml")
    (tmp_path / "samples.xml").write_text("<samples/>")
    with pytest.raises(InvalidArgumentError, match="Unsupported"):
        read_samples(tmp_path / "samples.xml")
    with pytest.raises(FileNotFoundError):
        read_samples(tmp_path / "missing.csv")


def test_summary_and_json_report(batch, tmp_path):
    summary = sample_summary(batch, seed=3, eta=0.9, lo_amplitude=1e4)
    assert summary["n"] == 50
    assert len(summary["covariance"]) == 2
    path = write_json({"b": 1, "a": complex(1, 2), "c": np.arange(2)}, tmp_path / "out.json")
    text = path.read_text()
    assert text.index('"a"') < text.index('"b"') < text.index('"c"')
    assert text.endswith("\n")
    assert json.loads(text)["a"] == [1.0, 2.0]


def test_propensity_csv_reload(tmp_path):
    grid = gaussian_filter(0.5, GridGeometry(4.0, 16))
    path = write_propensity_csv(grid, tmp_path / "grid" / "propensity.csv", eta=0.5, extra={"signal": "vacuum"})
    loaded, header = read_propensity_csv(path)
    assert loaded.geometry == grid.geometry
    np.testing.assert_array_equal(loaded.values, grid.values)
    assert header["eta"] == "0.5"
    assert header["signal"] == "vacuum"
    assert "normalization" in header
    lines = path.read_text().splitlines()
    assert "alpha_re,alpha_im,K" in lines


def test_propensity_csv_row_order(tmp_path):
    geometry = GridGeometry(2.0, 4)
    values = np.arange(16, dtype=np.float64).reshape(4, 4)
    path = write_propensity_csv(PhaseSpaceGrid(geometry, values, GridKind.PROPENSITY), tmp_path / "k.csv", eta=1.0)
    frame = pd.read_csv(path, comment="#")
    # Re index outer, Im index inner
    assert frame.loc[1, "alpha_re"] == -2.0
    assert frame.loc[1, "alpha_im"] == -1.0
    assert frame.loc[1, "K"] == 1.0


def test_propensity_csv_errors(tmp_path):
    chi = PhaseSpaceGrid(GridGeometry(2.0, 4), np.ones((4, 4)), GridKind.CHARACTERISTIC)
    with pytest.raises(InvalidArgumentError):
        write_propensity_csv(chi, tmp_path / "chi.csv", eta=1.0)
    bad = tmp_path / "bad.csv"
    bad.write_text("# eta: 1.0\nalpha_re,alpha_im,K\n0,0,1\n")
    with pytest.raises(InvalidArgumentError, match="bad header"):
        read_propensity_csv(bad)
    with pytest.raises(FileNotFoundError):
        read_propensity_csv(tmp_path / "absent.csv")
