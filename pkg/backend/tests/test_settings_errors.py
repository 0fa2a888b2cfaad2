"""
Tests for runtime settings, the error hierarchy, RNG streams and config parsing.
"""

import numpy as np
import pytest

from cli.config_models import load_experiment_config, parse_experiment_config, to_scheme_config
from utils.errors import (
    ConfigValidationError,
    EquivalenceFailure,
    InvalidArgumentError,
    ResourceLimitError,
    TruncationError,
    TwoPhotocurrentError,
)
from utils.rng import chunk_sizes, stream_generator
from utils.settings import DEFAULT_CHUNK_SIZE, DEFAULT_DIM_LIMIT, get_settings


class TestSettings:
    def test_defaults(self, monkeypatch):
        for name in ("TWOPHOTO_DIM_LIMIT", "TWOPHOTO_DENSE_LIMIT", "TWOPHOTO_CHUNK_SIZE"):
            monkeypatch.delenv(name, raising=False)
        settings = get_settings()
        assert settings.dim_limit == DEFAULT_DIM_LIMIT
        assert settings.chunk_size == DEFAULT_CHUNK_SIZE
        assert settings.poisson_normal_threshold == 1e6

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("TWOPHOTO_DIM_LIMIT", "5e3")
        monkeypatch.setenv("TWOPHOTO_DEFICIT_THRESHOLD", "1e-4")
        settings = get_settings()
        assert settings.dim_limit == 5000
        assert settings.deficit_threshold == 1e-4

    def test_settings_are_cached(self):
        assert get_settings() is get_settings()

    def test_non_numeric_value(self, monkeypatch):
        monkeypatch.setenv("TWOPHOTO_CHUNK_SIZE", "lots")
        with pytest.raises(ConfigValidationError) as excinfo:
            get_settings()
        assert excinfo.value.field_path == "TWOPHOTO_CHUNK_SIZE"

    def test_out_of_range_value(self, monkeypatch):
        monkeypatch.setenv("TWOPHOTO_DEFICIT_THRESHOLD", "2")
        with pytest.raises(ConfigValidationError, match="Deficit threshold"):
            get_settings()


class TestErrors:
    @pytest.mark.parametrize(
        "error_cls,code",
        [
            (InvalidArgumentError, 1),
            (ConfigValidationError, 1),
            (ResourceLimitError, 2),
            (TruncationError, 2),
            (EquivalenceFailure, 3),
        ],
    )
    def test_exit_codes(self, error_cls, code):
        error = error_cls("boom")
        assert isinstance(error, TwoPhotocurrentError)
        assert error.exit_code == code

    def test_to_dict(self):
        error = ResourceLimitError("too big", context={"limit": 10})
        assert error.to_dict() == {"error": "ResourceLimitError", "message": "too big", "context": {"limit": 10}}

    def test_config_error_carries_field_path(self):
        payload = ConfigValidationError("bad", field_path="scheme.eta").to_dict()
        assert payload["field_path"] == "scheme.eta"

    def test_invalid_argument_is_a_value_error(self):
        with pytest.raises(ValueError):
            raise InvalidArgumentError("negative")


class TestRng:
    def test_streams_are_reproducible(self):
        a = stream_generator(42, 3).random(5)
        b = stream_generator(42, 3).random(5)
        np.testing.assert_array_equal(a, b)

    def test_streams_differ(self):
        assert not np.array_equal(stream_generator(42, 0).random(5), stream_generator(42, 1).random(5))
        assert not np.array_equal(stream_generator(1, 0).random(5), stream_generator(2, 0).random(5))

    def test_negative_seed(self):
        with pytest.raises(InvalidArgumentError):
            stream_generator(-1)

    @pytest.mark.parametrize("total,size,expected", [(10, 4, [4, 4, 2]), (8, 4, [4, 4]), (0, 4, []), (3, 10, [3])])
    def test_chunk_sizes(self, total, size, expected):
        assert chunk_sizes(total, size) == expected

    def test_bad_chunking(self):
        with pytest.raises(InvalidArgumentError):
            chunk_sizes(10, 0)


class TestExperimentConfig:
    def test_defaults(self):
        experiment = parse_experiment_config({})
        assert experiment.formats == ["csv"]
        assert experiment.significance == 0.01
        assert len(experiment.loss_check.states) == 7
        assert experiment.loss_check.etas == [0.3, 0.6, 0.9]

    def test_grid_points_must_be_power_of_two(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            parse_experiment_config({"grid": {"points_per_axis": 100}})
        assert excinfo.value.field_path == "grid.points_per_axis"

    def test_loss_check_efficiencies(self):
        with pytest.raises(ConfigValidationError) as excinfo:
            parse_experiment_config({"loss_check": {"etas": [0.5, 1.2]}})
        assert excinfo.value.field_path == "loss_check.etas"

    def test_overrides_replace_file_values(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text('{"seed": 1, "output_dir": "x"}')
        experiment = load_experiment_config(str(path), {"seed": 9, "output_dir": None})
        assert experiment.seed == 9
        assert experiment.output_dir == "x"

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{not json")
        with pytest.raises(ConfigValidationError, match="not valid JSON"):
            load_experiment_config(str(path))

    def test_scheme_conversion(self):
        experiment = parse_experiment_config({
            "scheme": {
                "scheme": "six-port",
                "signal": {"kind": "coherent", "amplitude": [0.5, -0.5]},
                "eta": 0.7,
                "sample_count": 12,
            },
            "seed": 5,
        })
        cfg = to_scheme_config(experiment.require_scheme(), experiment.seed)
        assert cfg.signal.amplitude == 0.5 - 0.5j
        assert cfg.eta.eta == 0.7
        assert cfg.seed == 5
        assert cfg.to_dict()["scheme"] == "six-port"

    def test_scheme_record_rejection_is_a_config_error(self):
        experiment = parse_experiment_config({
            "scheme": {"scheme": "eight-port", "signal": {"kind": "fock", "n": 1}},
        })
        with pytest.raises(ConfigValidationError) as excinfo:
            to_scheme_config(experiment.require_scheme(), 0)
        assert excinfo.value.field_path == "scheme"
