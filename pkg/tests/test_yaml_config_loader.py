"""Tests for YAML config loader."""

import tempfile
from pathlib import Path

import pytest
import yaml

from src.domain.exceptions import ConfigKeyError
from src.domain.kinds import DataSource, SweepKind
from src.domain.run_config import DEFAULT_EPOCHS_GRID, RunConfig, SweepSpec
from src.infrastructure.config_loader import (
    YamlConfigLoader,
    apply_overrides,
    build_run_config,
    merge_raw,
    parse_config,
)

EXPERIMENTS_DIR = Path(__file__).resolve().parent.parent / "config" / "experiments"


class TestYamlConfigLoader:
    """Tests for YamlConfigLoader class."""

    @pytest.fixture
    def temp_config_dir(self):
        """Create a temporary config directory."""
        with tempfile.TemporaryDirectory() as tmpdir:
            yield Path(tmpdir)

    @pytest.fixture
    def config_loader(self, temp_config_dir):
        """Create a YamlConfigLoader instance."""
        return YamlConfigLoader(str(temp_config_dir))

    def test_load_by_name_yml_and_yaml(self, config_loader, temp_config_dir):
        """Test loading config from .yml and .yaml files by experiment name."""
        (temp_config_dir / "first.yml").write_text("train:\n  lr: 0.5\n", encoding="utf-8")
        (temp_config_dir / "second.yaml").write_text("train:\n  epochs: 3\n", encoding="utf-8")

        assert config_loader.load_run_config("first") == {"train": {"lr": 0.5}}
        assert config_loader.load_run_config("second") == {"train": {"epochs": 3}}

    def test_load_by_path(self, config_loader, temp_config_dir):
        """Test that an explicit file path is accepted."""
        path = temp_config_dir / "nested" / "run.yml"
        path.parent.mkdir()
        path.write_text("planted:\n  n: 100\n", encoding="utf-8")
        assert config_loader.load_run_config(str(path)) == {"planted": {"n": 100}}

    def test_not_found(self, config_loader):
        """Test loading non-existent config raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError, match="Configuration file not found"):
            config_loader.load_run_config("nonexistent")

    def test_empty_file(self, config_loader, temp_config_dir):
        """Test that an empty file loads as an empty mapping."""
        (temp_config_dir / "empty.yml").write_text("", encoding="utf-8")
        assert config_loader.load_run_config("empty") == {}

    def test_duplicate_key(self, config_loader, temp_config_dir):
        """Test that a repeated key is a YAML error."""
        (temp_config_dir / "dup.yml").write_text(
            "train:\n  lr: 0.1\n  lr: 0.2\n", encoding="utf-8"
        )
        with pytest.raises(yaml.YAMLError, match="duplicate key 'lr'"):
            config_loader.load_run_config("dup")

    def test_invalid_yaml(self, config_loader, temp_config_dir):
        """Test that malformed YAML raises YAMLError."""
        (temp_config_dir / "broken.yml").write_text("train: [unclosed\n", encoding="utf-8")
        with pytest.raises(yaml.YAMLError):
            config_loader.load_run_config("broken")

    def test_top_level_must_be_mapping(self, config_loader, temp_config_dir):
        """Test that a list document is rejected."""
        (temp_config_dir / "list.yml").write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(ValueError, match="top level must be a mapping"):
            config_loader.load_run_config("list")


class TestBuildRunConfig:
    """Tests for validation of raw mappings."""

    def test_empty_mapping_gives_defaults(self):
        """Test that no sections means every default."""
        assert build_run_config({}) == RunConfig()

    def test_default_file_matches_built_in_defaults(self):
        """Test that default.yml spells out the built-in defaults."""
        config = parse_config("default", config_dir=str(EXPERIMENTS_DIR))
        assert config == RunConfig()
        assert (config.planted.n, config.planted.d, config.planted.p, config.planted.q) == (
            500,
            100,
            0.2,
            0.01,
        )
        assert config.train.labeled_count == 100
        assert config.gnn.hidden_dims == [16]

    @pytest.mark.parametrize(
        "name",
        sorted(path.stem for path in EXPERIMENTS_DIR.glob("*.yml")),
    )
    def test_shipped_experiments_validate(self, name):
        """Test that every shipped experiment file is a valid configuration."""
        config = parse_config(name, config_dir=str(EXPERIMENTS_DIR))
        SweepSpec.from_run_config(config, experiment=name)

    def test_unknown_key_suggests_close_match(self):
        """Test the did-you-mean hint for a misspelt key."""
        with pytest.raises(ConfigKeyError, match="did you mean 'gamma_ratio'") as exc_info:
            build_run_config({"planted": {"gamma_ratoi": 0.5}})
        assert exc_info.value.key == "planted.gamma_ratoi"

    def test_unknown_section(self):
        """Test that unknown sections are reported with a suggestion."""
        with pytest.raises(ConfigKeyError, match="did you mean 'bounds'"):
            build_run_config({"bound": {}})

    def test_wrong_type(self):
        """Test that a type mismatch names the key."""
        with pytest.raises(ValueError, match="'train.epochs' has wrong type"):
            build_run_config({"train": {"epochs": "many"}})

    def test_bool_is_not_an_int(self):
        """Test that YAML booleans are rejected for integer keys."""
        with pytest.raises(ValueError, match="wrong type"):
            build_run_config({"planted": {"n": True}})

    def test_int_promoted_to_float(self):
        """Test that integer YAML values are accepted for float keys."""
        config = build_run_config({"train": {"lr": 1}, "sweep": {"grid": [1, 2]}})
        assert isinstance(config.train.lr, float)
        assert config.sweep.grid == [1.0, 2.0]

    def test_out_of_range_value(self):
        """Test section-level range checks."""
        with pytest.raises(ValueError, match="gamma_ratio must lie in"):
            build_run_config({"planted": {"gamma_ratio": 1.5}})

    def test_unknown_enum_value(self):
        """Test that an unknown diffusion kind is rejected."""
        with pytest.raises(ValueError):
            build_run_config({"train": {"diffusion": "laplacian"}})


class TestOverrides:
    """Tests for dotted overrides."""

    def test_override_values_are_yaml_scalars(self):
        """Test that override values are typed by YAML."""
        raw = apply_overrides(
            {"train": {"lr": 0.1}},
            ["train.lr=0.5", "gnn.hidden_dims=[8, 8]", "gnn.residual_alpha=null"],
        )
        assert raw == {
            "train": {"lr": 0.5},
            "gnn": {"hidden_dims": [8, 8], "residual_alpha": None},
        }

    def test_overrides_do_not_mutate_input(self):
        """Test that the raw mapping is copied."""
        raw = {"train": {"lr": 0.1}}
        apply_overrides(raw, ["train.lr=0.5"])
        assert raw == {"train": {"lr": 0.1}}

    @pytest.mark.parametrize("override", ["lr=0.1", "train.lr", ".lr=1", "train.=1"])
    def test_malformed_override(self, override):
        """Test that overrides must look like section.key=value."""
        with pytest.raises(ValueError, match="section.key=value"):
            apply_overrides({}, [override])

    def test_merge_raw(self):
        """Test section-wise merging."""
        merged = merge_raw({"train": {"lr": 0.1, "epochs": 5}}, {"train": {"lr": 0.2}})
        assert merged == {"train": {"lr": 0.2, "epochs": 5}}

    def test_parse_config_without_file(self):
        """Test that overrides apply on top of built-in defaults."""
        config = parse_config(None, ["planted.n=100", "sweep.kind=depth"])
        assert config.planted.n == 100
        assert config.sweep.kind == "depth"


class TestSweepSpec:
    """Tests for SweepSpec.from_run_config."""

    def test_empty_sweep_is_single_point(self):
        """Test that an empty sweep section gives a one-point run."""
        spec = SweepSpec.from_run_config(RunConfig())
        assert spec.kind is None
        assert spec.grid == (0.0,)
        assert spec.param_name == "none"
        assert spec.epochs_grid == DEFAULT_EPOCHS_GRID

    def test_epochs_grid_follows_schedule(self):
        """Test that the epochs grid defaults to every eval_every epochs."""
        config = parse_config(
            None,
            ["train.epochs=30", "train.eval_every=10", "sweep.kind=alignment", "sweep.grid=[0.5]"],
        )
        spec = SweepSpec.from_run_config(config, experiment="x")
        assert spec.kind == SweepKind.ALIGNMENT
        assert spec.epochs_grid == (10, 20, 30)
        assert spec.source == DataSource.PLANTED

    def test_empty_grid_rejected(self):
        """Test direct construction with an empty grid."""
        with pytest.raises(ValueError, match="grid must not be empty"):
            SweepSpec(kind=SweepKind.DEPTH, grid=(), config=RunConfig())
