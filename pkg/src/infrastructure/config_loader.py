"""YAML run configuration: loading, validation and dotted overrides."""

import difflib
import logging
from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union, get_args, get_origin, get_type_hints

import yaml

from ..domain.exceptions import ConfigKeyError
from ..domain.interfaces import ConfigLoader
from ..domain.run_config import SECTION_TYPES, RunConfig

logger = logging.getLogger(__name__)


class _UniqueKeyLoader(yaml.SafeLoader):
    """SafeLoader that refuses mappings with repeated keys."""

    def construct_mapping(self, node, deep=False):
        seen = set()
        for key_node, _ in node.value:
            key = self.construct_object(key_node, deep=deep)
            if key in seen:
                raise yaml.constructor.ConstructorError(
                    None, None, f"duplicate key {key!r}", key_node.start_mark
                )
            seen.add(key)
        return super().construct_mapping(node, deep=deep)


class YamlConfigLoader(ConfigLoader):
    """Loads run configurations from YAML files."""

    def __init__(self, config_dir: str = "config/experiments") -> None:
        """Initialize YAML config loader.

        Args:
            config_dir: Directory holding the named experiment files.
        """
        self._config_dir = Path(config_dir)

    def resolve(self, name_or_path: str) -> Path:
        """Find the file for an experiment name or an explicit path.

        Raises:
            FileNotFoundError: If neither form exists.
        """
        candidate = Path(name_or_path)
        if candidate.suffix in (".yml", ".yaml") and candidate.exists():
            return candidate
        for suffix in (".yml", ".yaml"):
            config_file = self._config_dir / f"{name_or_path}{suffix}"
            if config_file.exists():
                return config_file
        raise FileNotFoundError(f"Configuration file not found: {name_or_path}")

    def load_run_config(self, name_or_path: str) -> Dict[str, Any]:
        """Load the raw sectioned mapping of one experiment file.

        Raises:
            FileNotFoundError: If the file does not exist.
            yaml.YAMLError: On malformed YAML or duplicate keys.
            ValueError: If the top level is not a mapping.
        """
        config_file = self.resolve(name_or_path)
        with open(config_file, encoding="utf-8") as f:
            raw = yaml.load(f, Loader=_UniqueKeyLoader) or {}
        if not isinstance(raw, dict):
            raise ValueError(f"{config_file}: top level must be a mapping")
        logger.debug("Loaded run configuration from %s", config_file)
        return raw


def _suggest(key: str, options: Iterable[str]) -> Optional[str]:
    matches = difflib.get_close_matches(key, list(options), n=1, cutoff=0.6)
    return matches[0] if matches else None


def _matches(value: Any, hint: Any) -> bool:
    origin = get_origin(hint)
    if origin is Union:
        return any(_matches(value, arg) for arg in get_args(hint))
    if origin in (list, List):
        (item_hint,) = get_args(hint) or (Any,)
        return isinstance(value, list) and all(_matches(item, item_hint) for item in value)
    if hint is Any:
        return True
    if hint is type(None):
        return value is None
    if hint is bool:
        return isinstance(value, bool)
    if hint is int:
        return isinstance(value, int) and not isinstance(value, bool)
    if hint is float:
        return isinstance(value, (int, float)) and not isinstance(value, bool)
    return isinstance(value, hint)


def _coerce(value: Any, hint: Any) -> Any:
    """Promote YAML ints to floats where a float is declared."""
    if hint is float and isinstance(value, int):
        return float(value)
    if get_origin(hint) is Union:
        for arg in get_args(hint):
            if arg is not type(None) and _matches(value, arg):
                return _coerce(value, arg)
    if get_origin(hint) in (list, List) and isinstance(value, list):
        (item_hint,) = get_args(hint)
        return [_coerce(item, item_hint) for item in value]
    return value


def _build_section(name: str, values: Any):
    section_type = SECTION_TYPES[name]
    if values is None:
        values = {}
    if not isinstance(values, dict):
        raise ValueError(f"Section '{name}' must be a mapping")
    hints = get_type_hints(section_type)
    known = [f.name for f in fields(section_type)]
    kwargs = {}
    for key, value in values.items():
        if key not in known:
            raise ConfigKeyError(f"{name}.{key}", _suggest(str(key), known))
        if not _matches(value, hints[key]):
            raise ValueError(
                f"Config key '{name}.{key}' has wrong type: got {type(value).__name__} {value!r}"
            )
        kwargs[key] = _coerce(value, hints[key])
    return section_type(**kwargs)


def merge_raw(base: Dict[str, Any], overlay: Dict[str, Any]) -> Dict[str, Any]:
    """Section-wise merge; keys in ``overlay`` win."""
    merged = {section: dict(values or {}) for section, values in base.items()}
    for section, values in overlay.items():
        if isinstance(values, dict) and isinstance(merged.get(section), dict):
            merged[section].update(values)
        else:
            merged[section] = values
    return merged


def apply_overrides(raw: Dict[str, Any], overrides: Iterable[str]) -> Dict[str, Any]:
    """Apply ``section.key=value`` overrides; values are read as YAML scalars.

    Raises:
        ValueError: If an override is not of the form ``section.key=value``.
    """
    result = merge_raw(raw, {})
    for override in overrides:
        dotted, sep, text = override.partition("=")
        section, dot, key = dotted.strip().partition(".")
        if not sep or not dot or not section or not key:
            raise ValueError(f"Override must look like section.key=value, got {override!r}")
        result.setdefault(section, {})
        if not isinstance(result[section], dict):
            result[section] = {}
        result[section][key] = yaml.safe_load(text) if text.strip() else None
    return result


def build_run_config(raw: Dict[str, Any]) -> RunConfig:
    """Validate a raw sectioned mapping into a ``RunConfig``.

    Raises:
        ConfigKeyError: On unknown sections or keys, with a close-match suggestion.
        ValueError: On wrong value types or out-of-range values.
    """
    sections = {}
    for name, values in raw.items():
        if name not in SECTION_TYPES:
            raise ConfigKeyError(str(name), _suggest(str(name), SECTION_TYPES))
        sections[name] = _build_section(name, values)
    return RunConfig(**sections)


def parse_config(
    name_or_path: Optional[str] = None,
    overrides: Iterable[str] = (),
    config_dir: str = "config/experiments",
) -> RunConfig:
    """Load an experiment file (or only defaults), apply overrides and validate.

    Args:
        name_or_path: Experiment name or YAML path; ``None`` uses built-in defaults.
        overrides: ``section.key=value`` strings applied after the file.
        config_dir: Directory of named experiment files.

    Returns:
        The effective ``RunConfig``.
    """
    raw: Dict[str, Any] = {}
    if name_or_path is not None:
        raw = YamlConfigLoader(config_dir).load_run_config(name_or_path)
    raw = apply_overrides(raw, overrides)
    return build_run_config(raw)
