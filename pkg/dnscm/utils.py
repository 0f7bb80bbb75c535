# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Utility functions for DNSCM."""

import json
from pathlib import Path
from typing import Any, Dict, List


def merge_dicts(*dicts: Dict[str, Any]) -> Dict[str, Any]:
    """
    Merge multiple dictionaries, with later dicts taking precedence.

    Args:
        *dicts: Variable number of dictionaries to merge

    Returns:
        Merged dictionary
    """
    result: Dict[str, Any] = {}
    for d in dicts:
        result.update(d)
    return result


def _load_yaml(text: str) -> Any:
    try:
        import yaml
    except ImportError:
        raise ValueError("YAML support requires pyyaml. Install with: pip install dnscm[yaml]")
    return yaml.safe_load(text)


def load_config_file(config_path: str) -> Dict[str, Any]:
    """
    Load configuration from a JSON or YAML file.

    Args:
        config_path: Path to configuration file

    Returns:
        Dictionary with configuration values

    Raises:
        FileNotFoundError: If config file doesn't exist
        ValueError: If the file cannot be parsed or is not a mapping
    """
    path = Path(config_path)
    if not path.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_path}")

    text = path.read_text(encoding="utf-8")
    suffix = path.suffix.lower()
    if suffix == ".json":
        content = json.loads(text)
    elif suffix in (".yaml", ".yml"):
        content = _load_yaml(text)
    else:
        # Try JSON first, then YAML
        try:
            content = json.loads(text)
        except json.JSONDecodeError:
            content = _load_yaml(text)

    if not isinstance(content, dict):
        raise ValueError(f"Configuration file must contain a mapping: {config_path}")
    return content


def parse_float_grid(text: str) -> List[float]:
    """
    Parse a grid given as ``a,b,c`` or as an inclusive range ``start:stop:step``.

    ``"0:5:0.1"`` gives the 51 values 0, 0.1, ..., 5.

    Raises:
        ValueError: If the text is empty or malformed
    """
    text = text.strip()
    if not text:
        raise ValueError("Empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"Range grids need start:stop:step, got {text}")
        start, stop, step = (float(part) for part in parts)
        if step <= 0 or stop < start:
            raise ValueError(f"Range grid needs step > 0 and stop >= start, got {text}")
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 10) for i in range(count)]
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError(f"Could not parse grid: {text}")
