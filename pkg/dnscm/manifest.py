# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Manifest generation for DNSCM experiment runs."""

import json
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

from dnscm.__version__ import __version__
from dnscm.config import ExperimentConfig


def generate_manifest(
    command: str,
    config: ExperimentConfig,
    output_files: List[str],
    summary: Optional[Dict[str, Any]] = None,
) -> str:
    """
    Write the effective configuration of a run next to its outputs.

    Args:
        command: Experiment command (ewm-example, densities, ...)
        config: Effective configuration after profile, file and flag merging
        output_files: Paths of the files the run wrote
        summary: Optional command-specific results

    Returns:
        Path to the generated manifest file
    """
    manifest_path = Path(config.out_dir) / f"{command}.manifest.json"
    manifest_path.parent.mkdir(parents=True, exist_ok=True)

    manifest: Dict[str, Any] = {
        "dnscm_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        "command": command,
        "config": config.to_dict(),
        "output_files": [str(Path(p).absolute()) for p in output_files],
    }
    if summary:
        manifest["summary"] = summary

    with open(manifest_path, "w", encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, ensure_ascii=False)

    return str(manifest_path)


def read_manifest(manifest_path: str) -> Dict[str, Any]:
    """
    Read a manifest file.

    Args:
        manifest_path: Path to manifest file

    Returns:
        Dictionary with manifest data

    Raises:
        FileNotFoundError: If manifest file doesn't exist
        json.JSONDecodeError: If manifest file is invalid JSON
    """
    with open(manifest_path, "r", encoding="utf-8") as f:
        return json.load(f)
