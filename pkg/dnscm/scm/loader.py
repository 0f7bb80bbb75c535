# Copyright 2025 DNAi inc.

# Dual-licensed under the DNAi Free License v1.1 and the
# DNAi Commercial License v1.1.
# See the LICENSE files in the project root for details.

"""Load and save SCMs in the JSON variable-list format (see docs/scm_json.md)."""

import json
from pathlib import Path
from typing import Any, Dict, List

from dnscm.scm.mechanisms import AdditiveLinear
from dnscm.scm.model import Scm, StructuralEquation
from dnscm.scm.noise import NoiseSpec, law_from_dict


def scm_from_dict(document: Dict[str, Any]) -> Scm:
    """
    Build an additive-linear SCM from its JSON form.

    Each entry of ``variables`` needs ``name`` and ``noise``; ``parents`` and
    ``coeffs`` default to empty, and ``noise_name`` defaults to ``U_<name>``.

    Raises:
        ValueError: If the document is malformed or the model is invalid
    """
    entries = document.get("variables")
    if not isinstance(entries, list) or not entries:
        raise ValueError("SCM document needs a non-empty 'variables' list")

    equations: List[StructuralEquation] = []
    noises: List[NoiseSpec] = []
    for entry in entries:
        if "name" not in entry or "noise" not in entry:
            raise ValueError(f"Variable entry needs 'name' and 'noise': {entry}")
        name = str(entry["name"])
        parents = [str(p) for p in entry.get("parents", [])]
        coeffs = [float(c) for c in entry.get("coeffs", [])]
        if len(parents) != len(coeffs):
            raise ValueError(
                f"Variable {name} has {len(parents)} parents but {len(coeffs)} coeffs"
            )
        noise = NoiseSpec(str(entry.get("noise_name") or f"U_{name}"), law_from_dict(entry["noise"]))
        equations.append(
            StructuralEquation(
                target=name,
                parents=tuple(parents),
                mechanism=AdditiveLinear(tuple(coeffs)),
                noise=noise.name,
            )
        )
        noises.append(noise)
    return Scm(equations, noises)


def scm_to_dict(scm: Scm) -> Dict[str, Any]:
    """
    Serialize an additive-linear SCM.

    Raises:
        ValueError: If a mechanism is not AdditiveLinear
    """
    entries = []
    for equation in scm.equations:
        if not isinstance(equation.mechanism, AdditiveLinear):
            raise ValueError(
                f"Only AdditiveLinear mechanisms serialize to JSON ({equation.target} does not)"
            )
        entries.append(
            {
                "name": equation.target,
                "noise_name": equation.noise,
                "noise": scm.noise_for(equation.target).law.to_dict(),
                "parents": list(equation.parents),
                "coeffs": list(equation.mechanism.coefficients),
            }
        )
    return {"variables": entries}


def load_scm(path: str) -> Scm:
    """
    Read an SCM from a JSON file.

    Raises:
        FileNotFoundError: If the file does not exist
        ValueError: If the document is invalid
    """
    file_path = Path(path)
    if not file_path.exists():
        raise FileNotFoundError(f"SCM file not found: {path}")
    with open(file_path, "r", encoding="utf-8") as f:
        return scm_from_dict(json.load(f))
