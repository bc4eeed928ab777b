"""Versioned JSON persistence for trained models.

The file keeps one record per team (name plus winner and loser vector) in
registry order.  Floats are written as Python's shortest round-tripping
decimal representation, so a save/load cycle reproduces every vector
bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .match_data import TeamRegistry
from .trainer import EmbeddingModel, TrainConfig

MODEL_FORMAT_VERSION = 1


def save_model(
    model: EmbeddingModel, path: str | Path, train_config: TrainConfig | None = None
) -> None:
    """Write ``model`` as versioned JSON; see :func:`load_model`."""
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "delta": model.delta,
        "x_max": model.x_max,
        "train_config": asdict(train_config) if train_config is not None else None,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "teams": [
            {
                "name": name,
                "phi": model.phi[i].tolist(),
                "psi": model.psi[i].tolist(),
            }
            for i, name in enumerate(model.registry.names)
        ],
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(doc, f, indent=1)
        f.write("\n")


def read_model_file(path: str | Path) -> dict:
    """Load and structurally validate the raw model document."""
    with open(path, "r", encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: not valid JSON ({e})") from None
    if not isinstance(doc, dict) or doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(
            f"{path}: unsupported model file (expected format_version {MODEL_FORMAT_VERSION})"
        )
    teams = doc.get("teams")
    if not isinstance(teams, list) or not teams:
        raise ValueError(f"{path}: model file has no teams")
    return doc


def load_model(path: str | Path) -> EmbeddingModel:
    """Rebuild an :class:`EmbeddingModel` from a file written by :func:`save_model`."""
    doc = read_model_file(path)
    delta = doc["delta"]
    teams = doc["teams"]
    names = [t["name"] for t in teams]
    registry = TeamRegistry(names)
    if registry.m != len(teams):
        raise ValueError(f"{path}: duplicate team names in model file")
    phi = np.empty((len(teams), delta))
    psi = np.empty((len(teams), delta))
    for i, team in enumerate(teams):
        if len(team["phi"]) != delta or len(team["psi"]) != delta:
            raise ValueError(f"{path}: team {team['name']!r} has vectors of the wrong width")
        phi[i] = team["phi"]
        psi[i] = team["psi"]
    return EmbeddingModel(
        phi=phi, psi=psi, delta=delta, registry=registry, x_max=doc["x_max"]
    )
