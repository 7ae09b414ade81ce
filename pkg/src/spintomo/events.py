"""Event containers and on-disk formats.

Decay directions are stored as (cos_theta, phi) pairs per parent to avoid
precision loss at the poles.  Files are JSON-lines or CSV with header
columns (cos_theta1, phi1[, cos_theta2, phi2], weight), plus a metadata
sidecar JSON describing how the sample was produced.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass
class EventArray:
    """Columnar batch of single or pair decay events."""

    cos_theta1: np.ndarray
    phi1: np.ndarray
    cos_theta2: np.ndarray | None = None
    phi2: np.ndarray | None = None
    weight: np.ndarray | None = None

    def __post_init__(self):
        self.cos_theta1 = np.asarray(self.cos_theta1, dtype=float)
        self.phi1 = np.asarray(self.phi1, dtype=float)
        if (self.cos_theta2 is None) != (self.phi2 is None):
            raise ValueError("cos_theta2 and phi2 must be given together")
        if self.cos_theta2 is not None:
            self.cos_theta2 = np.asarray(self.cos_theta2, dtype=float)
            self.phi2 = np.asarray(self.phi2, dtype=float)
        if self.weight is not None:
            self.weight = np.asarray(self.weight, dtype=float)

    @property
    def n(self):
        return len(self.cos_theta1)

    @property
    def is_pair(self):
        return self.cos_theta2 is not None

    @property
    def weights(self):
        return np.ones(self.n) if self.weight is None else self.weight

    def swapped(self):
        """Pair events with the two parent labels exchanged."""
        if not self.is_pair:
            raise ValueError("label swap requires pair events")
        return EventArray(cos_theta1=self.cos_theta2, phi1=self.phi2,
                          cos_theta2=self.cos_theta1, phi2=self.phi1,
                          weight=self.weight)

    def columns(self):
        cols = {"cos_theta1": self.cos_theta1, "phi1": self.phi1}
        if self.is_pair:
            cols["cos_theta2"] = self.cos_theta2
            cols["phi2"] = self.phi2
        cols["weight"] = self.weights
        return cols


def concatenate(parts):
    parts = list(parts)
    if not parts:
        raise ValueError("cannot concatenate zero event arrays")
    pair = parts[0].is_pair
    if any(p.is_pair != pair for p in parts):
        raise ValueError("mixed single/pair event arrays")
    weight = None
    if any(p.weight is not None for p in parts):
        weight = np.concatenate([p.weights for p in parts])
    return EventArray(
        cos_theta1=np.concatenate([p.cos_theta1 for p in parts]),
        phi1=np.concatenate([p.phi1 for p in parts]),
        cos_theta2=np.concatenate([p.cos_theta2 for p in parts]) if pair else None,
        phi2=np.concatenate([p.phi2 for p in parts]) if pair else None,
        weight=weight)


def write_jsonl(events: EventArray, path):
    cols = events.columns()
    names = list(cols)
    with open(path, "w") as fh:
        for i in range(events.n):
            fh.write(json.dumps({k: float(cols[k][i]) for k in names}) + "\n")


def read_jsonl(path) -> EventArray:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return _from_rows(rows)


def write_csv(events: EventArray, path):
    cols = events.columns()
    names = list(cols)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for i in range(events.n):
            writer.writerow([f"{cols[k][i]:.12g}" for k in names])


def read_csv(path) -> EventArray:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = [{k: float(v) for k, v in row.items()} for row in reader]
    return _from_rows(rows)


def _from_rows(rows):
    if not rows:
        raise ValueError("event file contains no events")
    pair = "cos_theta2" in rows[0]
    get = lambda key: np.array([r[key] for r in rows])
    return EventArray(
        cos_theta1=get("cos_theta1"), phi1=get("phi1"),
        cos_theta2=get("cos_theta2") if pair else None,
        phi2=get("phi2") if pair else None,
        weight=get("weight") if "weight" in rows[0] else None)


def metadata_path(event_path):
    p = Path(event_path)
    return p.with_name(p.stem + ".meta.json")


def write_metadata(event_path, metadata: dict):
    with open(metadata_path(event_path), "w") as fh:
        json.dump(metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_metadata(event_path) -> dict:
    with open(metadata_path(event_path)) as fh:
        return json.load(fh)
