"""Bundled synthetic dataset (see data/ and the repository README for how
it was constructed)."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .series import IngestOptions, SeriesStore, ingest_csv

FIXTURE_NAMES = ("paper_2017q2.csv", "app_2017q2.csv")


def fixture_csv_paths() -> list[Path]:
    data = resources.files("macronet") / "data"
    return [Path(str(data / name)) for name in FIXTURE_NAMES]


def fixture_store() -> SeriesStore:
    """Ingest the bundled CSVs into a fresh store."""
    store = None
    for path in fixture_csv_paths():
        store, _ = ingest_csv(path, IngestOptions(), into=store)
    return store
