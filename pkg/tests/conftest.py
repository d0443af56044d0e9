import os
import pathlib
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))  # tests import shared oracles

CACHE_DIR = pathlib.Path(__file__).resolve().parent.parent / ".cache"


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def cache_path(name: str) -> pathlib.Path:
    CACHE_DIR.mkdir(exist_ok=True)
    return CACHE_DIR / name


def dataset_cached(cfg, mesh_steps: int = 21, n_jobs: int = 2):
    """Build-or-load a dataset keyed by its config hash; acceptance runs
    reuse generation across tests and across pytest invocations."""
    from agassi.dataset import build_dataset, read_dataset, write_dataset
    from agassi.phases import MeshSpec, generate_mesh

    path = cache_path(f"dataset_{cfg.hash()}_{mesh_steps}.csv")
    if path.exists():
        ds = read_dataset(str(path))
        if ds.config == cfg and len(ds) == mesh_steps**3:
            return ds
    mesh = generate_mesh(MeshSpec(steps=mesh_steps))
    ds = build_dataset(mesh, cfg, n_jobs=n_jobs)
    write_dataset(ds, str(path))
    return ds
