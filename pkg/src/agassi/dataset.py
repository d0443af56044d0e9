"""Labeled correlation-time-series datasets: generation over the phase
mesh, CSV persistence with a provenance header, and deterministic
train/val/test splits.

A dataset row is one phase-diagram point: its coordinates, its label
(plus coexisting labels if it sits on a critical surface) and the
correlation trace sampled on a fixed time grid.  Bytes are fully
determined by (config, mesh, seed): generation is data-parallel but
order-preserving, and floats are written with 17 significant digits so
files round-trip losslessly.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from joblib import Parallel, delayed

from .evolution import ExactPropagator, TrotterPropagator, basis_state, correlation_block
from .hamiltonian import ModelParams, ScaledParams, build_hamiltonian, scale_params, trotter_groups
from .phases import LABEL_INDEX, MeshSpec, PhaseLabel, PhasePoint, classify_phase, generate_mesh

DEFAULT_STATE = "dddduuuu"


@dataclass(frozen=True)
class SeriesConfig:
    """What to measure and how to evolve.

    The default reproduces the pipeline's standard observable: the
    connected z-z correlator between sites 1 and 2, for the product
    state down^4 up^4, sampled at t = 0.1 ... 10.0 in steps of 0.1.
    """

    site_i: int = 1
    site_k: int = 2
    axis_i: str = "z"
    axis_k: str = "z"
    state: str = DEFAULT_STATE
    mode: str = "exact"  # "exact" or "trotter"
    n_trotter: int = 6
    n_times: int = 100
    dt: float = 0.1
    epsilon: float = 1.0
    j: int = 2

    def __post_init__(self):
        if self.mode not in ("exact", "trotter"):
            raise ValueError("mode must be 'exact' or 'trotter'")
        if self.site_i == self.site_k:
            raise ValueError("correlation sites must differ")
        if self.n_trotter < 1 or self.n_times < 1 or self.dt <= 0:
            raise ValueError("bad time grid / step count")
        if self.mode == "exact":
            # step count is meaningless for exact evolution; canonicalize so
            # equivalent configs hash identically
            object.__setattr__(self, "n_trotter", 1)

    def times(self) -> np.ndarray:
        """Sample times; the grid starts at dt (t=0 carries no signal for
        product states)."""
        return np.arange(1, self.n_times + 1) * self.dt

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, s: str) -> "SeriesConfig":
        return cls(**json.loads(s))

    def hash(self) -> str:
        return hashlib.sha256(self.to_json().encode()).hexdigest()[:12]


def generate_series(point: PhasePoint, cfg: SeriesConfig) -> np.ndarray:
    """Correlation trace for one phase point under the configured evolution."""
    params = scale_params(
        ScaledParams(point.chi, point.sigma, point.lambda_), cfg.epsilon, cfg.j
    )
    h = build_hamiltonian(params)
    psi0 = basis_state(cfg.state, n_qubits=params.n_sites)
    times = cfg.times()
    try:
        if cfg.mode == "exact":
            block = ExactPropagator(h).evolve_grid(psi0, times)
        else:
            block = TrotterPropagator(trotter_groups(h), cfg.n_trotter).evolve_grid(
                psi0, times
            )
        return correlation_block(block, cfg.site_i, cfg.site_k, cfg.axis_i, cfg.axis_k)
    except Exception as exc:
        raise RuntimeError(
            f"series generation failed at (chi={point.chi}, sigma={point.sigma}, "
            f"lambda={point.lambda_}): {exc}"
        ) from exc


@dataclass
class Dataset:
    """Rows of (phase point, label, features) plus generation provenance."""

    points: tuple[PhasePoint, ...]
    features: np.ndarray  # (n_rows, n_times)
    config: SeriesConfig
    scaled: bool = False

    def __post_init__(self):
        if self.features.shape[0] != len(self.points):
            raise ValueError("row count mismatch between points and features")

    def __len__(self) -> int:
        return len(self.points)

    def labels(self) -> np.ndarray:
        return np.array([LABEL_INDEX[pt.label] for pt in self.points], dtype=np.int64)

    def subset(self, indices: np.ndarray) -> "Dataset":
        return Dataset(
            points=tuple(self.points[i] for i in indices),
            features=self.features[indices],
            config=self.config,
            scaled=self.scaled,
        )


def build_dataset(
    mesh: list[PhasePoint],
    cfg: SeriesConfig,
    n_jobs: int = 1,
    verbose: int = 0,
) -> Dataset:
    """One row per mesh point, in mesh order regardless of scheduling."""
    if n_jobs == 1:
        rows = [generate_series(pt, cfg) for pt in mesh]
    else:
        rows = Parallel(n_jobs=n_jobs, verbose=verbose)(
            delayed(generate_series)(pt, cfg) for pt in mesh
        )
    return Dataset(points=tuple(mesh), features=np.array(rows), config=cfg)


# ---------------------------------------------------------------------------
# CSV persistence
# ---------------------------------------------------------------------------


def _encode_boundary(b: frozenset[PhaseLabel]) -> str:
    return "|".join(sorted(lab.value for lab in b))


def _decode_boundary(s: str) -> frozenset[PhaseLabel]:
    if not s:
        return frozenset()
    return frozenset(PhaseLabel(tok) for tok in s.split("|"))


def write_dataset(ds: Dataset, path: str) -> None:
    n_feat = ds.features.shape[1]
    header = ["chi", "sigma", "lambda", "label", "boundary"] + [
        f"c_{i:03d}" for i in range(1, n_feat + 1)
    ]
    with open(path, "w") as fh:
        fh.write("# agassi dataset v1\n")
        fh.write(f"# config: {ds.config.to_json()}\n")
        fh.write(f"# config_hash: {ds.config.hash()}\n")
        fh.write(f"# scaled: {int(ds.scaled)}\n")
        fh.write(",".join(header) + "\n")
        for pt, row in zip(ds.points, ds.features):
            cells = [
                f"{pt.chi:.17g}",
                f"{pt.sigma:.17g}",
                f"{pt.lambda_:.17g}",
                pt.label.value,
                _encode_boundary(pt.boundary),
            ] + [f"{x:.17g}" for x in row]
            fh.write(",".join(cells) + "\n")


def read_dataset(path: str) -> Dataset:
    config = None
    scaled = False
    points: list[PhasePoint] = []
    rows: list[list[float]] = []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("config:"):
                    config = SeriesConfig.from_json(body[len("config:") :].strip())
                elif body.startswith("scaled:"):
                    scaled = bool(int(body[len("scaled:") :].strip()))
                continue
            if line.startswith("chi,"):
                continue
            cells = line.split(",")
            chi, sigma, lam = float(cells[0]), float(cells[1]), float(cells[2])
            label = PhaseLabel(cells[3])
            boundary = _decode_boundary(cells[4])
            points.append(PhasePoint(chi, sigma, lam, label, boundary))
            rows.append([float(x) for x in cells[5:]])
    if config is None:
        raise ValueError(f"{path}: missing config header")
    return Dataset(
        points=tuple(points), features=np.array(rows), config=config, scaled=scaled
    )


# ---------------------------------------------------------------------------
# Splits
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitSpec:
    """Shuffle-then-slice fractions.  Sizes of the val and test parts are
    floored; the train part takes the remainder, so the three parts always
    partition the rows."""

    train: float
    val: float
    test: float
    seed: int = 0

    def __post_init__(self):
        if abs(self.train + self.val + self.test - 1.0) > 1e-9:
            raise ValueError("fractions must sum to 1")
        if min(self.train, self.val, self.test) < 0:
            raise ValueError("fractions must be nonnegative")


#: Protocols used for the headline results.
MLP_SPLIT = SplitSpec(train=0.9, val=0.0, test=0.1, seed=0)
CNN_SPLIT = SplitSpec(train=0.8, val=0.1, test=0.1, seed=0)


@dataclass(frozen=True)
class SplitIndices:
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray

    def to_json(self) -> str:
        return json.dumps(
            {
                "train": self.train.tolist(),
                "val": self.val.tolist(),
                "test": self.test.tolist(),
            }
        )

    @classmethod
    def from_json(cls, s: str) -> "SplitIndices":
        d = json.loads(s)
        return cls(
            train=np.array(d["train"], dtype=np.int64),
            val=np.array(d["val"], dtype=np.int64),
            test=np.array(d["test"], dtype=np.int64),
        )


def split_indices(n_rows: int, spec: SplitSpec) -> SplitIndices:
    if n_rows < 1:
        raise ValueError("empty dataset")
    perm = np.random.default_rng(spec.seed).permutation(n_rows)
    n_val = int(np.floor(spec.val * n_rows))
    n_test = int(np.floor(spec.test * n_rows))
    n_train = n_rows - n_val - n_test
    if n_train <= 0 or (spec.test > 0 and n_test == 0) or (spec.val > 0 and n_val == 0):
        raise ValueError("a requested split part came out empty")
    return SplitIndices(
        train=np.sort(perm[:n_train]),
        val=np.sort(perm[n_train : n_train + n_val]),
        test=np.sort(perm[n_train + n_val :]),
    )


def split_dataset(ds: Dataset, spec: SplitSpec) -> tuple[Dataset, Dataset, Dataset, SplitIndices]:
    idx = split_indices(len(ds), spec)
    return ds.subset(idx.train), ds.subset(idx.val), ds.subset(idx.test), idx
