"""Assemble channels into a panel and apply latent cross-channel mixing."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bundles
from .bundles import ALL_KINDS, BundleDraw, BundleKind, DifficultySpec
from .processes import standardize
from .rng import RngStream

# Fixed child indices under the panel root stream; changing these changes
# every generated dataset.
_DIFFICULTY_CHILD = 0
_LATENT_CHILD = 1
_CHANNELS_CHILD = 2


@dataclass(frozen=True)
class GeneratorConfig:
    """Full recipe for one panel."""

    length: int
    channels: int
    master_seed: int
    bundle_weights: tuple = (0.25, 0.25, 0.25, 0.25)
    bundle_filter: BundleKind | None = None
    difficulty: DifficultySpec = field(default_factory=DifficultySpec)
    latent_prob: float = 0.0
    difficulty_per_channel: bool = False

    def __post_init__(self):
        if self.channels < 1:
            raise ValueError(f"channel count must be >= 1, got {self.channels}")
        if self.length < 2:
            raise ValueError(f"panel length must be >= 2, got {self.length}")
        w = np.asarray(self.bundle_weights, dtype=float)
        if w.shape != (4,) or np.any(w < 0) or abs(w.sum() - 1.0) > 1e-6:
            raise ValueError(f"bundle weights must be 4 nonnegative values summing to 1, got {w}")
        if not 0.0 <= self.latent_prob <= 1.0:
            raise ValueError(f"latent probability must be in [0, 1], got {self.latent_prob}")

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "channels": self.channels,
            "master_seed": self.master_seed,
            "bundle_weights": list(self.bundle_weights),
            "bundle_filter": self.bundle_filter.value if self.bundle_filter else None,
            "difficulty": self.difficulty.mode,
            "latent_prob": self.latent_prob,
            "difficulty_per_channel": self.difficulty_per_channel,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "GeneratorConfig":
        return cls(
            length=d["length"],
            channels=d["channels"],
            master_seed=d["master_seed"],
            bundle_weights=tuple(d.get("bundle_weights", (0.25, 0.25, 0.25, 0.25))),
            bundle_filter=BundleKind(d["bundle_filter"]) if d.get("bundle_filter") else None,
            difficulty=DifficultySpec(d.get("difficulty", "default")),
            latent_prob=d.get("latent_prob", 0.0),
            difficulty_per_channel=d.get("difficulty_per_channel", False),
        )


@dataclass(frozen=True)
class LatentRecord:
    rho: float
    mix_matrix: np.ndarray

    def to_dict(self) -> dict:
        return {"rho": self.rho, "mix_matrix": self.mix_matrix.tolist()}


@dataclass
class Panel:
    """T x D data matrix plus the provenance of every channel."""

    data: np.ndarray
    channel_meta: list
    latent_record: LatentRecord | None = None
    difficulty: float = 0.0

    @property
    def length(self) -> int:
        return self.data.shape[0]

    @property
    def channels(self) -> int:
        return self.data.shape[1]

    def metadata(self) -> dict:
        return {
            "difficulty": self.difficulty,
            "channels": [m.to_dict() for m in self.channel_meta],
            "latent": self.latent_record.to_dict() if self.latent_record else None,
        }


def gen_panel(config: GeneratorConfig, workers: int = 1) -> Panel:
    """Generate a panel; parallel and sequential channel order agree bit-exactly."""
    return generate_from_stream(RngStream(config.master_seed), config, workers=workers)


def generate_from_stream(root: RngStream, config: GeneratorConfig, workers: int = 1) -> Panel:
    d_panel = bundles.sample_difficulty(root.child(_DIFFICULTY_CHILD), config.difficulty)
    chan_root = root.child(_CHANNELS_CHILD)

    def build(j: int):
        ch = chan_root.child(j)
        if config.bundle_filter is not None:
            kind = config.bundle_filter
        else:
            kind = ALL_KINDS[ch.child(0).categorical(config.bundle_weights)]
        if config.difficulty_per_channel:
            d = bundles.sample_difficulty(ch.child(1), config.difficulty)
        else:
            d = d_panel
        return bundles.gen_bundle(ch.child(2), kind, config.length, d)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(build, range(config.channels)))
    else:
        results = [build(j) for j in range(config.channels)]

    data = np.column_stack([series for series, _ in results])
    meta = [draw for _, draw in results]

    latent_stream = root.child(_LATENT_CHILD)
    latent = None
    if latent_stream.uniform() < config.latent_prob:
        data, latent = apply_latent(latent_stream, data, d_panel)
    return Panel(data=data, channel_meta=meta, latent_record=latent, difficulty=float(d_panel))


def apply_latent(
    s: RngStream, data: np.ndarray, d: float, rho: float | None = None
) -> tuple[np.ndarray, LatentRecord]:
    """Mix channels through A = (1 - rho) I + rho R with row-normalized R.

    Output channels are re-standardized so the unit-variance contract
    survives the mixing; at rho = 0 this is a no-op up to the eps term.
    """
    data = np.asarray(data, dtype=float)
    D = data.shape[1]
    if rho is None:
        rho = float(s.uniform(0.20, 0.50 + 0.20 * d))
    raw = s.normal(size=(D, D))
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    norms = np.where(norms == 0, 1.0, norms)
    mix = (1.0 - rho) * np.eye(D) + rho * (raw / norms)
    mixed = data @ mix.T
    out = np.column_stack([standardize(mixed[:, j], bundles.EPS_STANDARDIZE) for j in range(D)])
    return out, LatentRecord(rho=float(rho), mix_matrix=mix)


def write_panel_csv(panel: Panel, path) -> None:
    """CSV with an integer index column and one column per channel.

    Floats are written with repr so parsing them back is bit-exact.
    """
    path = Path(path)
    header = "index," + ",".join(f"ch{j}" for j in range(panel.channels))
    lines = [header]
    for t in range(panel.length):
        lines.append(str(t) + "," + ",".join(repr(v) for v in panel.data[t].tolist()))
    path.write_text("\n".join(lines) + "\n")


def write_panel_metadata(panel: Panel, config: GeneratorConfig, path) -> None:
    payload = {"config": config.to_dict(), **panel.metadata()}
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def read_panel_csv(path) -> np.ndarray:
    lines = Path(path).read_text().strip().split("\n")
    rows = [[float(cell) for cell in line.split(",")[1:]] for line in lines[1:]]
    return np.asarray(rows, dtype=float)
