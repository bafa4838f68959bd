"""Real-data ingestion, mixing budgets, annealing schedules, cache, emission.

The emitted dataset is row-level CSV per split plus a manifest that defines
the window-level training set: which real windows survive sparsity, which
synthetic windows exist, and how many of each every epoch uses.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .panel import GeneratorConfig, Panel, generate_from_stream
from .rng import RngStream

MIX_MODES = ("real", "mixed", "anneal", "anneal_inverse")
STRATEGIES = ("hard", "gradual")

# Fixed child indices under the pipeline root stream.
_SPARSITY_CHILD = 0
_CACHE_CHILD = 1
_EMIT_CHILD = 2
_EPOCH_CHILD = 3


@dataclass(frozen=True)
class RealDataset:
    """Chronologically split real data; val and test are never reduced."""

    path: str
    column_names: list
    timestamps: list
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    split_fractions: tuple

    @property
    def channels(self) -> int:
        return self.train.shape[1]

    @property
    def rows(self) -> int:
        return len(self.timestamps)


@dataclass(frozen=True)
class WindowSpec:
    input_len: int = 96
    label_len: int = 48
    horizon: int = 96
    stride: int = 1

    def __post_init__(self):
        if self.input_len <= 0 or self.horizon <= 0:
            raise ValueError("input length and horizon must be positive")
        if not 0 <= self.label_len <= self.input_len:
            raise ValueError(
                f"label length must be in [0, input_len], got {self.label_len} > {self.input_len}"
            )
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")

    @property
    def total(self) -> int:
        return self.input_len + self.horizon

    def to_dict(self) -> dict:
        return {
            "input_len": self.input_len,
            "label_len": self.label_len,
            "horizon": self.horizon,
            "stride": self.stride,
        }


@dataclass(frozen=True)
class MixPlan:
    mode: str = "real"
    synth_ratio: float = 0.0
    sparsity: float = 1.0
    strategy: str = "gradual"
    anneal_epoch: int = 0
    epochs: int = 10
    cache_size: int = 0

    def __post_init__(self):
        if self.mode not in MIX_MODES:
            raise ValueError(f"mode must be one of {MIX_MODES}, got {self.mode!r}")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.synth_ratio < 0:
            raise ValueError(f"synth ratio must be >= 0, got {self.synth_ratio}")
        if not 0 < self.sparsity <= 1:
            raise ValueError(f"sparsity must be in (0, 1], got {self.sparsity}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if not 0 <= self.anneal_epoch < self.epochs:
            raise ValueError(
                f"anneal epoch must be in [0, epochs), got {self.anneal_epoch} with E={self.epochs}"
            )
        if self.cache_size < 0:
            raise ValueError(f"cache size must be >= 0, got {self.cache_size}")
        if self.mode in ("anneal", "anneal_inverse") and self.strategy == "gradual" and self.epochs < 2:
            raise ValueError("gradual annealing needs at least 2 epochs")

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "synth_ratio": self.synth_ratio,
            "sparsity": self.sparsity,
            "strategy": self.strategy,
            "anneal_epoch": self.anneal_epoch,
            "epochs": self.epochs,
            "cache_size": self.cache_size,
        }


@dataclass(frozen=True)
class EpochEntry:
    epoch: int
    n_real: int
    n_synth: int
    ratio: float

    def to_dict(self) -> dict:
        return {"epoch": self.epoch, "n_real": self.n_real, "n_synth": self.n_synth, "ratio": self.ratio}


@dataclass(frozen=True)
class EpochPlan:
    entries: tuple

    def to_dict(self) -> dict:
        return {"epochs": [e.to_dict() for e in self.entries]}

    def max_synth(self) -> int:
        return max((e.n_synth for e in self.entries), default=0)

    def as_table(self) -> str:
        lines = [f"{'epoch':>5}  {'ratio':>7}  {'n_real':>8}  {'n_synth':>8}"]
        for e in self.entries:
            lines.append(f"{e.epoch:>5}  {e.ratio:>7.4f}  {e.n_real:>8}  {e.n_synth:>8}")
        return "\n".join(lines)


def load_real_csv(path, splits=(0.7, 0.1, 0.2)) -> RealDataset:
    """Parse a timestamped CSV and split it chronologically.

    First column is the timestamp (kept verbatim), every other column must
    be numeric. Ragged rows, non-numeric cells, fewer than two columns, or
    an all-numeric first row (no header) are rejected.
    """
    splits = tuple(float(f) for f in splits)
    if len(splits) != 3 or any(f <= 0 for f in splits) or abs(sum(splits) - 1.0) > 1e-9:
        raise ValueError(f"split fractions must be three positive values summing to 1, got {splits}")
    path = Path(path)
    with path.open(newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ValueError(f"{path}: empty file")
    header = rows[0]
    if len(header) < 2:
        raise ValueError(f"{path}: need a timestamp column plus at least one value column")
    if all(_is_number(cell) for cell in header):
        raise ValueError(f"{path}: first row looks like data; a header row is required")
    width = len(header)
    timestamps = []
    values = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != width:
            raise ValueError(f"{path}: row {i} has {len(row)} cells, expected {width}")
        timestamps.append(row[0])
        try:
            values.append([float(c) for c in row[1:]])
        except ValueError:
            raise ValueError(f"{path}: row {i} contains a non-numeric value cell") from None
    data = np.asarray(values, dtype=float)
    n = len(data)
    n_train = int(np.floor(splits[0] * n))
    n_val = int(np.floor(splits[1] * n))
    return RealDataset(
        path=str(path),
        column_names=header,
        timestamps=timestamps,
        train=data[:n_train],
        val=data[n_train : n_train + n_val],
        test=data[n_train + n_val :],
        split_fractions=splits,
    )


def window_count(rows: int, spec: WindowSpec) -> int:
    if rows < spec.total:
        raise ValueError(f"need at least {spec.total} rows for one window, got {rows}")
    return (rows - spec.total) // spec.stride + 1


def make_windows(matrix: np.ndarray, spec: WindowSpec) -> tuple[np.ndarray, np.ndarray]:
    """All sliding windows of length input_len + horizon, as a zero-copy view.

    Returns (windows, starts); windows[i, :spec.input_len] is the input
    slice and the rest is the forecast target.
    """
    matrix = np.asarray(matrix)
    n = window_count(len(matrix), spec)
    view = np.lib.stride_tricks.sliding_window_view(matrix, (spec.total, matrix.shape[1]))
    windows = view[:: spec.stride, 0][:n]
    starts = np.arange(n) * spec.stride
    return windows, starts


def apply_sparsity(s: RngStream, n_windows: int, sparsity: float, contiguous: bool = False) -> np.ndarray:
    """Keep floor(sparsity * n) window indices, ascending.

    Uniform subsampling by default; ``contiguous`` keeps the leading prefix
    instead, for comparisons.
    """
    if not 0 < sparsity <= 1:
        raise ValueError(f"sparsity must be in (0, 1], got {sparsity}")
    keep = int(np.floor(sparsity * n_windows))
    if contiguous:
        return np.arange(keep)
    chosen = s.generator.choice(n_windows, size=keep, replace=False)
    return np.sort(chosen)


def synth_count(orig_train_size: int, synth_ratio: float) -> int:
    """Synthetic budget as a multiple of the pre-sparsity real size."""
    if synth_ratio < 0:
        raise ValueError(f"synth ratio must be >= 0, got {synth_ratio}")
    return int(np.floor(orig_train_size * synth_ratio))


def anneal_ratio(e: int, plan: MixPlan) -> float:
    """Synthetic ratio at epoch e under the plan's mode and strategy."""
    if not 0 <= e < plan.epochs:
        raise ValueError(f"epoch {e} outside [0, {plan.epochs})")
    if plan.mode == "real":
        return 0.0
    if plan.mode == "mixed":
        return plan.synth_ratio
    r_start, r_end = (1.0, 0.0) if plan.mode == "anneal" else (0.0, 1.0)
    if plan.strategy == "hard":
        return r_start if e < plan.anneal_epoch else r_end
    # Barycentric form of r_start + e/(E-1) (r_end - r_start): exactly
    # symmetric between the two anneal directions, so floored budgets match.
    last = plan.epochs - 1
    return (r_start * (last - e) + r_end * e) / last


def build_epoch_plan(plan: MixPlan, orig_train_size: int, sparse_train_size: int) -> EpochPlan:
    """Per-epoch (n_real, n_synth) counts; real windows are always all present."""
    entries = []
    for e in range(plan.epochs):
        r = anneal_ratio(e, plan)
        n_synth = synth_count(orig_train_size, r)
        entries.append(EpochEntry(epoch=e, n_real=sparse_train_size, n_synth=n_synth, ratio=r))
    return EpochPlan(tuple(entries))


@dataclass(frozen=True)
class SampleCache:
    """Fixed set of pre-generated panels; capacity 0 means generate fresh."""

    capacity: int
    config: GeneratorConfig
    panels: tuple = ()

    def __post_init__(self):
        if self.capacity < 0:
            raise ValueError(f"cache capacity must be >= 0, got {self.capacity}")
        if len(self.panels) > self.capacity:
            raise ValueError("cache holds more panels than its capacity")


def init_cache(s: RngStream, config: GeneratorConfig, capacity: int) -> SampleCache:
    panels = tuple(generate_from_stream(s.child(i), config) for i in range(capacity))
    return SampleCache(capacity=capacity, config=config, panels=panels)


def draw_synthetic(cache: SampleCache, epoch_stream: RngStream, count: int) -> list:
    """``count`` panels: fresh ones at capacity 0, else uniform with replacement."""
    if count < 0:
        raise ValueError(f"draw count must be >= 0, got {count}")
    if cache.capacity == 0:
        return [generate_from_stream(epoch_stream.child(i), cache.config) for i in range(count)]
    if not cache.panels:
        raise ValueError("cannot draw from an empty cache with nonzero capacity")
    idx = epoch_stream.integers(0, len(cache.panels), size=count)
    return [cache.panels[int(i)] for i in idx]


def draw_synthetic_windows(
    cache: SampleCache, epoch_stream: RngStream, count: int, spec: WindowSpec
) -> tuple[list, list]:
    """``count`` windows, each cut from an independently drawn panel.

    Returns (windows, provenance) where provenance holds (panel, start).
    """
    panels = draw_synthetic(cache, epoch_stream.child(0), count)
    start_stream = epoch_stream.child(1)
    windows = []
    provenance = []
    for p in panels:
        n_starts = window_count(p.length, spec)
        start = int(start_stream.integers(0, n_starts)) * spec.stride
        windows.append(p.data[start : start + spec.total])
        provenance.append((p, start))
    return windows, provenance


# -- emission ------------------------------------------------------------------


def build_mixed_dataset(
    real: RealDataset,
    config: GeneratorConfig,
    plan: MixPlan,
    spec: WindowSpec,
    contiguous_sparsity: bool = False,
) -> dict:
    """Resolve the full mixing pipeline into an emission-ready bundle."""
    root = RngStream(config.master_seed)
    orig_windows = window_count(len(real.train), spec)
    retained = apply_sparsity(root.child(_SPARSITY_CHILD), orig_windows, plan.sparsity, contiguous_sparsity)
    epoch_plan = build_epoch_plan(plan, orig_windows, len(retained))

    cache = init_cache(root.child(_CACHE_CHILD), config, plan.cache_size)
    n_emit = epoch_plan.max_synth()
    _, provenance = draw_synthetic_windows(cache, root.child(_EMIT_CHILD), n_emit, spec)

    # Distinct panels in first-use order; windows reference their ordinal.
    ordinals: dict[int, int] = {}
    panels: list[Panel] = []
    synth_windows = []
    for p, start in provenance:
        key = id(p)
        if key not in ordinals:
            ordinals[key] = len(panels)
            panels.append(p)
        synth_windows.append({"panel": ordinals[key], "start": int(start)})

    return {
        "real": real,
        "config": config,
        "plan": plan,
        "window_spec": spec,
        "orig_windows": orig_windows,
        "retained": retained,
        "epoch_plan": epoch_plan,
        "synth_panels": panels,
        "synth_windows": synth_windows,
    }


def emit_dataset(out_dir, built: dict) -> list:
    """Write per-split CSVs plus the manifest; byte-identical per config+seed."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    real: RealDataset = built["real"]
    spec: WindowSpec = built["window_spec"]
    plan: MixPlan = built["plan"]
    config: GeneratorConfig = built["config"]

    n_train = len(real.train)
    n_val = len(real.val)
    ts = real.timestamps
    files = []

    def write_split(name: str, matrix: np.ndarray, stamps: list, extra_rows: list | None = None):
        path = out / f"{name}.csv"
        lines = [",".join(real.column_names)]
        for stamp, row in zip(stamps, matrix):
            lines.append(str(stamp) + "," + ",".join(repr(v) for v in row.tolist()))
        if extra_rows:
            lines.extend(extra_rows)
        path.write_text("\n".join(lines) + "\n")
        files.append(path)

    synth_rows = []
    panel_index = []
    row_cursor = 0
    for ordinal, p in enumerate(built["synth_panels"]):
        panel_index.append({"ordinal": ordinal, "first_row": row_cursor, "rows": p.length})
        for t in range(p.length):
            synth_rows.append(str(row_cursor) + "," + ",".join(repr(v) for v in p.data[t].tolist()))
            row_cursor += 1

    write_split("train", real.train, ts[:n_train], synth_rows)
    write_split("val", real.val, ts[n_train : n_train + n_val])
    write_split("test", real.test, ts[n_train + n_val :])

    manifest = {
        "seed": config.master_seed,
        "config": config.to_dict(),
        "mix": plan.to_dict(),
        "window": spec.to_dict(),
        "splits": {
            "fractions": list(real.split_fractions),
            "rows": {"train": n_train, "val": n_val, "test": len(real.test)},
        },
        "windows": {
            "orig_train": built["orig_windows"],
            "n_retained": int(len(built["retained"])),
            "retained": [int(i) for i in built["retained"]],
        },
        "epochs": built["epoch_plan"].to_dict()["epochs"],
        "provenance": {
            "real": [int(i * spec.stride) for i in built["retained"]],
            "synthetic": built["synth_windows"],
        },
        "synthetic_block": {
            "rows": row_cursor,
            "panels": panel_index,
            "channel_meta": [
                [m.to_dict() for m in p.channel_meta] for p in built["synth_panels"]
            ],
        },
        "epoch_order": "real windows first, then synthetic, within every epoch",
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2) + "\n")
    files.append(manifest_path)
    return files


def iter_epochs(plan: MixPlan, orig_train_size: int, sparse_train_size: int):
    """Yield (epoch, n_real, n_synth, ratio) for every epoch in the plan."""
    ep = build_epoch_plan(plan, orig_train_size, sparse_train_size)
    for e in ep.entries:
        yield e.epoch, e.n_real, e.n_synth, e.ratio


def epoch_windows(
    config: GeneratorConfig, cache_size: int, epoch: int, count: int, spec: WindowSpec
) -> list:
    """Synthetic training windows for one epoch.

    The cache is re-derived from the seed so repeated calls see the same
    fixed panels; epochs use disjoint streams, so capacity 0 yields fresh
    panels every epoch.
    """
    if epoch < 0:
        raise ValueError(f"epoch must be >= 0, got {epoch}")
    root = RngStream(config.master_seed)
    cache = init_cache(root.child(_CACHE_CHILD), config, cache_size)
    windows, _ = draw_synthetic_windows(cache, root.child(_EPOCH_CHILD).child(epoch), count, spec)
    return windows


def _is_number(cell: str) -> bool:
    try:
        float(cell)
        return True
    except ValueError:
        return False
