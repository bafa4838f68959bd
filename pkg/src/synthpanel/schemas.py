"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

BundleName = Literal["st", "nr", "lm", "ve", "all"]
DifficultyName = Literal["default", "uniform", "easy", "medium", "hard"]
ModeName = Literal["real", "mixed", "anneal", "anneal_inverse"]
StrategyName = Literal["hard", "gradual"]


class PanelRequest(BaseModel):
    seed: int = 0
    length: int = Field(default=512, ge=2)
    channels: int = Field(default=1, ge=1)
    bundle: BundleName = "all"
    difficulty: DifficultyName = "default"
    latent_prob: float = Field(default=0.0, ge=0.0, le=1.0)
    bundle_weights: Optional[list[float]] = None
    difficulty_per_channel: bool = False


class PanelResponse(BaseModel):
    data: list[list[float]]
    difficulty: float
    channel_meta: list[dict]
    latent: Optional[dict] = None


class WindowRequest(BaseModel):
    input_len: int = Field(default=96, ge=1)
    label_len: int = Field(default=48, ge=0)
    horizon: int = Field(default=96, ge=1)
    stride: int = Field(default=1, ge=1)


class MixRequest(BaseModel):
    mode: ModeName = "real"
    synth_ratio: float = Field(default=0.0, ge=0.0)
    sparsity: float = Field(default=1.0, gt=0.0, le=1.0)
    contiguous_sparsity: bool = False
    strategy: StrategyName = "gradual"
    anneal_epoch: int = Field(default=0, ge=0)
    epochs: int = Field(default=10, ge=1)
    cache_size: int = Field(default=0, ge=0)


class PlanRequest(MixRequest):
    """Window count given directly, or derived from a real CSV's train split."""

    orig_train_size: Optional[int] = Field(default=None, ge=0)
    real_path: Optional[str] = None
    splits: tuple[float, float, float] = (0.7, 0.1, 0.2)
    window: WindowRequest = Field(default_factory=WindowRequest)


class EpochRow(BaseModel):
    epoch: int
    n_real: int
    n_synth: int
    ratio: float


class PlanResponse(BaseModel):
    orig_train_size: int
    sparse_train_size: int
    epochs: list[EpochRow]
    table: str


class GenerateRequest(PanelRequest):
    out_dir: str
    real_path: Optional[str] = None
    splits: tuple[float, float, float] = (0.7, 0.1, 0.2)
    window: WindowRequest = Field(default_factory=WindowRequest)
    mix: MixRequest = Field(default_factory=MixRequest)


class GenerateResponse(BaseModel):
    out_dir: str
    files: list[str]
    n_real_windows: Optional[int] = None
    n_retained_windows: Optional[int] = None
    n_synth_windows: Optional[int] = None


class SourceRequest(BaseModel):
    """A series source: a server-local CSV path or an inline panel recipe."""

    real_path: Optional[str] = None
    panel: Optional[PanelRequest] = None
    max_lag: int = Field(default=20, ge=1)


class ProfileResponse(BaseModel):
    report: dict
    ranking: list[dict]


class WindowDrawRequest(BaseModel):
    panel: PanelRequest
    cache_size: int = Field(default=0, ge=0)
    epoch: int = Field(default=0, ge=0)
    count: int = Field(default=1, ge=0)
    window: WindowRequest = Field(default_factory=WindowRequest)


class WindowDrawResponse(BaseModel):
    count: int
    window_len: int
    channels: int
    windows: list[list[list[float]]]


class VersionResponse(BaseModel):
    version: str
