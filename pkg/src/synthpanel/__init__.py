"""Difficulty-conditioned synthetic time-series panels and data mixing."""

__version__ = "0.1.0"

from .bundles import BundleDraw, BundleKind, DifficultySpec, gen_bundle
from .panel import GeneratorConfig, Panel, apply_latent, gen_panel
from .pipeline import MixPlan, WindowSpec, build_epoch_plan, load_real_csv
from .rng import RngStream
from .stats import profile, recommend_bundle

__all__ = [
    "__version__",
    "BundleDraw",
    "BundleKind",
    "DifficultySpec",
    "GeneratorConfig",
    "MixPlan",
    "Panel",
    "RngStream",
    "WindowSpec",
    "apply_latent",
    "build_epoch_plan",
    "gen_bundle",
    "gen_panel",
    "load_real_csv",
    "profile",
    "recommend_bundle",
]
