"""HTTP service exposing panel generation, planning, validation, profiling.

All numeric payloads pass through JSON with repr-level precision, so a
value read back from a response equals the in-process float bit for bit.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException

from . import __version__, pipeline, schemas, stats
from .bundles import BundleKind, DifficultySpec
from .panel import GeneratorConfig, gen_panel, write_panel_csv, write_panel_metadata
from .pipeline import MixPlan, WindowSpec

app = FastAPI(title="synthpanel", version=__version__)


def config_from_request(req: schemas.PanelRequest) -> GeneratorConfig:
    weights = tuple(req.bundle_weights) if req.bundle_weights else (0.25, 0.25, 0.25, 0.25)
    return GeneratorConfig(
        length=req.length,
        channels=req.channels,
        master_seed=req.seed,
        bundle_weights=weights,
        bundle_filter=None if req.bundle == "all" else BundleKind(req.bundle),
        difficulty=DifficultySpec(req.difficulty),
        latent_prob=req.latent_prob,
        difficulty_per_channel=req.difficulty_per_channel,
    )


def plan_from_request(req: schemas.MixRequest) -> MixPlan:
    return MixPlan(
        mode=req.mode,
        synth_ratio=req.synth_ratio,
        sparsity=req.sparsity,
        strategy=req.strategy,
        anneal_epoch=req.anneal_epoch,
        epochs=req.epochs,
        cache_size=req.cache_size,
    )


def _bad_request(err: Exception) -> HTTPException:
    return HTTPException(status_code=400, detail=str(err))


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.get("/version", response_model=schemas.VersionResponse)
def version() -> dict:
    return {"version": __version__}


@app.post("/panel", response_model=schemas.PanelResponse)
def make_panel(req: schemas.PanelRequest) -> dict:
    try:
        panel = gen_panel(config_from_request(req))
    except ValueError as err:
        raise _bad_request(err) from err
    meta = panel.metadata()
    return {
        "data": panel.data.tolist(),
        "difficulty": panel.difficulty,
        "channel_meta": meta["channels"],
        "latent": meta["latent"],
    }


@app.post("/plan", response_model=schemas.PlanResponse)
def make_plan(req: schemas.PlanRequest) -> dict:
    try:
        if (req.orig_train_size is None) == (req.real_path is None):
            raise ValueError("provide exactly one of orig_train_size or real_path")
        if req.real_path is not None:
            real = pipeline.load_real_csv(req.real_path, req.splits)
            spec = WindowSpec(
                input_len=req.window.input_len,
                label_len=req.window.label_len,
                horizon=req.window.horizon,
                stride=req.window.stride,
            )
            orig = pipeline.window_count(len(real.train), spec)
        else:
            orig = req.orig_train_size
        plan = plan_from_request(req)
        sparse = int(np.floor(plan.sparsity * orig))
        epoch_plan = pipeline.build_epoch_plan(plan, orig, sparse)
    except FileNotFoundError as err:
        raise HTTPException(status_code=404, detail=str(err)) from err
    except ValueError as err:
        raise _bad_request(err) from err
    return {
        "orig_train_size": orig,
        "sparse_train_size": sparse,
        "epochs": [e.to_dict() for e in epoch_plan.entries],
        "table": epoch_plan.as_table(),
    }


@app.post("/generate", response_model=schemas.GenerateResponse)
def generate(req: schemas.GenerateRequest) -> dict:
    try:
        config = config_from_request(req)
        out = Path(req.out_dir)
        if req.real_path is None:
            out.mkdir(parents=True, exist_ok=True)
            panel = gen_panel(config)
            csv_path = out / "synthetic.csv"
            meta_path = out / "manifest.json"
            write_panel_csv(panel, csv_path)
            write_panel_metadata(panel, config, meta_path)
            return {"out_dir": str(out), "files": [str(csv_path), str(meta_path)]}
        real = pipeline.load_real_csv(req.real_path, req.splits)
        if real.channels != config.channels:
            config = GeneratorConfig(
                length=config.length,
                channels=real.channels,
                master_seed=config.master_seed,
                bundle_weights=config.bundle_weights,
                bundle_filter=config.bundle_filter,
                difficulty=config.difficulty,
                latent_prob=config.latent_prob,
                difficulty_per_channel=config.difficulty_per_channel,
            )
        spec = WindowSpec(
            input_len=req.window.input_len,
            label_len=req.window.label_len,
            horizon=req.window.horizon,
            stride=req.window.stride,
        )
        plan = plan_from_request(req.mix)
        built = pipeline.build_mixed_dataset(
            real, config, plan, spec, contiguous_sparsity=req.mix.contiguous_sparsity
        )
        files = pipeline.emit_dataset(out, built)
    except FileNotFoundError as err:
        raise HTTPException(status_code=404, detail=str(err)) from err
    except ValueError as err:
        raise _bad_request(err) from err
    return {
        "out_dir": str(out),
        "files": [str(f) for f in files],
        "n_real_windows": built["orig_windows"],
        "n_retained_windows": int(len(built["retained"])),
        "n_synth_windows": len(built["synth_windows"]),
    }


def _resolve_source(req: schemas.SourceRequest) -> np.ndarray:
    if (req.real_path is None) == (req.panel is None):
        raise ValueError("provide exactly one of real_path or panel")
    if req.real_path is not None:
        real = pipeline.load_real_csv(req.real_path)
        return np.concatenate([real.train, real.val, real.test])
    return gen_panel(config_from_request(req.panel)).data


@app.post("/windows", response_model=schemas.WindowDrawResponse)
def draw_windows(req: schemas.WindowDrawRequest) -> dict:
    try:
        config = config_from_request(req.panel)
        spec = WindowSpec(
            input_len=req.window.input_len,
            label_len=req.window.label_len,
            horizon=req.window.horizon,
            stride=req.window.stride,
        )
        windows = pipeline.epoch_windows(config, req.cache_size, req.epoch, req.count, spec)
    except ValueError as err:
        raise _bad_request(err) from err
    return {
        "count": len(windows),
        "window_len": spec.total,
        "channels": config.channels,
        "windows": [w.tolist() for w in windows],
    }


@app.post("/validate", response_model=schemas.ProfileResponse)
def validate(req: schemas.SourceRequest) -> dict:
    try:
        data = _resolve_source(req)
        report = stats.profile(data, max_lag=req.max_lag)
        ranking = stats.recommend_bundle(report)
    except FileNotFoundError as err:
        raise HTTPException(status_code=404, detail=str(err)) from err
    except ValueError as err:
        raise _bad_request(err) from err
    return {"report": report.to_dict(), "ranking": ranking.to_dict()["ranking"]}


@app.post("/profile", response_model=schemas.ProfileResponse)
def profile_source(req: schemas.SourceRequest) -> dict:
    return validate(req)
