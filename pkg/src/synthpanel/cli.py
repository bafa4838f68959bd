"""Command-line client for the synthpanel service.

Runs against an in-process copy of the HTTP app by default, so no server
needs to be started; ``--server URL`` points every command at a remote
instance instead.
"""

from __future__ import annotations

import json
import sys

import click
import httpx

BUNDLES = ("st", "nr", "lm", "ve", "all")
DIFFICULTIES = ("default", "uniform", "easy", "medium", "hard")
MODES = ("real", "mixed", "anneal", "anneal_inverse")
STRATEGIES = ("hard", "gradual")


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # starlette 1.x warns that its test client prefers httpx2; plain
        # httpx is fully supported and httpx2 is not a dependency here.
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

        from .service import app

        return TestClient(app)


def _post(client, path: str, payload: dict) -> dict:
    resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        raise click.ClickException(f"{path} failed ({resp.status_code}): {detail}")
    return resp.json()


def _panel_payload(seed, length, channels, bundle, difficulty, latent_prob):
    return {
        "seed": seed,
        "length": length,
        "channels": channels,
        "bundle": bundle,
        "difficulty": difficulty,
        "latent_prob": latent_prob,
    }


def _parse_splits(text: str) -> list:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise click.ClickException(f"--splits must be three comma-separated numbers, got {text!r}")
    if len(parts) != 3:
        raise click.ClickException(f"--splits must have three fields, got {len(parts)}")
    return parts


@click.group()
@click.option("--server", default=None, help="Remote service URL; default runs in-process.")
@click.pass_context
def main(ctx, server):
    """Synthetic time-series panels, data mixing, and profiling."""
    ctx.obj = {"server": server}


@main.command()
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--length", default=512, show_default=True, type=int, help="Synthetic panel length.")
@click.option("--channels", default=1, show_default=True, type=int)
@click.option("--bundle", default="all", show_default=True, type=click.Choice(BUNDLES))
@click.option("--difficulty", default="default", show_default=True, type=click.Choice(DIFFICULTIES))
@click.option("--latent-prob", default=0.0, show_default=True, type=float)
@click.option("--real", "real_path", default=None, type=click.Path(), help="Real CSV to mix with.")
@click.option("--splits", default="0.7,0.1,0.2", show_default=True)
@click.option("--mode", default="real", show_default=True, type=click.Choice(MODES))
@click.option("--synth-ratio", default=0.0, show_default=True, type=float)
@click.option("--sparsity", default=1.0, show_default=True, type=float)
@click.option("--contiguous-sparsity", is_flag=True,
              help="Retain the leading window prefix instead of a uniform subsample.")
@click.option("--strategy", default="gradual", show_default=True, type=click.Choice(STRATEGIES))
@click.option("--anneal-epoch", default=0, show_default=True, type=int)
@click.option("--epochs", default=10, show_default=True, type=int)
@click.option("--cache-size", default=0, show_default=True, type=int)
@click.option("--input-len", default=96, show_default=True, type=int)
@click.option("--label-len", default=48, show_default=True, type=int)
@click.option("--horizon", default=96, show_default=True, type=int)
@click.option("--stride", default=1, show_default=True, type=int)
@click.option("--out", required=True, type=click.Path(), help="Output directory.")
@click.pass_context
def generate(ctx, seed, length, channels, bundle, difficulty, latent_prob, real_path, splits,
             mode, synth_ratio, sparsity, contiguous_sparsity, strategy, anneal_epoch, epochs,
             cache_size, input_len, label_len, horizon, stride, out):
    """Write a dataset (pure synthetic, or mixed with real data) plus manifest."""
    payload = _panel_payload(seed, length, channels, bundle, difficulty, latent_prob)
    payload.update(
        {
            "out_dir": out,
            "real_path": real_path,
            "splits": _parse_splits(splits),
            "window": {"input_len": input_len, "label_len": label_len, "horizon": horizon, "stride": stride},
            "mix": {
                "mode": mode,
                "synth_ratio": synth_ratio,
                "sparsity": sparsity,
                "contiguous_sparsity": contiguous_sparsity,
                "strategy": strategy,
                "anneal_epoch": anneal_epoch,
                "epochs": epochs,
                "cache_size": cache_size,
            },
        }
    )
    with _client(ctx.obj["server"]) as client:
        result = _post(client, "/generate", payload)
    for f in result["files"]:
        click.echo(f)


@main.command()
@click.option("--mode", default="mixed", show_default=True, type=click.Choice(MODES))
@click.option("--synth-ratio", default=1.0, show_default=True, type=float)
@click.option("--sparsity", default=1.0, show_default=True, type=float)
@click.option("--strategy", default="gradual", show_default=True, type=click.Choice(STRATEGIES))
@click.option("--anneal-epoch", default=0, show_default=True, type=int)
@click.option("--epochs", default=10, show_default=True, type=int)
@click.option("--cache-size", default=0, show_default=True, type=int)
@click.option("--train-windows", default=None, type=int,
              help="Pre-sparsity real training window count (default 1000 unless --real).")
@click.option("--real", "real_path", default=None, type=click.Path(),
              help="Derive the window count from this CSV's train split instead.")
@click.option("--splits", default="0.7,0.1,0.2", show_default=True)
@click.option("--input-len", default=96, show_default=True, type=int)
@click.option("--label-len", default=48, show_default=True, type=int)
@click.option("--horizon", default=96, show_default=True, type=int)
@click.option("--stride", default=1, show_default=True, type=int)
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of the table.")
@click.pass_context
def plan(ctx, mode, synth_ratio, sparsity, strategy, anneal_epoch, epochs, cache_size,
         train_windows, real_path, splits, input_len, label_len, horizon, stride, as_json):
    """Print the per-epoch real/synthetic schedule."""
    payload = {
        "mode": mode,
        "synth_ratio": synth_ratio,
        "sparsity": sparsity,
        "strategy": strategy,
        "anneal_epoch": anneal_epoch,
        "epochs": epochs,
        "cache_size": cache_size,
    }
    if real_path is not None:
        payload.update(
            {
                "real_path": real_path,
                "splits": _parse_splits(splits),
                "window": {"input_len": input_len, "label_len": label_len,
                           "horizon": horizon, "stride": stride},
            }
        )
    else:
        payload["orig_train_size"] = train_windows if train_windows is not None else 1000
    with _client(ctx.obj["server"]) as client:
        result = _post(client, "/plan", payload)
    if as_json:
        click.echo(json.dumps(result["epochs"], indent=2))
    else:
        click.echo(result["table"])


def _source_payload(real_path, seed, length, channels, bundle, difficulty, latent_prob, max_lag):
    payload = {"max_lag": max_lag}
    if real_path:
        payload["real_path"] = real_path
    else:
        payload["panel"] = _panel_payload(seed, length, channels, bundle, difficulty, latent_prob)
    return payload


_source_options = [
    click.option("--real", "real_path", default=None, type=click.Path()),
    click.option("--seed", default=0, show_default=True, type=int),
    click.option("--length", default=4096, show_default=True, type=int),
    click.option("--channels", default=1, show_default=True, type=int),
    click.option("--bundle", default="all", show_default=True, type=click.Choice(BUNDLES)),
    click.option("--difficulty", default="default", show_default=True, type=click.Choice(DIFFICULTIES)),
    click.option("--latent-prob", default=0.0, show_default=True, type=float),
    click.option("--max-lag", default=20, show_default=True, type=int),
    click.option("--out", default=None, type=click.Path(), help="Write JSON here instead of stdout."),
]


def _with_source_options(fn):
    for opt in reversed(_source_options):
        fn = opt(fn)
    return fn


@main.command()
@_with_source_options
@click.pass_context
def validate(ctx, real_path, seed, length, channels, bundle, difficulty, latent_prob, max_lag, out):
    """Run the estimator battery on a real CSV or a generated panel."""
    payload = _source_payload(real_path, seed, length, channels, bundle, difficulty, latent_prob, max_lag)
    with _client(ctx.obj["server"]) as client:
        result = _post(client, "/validate", payload)
    _emit_json(result["report"], out)


@main.command()
@_with_source_options
@click.pass_context
def profile(ctx, real_path, seed, length, channels, bundle, difficulty, latent_prob, max_lag, out):
    """Rank bundle kinds by how well they align with the source."""
    payload = _source_payload(real_path, seed, length, channels, bundle, difficulty, latent_prob, max_lag)
    with _client(ctx.obj["server"]) as client:
        result = _post(client, "/profile", payload)
    _emit_json({"ranking": result["ranking"]}, out)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8717, show_default=True, type=int)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("synthpanel.service:app", host=host, port=port)


def _emit_json(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
        click.echo(out)
    else:
        click.echo(text)


if __name__ == "__main__":
    main(prog_name="synthpanel")
