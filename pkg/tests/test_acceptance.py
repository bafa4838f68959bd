"""Acceptance gate: one test per criterion, each printing a pass line.

Run with  pytest tests/test_acceptance.py -v -s  to see the per-criterion
report. Statistical criteria use fixed seeds, so results are reproducible.
"""

import json
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np
import pytest

from synthpanel import pipeline as pl
from synthpanel import processes as proc
from synthpanel import stats
from synthpanel.bundles import ALL_KINDS, BundleKind, concentration, gen_bundle, target_fractions
from synthpanel.panel import GeneratorConfig, apply_latent, gen_panel
from synthpanel.processes import standardize
from synthpanel.rng import RngStream


def report(number: int, label: str, start: float) -> None:
    print(f"ACCEPTANCE {number:>2} {label}: PASS ({time.perf_counter() - start:.1f}s)")


def test_criterion_1_schedule_exactness():
    t0 = time.perf_counter()
    hard = pl.MixPlan(mode="anneal", strategy="hard", anneal_epoch=5, epochs=10)
    assert [pl.anneal_ratio(e, hard) for e in range(10)] == [1.0] * 5 + [0.0] * 5

    hard_inv = pl.MixPlan(mode="anneal_inverse", strategy="hard", anneal_epoch=5, epochs=10)
    assert [pl.anneal_ratio(e, hard_inv) for e in range(10)] == [0.0] * 5 + [1.0] * 5

    # 1 - e/9, compared at the correctly rounded value of the exact rational
    # (a two-step float evaluation drifts one ulp at e in {3, 6, 8}).
    grad = pl.MixPlan(mode="anneal", strategy="gradual", epochs=10)
    for e in range(10):
        assert pl.anneal_ratio(e, grad) == float(Fraction(9 - e, 9))

    grad_inv = pl.MixPlan(mode="anneal_inverse", strategy="gradual", epochs=10)
    for e in range(10):
        assert pl.anneal_ratio(e, grad_inv) == float(Fraction(e, 9))
    report(1, "schedule exactness", t0)


def test_criterion_2_mixed_mode_budgeting():
    t0 = time.perf_counter()
    orig = 1000
    for s in (0.10, 0.25, 0.50, 1.0):
        sparse = pl.apply_sparsity(RngStream(2).child(int(s * 100)), orig, s)
        assert len(sparse) == int(np.floor(s * orig))
        for r in (0.25, 0.5, 1.0, 2.0):
            assert pl.synth_count(orig, r) == int(np.floor(orig * r))
    report(2, "mixed-mode budgeting independent of sparsity", t0)


def test_criterion_3_dirichlet_concentration():
    t0 = time.perf_counter()

    def st_weights(d, base):
        return np.array(
            [gen_bundle(RngStream(base + i), BundleKind.SEASONAL_TREND, 64, d)[1].weights
             for i in range(1000)]
        )

    easy = st_weights(0.0, 30_000)
    hard = st_weights(1.0, 40_000)
    assert np.all(np.abs(easy.mean(axis=0) - [0.92, 0.06, 0.02]) <= 0.02)
    assert np.all(hard.std(axis=0) >= 3.0 * easy.std(axis=0))
    report(3, "Dirichlet anchor means and concentration spread", t0)


def test_criterion_4_unit_variance_contract():
    t0 = time.perf_counter()
    for kind in ALL_KINDS:
        for d in (0.0, 0.5, 1.0):
            variances = [
                gen_bundle(RngStream(50_000 + i).child(1), kind, 1024, d)[0].var(ddof=1)
                for i in range(500)
            ]
            mean_var = float(np.mean(variances))
            assert 0.8 <= mean_var <= 1.3, (kind, d, mean_var)
    report(4, "unit-variance contract for every kind and difficulty", t0)


def test_criterion_5_estimator_round_trips():
    t0 = time.perf_counter()
    for phi in (-0.5, 0.5, 0.8):
        vals = [stats.acf(proc.gen_ar1(RngStream(60_000 + i), 4096, phi), 1)[1] for i in range(20)]
        assert abs(np.mean(vals) - phi) < 0.05, phi

    for d_frac in (-0.3, 0.0, 0.3):
        vals = []
        for i in range(20):
            x = (
                proc.gen_arfima(RngStream(61_000 + i), 4096, d_frac)
                if d_frac
                else RngStream(61_000 + i).normal(size=4096)
            )
            vals.append(stats.gph_estimate(x))
        assert abs(np.mean(vals) - d_frac) < 0.1, d_frac

    for hurst in (0.6, 0.8):
        vals = [stats.hurst_aggvar(proc.gen_fgn(RngStream(62_000 + i), 4096, hurst)) for i in range(20)]
        assert abs(np.mean(vals) - hurst) < 0.1, hurst

    sq_acfs = []
    for i in range(20):
        g = proc.gen_garch(RngStream(63_000 + i), 8192, 0.05, 0.25, 0.7)
        sq = (g - g.mean()) ** 2
        sq_acfs.append(stats.acf(sq, 1)[1])
    assert np.mean(sq_acfs) > 0.05

    fanos = [
        stats.fano_factor(proc.gen_hawkes(RngStream(64_000 + i), 10_000, 0.01, 0.3, 0.5).event_times, 10_000)
        for i in range(20)
    ]
    assert np.mean(fanos) > 1.2

    poisson = proc.gen_hawkes(RngStream(65_000), 10_000, 0.01, 0.0, 0.5)
    assert 70 <= poisson.count <= 130
    report(5, "estimator round trips (ACF, GPH, Hurst, GARCH, Hawkes)", t0)


def test_criterion_6_latent_factor_monotonicity():
    t0 = time.perf_counter()
    means = {}
    for rho in (0.0, 0.3, 0.6):
        vals = []
        for seed in range(50):
            cfg = GeneratorConfig(length=4096, channels=8, master_seed=70_000 + seed)
            p = gen_panel(cfg)
            mixed, _ = apply_latent(RngStream(71_000 + seed), p.data, 0.5, rho=rho)
            vals.append(stats.mean_abs_offdiag_correlation(mixed))
        means[rho] = float(np.mean(vals))
    assert means[0.0] <= means[0.3] <= means[0.6], means

    X = np.column_stack([standardize(RngStream(72_000).child(j).normal(size=4096)) for j in range(8)])
    Y, _ = apply_latent(RngStream(73_000), X, 1.0, rho=0.0)
    assert np.max(np.abs(Y - X)) < 1e-6
    report(6, f"latent monotonicity {tuple(round(v, 3) for v in means.values())}", t0)


def test_criterion_7_determinism(tmp_path):
    t0 = time.perf_counter()
    args = [
        sys.executable, "-m", "synthpanel.cli", "generate",
        "--bundle", "all", "--channels", "4", "--length", "512",
        "--seed", "11", "--latent-prob", "1.0",
    ]
    for name in ("a", "b"):
        res = subprocess.run(
            args + ["--out", str(tmp_path / name)], capture_output=True, text=True
        )
        assert res.returncode == 0, res.stderr
    assert (tmp_path / "a" / "synthetic.csv").read_bytes() == (tmp_path / "b" / "synthetic.csv").read_bytes()
    assert (tmp_path / "a" / "manifest.json").read_bytes() == (tmp_path / "b" / "manifest.json").read_bytes()

    cfg = GeneratorConfig(length=256, channels=8, master_seed=12, latent_prob=1.0)
    assert np.array_equal(gen_panel(cfg, workers=1).data, gen_panel(cfg, workers=8).data)
    report(7, "byte-identical emission and schedule-free parallelism", t0)


def test_criterion_8_cache_distributional_equivalence():
    t0 = time.perf_counter()
    cfg = GeneratorConfig(length=256, channels=2, master_seed=80_000)
    spec = pl.WindowSpec(input_len=96, label_len=48, horizon=96)

    cached = pl.init_cache(RngStream(81_000), cfg, 500)
    w_cached, _ = pl.draw_synthetic_windows(cached, RngStream(82_000), 1000, spec)
    fresh = pl.SampleCache(capacity=0, config=cfg)
    w_fresh, _ = pl.draw_synthetic_windows(fresh, RngStream(83_000), 1000, spec)

    a = np.concatenate([w.ravel() for w in w_cached])
    b = np.concatenate([w.ravel() for w in w_fresh])
    assert abs(a.mean() - b.mean()) < 0.05, (a.mean(), b.mean())
    assert abs(a.var() - b.var()) < 0.05, (a.var(), b.var())
    report(8, "cache vs on-the-fly distributional equivalence", t0)


def test_criterion_9_sparsity_contract(tmp_path):
    t0 = time.perf_counter()
    lines = ["date,a,b"]
    for i in range(300):
        lines.append(f"t{i},{float(np.sin(i / 5))!r},{float(np.cos(i / 3))!r}")
    path = tmp_path / "real.csv"
    path.write_text("\n".join(lines) + "\n")
    real = pl.load_real_csv(path, (0.7, 0.1, 0.2))
    spec = pl.WindowSpec(input_len=96, label_len=48, horizon=96)

    val_test_sizes = set()
    for mode, r in (("real", 0.0), ("mixed", 1.0), ("anneal", 0.0), ("anneal_inverse", 0.0)):
        for s in (0.10, 0.25, 0.50, 1.0):
            plan = pl.MixPlan(mode=mode, synth_ratio=r, sparsity=s, epochs=4, anneal_epoch=1)
            cfg = GeneratorConfig(length=256, channels=2, master_seed=90_000)
            built = pl.build_mixed_dataset(real, cfg, plan, spec)
            out = tmp_path / f"{mode}_{int(s * 100)}"
            pl.emit_dataset(out, built)
            manifest = json.loads((out / "manifest.json").read_text())
            val_test_sizes.add((manifest["splits"]["rows"]["val"], manifest["splits"]["rows"]["test"]))
            retained = np.asarray(manifest["windows"]["retained"])
            assert len(retained) == int(np.floor(s * built["orig_windows"]))
            if len(retained) > 1:
                assert np.all(np.diff(retained) > 0)
    assert len(val_test_sizes) == 1
    report(9, "validation/test invariance and exact sparsity floors", t0)


def test_criterion_10_profiler_sanity():
    t0 = time.perf_counter()
    st_first = ve_first = lm_first = 0
    for i in range(20):
        sine = proc.gen_fourier(RngStream(95_000 + i), 4096, 1, 24, 1.0)
        st_first += stats.recommend_bundle(stats.profile(sine)).best is BundleKind.SEASONAL_TREND
        garch = proc.gen_garch(RngStream(96_000 + i), 4096, 0.05, 0.25, 0.7)
        ve_first += stats.recommend_bundle(stats.profile(garch)).best is BundleKind.VOLATILITY_EVENTS
        fgn = proc.gen_fgn(RngStream(97_000 + i), 4096, 0.85)
        lm_first += stats.recommend_bundle(stats.profile(fgn)).best is BundleKind.LONG_MEMORY
    assert st_first == 20  # pure sinusoid leaves no other signal at all
    assert ve_first > 10
    assert lm_first > 10
    report(10, f"profiler sanity (st={st_first}, ve={ve_first}, lm={lm_first} of 20)", t0)
