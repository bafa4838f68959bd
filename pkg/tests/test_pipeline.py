"""Ingestion, budgeting, schedules, cache, windowing, and emission checks."""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from synthpanel import pipeline as pl
from synthpanel.panel import GeneratorConfig
from synthpanel.rng import RngStream


def write_csv(path, rows, channels=3, header=None):
    cols = header or ["date"] + [f"v{j}" for j in range(channels)]
    lines = [",".join(cols)]
    for i in range(rows):
        vals = [repr(float(np.sin(i / 3 + j))) for j in range(channels)]
        lines.append(f"2021-01-01T{i:02d}," + ",".join(vals))
    path.write_text("\n".join(lines) + "\n")
    return path


# -- loading -------------------------------------------------------------------


def test_split_sizes_are_floor_then_remainder(tmp_path):
    path = write_csv(tmp_path / "r.csv", 100)
    real = pl.load_real_csv(path, (0.7, 0.1, 0.2))
    assert (len(real.train), len(real.val), len(real.test)) == (70, 10, 20)
    assert real.timestamps[0] == "2021-01-01T00"


def test_channel_count_comes_from_columns(tmp_path):
    path = write_csv(tmp_path / "r.csv", 30, channels=7)
    assert pl.load_real_csv(path).channels == 7


def test_missing_header_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("1,2.0,3.0\n2,2.1,3.1\n")
    with pytest.raises(ValueError, match="header"):
        pl.load_real_csv(path)


def test_ragged_rows_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("date,a,b\nx,1.0,2.0\ny,1.0\n")
    with pytest.raises(ValueError, match="row 3"):
        pl.load_real_csv(path)


def test_non_numeric_cell_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("date,a,b\nx,1.0,oops\n")
    with pytest.raises(ValueError, match="non-numeric"):
        pl.load_real_csv(path)


def test_single_column_rejected(tmp_path):
    path = tmp_path / "r.csv"
    path.write_text("date\nx\n")
    with pytest.raises(ValueError):
        pl.load_real_csv(path)


def test_bad_split_fractions_rejected(tmp_path):
    path = write_csv(tmp_path / "r.csv", 10)
    with pytest.raises(ValueError):
        pl.load_real_csv(path, (0.5, 0.1, 0.1))


# -- windows -------------------------------------------------------------------


def test_exact_fit_yields_one_window():
    spec = pl.WindowSpec(input_len=96, label_len=48, horizon=96)
    assert pl.window_count(192, spec) == 1


def test_window_count_formula():
    spec = pl.WindowSpec(input_len=96, label_len=48, horizon=96)
    assert pl.window_count(200, spec) == 9


def test_windows_slices(tmp_path):
    spec = pl.WindowSpec(input_len=4, label_len=2, horizon=3, stride=2)
    data = np.arange(40, dtype=float).reshape(20, 2)
    windows, starts = pl.make_windows(data, spec)
    assert windows.shape == (pl.window_count(20, spec), 7, 2)
    assert np.array_equal(windows[1], data[2:9])
    assert np.array_equal(starts, np.arange(len(windows)) * 2)


def test_windows_reject_short_matrix():
    spec = pl.WindowSpec(input_len=96, label_len=48, horizon=96)
    with pytest.raises(ValueError):
        pl.window_count(100, spec)


@settings(max_examples=100, deadline=None)
@given(
    extra=st.integers(0, 500),
    L=st.integers(1, 64),
    H=st.integers(1, 64),
    stride=st.integers(1, 16),
)
def test_window_count_holds_for_all_geometries(extra, L, H, stride):
    rows = L + H + extra
    spec = pl.WindowSpec(input_len=L, label_len=0, horizon=H, stride=stride)
    assert pl.window_count(rows, spec) == (rows - (L + H)) // stride + 1


def test_window_spec_validation():
    with pytest.raises(ValueError):
        pl.WindowSpec(input_len=0)
    with pytest.raises(ValueError):
        pl.WindowSpec(input_len=96, label_len=97)
    with pytest.raises(ValueError):
        pl.WindowSpec(stride=0)


# -- sparsity and budgeting -------------------------------------------------------


def test_sparsity_full_retention_keeps_all():
    assert np.array_equal(pl.apply_sparsity(RngStream(1), 7, 1.0), np.arange(7))


def test_sparsity_exact_floor_count_ascending():
    idx = pl.apply_sparsity(RngStream(2), 1000, 0.10)
    assert len(idx) == 100
    assert np.all(np.diff(idx) > 0)


def test_sparsity_floor_on_odd_counts():
    assert len(pl.apply_sparsity(RngStream(3), 7, 0.5)) == 3


def test_sparsity_contiguous_prefix_option():
    assert np.array_equal(pl.apply_sparsity(RngStream(4), 10, 0.3, contiguous=True), [0, 1, 2])


def test_sparsity_rejects_out_of_range():
    for s in (0.0, -0.1, 1.1):
        with pytest.raises(ValueError):
            pl.apply_sparsity(RngStream(1), 10, s)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 2000), s=st.floats(0.01, 1.0), seed=st.integers(0, 10_000))
def test_sparsity_property(n, s, seed):
    idx = pl.apply_sparsity(RngStream(seed), n, s)
    assert len(idx) == int(np.floor(s * n))
    assert np.all(np.diff(idx) > 0) if len(idx) > 1 else True


def test_synth_count_floor():
    assert pl.synth_count(1000, 0.5) == 500
    assert pl.synth_count(1000, 0.0) == 0


def test_synth_count_independent_of_sparsity():
    # The budget multiplies the pre-sparsity size, so sweeping s changes nothing.
    for s in (0.10, 0.25, 0.50, 1.0):
        assert pl.synth_count(1000, 2.0) == 2000


# -- annealing ---------------------------------------------------------------------


def test_hard_anneal_switches_at_epoch():
    plan = pl.MixPlan(mode="anneal", strategy="hard", anneal_epoch=5, epochs=10)
    assert [pl.anneal_ratio(e, plan) for e in range(10)] == [1.0] * 5 + [0.0] * 5


def test_gradual_anneal_linear():
    plan = pl.MixPlan(mode="anneal", strategy="gradual", epochs=10)
    assert pl.anneal_ratio(3, plan) == pytest.approx(1 - 3 / 9)


def test_inverse_anneal_endpoint():
    plan = pl.MixPlan(mode="anneal_inverse", strategy="gradual", epochs=10)
    assert pl.anneal_ratio(9, plan) == 1.0


def test_gradual_with_single_epoch_rejected():
    with pytest.raises(ValueError):
        pl.MixPlan(mode="anneal", strategy="gradual", epochs=1)


def test_anneal_epoch_bounds_validated():
    with pytest.raises(ValueError):
        pl.MixPlan(mode="anneal", strategy="hard", anneal_epoch=10, epochs=10)


@settings(max_examples=40, deadline=None)
@given(E=st.integers(2, 40), orig=st.integers(0, 5000))
def test_anneal_and_inverse_schedules_are_symmetric(E, orig):
    total = {}
    for mode in ("anneal", "anneal_inverse"):
        plan = pl.MixPlan(mode=mode, strategy="gradual", epochs=E)
        ep = pl.build_epoch_plan(plan, orig, orig)
        total[mode] = sum(e.n_synth for e in ep.entries)
    assert total["anneal"] == total["anneal_inverse"]


def test_epoch_plan_modes():
    real_plan = pl.build_epoch_plan(pl.MixPlan(mode="real", epochs=4), 1000, 250)
    assert all(e.n_synth == 0 and e.n_real == 250 for e in real_plan.entries)

    mixed = pl.build_epoch_plan(
        pl.MixPlan(mode="mixed", synth_ratio=1.0, sparsity=0.25, epochs=3), 1000, 250
    )
    assert all((e.n_real, e.n_synth) == (250, 1000) for e in mixed.entries)

    hard = pl.build_epoch_plan(
        pl.MixPlan(mode="anneal", strategy="hard", anneal_epoch=5, epochs=10), 1000, 1000
    )
    assert [e.n_synth for e in hard.entries] == [1000] * 5 + [0] * 5


# -- cache ---------------------------------------------------------------------------


def small_config(seed=50):
    return GeneratorConfig(length=64, channels=2, master_seed=seed)


def test_fresh_generation_differs_across_epoch_streams():
    cache = pl.SampleCache(capacity=0, config=small_config())
    a = pl.draw_synthetic(cache, RngStream(60).child(0), 2)
    b = pl.draw_synthetic(cache, RngStream(60).child(1), 2)
    assert not np.array_equal(a[0].data, b[0].data)


def test_single_slot_cache_hands_out_references():
    cache = pl.init_cache(RngStream(61), small_config(), 1)
    draws = pl.draw_synthetic(cache, RngStream(62), 5)
    assert len(draws) == 5
    assert all(d is cache.panels[0] for d in draws)


def test_empty_nonzero_cache_rejected():
    cache = pl.SampleCache(capacity=3, config=small_config())
    with pytest.raises(ValueError, match="empty cache"):
        pl.draw_synthetic(cache, RngStream(63), 1)


def test_cache_init_is_deterministic():
    a = pl.init_cache(RngStream(64), small_config(), 3)
    b = pl.init_cache(RngStream(64), small_config(), 3)
    for pa, pb in zip(a.panels, b.panels):
        assert np.array_equal(pa.data, pb.data)


# -- emission ---------------------------------------------------------------------


def spec_for_tests():
    return pl.WindowSpec(input_len=96, label_len=48, horizon=96, stride=1)


def built_dataset(tmp_path, mode="mixed", ratio=0.25, sparsity=0.5, rows=1173, cache=0):
    path = write_csv(tmp_path / "real.csv", rows)
    real = pl.load_real_csv(path, (0.7, 0.1, 0.2))
    plan = pl.MixPlan(mode=mode, synth_ratio=ratio, sparsity=sparsity, epochs=4, cache_size=cache)
    cfg = GeneratorConfig(length=256, channels=real.channels, master_seed=77)
    return real, pl.build_mixed_dataset(real, cfg, plan, spec_for_tests())


def test_manifest_budget_uses_pre_sparsity_size(tmp_path):
    # 1173 rows -> 821 train rows -> 630 windows; floor(630 * 0.25) = 157.
    real, built = built_dataset(tmp_path)
    assert built["orig_windows"] == 630
    assert len(built["synth_windows"]) == 157
    assert len(built["retained"]) == 315


def test_real_mode_has_zero_synthetic_provenance(tmp_path):
    _, built = built_dataset(tmp_path, mode="real", ratio=0.0)
    out = tmp_path / "out"
    pl.emit_dataset(out, built)
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["provenance"]["synthetic"] == []


def test_emission_is_byte_identical(tmp_path):
    _, built_a = built_dataset(tmp_path, rows=400)
    _, built_b = built_dataset(tmp_path, rows=400)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    pl.emit_dataset(out_a, built_a)
    pl.emit_dataset(out_b, built_b)
    for name in ("train.csv", "val.csv", "test.csv", "manifest.json"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_val_test_rows_invariant_under_mixing(tmp_path):
    sizes = set()
    for mode, ratio, sparsity in (("real", 0.0, 1.0), ("mixed", 1.0, 0.1), ("anneal", 0.0, 0.25)):
        real, built = built_dataset(tmp_path, mode=mode, ratio=ratio, sparsity=sparsity, rows=600)
        out = tmp_path / f"out_{mode}_{sparsity}"
        pl.emit_dataset(out, built)
        val_rows = len((out / "val.csv").read_text().strip().splitlines()) - 1
        test_rows = len((out / "test.csv").read_text().strip().splitlines()) - 1
        sizes.add((val_rows, test_rows))
        assert val_rows == len(real.val) and test_rows == len(real.test)
    assert len(sizes) == 1


def test_synthetic_rows_carry_integer_index(tmp_path):
    _, built = built_dataset(tmp_path, rows=400)
    out = tmp_path / "out"
    pl.emit_dataset(out, built)
    manifest = json.loads((out / "manifest.json").read_text())
    train_lines = (out / "train.csv").read_text().strip().splitlines()
    n_real_rows = manifest["splits"]["rows"]["train"]
    first_synth = train_lines[1 + n_real_rows]
    assert first_synth.split(",")[0] == "0"
    assert manifest["synthetic_block"]["rows"] == len(train_lines) - 1 - n_real_rows


def test_iter_epochs_matches_plan():
    plan = pl.MixPlan(mode="anneal", strategy="hard", anneal_epoch=2, epochs=5)
    rows = list(pl.iter_epochs(plan, 100, 40))
    assert len(rows) == 5
    assert [r[2] for r in rows] == [100, 100, 0, 0, 0]
    assert all(r[1] == 40 for r in rows)
