"""Statistical estimators, panel profiling, and the bundle recommender."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bundles import ALL_KINDS, BundleKind

DEFAULT_ACF_LAGS = 20
FANO_WINDOW = 50
EVENT_Z_THRESHOLD = 2.5
SHIFT_BLOCKS = 8


def acf(x: np.ndarray, max_lag: int) -> np.ndarray:
    """Sample autocorrelation for lags 0..max_lag; constant input gives zeros."""
    x = np.asarray(x, dtype=float)
    T = len(x)
    if T <= max_lag:
        raise ValueError(f"series length {T} must exceed max lag {max_lag}")
    c = x - x.mean()
    denom = float(c @ c)
    out = np.zeros(max_lag + 1)
    out[0] = 1.0
    if denom == 0:
        return out
    for k in range(1, max_lag + 1):
        out[k] = float(c[k:] @ c[:-k]) / denom
    return out


def periodogram(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ordinates I(f_j) at the positive Fourier frequencies j/T, j=1..T//2."""
    x = np.asarray(x, dtype=float)
    T = len(x)
    spec = np.abs(np.fft.rfft(x - x.mean())) ** 2 / T
    freqs = np.arange(len(spec)) / T
    return freqs[1:], spec[1:]


def spectral_peak(x: np.ndarray) -> tuple[float, float]:
    """(peak frequency, share of total power at the peak)."""
    freqs, power = periodogram(x)
    total = power.sum()
    if total == 0:
        return 0.0, 0.0
    j = int(np.argmax(power))
    return float(freqs[j]), float(power[j] / total)


def gph_estimate(x: np.ndarray) -> float:
    """Long-memory order via log-periodogram regression.

    Regresses log I(lambda_j) on log(4 sin^2(lambda_j / 2)) over the lowest
    floor(sqrt(T)) Fourier frequencies; the slope is -d.
    """
    x = np.asarray(x, dtype=float)
    T = len(x)
    if T < 512:
        raise ValueError(f"GPH needs at least 512 points, got {T}")
    m = int(np.floor(np.sqrt(T)))
    j = np.arange(1, m + 1)
    lam = 2.0 * np.pi * j / T
    power = np.abs(np.fft.rfft(x - x.mean())[1 : m + 1]) ** 2 / T
    power = np.maximum(power, 1e-300)
    reg = np.log(4.0 * np.sin(lam / 2.0) ** 2)
    slope = np.polyfit(reg, np.log(power), 1)[0]
    return float(-slope)


def hurst_aggvar(x: np.ndarray) -> float:
    """Hurst exponent from the aggregated-variance slope.

    Var of block means scales like m^(2H-2); fit over a log-spaced grid of
    block sizes.
    """
    x = np.asarray(x, dtype=float)
    T = len(x)
    if T < 1024:
        raise ValueError(f"aggregated-variance Hurst needs at least 1024 points, got {T}")
    # Block sizes stop at T/32 so every point pools >= 32 blocks; larger
    # blocks bias the sample variance down under long memory.
    sizes = np.unique(np.geomspace(4, T // 32, num=10).astype(int))
    log_m, log_v = [], []
    for m in sizes:
        k = T // m
        means = x[: k * m].reshape(k, m).mean(axis=1)
        v = means.var(ddof=1)
        if v > 0:
            log_m.append(np.log(m))
            log_v.append(np.log(v))
    slope = np.polyfit(log_m, log_v, 1)[0]
    return float(1.0 + slope / 2.0)


def fano_factor(event_times, T: int, window: int = FANO_WINDOW) -> float:
    """Variance-to-mean ratio of event counts in consecutive windows."""
    n_bins = T // window
    if n_bins < 2:
        raise ValueError(f"need at least 2 windows of {window} steps, got T={T}")
    counts = np.zeros(n_bins)
    for t in np.asarray(event_times, dtype=int):
        b = t // window
        if b < n_bins:
            counts[b] += 1
    mean = counts.mean()
    if mean == 0:
        return 0.0
    return float(counts.var(ddof=1) / mean)


def volatility_score(x: np.ndarray) -> float:
    """Lag-1 autocorrelation of the centered squared series."""
    c = np.asarray(x, dtype=float)
    c = c - c.mean()
    return float(acf(c * c, 1)[1])


def volatility_clustering(x: np.ndarray) -> float:
    """Squared-series autocorrelation in excess of the Gaussian baseline.

    For a Gaussian linear process acf(x^2) equals acf(x)^2, so periodic or
    merely persistent signals score zero; genuine conditional
    heteroskedasticity scores positive.
    """
    x = np.asarray(x, dtype=float)
    a1 = acf(x, 1)[1]
    return max(0.0, volatility_score(x) - a1 * a1)


def event_score(x: np.ndarray, window: int = FANO_WINDOW, z: float = EVENT_Z_THRESHOLD) -> float:
    """Fano factor of threshold exceedances of the standardized series."""
    c = np.asarray(x, dtype=float)
    sd = c.std()
    if sd == 0:
        return 0.0
    hits = np.nonzero(np.abs((c - c.mean()) / sd) > z)[0]
    if len(c) < 2 * window:
        return 0.0
    return fano_factor(hits, len(c), window)


def shift_score(x: np.ndarray, blocks: int = SHIFT_BLOCKS) -> float:
    """Level-shift statistic: dispersion of block means relative to total spread."""
    c = np.asarray(x, dtype=float)
    m = len(c) // blocks
    if m < 1:
        return 0.0
    sd = c.std()
    if sd == 0:
        return 0.0
    means = c[: blocks * m].reshape(blocks, m).mean(axis=1)
    return float(np.clip(means.std() / sd, 0.0, 1.0))


@dataclass
class ChannelProfile:
    acf: list
    acf1_squared: float
    vol_cluster: float
    peak_freq: float
    peak_share: float
    long_memory_d: float | None
    hurst: float | None
    event_fano: float
    shift: float

    def to_dict(self) -> dict:
        return {
            "acf": self.acf,
            "acf1_squared": self.acf1_squared,
            "vol_cluster": self.vol_cluster,
            "peak_freq": self.peak_freq,
            "peak_share": self.peak_share,
            "long_memory_d": self.long_memory_d,
            "hurst": self.hurst,
            "event_fano": self.event_fano,
            "shift": self.shift,
        }


@dataclass
class StatReport:
    length: int
    channels: int
    per_channel: list
    mean_abs_offdiag_corr: float

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "channels": self.channels,
            "per_channel": [c.to_dict() for c in self.per_channel],
            "mean_abs_offdiag_corr": self.mean_abs_offdiag_corr,
        }


@dataclass
class BundleRanking:
    """Bundle kinds with alignment scores in [0, 1], best first."""

    entries: list

    def to_dict(self) -> dict:
        return {"ranking": [{"bundle": k.value, "score": s} for k, s in self.entries]}

    @property
    def best(self) -> BundleKind:
        return self.entries[0][0]


def mean_abs_offdiag_correlation(data: np.ndarray) -> float:
    data = np.asarray(data, dtype=float)
    D = data.shape[1]
    if D < 2:
        return 0.0
    sd = data.std(axis=0)
    keep = sd > 0
    if keep.sum() < 2:
        return 0.0
    corr = np.corrcoef(data[:, keep], rowvar=False)
    off = corr[~np.eye(keep.sum(), dtype=bool)]
    return float(np.mean(np.abs(off)))


def profile(data: np.ndarray, max_lag: int = DEFAULT_ACF_LAGS) -> StatReport:
    """Estimator battery over a T x D matrix (or a single series)."""
    data = np.asarray(data, dtype=float)
    if data.ndim == 1:
        data = data[:, None]
    T, D = data.shape
    channels = []
    for j in range(D):
        x = data[:, j]
        lag = min(max_lag, T - 1)
        freqs_share = spectral_peak(x)
        channels.append(
            ChannelProfile(
                acf=[float(v) for v in acf(x, lag)],
                acf1_squared=volatility_score(x),
                vol_cluster=volatility_clustering(x),
                peak_freq=freqs_share[0],
                peak_share=freqs_share[1],
                long_memory_d=gph_estimate(x) if T >= 512 else None,
                hurst=hurst_aggvar(x) if T >= 1024 else None,
                event_fano=event_score(x),
                shift=shift_score(x),
            )
        )
    return StatReport(
        length=T,
        channels=D,
        per_channel=channels,
        mean_abs_offdiag_corr=mean_abs_offdiag_correlation(data),
    )


def recommend_bundle(report: StatReport) -> BundleRanking:
    """Rank bundle kinds by simple alignment statistics.

    Seasonal strength favors ST, excess Hurst favors LM, volatility
    clustering favors VE, and level shifts favor NR. The heuristic is a
    deliberately simple monotone scoring, not a fitted model.
    """
    def chan_mean(fn):
        return float(np.mean([fn(c) for c in report.per_channel]))

    scores = {
        BundleKind.SEASONAL_TREND: chan_mean(lambda c: c.peak_share),
        BundleKind.REGIME: chan_mean(lambda c: c.shift),
        BundleKind.LONG_MEMORY: chan_mean(
            lambda c: np.clip(2.0 * ((c.hurst or 0.5) - 0.5), 0.0, 1.0)
        ),
        BundleKind.VOLATILITY_EVENTS: chan_mean(lambda c: np.clip(c.vol_cluster, 0.0, 1.0)),
    }
    top = max(scores.values())
    if top > 0:
        scores = {k: v / top for k, v in scores.items()}
    ordered = sorted(ALL_KINDS, key=lambda k: -scores[k])
    return BundleRanking([(k, float(scores[k])) for k in ordered])
