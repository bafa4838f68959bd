"""Primitive univariate stochastic processes.

Each generator is a pure function of its stream: the same ``RngStream``
identity always reproduces the same values, and every output is finite for
valid parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve, lfilter

from .rng import RngStream

TWO_PI = 2.0 * np.pi

FOURIER_PERIODS = (24, 48, 96, 168, 336)
TREND_KINDS = ("linear", "quadratic", "exponential")
STOCHASTIC_TREND_KINDS = ("random_walk", "gbm", "ou")

# exp() overflows float64 just above 709; clipping keeps pathological
# (rate * T) combinations finite without touching sane regimes.
_EXP_CLIP = 700.0


@dataclass(frozen=True)
class EventTrain:
    """Discrete event times on [0, T) plus the intensity that produced them."""

    event_times: np.ndarray
    intensity: np.ndarray

    def __post_init__(self):
        times = np.asarray(self.event_times, dtype=int)
        if times.size and (times.min() < 0 or times.max() >= len(self.intensity)):
            raise ValueError("event times fall outside [0, T)")
        if np.any(np.asarray(self.intensity) < 0):
            raise ValueError("intensity must be nonnegative")

    @property
    def count(self) -> int:
        return int(len(self.event_times))


def standardize(x: np.ndarray, eps: float = 1e-8) -> np.ndarray:
    """Center to zero mean and scale by sqrt(Var + eps).

    Population variance, so a two-point series [0, 1] maps to [-1, 1] at
    eps=0; a constant series maps to zeros.
    """
    x = np.asarray(x, dtype=float)
    if x.size < 2:
        raise ValueError("standardize requires a series of length >= 2")
    var = x.var()
    return (x - x.mean()) / np.sqrt(var + eps)


def fourier_series(T: int, period: int, amplitudes, phases) -> np.ndarray:
    """Superposition of harmonics k=1..K of a shared base period."""
    amplitudes = np.asarray(amplitudes, dtype=float)
    phases = np.asarray(phases, dtype=float)
    if amplitudes.shape != phases.shape:
        raise ValueError("amplitudes and phases must have matching length")
    t = np.arange(T, dtype=float)
    k = np.arange(1, len(amplitudes) + 1, dtype=float)
    angles = TWO_PI * np.outer(k, t) / period + phases[:, None]
    return amplitudes @ np.sin(angles)


def gen_fourier(s: RngStream, T: int, K: int, period: int, decay: float) -> np.ndarray:
    """Seasonal component: K sinusoids with power-law amplitudes k^-decay."""
    if not 1 <= K <= 6:
        raise ValueError(f"harmonic count must be in [1, 6], got {K}")
    if period not in FOURIER_PERIODS:
        raise ValueError(f"period must be one of {FOURIER_PERIODS}, got {period}")
    if decay <= 0:
        raise ValueError(f"amplitude decay must be positive, got {decay}")
    amps = np.arange(1, K + 1, dtype=float) ** (-decay)
    phases = s.uniform(0.0, TWO_PI, size=K)
    return fourier_series(T, period, amps, phases)


def linear_trend(T: int, slope: float) -> np.ndarray:
    return slope * np.arange(T, dtype=float)


def quadratic_trend(T: int, curvature: float) -> np.ndarray:
    return curvature * np.arange(T, dtype=float) ** 2


def exponential_trend(T: int, rate: float) -> np.ndarray:
    expo = np.clip(rate * np.arange(T, dtype=float), -_EXP_CLIP, _EXP_CLIP)
    return np.expm1(expo)


def gen_trend(s: RngStream, T: int, kind: str) -> np.ndarray:
    """Deterministic trend with a mildly sampled coefficient."""
    coeff = s.uniform(-0.01, 0.01)
    return trend_from_params(T, kind, coeff)


def trend_from_params(T: int, kind: str, coeff: float) -> np.ndarray:
    if kind == "linear":
        return linear_trend(T, coeff)
    if kind == "quadratic":
        return quadratic_trend(T, coeff)
    if kind == "exponential":
        return exponential_trend(T, coeff)
    raise ValueError(f"unknown trend kind {kind!r}, expected one of {TREND_KINDS}")


def gen_ar1(s: RngStream, T: int, phi: float) -> np.ndarray:
    """AR(1) with unit innovations, started from its stationary law."""
    if not abs(phi) < 1:
        raise ValueError(f"AR(1) coefficient must satisfy |phi| < 1, got {phi}")
    x0 = s.normal(0.0, np.sqrt(1.0 / (1.0 - phi * phi)))
    if T == 1:
        return np.array([x0])
    eta = s.normal(size=T - 1)
    rest, _ = lfilter([1.0], [1.0, -phi], eta, zi=np.array([phi * x0]))
    return np.concatenate(([x0], rest))


def sample_stochastic_trend_params(s: RngStream, kind: str) -> dict:
    """Default parameter laws for the three stochastic-trend variants."""
    if kind == "random_walk":
        return {"sigma": s.uniform(0.01, 0.05)}
    if kind == "gbm":
        return {"drift": s.uniform(-0.0005, 0.0005), "vol": s.uniform(0.005, 0.02)}
    if kind == "ou":
        return {
            "theta": s.uniform(0.01, 0.1),
            "sigma": s.uniform(0.05, 0.2),
            "mu": 0.0,
            "x0": 0.0,
        }
    raise ValueError(
        f"unknown stochastic trend kind {kind!r}, expected one of {STOCHASTIC_TREND_KINDS}"
    )


def gen_stochastic_trend(s: RngStream, T: int, kind: str, params: dict | None = None) -> np.ndarray:
    """Random walk, geometric Brownian motion, or Ornstein-Uhlenbeck path."""
    if params is None:
        params = sample_stochastic_trend_params(s, kind)
    if kind == "random_walk":
        sigma = params["sigma"]
        if sigma < 0:
            raise ValueError("random walk step sigma must be >= 0")
        return np.cumsum(s.normal(0.0, sigma, size=T))
    if kind == "gbm":
        steps = params["drift"] + params["vol"] * s.normal(size=T - 1)
        log_path = np.concatenate(([0.0], np.cumsum(steps)))
        return np.exp(np.clip(log_path, -_EXP_CLIP, _EXP_CLIP))
    if kind == "ou":
        theta = params["theta"]
        sigma = params["sigma"]
        mu = params.get("mu", 0.0)
        x0 = params.get("x0", 0.0)
        if not 0 < theta <= 1:
            raise ValueError(f"OU reversion rate must be in (0, 1], got {theta}")
        if T == 1:
            return np.array([float(x0)])
        drive = theta * mu + sigma * s.normal(size=T - 1)
        rest, _ = lfilter([1.0], [1.0, -(1.0 - theta)], drive, zi=np.array([(1.0 - theta) * x0]))
        return np.concatenate(([float(x0)], rest))
    raise ValueError(
        f"unknown stochastic trend kind {kind!r}, expected one of {STOCHASTIC_TREND_KINDS}"
    )


def arfima_ma_coefficients(d_frac: float, n: int) -> np.ndarray:
    """MA(inf) weights of (1-B)^{-d}: psi_0 = 1, psi_j = psi_{j-1} (j-1+d)/j."""
    j = np.arange(1, n + 1, dtype=float)
    ratios = (j - 1.0 + d_frac) / j
    return np.concatenate(([1.0], np.cumprod(ratios)))


def gen_arfima(s: RngStream, T: int, d_frac: float) -> np.ndarray:
    """ARFIMA(0, d, 0) via a truncated MA(inf) filter on white noise.

    The filter is truncated at max(T, 1000) lags and an equally long burn-in
    is discarded so the output is effectively stationary.
    """
    if not -0.45 < d_frac < 0.45:
        raise ValueError(f"fractional order must be in (-0.45, 0.45), got {d_frac}")
    trunc = max(T, 1000)
    psi = arfima_ma_coefficients(d_frac, trunc)
    eta = s.normal(size=T + trunc)
    full = fftconvolve(eta, psi)
    return full[trunc : trunc + T]


def fgn_autocovariance(hurst: float, max_lag: int) -> np.ndarray:
    """gamma(k) = 0.5 (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) for k = 0..max_lag."""
    k = np.arange(max_lag + 1, dtype=float)
    h2 = 2.0 * hurst
    return 0.5 * (np.abs(k + 1) ** h2 - 2.0 * np.abs(k) ** h2 + np.abs(k - 1) ** h2)


def gen_fgn(s: RngStream, T: int, hurst: float) -> np.ndarray:
    """Fractional Gaussian noise by the Hosking recursion.

    Samples each point from its exact conditional distribution given the
    past (Durbin-Levinson), so the covariance structure is exact at the
    cost of O(T^2) work.
    """
    if not 0 < hurst < 1:
        raise ValueError(f"Hurst exponent must be in (0, 1), got {hurst}")
    gamma = fgn_autocovariance(hurst, T - 1)
    eta = s.normal(size=T)
    x = np.empty(T)
    x[0] = eta[0]
    phi = np.zeros(T - 1) if T > 1 else np.zeros(0)
    v = 1.0
    for t in range(1, T):
        if t == 1:
            phi_tt = gamma[1]
        else:
            phi_tt = (gamma[t] - phi[: t - 1] @ gamma[t - 1 : 0 : -1]) / v
        if t > 1:
            phi[: t - 1] -= phi_tt * phi[t - 2 :: -1].copy()
        phi[t - 1] = phi_tt
        v *= 1.0 - phi_tt * phi_tt
        v = max(v, 1e-15)
        x[t] = phi[:t] @ x[t - 1 :: -1] + np.sqrt(v) * eta[t]
    return x


def gen_markov_regime(
    s: RngStream,
    T: int,
    n_regimes: int,
    p_stay: float,
    means,
    slopes,
    phi: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Markov-switching level/slope process with an AR(1) deviation.

    Within regime m the path follows means[m] + slopes[m] * (t - t_enter),
    where t_enter is the step at which the current regime was entered; the
    AR(1) deviation rides on top.
    """
    if n_regimes not in (2, 3, 4):
        raise ValueError(f"regime count must be 2, 3, or 4, got {n_regimes}")
    if not 0 < p_stay <= 1:
        raise ValueError(f"stay probability must be in (0, 1], got {p_stay}")
    means = np.asarray(means, dtype=float)
    slopes = np.asarray(slopes, dtype=float)
    if len(means) != n_regimes or len(slopes) != n_regimes:
        raise ValueError(
            f"means/slopes must have length {n_regimes}, got {len(means)}/{len(slopes)}"
        )

    state = s.integers(0, n_regimes)
    stay_draws = s.uniform(size=T - 1) if T > 1 else np.zeros(0)
    jump_draws = s.integers(0, n_regimes - 1, size=T - 1) if T > 1 else np.zeros(0, dtype=int)

    states = np.empty(T, dtype=int)
    enter = np.empty(T, dtype=int)
    states[0] = state
    enter[0] = 0
    for t in range(1, T):
        if stay_draws[t - 1] < p_stay:
            states[t] = states[t - 1]
            enter[t] = enter[t - 1]
        else:
            offset = int(jump_draws[t - 1])
            candidates = [m for m in range(n_regimes) if m != states[t - 1]]
            states[t] = candidates[offset]
            enter[t] = t

    deviation = gen_ar1(s, T, phi)
    t_idx = np.arange(T)
    values = means[states] + slopes[states] * (t_idx - enter) + deviation
    return values, states


def gen_garch(s: RngStream, T: int, omega: float, alpha: float, beta: float) -> np.ndarray:
    """GARCH(1,1) innovations, variance recursion seeded at its stationary value."""
    if omega <= 0:
        raise ValueError(f"omega must be positive, got {omega}")
    if alpha < 0 or beta < 0:
        raise ValueError(f"alpha/beta must be nonnegative, got {alpha}/{beta}")
    if alpha + beta >= 1:
        raise ValueError(f"GARCH is non-stationary: alpha + beta = {alpha + beta} >= 1")
    eta = s.normal(size=T)
    var = omega / (1.0 - alpha - beta)
    out = np.empty(T)
    out[0] = np.sqrt(var) * eta[0]
    for t in range(1, T):
        var = omega + alpha * out[t - 1] ** 2 + beta * var
        out[t] = np.sqrt(var) * eta[t]
    return out


def gen_hawkes(s: RngStream, T: int, base_rate: float, excitation: float, decay: float) -> EventTrain:
    """Self-exciting point process on integer steps, by thinning.

    At each step an event fires with probability min(h(t), 1) where
    h(t) = base_rate + excitation * sum over past events of exp(-decay dt);
    accepted events feed back into h.
    """
    if base_rate < 0:
        raise ValueError(f"base rate must be >= 0, got {base_rate}")
    if excitation < 0:
        raise ValueError(f"excitation must be >= 0, got {excitation}")
    if decay <= 0:
        raise ValueError(f"kernel decay must be positive, got {decay}")
    if excitation > 0 and excitation / decay >= 1:
        raise ValueError(
            f"branching ratio {excitation / decay} >= 1 would be explosive"
        )
    u = s.uniform(size=T)
    fade = np.exp(-decay)
    kick = 0.0
    intensity = np.empty(T)
    times = []
    for t in range(T):
        h = base_rate + kick
        intensity[t] = h
        fired = u[t] < min(h, 1.0)
        if fired:
            times.append(t)
        kick = (kick + (excitation if fired else 0.0)) * fade
    return EventTrain(np.asarray(times, dtype=int), intensity)


def spikes_from_events(
    events: EventTrain, amplitude: float, kernel_rate: float, T: int
) -> np.ndarray:
    """Exponential-decay kernel summed over events at or before each step."""
    if amplitude < 0:
        raise ValueError(f"spike amplitude must be >= 0, got {amplitude}")
    fade = np.exp(-kernel_rate)
    pulse = np.zeros(T)
    for t in np.asarray(events.event_times, dtype=int):
        if 0 <= t < T:
            pulse[t] += amplitude
    out = np.empty(T)
    acc = 0.0
    for t in range(T):
        acc = acc * fade + pulse[t]
        out[t] = acc
    return out
