"""Bundle archetypes: difficulty conditioning, variance allocation, recipes.

A bundle is a stochastic template for one channel. Components are
standardized to unit variance and mixed with Dirichlet-drawn weights whose
concentration shrinks as difficulty grows, so easy draws hug the target
variance shares and hard draws wander.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import processes as proc
from .rng import RngStream

EPS_STANDARDIZE = 1e-8

CONCENTRATION_EASY = 80.0
CONCENTRATION_HARD = 6.0

DIFFICULTY_MODES = ("default", "uniform", "easy", "medium", "hard")

# Three-component truncated-normal mixture behind the "default" mode.
MIXTURE_WEIGHTS = (0.30, 0.40, 0.30)
MIXTURE_MEANS = (0.20, 0.50, 0.80)
MIXTURE_STDS = (0.08, 0.10, 0.08)

_BETA_MODES = {"easy": (2.0, 5.0), "medium": (2.0, 2.0), "hard": (5.0, 2.0)}


class BundleKind(str, Enum):
    SEASONAL_TREND = "st"
    REGIME = "nr"
    LONG_MEMORY = "lm"
    VOLATILITY_EVENTS = "ve"


ALL_KINDS = (
    BundleKind.SEASONAL_TREND,
    BundleKind.REGIME,
    BundleKind.LONG_MEMORY,
    BundleKind.VOLATILITY_EVENTS,
)

# (easy anchor, hard anchor) for the per-kind variance target fractions.
TARGET_ANCHORS = {
    BundleKind.SEASONAL_TREND: ((0.92, 0.06, 0.02), (0.50, 0.20, 0.30)),
    BundleKind.REGIME: ((0.80, 0.15, 0.05), (0.55, 0.30, 0.15)),
    BundleKind.LONG_MEMORY: ((0.90, 0.05, 0.05), (0.60, 0.20, 0.20)),
    BundleKind.VOLATILITY_EVENTS: ((0.70, 0.20, 0.10), (0.50, 0.35, 0.15)),
}

HAWKES_DECAY = 0.5


@dataclass(frozen=True)
class DifficultySpec:
    """How per-draw difficulty d in [0, 1] is distributed."""

    mode: str = "default"

    def __post_init__(self):
        if self.mode not in DIFFICULTY_MODES:
            raise ValueError(
                f"difficulty mode must be one of {DIFFICULTY_MODES}, got {self.mode!r}"
            )


@dataclass(frozen=True)
class VarianceTargets:
    """Target variance shares for the three components of a bundle."""

    tau: tuple

    def __post_init__(self):
        tau = np.asarray(self.tau, dtype=float)
        if np.any(tau < 0) or abs(tau.sum() - 1.0) > 1e-9:
            raise ValueError(f"variance targets must be nonnegative and sum to 1, got {tau}")


@dataclass
class BundleDraw:
    """Everything sampled for one channel, sufficient for bit-exact replay.

    ``seed``/``path`` identify the stream the draw consumed; regenerating
    with the same identity reproduces the series exactly.
    """

    kind: BundleKind
    difficulty: float
    length: int
    seed: int
    path: tuple
    params: dict
    weights: tuple
    sigma_obs: float
    overrides: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "difficulty": self.difficulty,
            "length": self.length,
            "seed": self.seed,
            "path": list(self.path),
            "params": self.params,
            "weights": list(self.weights),
            "sigma_obs": self.sigma_obs,
            "overrides": self.overrides,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BundleDraw":
        return cls(
            kind=BundleKind(d["kind"]),
            difficulty=d["difficulty"],
            length=d["length"],
            seed=d["seed"],
            path=tuple(d["path"]),
            params=d["params"],
            weights=tuple(d["weights"]),
            sigma_obs=d["sigma_obs"],
            overrides=d.get("overrides", {}),
        )


def sample_difficulty(s: RngStream, spec: DifficultySpec) -> float:
    """Draw d in [0, 1] under the requested mode."""
    if spec.mode == "uniform":
        return float(s.uniform(0.0, 1.0))
    if spec.mode in _BETA_MODES:
        a, b = _BETA_MODES[spec.mode]
        return float(s.beta(a, b))
    comp = s.categorical(MIXTURE_WEIGHTS)
    return s.trunc_normal(MIXTURE_MEANS[comp], MIXTURE_STDS[comp], 0.0, 1.0)


def concentration(d: float) -> float:
    """Dirichlet concentration, interpolated from 80 (easy) down to 6 (hard)."""
    _check_difficulty(d)
    return (1.0 - d) * CONCENTRATION_EASY + d * CONCENTRATION_HARD


def target_fractions(kind: BundleKind, d: float) -> VarianceTargets:
    """Per-kind variance shares, interpolated between easy and hard anchors."""
    _check_difficulty(d)
    easy, hard = TARGET_ANCHORS[BundleKind(kind)]
    tau = (1.0 - d) * np.asarray(easy) + d * np.asarray(hard)
    return VarianceTargets(tuple(tau))


def allocate_variance(
    s: RngStream, components: list, kind: BundleKind, d: float
) -> tuple[np.ndarray, np.ndarray]:
    """Standardize components and mix them with Dirichlet-drawn weights."""
    lengths = {len(c) for c in components}
    if len(lengths) != 1:
        raise ValueError(f"components must share one length, got {sorted(lengths)}")
    if lengths.pop() < 2:
        raise ValueError("components must have length >= 2")
    tau = np.asarray(target_fractions(kind, d).tau)
    weights = s.dirichlet(concentration(d) * tau)
    return mix_components(components, weights), weights


def mix_components(components: list, weights) -> np.ndarray:
    weights = np.asarray(weights, dtype=float)
    if len(weights) != len(components):
        raise ValueError("one weight per component required")
    out = np.zeros_like(np.asarray(components[0], dtype=float))
    for w, c in zip(weights, components):
        out += np.sqrt(w) * proc.standardize(c, EPS_STANDARDIZE)
    return out


def noise_sigma(s: RngStream, d: float) -> float:
    """Observation-noise scale, drawn from a difficulty-widened range."""
    _check_difficulty(d)
    return float(s.uniform(0.02, 0.05 + 0.25 * d))


# -- difficulty-scaled parameter laws ----------------------------------------


def fourier_decay(d: float) -> float:
    """Harmonic amplitude decay; flatter (more harmonics) at higher d."""
    return 2.2 - 1.6 * d


def seasonal_overlay_prob(d: float) -> float:
    return 0.05 + 0.40 * d


def regime_mean_scale(d: float) -> float:
    return 0.5 + 1.5 * d


def regime_slope_scale(d: float) -> float:
    return 0.001 + 0.01 * d


def regime_stay_prob(d: float) -> float:
    return 0.995 - 0.045 * d


def garch_params(d: float) -> tuple[float, float, float]:
    """(omega, alpha, beta) with unit unconditional variance."""
    alpha = 0.05 + 0.20 * d
    beta = min(0.9, 0.97 - alpha)
    omega = 1.0 - alpha - beta
    return omega, alpha, beta


def hawkes_params(d: float) -> tuple[float, float, float]:
    """(base_rate, excitation, decay); branching ratio stays below 1."""
    base = 0.005 + 0.02 * d
    branching = 0.2 + 0.5 * d
    return base, branching * HAWKES_DECAY, HAWKES_DECAY


def spike_amplitude(d: float) -> float:
    return 2.0 + 6.0 * d


# -- bundle recipes -----------------------------------------------------------


def gen_bundle(
    s: RngStream,
    kind: BundleKind,
    T: int,
    d: float,
    overrides: dict | None = None,
) -> tuple[np.ndarray, BundleDraw]:
    """Generate one channel of length T at difficulty d.

    ``overrides`` pins named sampled quantities (weights, d_frac, ...) for
    diagnostics; it is recorded on the draw so replay stays exact.
    """
    _check_difficulty(d)
    if T < 2:
        raise ValueError(f"series length must be >= 2, got {T}")
    kind = BundleKind(kind)
    overrides = dict(overrides or {})
    builder = {
        BundleKind.SEASONAL_TREND: _gen_seasonal_trend,
        BundleKind.REGIME: _gen_regime,
        BundleKind.LONG_MEMORY: _gen_long_memory,
        BundleKind.VOLATILITY_EVENTS: _gen_volatility_events,
    }[kind]
    values, params, weights, sigma_obs = builder(s, T, d, overrides)
    draw = BundleDraw(
        kind=kind,
        difficulty=float(d),
        length=int(T),
        seed=s.master_seed,
        path=s.path,
        params=params,
        weights=tuple(float(w) for w in weights),
        sigma_obs=float(sigma_obs),
        overrides=overrides,
    )
    return values, draw


def regenerate(draw: BundleDraw) -> np.ndarray:
    """Replay a stored draw bit-exactly from its recorded stream identity."""
    stream = RngStream(draw.seed, draw.path)
    values, _ = gen_bundle(stream, draw.kind, draw.length, draw.difficulty, draw.overrides)
    return values


def _weights_for(s, components, kind, d, overrides):
    if "weights" in overrides:
        weights = np.asarray(overrides["weights"], dtype=float)
        return mix_components(components, weights), weights
    return allocate_variance(s, components, kind, d)


def _gen_seasonal_trend(s, T, d, overrides):
    harmonics = s.integers(1, 7)
    period = s.choice(proc.FOURIER_PERIODS)
    decay = fourier_decay(d)
    phases = s.uniform(0.0, proc.TWO_PI, size=harmonics)
    amps = np.arange(1, harmonics + 1, dtype=float) ** (-decay)
    seasonal = proc.fourier_series(T, period, amps, phases)

    trend_kind = s.choice(proc.TREND_KINDS)
    trend_coeff = s.uniform(-0.01, 0.01)
    trend = proc.trend_from_params(T, trend_kind, trend_coeff)

    ar_coeff = s.uniform(-0.9, 0.9)
    residual = proc.gen_ar1(s, T, ar_coeff)

    mixed, weights = _weights_for(s, [seasonal, trend, residual], BundleKind.SEASONAL_TREND, d, overrides)
    sigma_obs = noise_sigma(s, d)
    values = mixed + s.normal(0.0, sigma_obs, size=T)
    params = {
        "harmonics": harmonics,
        "period": period,
        "decay": decay,
        "phases": [float(p) for p in phases],
        "trend_kind": trend_kind,
        "trend_coeff": float(trend_coeff),
        "ar_coeff": float(ar_coeff),
    }
    return values, params, weights, sigma_obs


def _gen_regime(s, T, d, overrides):
    n_regimes = s.choice((2, 3, 4))
    means = s.normal(0.0, regime_mean_scale(d), size=n_regimes)
    slopes = s.normal(0.0, regime_slope_scale(d), size=n_regimes)
    p_stay = overrides.get("p_stay", regime_stay_prob(d))
    deviation_ar = s.uniform(0.3, 0.9)
    regime, states = proc.gen_markov_regime(s, T, n_regimes, p_stay, means, slopes, deviation_ar)

    st_kind = s.choice(proc.STOCHASTIC_TREND_KINDS)
    st_params = proc.sample_stochastic_trend_params(s, st_kind)
    st = proc.gen_stochastic_trend(s, T, st_kind, st_params)

    ar_coeff = s.uniform(-0.9, 0.9)
    residual = proc.gen_ar1(s, T, ar_coeff)

    mixed, weights = _weights_for(s, [regime, st, residual], BundleKind.REGIME, d, overrides)
    sigma_obs = noise_sigma(s, d)
    values = mixed + s.normal(0.0, sigma_obs, size=T)
    params = {
        "n_regimes": n_regimes,
        "means": [float(m) for m in means],
        "slopes": [float(b) for b in slopes],
        "p_stay": float(p_stay),
        "deviation_ar": float(deviation_ar),
        "stochastic_trend_kind": st_kind,
        "stochastic_trend_params": {k: float(v) for k, v in st_params.items()},
        "ar_coeff": float(ar_coeff),
        "n_switches": int(np.count_nonzero(np.diff(states))),
    }
    return values, params, weights, sigma_obs


def _gen_long_memory(s, T, d, overrides):
    use_arfima = overrides.get("use_arfima", bool(s.uniform() < 0.5))
    if use_arfima:
        d_frac = overrides.get("d_frac", float(s.uniform(-0.45, 0.45)))
        memory = proc.gen_arfima(s, T, d_frac)
        memory_params = {"model": "arfima", "d_frac": float(d_frac)}
    else:
        hurst = overrides.get("hurst", float(s.uniform(0.6, 0.9)))
        memory = proc.gen_fgn(s, T, hurst)
        memory_params = {"model": "fgn", "hurst": float(hurst)}

    overlay_prob = seasonal_overlay_prob(d)
    has_overlay = overrides.get("overlay", bool(s.uniform() < overlay_prob))
    if has_overlay:
        # Overlay runs at reduced difficulty so it stays subordinate.
        harmonics = s.integers(1, 7)
        period = s.choice(proc.FOURIER_PERIODS)
        decay = fourier_decay(0.3 * d)
        phases = s.uniform(0.0, proc.TWO_PI, size=harmonics)
        amps = np.arange(1, harmonics + 1, dtype=float) ** (-decay)
        seasonal = proc.fourier_series(T, period, amps, phases)
        overlay_params = {
            "harmonics": harmonics,
            "period": period,
            "decay": decay,
            "phases": [float(p) for p in phases],
        }
    else:
        seasonal = np.zeros(T)
        overlay_params = None

    sigma_obs = noise_sigma(s, d)
    noise = s.normal(0.0, sigma_obs, size=T)

    values, weights = _weights_for(s, [memory, seasonal, noise], BundleKind.LONG_MEMORY, d, overrides)
    params = {
        **memory_params,
        "overlay": overlay_params,
        "overlay_prob": float(overlay_prob),
    }
    return values, params, weights, sigma_obs


def _gen_volatility_events(s, T, d, overrides):
    omega, alpha, beta = garch_params(d)
    vol = proc.gen_garch(s, T, omega, alpha, beta)

    base_rate, excitation, decay = hawkes_params(d)
    excitation = overrides.get("excitation", excitation)
    events = proc.gen_hawkes(s, T, base_rate, excitation, decay)
    amp = overrides.get("spike_amplitude", spike_amplitude(d))
    spikes = proc.spikes_from_events(events, amp, decay, T)

    sigma_obs = noise_sigma(s, d)
    noise = s.normal(0.0, sigma_obs, size=T)

    values, weights = _weights_for(s, [vol, spikes, noise], BundleKind.VOLATILITY_EVENTS, d, overrides)
    params = {
        "garch": {"omega": omega, "alpha": alpha, "beta": beta},
        "hawkes": {"base_rate": base_rate, "excitation": float(excitation), "decay": decay},
        "spike_amplitude": float(amp),
        "n_events": events.count,
    }
    return values, params, weights, sigma_obs


def _check_difficulty(d: float) -> None:
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"difficulty must lie in [0, 1], got {d}")
