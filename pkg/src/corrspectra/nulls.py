"""Null-model panels and Monte Carlo baselines.

Two nulls are supported: per-asset shuffling of an existing return panel
(destroys temporal cross-correlation, keeps marginals) and i.i.d. standard
Gaussian returns. Baselines summarize ensembles of single null windows:
participation-ratio statistics, the mean sorted eigenvalue profile, and
99th percentiles of absolute asset-component correlations.

Reproducibility contract: simulation s draws from
``numpy.random.default_rng(SeedSequence(master_seed, spawn_key=(s,)))``,
so a simulation's stream depends only on (master_seed, s) and growing
`sims` never changes earlier simulations.
"""

from __future__ import annotations

import datetime as dt
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .correlation import corr_from_standardized
from .panel import AssetMeta, ReturnPanel, standardize_rows
from .spectral import decompose_symmetric

NULL_KINDS = ("shuffled", "gaussian")
CACHE_SCHEMA_VERSION = "1"

_SYNTHETIC_EPOCH = dt.date(2000, 1, 7)


@dataclass(frozen=True)
class NullConfig:
    n_assets: int
    window_len: int
    num_windows: int = 1
    sims: int = 1
    master_seed: int = 0
    kind: str = "gaussian"

    def __post_init__(self):
        if self.n_assets < 2:
            raise ValueError(f"n_assets must be >= 2, got {self.n_assets}")
        if self.window_len < 2:
            raise ValueError(f"window_len must be >= 2, got {self.window_len}")
        if self.num_windows < 1:
            raise ValueError(f"num_windows must be >= 1, got {self.num_windows}")
        if self.sims < 1:
            raise ValueError(f"sims must be >= 1, got {self.sims}")
        if not 0 <= self.master_seed < 2**64:
            raise ValueError("master_seed must be an unsigned 64-bit integer")
        if self.kind not in NULL_KINDS:
            raise ValueError(f"kind must be one of {NULL_KINDS}, got {self.kind!r}")


@dataclass
class NullEnsembleStats:
    """Per-rank Monte Carlo summaries; abs_corr_p99 is NaN beyond the
    max_rank it was computed for."""

    pr_mean: np.ndarray
    pr_std: np.ndarray
    scree_mean: np.ndarray
    abs_corr_p99: np.ndarray
    config: NullConfig

    @property
    def p99_ranks(self) -> int:
        """Number of leading abs_corr_p99 ranks actually populated."""
        finite = np.isfinite(self.abs_corr_p99)
        return int(np.argmin(finite)) if not finite.all() else len(self.abs_corr_p99)


@dataclass(frozen=True)
class FactorSpec:
    """Block factor market: asset i in block b returns
    loadings[b] * f_b(t) + noise_std * eps_i(t)."""

    block_sizes: tuple[int, ...]
    loadings: tuple[float, ...]
    noise_std: float

    def __post_init__(self):
        object.__setattr__(self, "block_sizes", tuple(self.block_sizes))
        object.__setattr__(self, "loadings", tuple(self.loadings))
        if not self.block_sizes or any(b < 1 for b in self.block_sizes):
            raise ValueError("block_sizes must be positive integers")
        if len(self.loadings) != len(self.block_sizes):
            raise ValueError("need one loading per block")
        if any(not 0.0 <= lam <= 1.0 for lam in self.loadings):
            raise ValueError("loadings must lie in [0, 1]")
        if self.noise_std <= 0.0:
            raise ValueError("noise_std must be positive")

    @property
    def num_factors(self) -> int:
        return len(self.block_sizes)

    @property
    def n_assets(self) -> int:
        return sum(self.block_sizes)


def sim_rng(master_seed: int, sim_index: int) -> np.random.Generator:
    """Child generator for one simulation; the documented seed contract."""
    return np.random.default_rng(
        np.random.SeedSequence(master_seed, spawn_key=(sim_index,))
    )


def _synthetic_dates(length: int) -> list[dt.date]:
    return [_SYNTHETIC_EPOCH + dt.timedelta(weeks=t) for t in range(length)]


def _synthetic_meta(prefix: str, n_assets: int) -> list[AssetMeta]:
    width = max(3, len(str(n_assets)))
    return [
        AssetMeta(ticker=f"{prefix}{i + 1:0{width}d}", asset_class="equities")
        for i in range(n_assets)
    ]


def shuffle_panel(returns: ReturnPanel, seed: int) -> ReturnPanel:
    """Independently permute each asset's return series in time.

    Kills temporal alignment between assets while preserving every asset's
    return distribution. Rows are permuted in panel order from a single
    seeded generator, so output is a pure function of (panel, seed).
    """
    if returns.returns.shape[1] < 2:
        raise ValueError("need at least 2 returns to shuffle")
    rng = np.random.default_rng(seed)
    shuffled = np.empty_like(returns.returns)
    for i in range(returns.returns.shape[0]):
        shuffled[i] = rng.permutation(returns.returns[i])
    return ReturnPanel(
        dates=list(returns.dates), returns=shuffled, meta=list(returns.meta)
    )


def simulate_gaussian_panel(n_assets: int, length: int, seed: int) -> ReturnPanel:
    """Panel of i.i.d. standard normal returns with synthetic SIM tickers."""
    if n_assets < 2 or length < 2:
        raise ValueError("need n_assets >= 2 and length >= 2")
    rng = np.random.default_rng(seed)
    return ReturnPanel(
        dates=_synthetic_dates(length),
        returns=rng.standard_normal((n_assets, length)),
        meta=_synthetic_meta("SIM", n_assets),
    )


def synthetic_factor_panel(spec: FactorSpec, length: int, seed: int) -> ReturnPanel:
    """Planted block-factor panel for validating structure detectors."""
    if length < 2:
        raise ValueError("need length >= 2")
    rng = np.random.default_rng(seed)
    factors = rng.standard_normal((spec.num_factors, length))
    noise = rng.standard_normal((spec.n_assets, length))
    returns = np.empty((spec.n_assets, length))
    row = 0
    for b, (lam, size) in enumerate(zip(spec.loadings, spec.block_sizes)):
        block = slice(row, row + size)
        returns[block] = lam * factors[b] + spec.noise_std * noise[block]
        row += size
    return ReturnPanel(
        dates=_synthetic_dates(length),
        returns=returns,
        meta=_synthetic_meta("FAC", spec.n_assets),
    )


def _null_window(rng: np.random.Generator, config: NullConfig) -> np.ndarray:
    """One standardized null window (n_assets x window_len)."""
    x = rng.standard_normal((config.n_assets, config.window_len))
    if config.kind == "shuffled":
        for i in range(config.n_assets):
            x[i] = rng.permutation(x[i])
    return standardize_rows(x)


def null_windows(config: NullConfig) -> list[np.ndarray]:
    """`num_windows` independent standardized null windows (child seeds 0..)."""
    return [
        _null_window(sim_rng(config.master_seed, s), config)
        for s in range(config.num_windows)
    ]


def nearest_rank_percentile(values: np.ndarray, pct: float) -> float:
    """Nearest-rank percentile of a pooled sample (deterministic)."""
    if values.size == 0:
        raise ValueError("empty sample")
    ordered = np.sort(values, axis=None)
    rank = max(1, math.ceil(pct / 100.0 * ordered.size))
    return float(ordered[rank - 1])


def null_ensemble_stats(config: NullConfig, max_rank: int = 0) -> NullEnsembleStats:
    """One Monte Carlo sweep collecting PR, scree, and |r| percentile baselines.

    Each simulation generates a single null window, decomposes its
    correlation matrix, and contributes: participation ratios per rank,
    the sorted eigenvalues, and (for ranks <= max_rank) the N absolute
    asset-component correlations |omega_ki| sqrt(beta_k). Aggregation uses
    running sums, so results do not depend on iteration order.
    """
    n = config.n_assets
    if not 0 <= max_rank <= n:
        raise ValueError(f"max_rank must be in [0, {n}], got {max_rank}")
    pr_sum = np.zeros(n)
    pr_sq = np.zeros(n)
    scree_sum = np.zeros(n)
    pooled = [np.empty((config.sims, n)) for _ in range(max_rank)]
    for s in range(config.sims):
        z_hat = _null_window(sim_rng(config.master_seed, s), config)
        beta, omega = decompose_symmetric(corr_from_standardized(z_hat), s)
        pr = 1.0 / (omega**4).sum(axis=1)
        pr_sum += pr
        pr_sq += pr * pr
        scree_sum += beta
        for k in range(max_rank):
            pooled[k][s] = np.abs(omega[k]) * math.sqrt(max(beta[k], 0.0))
    pr_mean = pr_sum / config.sims
    pr_var = np.clip(pr_sq / config.sims - pr_mean**2, 0.0, None)
    p99 = np.full(n, np.nan)
    for k in range(max_rank):
        p99[k] = nearest_rank_percentile(pooled[k], 99.0)
    return NullEnsembleStats(
        pr_mean=pr_mean,
        pr_std=np.sqrt(pr_var),
        scree_mean=scree_sum / config.sims,
        abs_corr_p99=p99,
        config=config,
    )


def pr_baseline_stats(config: NullConfig) -> NullEnsembleStats:
    """Mean and population std of the participation ratio per rank."""
    return null_ensemble_stats(config, max_rank=0)


def random_scree_profile(config: NullConfig) -> NullEnsembleStats:
    """Mean k-th largest null eigenvalue for every rank k."""
    return null_ensemble_stats(config, max_rank=0)


def abs_corr_percentile99(config: NullConfig, max_rank: int) -> NullEnsembleStats:
    """99th percentile of |r(asset, component)| on null windows, per rank."""
    if max_rank < 1:
        raise ValueError(f"max_rank must be >= 1, got {max_rank}")
    return null_ensemble_stats(config, max_rank=max_rank)


def _cache_key(config: NullConfig) -> str:
    return (
        f"N={config.n_assets},T={config.window_len},sims={config.sims},"
        f"kind={config.kind},seed={config.master_seed}"
    )


def _stats_to_payload(stats: NullEnsembleStats) -> dict:
    def listify(arr):
        return [None if not np.isfinite(v) else float(v) for v in arr]

    return {
        "num_windows": stats.config.num_windows,
        "pr_mean": listify(stats.pr_mean),
        "pr_std": listify(stats.pr_std),
        "scree_mean": listify(stats.scree_mean),
        "abs_corr_p99": listify(stats.abs_corr_p99),
    }


def _payload_to_stats(payload: dict, config: NullConfig) -> NullEnsembleStats:
    def arr(key):
        return np.array(
            [np.nan if v is None else v for v in payload[key]], dtype=float
        )

    return NullEnsembleStats(
        pr_mean=arr("pr_mean"),
        pr_std=arr("pr_std"),
        scree_mean=arr("scree_mean"),
        abs_corr_p99=arr("abs_corr_p99"),
        config=config,
    )


def cached_ensemble_stats(
    config: NullConfig, max_rank: int, cache_path=None
) -> NullEnsembleStats:
    """null_ensemble_stats with an optional JSON file cache.

    Entries are keyed by (N, T, sims, kind, master_seed). A hit is reused
    only if it covers at least `max_rank` percentile ranks; otherwise the
    entry is recomputed and overwritten. Cached floats round-trip exactly,
    so cache hits and fresh computations produce identical downstream
    bytes.
    """
    if cache_path is None:
        return null_ensemble_stats(config, max_rank)
    cache_path = Path(cache_path)
    key = _cache_key(config)
    cache = {"schema_version": CACHE_SCHEMA_VERSION, "entries": {}}
    if cache_path.exists():
        with open(cache_path, encoding="utf-8") as fh:
            loaded = json.load(fh)
        if loaded.get("schema_version") == CACHE_SCHEMA_VERSION:
            cache = loaded
    entry = cache["entries"].get(key)
    if entry is not None:
        stats = _payload_to_stats(entry, config)
        if stats.p99_ranks >= max_rank:
            return stats
    stats = null_ensemble_stats(config, max_rank)
    cache["entries"][key] = _stats_to_payload(stats)
    cache_path.parent.mkdir(parents=True, exist_ok=True)
    with open(cache_path, "w", encoding="utf-8") as fh:
        json.dump(cache, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return stats
