"""Event-level Monte Carlo simulator: the oracle for every analytic result.

Each trial draws a full geometric realization (RIS layout, one uniform
receiver, a fresh Poisson obstacle field), applies the exact segment-disc
blockage test and the SNR thresholds, and resolves coverage with the
two-step association: direct link first, reflected link only if the direct
link is blocked or below threshold.  Unlike the analytic path, the
simulator selects the nearest RIS by true Euclidean argmin over all walls
and evaluates all correlations between links exactly; the gap to the
analytic composition is precisely what the validation suite measures.

Reproducibility: trial i consumes its own counter-derived stream, a pure
function of (master_seed, i), with a fixed draw order inside the trial.
Results are therefore independent of scheduling and worker count, and
accumulation uses integer counts only.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass

import numpy as np

from .blockage import BlockageParams
from .coverage import CoverageBreakdown, RadioParams
from .errors import DomainError
from .geometry import RoomGeometry, point_segment_distance, sample_ris_along, wall_point
from .numerics import CdfTable

_WILSON_Z = 1.959963984540054   # two-sided 95%

_COUNT_FIELDS = ("los_tr", "los_ts", "los_sr", "snr_d_ok", "snr_i_ok",
                 "covered_direct", "covered_indirect", "covered")


@dataclass(frozen=True)
class SimConfig:
    room: RoomGeometry
    n: int                  # RIS per wall
    blk: BlockageParams
    radio: RadioParams
    trials: int = 100_000
    master_seed: int = 0

    def __post_init__(self):
        if int(self.trials) < 1:
            raise DomainError("trial count must be at least 1")
        if not 0 <= int(self.master_seed) < 2 ** 64:
            raise DomainError("master seed must fit in 64 bits")
        if int(self.n) < 1:
            raise DomainError("RIS count per wall must be at least 1")
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        object.__setattr__(self, "n", int(self.n))


@dataclass(frozen=True)
class TrialOutcome:
    d_tr: float
    d_ts: float
    d_sr: float
    los_tr: bool
    los_ts: bool
    los_sr: bool
    snr_d_ok: bool
    snr_i_ok: bool
    covered_direct: bool
    covered_indirect: bool
    covered: bool


@dataclass(frozen=True)
class CpEstimate:
    estimate: float
    ci95_halfwidth: float
    breakdown: CoverageBreakdown   # empirical per-factor frequencies
    trials: int


def derive_stream(master_seed: int, trial_index: int) -> np.random.Generator:
    """Counter-based stream: state is a pure function of (seed, index)."""
    key = np.array([master_seed, trial_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def run_trial(config: SimConfig, rng: np.random.Generator) -> TrialOutcome:
    """One realization under a caller-supplied stream.

    Draw order is fixed: RIS along-wall coordinates (4, n), receiver (2,),
    obstacle count, obstacle centers (N, 2).
    """
    room, a = config.room, config.room.a
    tx = np.array(room.tx)

    along = sample_ris_along(a, config.n, rng)
    ris = np.concatenate([wall_point(a, w, along[w - 1]) for w in (1, 2, 3, 4)])
    receiver = rng.uniform(0.0, a, size=2)
    n_obs = int(rng.poisson(config.blk.lambda_o * a * a))
    centers = rng.uniform(0.0, a, size=(n_obs, 2))

    diff = ris - tx
    dist_ts_all = np.sqrt(np.sum(diff * diff, axis=1))
    k = int(np.argmin(dist_ts_all))     # true nearest, any wall
    d_ts = float(dist_ts_all[k])
    sel = ris[k]
    d_sr = float(np.hypot(sel[0] - receiver[0], sel[1] - receiver[1]))
    d_tr = float(np.hypot(tx[0] - receiver[0], tx[1] - receiver[1]))

    radius = 0.5 * config.blk.d_b
    if n_obs:
        los_tr = not bool(np.any(point_segment_distance(centers, tx, receiver) < radius))
        los_ts = not bool(np.any(point_segment_distance(centers, tx, sel) < radius))
        los_sr = not bool(np.any(point_segment_distance(centers, sel, receiver) < radius))
    else:
        los_tr = los_ts = los_sr = True

    snr_d_ok = d_tr <= config.radio.critical_distance_direct()
    snr_i_ok = d_ts * d_sr <= config.radio.critical_product_indirect()

    covered_direct = los_tr and snr_d_ok
    covered_indirect = (not covered_direct) and los_ts and los_sr and snr_i_ok
    return TrialOutcome(
        d_tr=d_tr, d_ts=d_ts, d_sr=d_sr,
        los_tr=los_tr, los_ts=los_ts, los_sr=los_sr,
        snr_d_ok=snr_d_ok, snr_i_ok=snr_i_ok,
        covered_direct=covered_direct, covered_indirect=covered_indirect,
        covered=covered_direct or covered_indirect,
    )


def _count_trials(config: SimConfig, start: int, stop: int) -> np.ndarray:
    counts = np.zeros(len(_COUNT_FIELDS), dtype=np.int64)
    for i in range(start, stop):
        outcome = run_trial(config, derive_stream(config.master_seed, i))
        for j, name in enumerate(_COUNT_FIELDS):
            counts[j] += getattr(outcome, name)
    return counts


def _count_trials_star(args) -> np.ndarray:
    return _count_trials(*args)


def wilson_halfwidth(successes: int, trials: int, z: float = _WILSON_Z) -> float:
    """Half-width of the Wilson score 95% interval."""
    n = trials
    p = successes / n
    denom = 1.0 + z * z / n
    return float(z * np.sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom)


def estimate_cp(config: SimConfig, threads: int = 1) -> CpEstimate:
    """Coverage probability estimate with a Wilson 95% interval and empirical
    per-factor frequencies.  Worker count affects runtime only: trials keep
    their per-index streams and counts add commutatively."""
    trials = config.trials
    if threads <= 1 or trials < 256:
        counts = _count_trials(config, 0, trials)
    else:
        n_chunks = min(threads * 4, trials)
        bounds = np.linspace(0, trials, n_chunks + 1).astype(int)
        jobs = [(config, int(bounds[i]), int(bounds[i + 1])) for i in range(n_chunks)]
        with concurrent.futures.ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(_count_trials_star, jobs))
        counts = np.sum(parts, axis=0)
    freq = dict(zip(_COUNT_FIELDS, counts / trials))
    breakdown = CoverageBreakdown(
        p_los_ts=freq["los_ts"], p_los_sr=freq["los_sr"], p_los_tr=freq["los_tr"],
        p_snr_i=freq["snr_i_ok"], p_snr_d=freq["snr_d_ok"],
        p_cov_direct=freq["covered_direct"],
        p_cov_indirect=freq["covered_indirect"],
        p_cov_total=freq["covered_direct"] + freq["covered_indirect"],
    )
    covered = int(counts[list(_COUNT_FIELDS).index("covered")])
    return CpEstimate(
        estimate=covered / trials,
        ci95_halfwidth=wilson_halfwidth(covered, trials),
        breakdown=breakdown,
        trials=trials,
    )


def empirical_cdf(samples, grid) -> CdfTable:
    """Fraction of samples at or below each grid point."""
    samples = np.sort(np.asarray(samples, dtype=float))
    if samples.size == 0:
        raise DomainError("empirical CDF needs at least one sample")
    grid = np.asarray(grid, dtype=float)
    values = np.searchsorted(samples, grid, side="right") / samples.size
    return CdfTable(grid=grid, values=values)


def sample_link_distances(room: RoomGeometry, n: int, trials: int,
                          rng: np.random.Generator,
                          block: int = 20_000):
    """Vectorized sampler of (d_tr, d_ts, d_sr) triples for distribution
    validation; no obstacles or SNR involved.  Blocked to bound memory."""
    if n < 1:
        raise DomainError("RIS count per wall must be at least 1")
    if trials < 1:
        raise DomainError("trial count must be at least 1")
    a = room.a
    tx = np.array(room.tx)
    out_tr = np.empty(trials)
    out_ts = np.empty(trials)
    out_sr = np.empty(trials)
    for lo in range(0, trials, block):
        hi = min(lo + block, trials)
        b = hi - lo
        along = rng.uniform(0.0, a, size=(b, 4, n))
        pts = np.empty((b, 4, n, 2))
        pts[:, 0, :, 0], pts[:, 0, :, 1] = 0.0, along[:, 0, :]
        pts[:, 1, :, 0], pts[:, 1, :, 1] = along[:, 1, :], 0.0
        pts[:, 2, :, 0], pts[:, 2, :, 1] = a, along[:, 2, :]
        pts[:, 3, :, 0], pts[:, 3, :, 1] = along[:, 3, :], a
        flat = pts.reshape(b, 4 * n, 2)
        d_all = np.sqrt(np.sum((flat - tx) ** 2, axis=2))
        k = d_all.argmin(axis=1)
        rows = np.arange(b)
        sel = flat[rows, k]
        receiver = rng.uniform(0.0, a, size=(b, 2))
        out_ts[lo:hi] = d_all[rows, k]
        out_sr[lo:hi] = np.hypot(sel[:, 0] - receiver[:, 0], sel[:, 1] - receiver[:, 1])
        out_tr[lo:hi] = np.hypot(tx[0] - receiver[:, 0], tx[1] - receiver[:, 1])
    return out_tr, out_ts, out_sr
