"""Seeded Monte Carlo simulation of the producer population.

Trajectories are driven by the Philox 4x64-10 counter-based bit generator
(``numpy.random.Philox``) keyed through ``numpy.random.SeedSequence``, so a
run is fully reproducible from ``(params, initial, periods, seed)`` on any
platform. The default path draws the next corn count by inverting the
per-block binomial CDF with a single uniform per period; a producer-level
debug path flips one coin per producer instead. The two are statistically
identical.

The inner loop runs in the compiled ``_simcore`` extension when it was built
and falls back to a pure-Python twin otherwise; ``SIMULATION_BACKEND`` names
the active one. Both produce byte-identical trajectories.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from .formats import write_csv
from .kernel import (
    Provenance,
    StateDistribution,
    binomial_row,
    block_choice_probabilities,
)
from .model import MarketState, ModelParams, ParameterError, validate_params

try:
    from ._simcore import simulate_counts as _simulate_counts

    SIMULATION_BACKEND = "cython"
except ImportError:  # compiled core is optional
    from ._simcore_py import simulate_counts as _simulate_counts

    SIMULATION_BACKEND = "python"

DEFAULT_BURN_IN = 1000


@dataclass(frozen=True)
class Trajectory:
    """A realized path of corn counts, one per production period."""

    seed: int
    states: np.ndarray
    params: ModelParams
    burn_in: int

    @property
    def periods(self) -> int:
        return self.states.shape[0]


def make_rng(seed: int, stream: int | None = None) -> np.random.Generator:
    """Deterministic Philox generator for ``seed``.

    ``stream`` derives an independent generator for a parallel cell, keyed
    as ``SeedSequence(seed, spawn_key=(stream,))``.
    """
    if stream is None:
        seq = np.random.SeedSequence(seed)
    else:
        seq = np.random.SeedSequence(seed, spawn_key=(stream,))
    return np.random.Generator(np.random.Philox(seq))


@lru_cache(maxsize=64)
def _sampling_tables(params: ModelParams):
    """Per-block binomial CDFs plus the state -> block row mapping."""
    n = params.n_producers
    probs = block_choice_probabilities(params)
    names = sorted(probs)
    cdfs = np.empty((len(names), n + 1))
    for row, name in enumerate(names):
        cdf = np.cumsum(binomial_row(n, probs[name]))
        cdf[-1] = 1.0  # uniforms are < 1, so the search never overruns
        cdfs[row] = cdf
    block_index = np.empty(n + 1, dtype=np.int64)
    for k in range(n + 1):
        if 2 * k < n:
            name = "low"
        elif 2 * k > n:
            name = "high"
        else:
            name = "balanced"
        block_index[k] = names.index(name)
    choice_probs = np.array([probs[name] for name in names])
    return cdfs, block_index, choice_probs


def step(
    params: ModelParams,
    state: MarketState,
    rng: np.random.Generator,
    producer_level: bool = False,
) -> MarketState:
    """Advance the market by one period.

    The next corn count is Binomial(N, p) with p the corn-choice probability
    at ``state``. With ``producer_level=True`` the draw is made as N
    individual coin flips (one uniform per producer) instead of one
    inverse-CDF lookup; the distributions are identical.
    """
    validate_params(params)
    if state.n_producers != params.n_producers:
        raise ParameterError("state and params disagree on the number of producers")
    cdfs, block_index, choice_probs = _sampling_tables(params)
    block = int(block_index[state.corn_count])
    if producer_level:
        flips = rng.random(params.n_producers) < choice_probs[block]
        nxt = int(flips.sum())
    else:
        nxt = int(np.searchsorted(cdfs[block], rng.random(), side="left"))
    return MarketState(nxt, params.n_producers)


def run(
    params: ModelParams,
    initial: MarketState,
    periods: int,
    burn_in: int = DEFAULT_BURN_IN,
    seed: int = 0,
    producer_level: bool = False,
) -> Trajectory:
    """Simulate ``periods`` states starting from ``initial``.

    The trajectory records ``initial`` as its first state followed by
    ``periods - 1`` transitions. ``burn_in`` is stored for downstream
    histogramming and must be smaller than ``periods``.
    """
    validate_params(params)
    if initial.n_producers != params.n_producers:
        raise ParameterError("initial state and params disagree on the number of producers")
    if not isinstance(periods, int) or isinstance(periods, bool) or periods < 1:
        raise ParameterError("periods must be a positive integer")
    if not isinstance(burn_in, int) or isinstance(burn_in, bool) or burn_in < 0:
        raise ParameterError("burn-in must be a non-negative integer")
    if burn_in >= periods:
        raise ParameterError("burn-in must be less than periods")

    rng = make_rng(seed)
    states = np.empty(periods, dtype=np.int64)
    states[0] = initial.corn_count
    if periods > 1:
        if producer_level:
            _, block_index, choice_probs = _sampling_tables(params)
            current = initial.corn_count
            for t in range(1, periods):
                p = choice_probs[block_index[current]]
                current = int((rng.random(params.n_producers) < p).sum())
                states[t] = current
        else:
            cdfs, block_index, _ = _sampling_tables(params)
            uniforms = rng.random(periods - 1)
            _simulate_counts(uniforms, cdfs, block_index, initial.corn_count, states)
    states.setflags(write=False)
    return Trajectory(seed=int(seed), states=states, params=params, burn_in=burn_in)


def empirical_distribution(traj: Trajectory) -> StateDistribution:
    """Normalized histogram of the post-burn-in states."""
    if traj.burn_in >= traj.periods:
        raise ParameterError("trajectory is no longer than its burn-in")
    kept = traj.states[traj.burn_in:]
    counts = np.bincount(kept, minlength=traj.params.n_producers + 1)
    return StateDistribution(counts / counts.sum(), Provenance.MONTE_CARLO_EMPIRICAL)


def save_trajectory(traj: Trajectory, path) -> tuple[Path, Path]:
    """Write the trajectory CSV plus a metadata sidecar JSON.

    The CSV has columns ``period,corn_count``; the sidecar records params,
    seed, burn-in, and period count. Returns both paths.
    """
    csv_path = Path(path)
    rows = (f"{t},{int(k)}" for t, k in enumerate(traj.states))
    write_csv(csv_path, "period,corn_count", rows)
    meta_path = csv_path.with_name(csv_path.stem + ".meta.json")
    meta = {
        "params": traj.params.to_dict(),
        "seed": traj.seed,
        "burn_in": traj.burn_in,
        "periods": traj.periods,
    }
    with open(meta_path, "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return csv_path, meta_path


def ergodic_deviation(traj: Trajectory, exact: StateDistribution) -> float:
    """Total variation between the empirical histogram and an exact target.

    Diagnostic for judging burn-in and horizon adequacy.
    """
    from .kernel import total_variation

    return total_variation(empirical_distribution(traj), exact)


__all__ = [
    "DEFAULT_BURN_IN",
    "SIMULATION_BACKEND",
    "Trajectory",
    "empirical_distribution",
    "ergodic_deviation",
    "make_rng",
    "run",
    "save_trajectory",
    "step",
]
