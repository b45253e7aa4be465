"""Lorenz curve and Gini coefficient of the ergodic income distribution.

Income is the single-period payoff of the typical producer averaged over
the long-run distribution of allocations: with probability ``p_win`` the
producer lands on the short side and earns ``payoff_short``, otherwise
``payoff_long``. The Lorenz curve of such a two-point law is piecewise
linear with a single kink at population share ``1 - p_win``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .formats import fmt, write_csv
from .kernel import StateDistribution, _as_probabilities
from .model import ModelParams, ParameterError, validate_params


class DegenerateIncomeError(ValueError):
    """Total income is zero, so the Gini coefficient is undefined."""


@dataclass(frozen=True)
class LorenzGini:
    """Piecewise-linear Lorenz curve points plus the scalar Gini."""

    lorenz_points: tuple[tuple[float, float], ...]
    gini: float


def income_distribution(params: ModelParams, dist: StateDistribution) -> float:
    """Probability that a random producer earns the short-side payoff.

    Averages the short-side share ``min(k, N - k) / N`` over the state
    distribution. At the balanced state the share is one half, which the
    same expression already yields.
    """
    validate_params(params)
    pi = _as_probabilities(dist)
    n = params.n_producers
    if pi.shape != (n + 1,):
        raise ParameterError(f"distribution must have {n + 1} entries, got {pi.shape}")
    k = np.arange(n + 1)
    win_share = np.minimum(k, n - k) / n
    return float(pi @ win_share)


def lorenz_gini(p_win: float, payoff_short: float, payoff_long: float) -> LorenzGini:
    """Lorenz curve and Gini of the two-point income law.

    Parameters
    ----------
    p_win : float
        Population share earning ``payoff_short``; the rest earn
        ``payoff_long``.
    payoff_short, payoff_long : float
        Income levels with ``payoff_short > payoff_long >= 0``.

    Returns
    -------
    LorenzGini
        Points (0,0), (1 - p_win, low-income share), (1,1); the Gini is one
        minus twice the area under the piecewise-linear curve. With
        ``payoff_long = 0`` this reduces to ``1 - p_win``.

    Raises
    ------
    DegenerateIncomeError
        When total income is zero (``p_win = 0`` with ``payoff_long = 0``);
        the Gini coefficient has no value there.
    """
    if not 0.0 <= p_win <= 1.0:
        raise ParameterError(f"p_win must lie in [0, 1], got {p_win!r}")
    if payoff_long < 0.0:
        raise ParameterError("payoff_long must be non-negative")
    if payoff_short <= payoff_long:
        raise ParameterError("payoff_short must exceed payoff_long")
    total = (1.0 - p_win) * payoff_long + p_win * payoff_short
    if total == 0.0:
        raise DegenerateIncomeError("total income is zero; Gini undefined")
    kink_x = 1.0 - p_win
    kink_y = (1.0 - p_win) * payoff_long / total
    points = ((0.0, 0.0), (kink_x, kink_y), (1.0, 1.0))
    area = 0.0
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        area += (x1 - x0) * (y0 + y1) / 2.0
    return LorenzGini(lorenz_points=points, gini=1.0 - 2.0 * area)


def write_lorenz_csv(result: LorenzGini, path) -> Path:
    """Export the curve with columns ``cum_population,cum_income``."""
    rows = (f"{fmt(x)},{fmt(y)}" for x, y in result.lorenz_points)
    return write_csv(path, "cum_population,cum_income", rows)


def write_summary_json(p_win: float, result: LorenzGini, path) -> Path:
    path = Path(path)
    with open(path, "w") as fh:
        json.dump({"p_win": p_win, "gini": result.gini}, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
