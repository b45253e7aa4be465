"""Entropy-constrained choice rule.

The typical producer's mixed strategy maximizes expected payoff subject to a
floor on its informational entropy; the closed-form solution assigns each
action a frequency proportional to ``exp(payoff / T)``. For two actions this
is the familiar logit response in the payoff difference.
"""

from __future__ import annotations

import math

import numpy as np

from .model import Action, MarketState, ModelParams, ParameterError
from .payoff import payoff_of_action


def _logistic(x: float) -> float:
    # 1 / (1 + e^-x) without overflow for large |x|.
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def gibbs(payoffs, temperature: float) -> np.ndarray:
    """Frequency distribution over actions, proportional to exp(payoff/T).

    Parameters
    ----------
    payoffs : array_like
        Finite payoffs, one per action (K >= 1).
    temperature : float
        Behavior scale T > 0.

    Returns
    -------
    numpy.ndarray
        Strictly positive frequencies summing to one. The largest payoff is
        subtracted before exponentiating, which leaves the result unchanged
        analytically and keeps it finite numerically.
    """
    u = np.asarray(payoffs, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise ParameterError("payoffs must be a non-empty 1-d vector")
    if not np.all(np.isfinite(u)):
        raise ParameterError("payoffs must be finite")
    if not (isinstance(temperature, (int, float)) and math.isfinite(temperature)
            and temperature > 0.0):
        raise ParameterError("temperature must be positive")
    weights = np.exp((u - u.max()) / temperature)
    return weights / weights.sum()


def logit_response(payoff_a: float, payoff_b: float, temperature: float) -> float:
    """Probability of choosing action a out of {a, b}.

    Equals ``1 / (1 + exp((payoff_b - payoff_a) / T))`` and coincides with
    the first component of ``gibbs([payoff_a, payoff_b], T)``.
    """
    for value in (payoff_a, payoff_b):
        if not (isinstance(value, (int, float)) and math.isfinite(value)):
            raise ParameterError("payoffs must be finite")
    if not (isinstance(temperature, (int, float)) and math.isfinite(temperature)
            and temperature > 0.0):
        raise ParameterError("temperature must be positive")
    return _logistic((payoff_a - payoff_b) / temperature)


def log_odds(frequencies) -> float:
    """Relative log odds ``log(f_b / f_a)`` of a two-action distribution.

    For frequencies produced by ``logit_response`` this recovers the scaled
    payoff difference ``(u_b - u_a) / T``.
    """
    f = np.asarray(frequencies, dtype=float)
    if f.shape != (2,):
        raise ParameterError("log odds are defined for exactly two actions")
    if f[0] <= 0.0 or f[1] <= 0.0:
        raise ParameterError("both frequencies must be strictly positive")
    return float(np.log(f[1] / f[0]))


def corn_choice_probability(params: ModelParams, state: MarketState) -> float:
    """Probability the typical producer chooses corn for the next period.

    Producers expect next period's payoffs to equal the payoffs realized at
    ``state``, so the choice is a logit response to the current short-side
    advantage. At a balanced state both payoffs agree and the probability is
    exactly one half.
    """
    u_corn = payoff_of_action(params, state, Action.CORN)
    u_sugar = payoff_of_action(params, state, Action.SUGAR)
    return logit_response(u_corn, u_sugar, params.temperature)
