"""Core configuration and market-state types.

Everything here is an immutable value object; instances validate themselves
on construction and can be shared freely between threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum


class ParameterError(ValueError):
    """A model parameter or state violates its documented range."""


class Action(Enum):
    """A line of production the typical producer can choose."""

    CORN = "corn"
    SUGAR = "sugar"


class ShortSide(Enum):
    """Which good is on the short side of the market, if any."""

    CORN = "corn"
    SUGAR = "sugar"
    BALANCED = "balanced"


_PARAM_FIELDS = ("n_producers", "temperature", "payoff_short", "payoff_long")


@dataclass(frozen=True)
class ModelParams:
    """Full configuration of one experiment.

    Parameters
    ----------
    n_producers : int
        Number of producers N; market states are corn counts 0..N.
    temperature : float
        Behavior scale T > 0. Small T makes producers acutely sensitive to
        payoff differences, large T makes choices nearly random.
    payoff_short : float
        Payoff to a producer on the short side of the market (default 1).
    payoff_long : float
        Payoff to a producer on the long side (default 0). Must be strictly
        below ``payoff_short``.
    """

    n_producers: int
    temperature: float
    payoff_short: float = 1.0
    payoff_long: float = 0.0

    def __post_init__(self) -> None:
        n = self.n_producers
        if isinstance(n, bool) or not isinstance(n, int):
            raise ParameterError(f"n_producers must be an integer, got {n!r}")
        for name in ("temperature", "payoff_short", "payoff_long"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParameterError(f"{name} must be a real number, got {value!r}")
            object.__setattr__(self, name, float(value))
        validate_params(self)

    @property
    def payoff_gap(self) -> float:
        """Short-side advantage payoff_short - payoff_long (always > 0)."""
        return self.payoff_short - self.payoff_long

    def to_dict(self) -> dict:
        return {
            "n_producers": self.n_producers,
            "temperature": self.temperature,
            "payoff_short": self.payoff_short,
            "payoff_long": self.payoff_long,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        """Build params from a configuration mapping; unknown keys rejected."""
        unknown = sorted(set(data) - set(_PARAM_FIELDS))
        if unknown:
            raise ParameterError(f"unknown configuration keys: {', '.join(unknown)}")
        missing = [k for k in ("n_producers", "temperature") if k not in data]
        if missing:
            raise ParameterError(f"missing configuration keys: {', '.join(missing)}")
        return cls(**data)

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        data = json.loads(text)
        if not isinstance(data, dict):
            raise ParameterError("configuration JSON must be an object")
        return cls.from_dict(data)


def validate_params(params: ModelParams) -> ModelParams:
    """Check every ModelParams invariant; return the params unchanged.

    Raises
    ------
    ParameterError
        Naming the violated invariant.
    """
    if params.n_producers < 2:
        raise ParameterError("need at least 2 producers")
    if not math.isfinite(params.temperature) or params.temperature <= 0.0:
        raise ParameterError("temperature must be positive")
    if not math.isfinite(params.payoff_short) or not math.isfinite(params.payoff_long):
        raise ParameterError("payoffs must be finite")
    if params.payoff_short <= params.payoff_long:
        raise ParameterError("payoff_short must exceed payoff_long")
    return params


@dataclass(frozen=True)
class MarketState:
    """Allocation of producers at the start of a period: the corn count."""

    corn_count: int
    n_producers: int

    def __post_init__(self) -> None:
        for name in ("corn_count", "n_producers"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ParameterError(f"{name} must be an integer, got {value!r}")
        if self.n_producers < 1:
            raise ParameterError("need at least 1 producer")
        if not 0 <= self.corn_count <= self.n_producers:
            raise ParameterError(
                f"corn_count must lie in [0, {self.n_producers}], got {self.corn_count}"
            )

    @property
    def corn_fraction(self) -> float:
        return self.corn_count / self.n_producers

    @property
    def sugar_count(self) -> int:
        return self.n_producers - self.corn_count

    def is_balanced(self) -> bool:
        """True when exactly half the producers grow corn (even N only)."""
        return 2 * self.corn_count == self.n_producers


@dataclass(frozen=True)
class MarketOutcome:
    """Resolved market for one state: who wins, with what probability."""

    short_side: ShortSide
    winner_payoff: float
    loser_payoff: float
    winner_probability: float
    excess_supply_per_producer: float
