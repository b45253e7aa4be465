"""Short-side / long-side payoff schedule for the two-good market.

When the market is unbalanced, producers of the scarce good complete all
their trades and earn ``payoff_short``; producers of the abundant good earn
``payoff_long``. At an exactly balanced allocation neither side holds an
advantage and both actions pay the midpoint, so the downstream choice rule
comes out at exactly one half.
"""

from __future__ import annotations

from .model import Action, MarketOutcome, MarketState, ModelParams, ShortSide


def _short_side(state: MarketState) -> ShortSide:
    # Integer comparison: 2*k vs N avoids float rounding at the boundary.
    if 2 * state.corn_count < state.n_producers:
        return ShortSide.CORN
    if 2 * state.corn_count > state.n_producers:
        return ShortSide.SUGAR
    return ShortSide.BALANCED


def market_outcome(params: ModelParams, state: MarketState) -> MarketOutcome:
    """Resolve the market at ``state``.

    The winner probability is the chance that the typical producer sits on
    the short side, ``min(n_c, 1 - n_c)`` for an unbalanced market and one
    half at balance. The per-producer excess supply ``|1 - 2 n_c|`` of the
    long-side good is discarded at the end of the period.
    """
    side = _short_side(state)
    x = state.corn_fraction
    if side is ShortSide.BALANCED:
        midpoint = 0.5 * (params.payoff_short + params.payoff_long)
        return MarketOutcome(
            short_side=side,
            winner_payoff=midpoint,
            loser_payoff=midpoint,
            winner_probability=0.5,
            excess_supply_per_producer=0.0,
        )
    return MarketOutcome(
        short_side=side,
        winner_payoff=params.payoff_short,
        loser_payoff=params.payoff_long,
        winner_probability=min(x, 1.0 - x),
        excess_supply_per_producer=abs(1.0 - 2.0 * x),
    )


def payoff_of_action(params: ModelParams, state: MarketState, action: Action) -> float:
    """Payoff to a producer who chose ``action`` given the market ``state``.

    Returns ``payoff_short`` on the short side, ``payoff_long`` on the long
    side, and the midpoint when the market is balanced.
    """
    side = _short_side(state)
    if side is ShortSide.BALANCED:
        return 0.5 * (params.payoff_short + params.payoff_long)
    on_short_side = (action is Action.CORN) == (side is ShortSide.CORN)
    return params.payoff_short if on_short_side else params.payoff_long
