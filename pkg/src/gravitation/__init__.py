"""Statistical equilibrium of the division of labor between two goods.

Producers re-choose a line of production every period through an
entropy-constrained (logit) response to short-side payoff advantages,
inducing a binomial Markov chain on the count of corn producers. The
package computes the exact transition kernel, its stationary distribution
by three independent methods, seeded Monte Carlo trajectories, and the
Lorenz/Gini summary of the ergodic income distribution, plus deterministic
sweep and figure pipelines.
"""

from .choice import corn_choice_probability, gibbs, log_odds, logit_response
from .dynamics import (
    SIMULATION_BACKEND,
    Trajectory,
    empirical_distribution,
    make_rng,
    run,
    step,
)
from .inequality import DegenerateIncomeError, LorenzGini, income_distribution, lorenz_gini
from .kernel import (
    ConvergenceError,
    Provenance,
    StateDistribution,
    TransitionKernel,
    binomial_pmf,
    build_kernel,
    stationary_analytic,
    stationary_eigen,
    stationary_mean,
    stationary_power,
    total_variation,
)
from .experiments import Method, OutputKind, SweepSpec, reproduce_figures, sweep
from .model import (
    Action,
    MarketOutcome,
    MarketState,
    ModelParams,
    ParameterError,
    ShortSide,
    validate_params,
)
from .payoff import market_outcome, payoff_of_action

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ConvergenceError",
    "DegenerateIncomeError",
    "LorenzGini",
    "MarketOutcome",
    "MarketState",
    "Method",
    "ModelParams",
    "OutputKind",
    "ParameterError",
    "Provenance",
    "SIMULATION_BACKEND",
    "ShortSide",
    "StateDistribution",
    "SweepSpec",
    "Trajectory",
    "TransitionKernel",
    "binomial_pmf",
    "build_kernel",
    "corn_choice_probability",
    "empirical_distribution",
    "gibbs",
    "income_distribution",
    "log_odds",
    "logit_response",
    "lorenz_gini",
    "make_rng",
    "market_outcome",
    "payoff_of_action",
    "reproduce_figures",
    "run",
    "stationary_analytic",
    "stationary_eigen",
    "stationary_mean",
    "stationary_power",
    "step",
    "sweep",
    "total_variation",
    "validate_params",
]
