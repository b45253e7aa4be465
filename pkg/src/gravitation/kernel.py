"""Binomial transition kernel over corn counts and its stationary distribution.

Every producer re-chooses a line of production each period with the same
corn-choice probability, so the next corn count is a Binomial(N, p) draw
whose parameter depends on the current state only through which side of the
half-way point it lies on. The kernel therefore has at most three distinct
rows: one for every state below balance, one for every state above it, and
(for even N) the balanced row itself.

The stationary distribution is computed three independent ways:

* ``stationary_power``    -- fixed-point iteration on the dense kernel,
* ``stationary_eigen``    -- direct linear solve for the eigenvalue-1 left
  eigenvector,
* ``stationary_analytic`` -- exact construction that lumps the chain into
  its 2 or 3 row-blocks, solves the small chain, and mixes the binomial
  rows accordingly; it never materializes the dense matrix.

Cross-checking the three is the package's main numerical oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .choice import corn_choice_probability
from .formats import fmt, write_csv
from .model import MarketState, ModelParams, ParameterError, validate_params

# A dense (N+1)^2 kernel above this size is not practical to store.
MAX_KERNEL_N = 20000

HALF_RULES = ("half", "low", "high")


class ConvergenceError(RuntimeError):
    """A stationary solver failed to reach its tolerance."""


class Provenance(Enum):
    EXACT = "exact"
    MONTE_CARLO_EMPIRICAL = "monte_carlo_empirical"


@dataclass(frozen=True)
class TransitionKernel:
    """Dense row-stochastic transition matrix over corn counts 0..N."""

    matrix: np.ndarray
    params: ModelParams
    half_rule: str = "half"

    @property
    def n_states(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class StateDistribution:
    """Probability vector over corn counts 0..N."""

    probabilities: np.ndarray
    provenance: Provenance = Provenance.EXACT

    @property
    def n_states(self) -> int:
        return self.probabilities.shape[0]


def binomial_pmf(n: int, k: int, p: float) -> float:
    """Probability of k successes in n trials with success probability p.

    Uses exact integer binomial coefficients for n <= 50 and a log-space
    evaluation via ``lgamma`` above that, so large n neither overflows nor
    loses the tails to underflow of intermediate products.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParameterError(f"n must be a non-negative integer, got {n!r}")
    if not isinstance(k, int) or isinstance(k, bool):
        raise ParameterError(f"k must be an integer, got {k!r}")
    if not 0 <= k <= n:
        raise ParameterError(f"k must lie in [0, {n}], got {k}")
    if not (isinstance(p, (int, float)) and 0.0 <= p <= 1.0):
        raise ParameterError(f"p must lie in [0, 1], got {p!r}")
    p = float(p)
    if p == 0.0:
        return 1.0 if k == 0 else 0.0
    if p == 1.0:
        return 1.0 if k == n else 0.0
    if n <= 50:
        return math.comb(n, k) * p**k * (1.0 - p) ** (n - k)
    log_coeff = math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    return math.exp(log_coeff + k * math.log(p) + (n - k) * math.log1p(-p))


def binomial_row(n: int, p: float) -> np.ndarray:
    """Full Binomial(n, p) PMF over k = 0..n as a float vector."""
    return np.array([binomial_pmf(n, k, p) for k in range(n + 1)])


def _check_half_rule(half_rule: str) -> None:
    if half_rule not in HALF_RULES:
        raise ParameterError(f"half_rule must be one of {HALF_RULES}, got {half_rule!r}")


def block_choice_probabilities(params: ModelParams, half_rule: str = "half") -> dict:
    """Corn-choice probability for each row block.

    Returns a mapping with keys ``"low"`` (states below balance), ``"high"``
    (states above balance) and, for even N, ``"balanced"``. The balanced row
    follows ``half_rule``: probability one half by default, or a copy of the
    low/high block for sensitivity checks.
    """
    validate_params(params)
    _check_half_rule(half_rule)
    n = params.n_producers
    low = corn_choice_probability(params, MarketState(0, n))
    high = corn_choice_probability(params, MarketState(n, n))
    probs = {"low": low, "high": high}
    if n % 2 == 0:
        if half_rule == "half":
            probs["balanced"] = corn_choice_probability(params, MarketState(n // 2, n))
        else:
            probs["balanced"] = probs[half_rule]
    return probs


def _block_of(k: int, n: int) -> str:
    if 2 * k < n:
        return "low"
    if 2 * k > n:
        return "high"
    return "balanced"


def build_kernel(params: ModelParams, half_rule: str = "half") -> TransitionKernel:
    """Construct the dense (N+1) x (N+1) transition kernel.

    Row i is the Binomial(N, p_i) PMF over next corn counts, where p_i is
    the corn-choice probability of the block containing state i.

    Raises
    ------
    ParameterError
        For invalid params, an unknown half rule, or N > ``MAX_KERNEL_N``
        (the dense matrix would exceed practical memory).
    """
    validate_params(params)
    _check_half_rule(half_rule)
    n = params.n_producers
    if n > MAX_KERNEL_N:
        raise ParameterError(
            f"n_producers={n} exceeds {MAX_KERNEL_N}; the dense kernel would "
            "exceed practical size (use the analytic solver instead)"
        )
    probs = block_choice_probabilities(params, half_rule)
    rows = {name: binomial_row(n, p) for name, p in probs.items()}
    matrix = np.empty((n + 1, n + 1))
    for i in range(n + 1):
        matrix[i] = rows[_block_of(i, n)]
    return TransitionKernel(matrix=matrix, params=params, half_rule=half_rule)


def _as_probabilities(dist) -> np.ndarray:
    if isinstance(dist, StateDistribution):
        return dist.probabilities
    return np.asarray(dist, dtype=float)


def total_variation(p, q) -> float:
    """Total variation distance, half the L1 distance between the vectors."""
    a = _as_probabilities(p)
    b = _as_probabilities(q)
    if a.shape != b.shape:
        raise ParameterError(f"shape mismatch: {a.shape} vs {b.shape}")
    return 0.5 * float(np.abs(a - b).sum())


def apply_kernel(dist, params: ModelParams, half_rule: str = "half") -> np.ndarray:
    """One transition step ``pi -> pi P`` using the block structure.

    Only the 2 or 3 distinct rows are materialized, so this works for any N
    the analytic solver accepts.
    """
    pi = _as_probabilities(dist)
    n = params.n_producers
    if pi.shape != (n + 1,):
        raise ParameterError(f"distribution must have {n + 1} entries, got {pi.shape}")
    probs = block_choice_probabilities(params, half_rule)
    out = np.zeros(n + 1)
    for name, p in probs.items():
        mass = sum(pi[k] for k in range(n + 1) if _block_of(k, n) == name)
        if mass != 0.0:
            out += mass * binomial_row(n, p)
    return out


def fixed_point_residual(dist, kernel_or_params, half_rule: str = "half") -> float:
    """L1 residual ``||pi P - pi||_1`` of a candidate stationary vector."""
    pi = _as_probabilities(dist)
    if isinstance(kernel_or_params, TransitionKernel):
        stepped = pi @ kernel_or_params.matrix
    else:
        stepped = apply_kernel(pi, kernel_or_params, half_rule)
    return float(np.abs(stepped - pi).sum())


def stationary_power(
    kernel: TransitionKernel, tol: float = 1e-12, max_iters: int = 10000
) -> StateDistribution:
    """Stationary distribution by fixed-point iteration from the uniform start.

    Iterates ``pi <- pi P`` and stops once the L1 residual of the fixed-point
    equation drops to ``tol``. The residual, not the iterate-to-iterate
    distance, is the convergence metric; the block structure of the kernel
    can make consecutive iterates nearly periodic.

    Raises
    ------
    ConvergenceError
        After ``max_iters`` iterations, reporting the final residual.
    """
    if not (tol > 0.0):
        raise ParameterError("tol must be positive")
    p_mat = kernel.matrix
    n_states = p_mat.shape[0]
    pi = np.full(n_states, 1.0 / n_states)
    residual = math.inf
    for _ in range(max_iters):
        stepped = pi @ p_mat
        residual = float(np.abs(stepped - pi).sum())
        pi = stepped
        if residual <= tol:
            # pi is one application past the iterate that met the tolerance,
            # which cannot increase the residual (P is an L1 contraction).
            return StateDistribution(pi / pi.sum(), Provenance.EXACT)
    raise ConvergenceError(
        f"power iteration did not reach tol={tol:g} after {max_iters} "
        f"iterations (final residual {residual:.3e})"
    )


def stationary_eigen(kernel: TransitionKernel) -> StateDistribution:
    """Stationary distribution as the eigenvalue-1 left eigenvector.

    Solves ``(P^T - I) x = 0`` directly, with the last equation replaced by
    the normalization ``sum(x) = 1``. Entries are allowed to undershoot zero
    by at most 1e-12 before being clipped and renormalized.

    Raises
    ------
    ConvergenceError
        If the linear system is singular or the solution is meaningfully
        negative; both signal a malformed kernel.
    """
    p_mat = kernel.matrix
    n_states = p_mat.shape[0]
    system = p_mat.T - np.eye(n_states)
    system[-1, :] = 1.0
    rhs = np.zeros(n_states)
    rhs[-1] = 1.0
    try:
        pi = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigen solve failed (malformed kernel?): {exc}") from exc
    if not np.all(np.isfinite(pi)):
        raise ConvergenceError("eigen solve produced non-finite entries; kernel is malformed")
    if pi.min() < -1e-12:
        raise ConvergenceError(
            f"eigenvector has negative mass {pi.min():.3e}; kernel is malformed"
        )
    pi = np.clip(pi, 0.0, None)
    return StateDistribution(pi / pi.sum(), Provenance.EXACT)


def stationary_analytic(params: ModelParams, half_rule: str = "half") -> StateDistribution:
    """Exact stationary distribution via the lumped block chain.

    Every row of the kernel equals one of at most three binomial PMFs, so
    the chain is lumpable onto its blocks {low, balanced, high}. The block
    chain is solved exactly and the stationary distribution is the block-
    weighted mixture of the binomial rows.
    """
    validate_params(params)
    _check_half_rule(half_rule)
    n = params.n_producers
    probs = block_choice_probabilities(params, half_rule)
    names = [name for name in ("low", "balanced", "high") if name in probs]
    rows = {name: binomial_row(n, probs[name]) for name in names}

    m = len(names)
    lumped = np.zeros((m, m))
    for i, src in enumerate(names):
        for k in range(n + 1):
            lumped[i, names.index(_block_of(k, n))] += rows[src][k]
    system = lumped.T - np.eye(m)
    system[-1, :] = 1.0
    rhs = np.zeros(m)
    rhs[-1] = 1.0
    try:
        weights = np.linalg.solve(system, rhs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - blocks always mix
        raise ConvergenceError(f"lumped chain solve failed: {exc}") from exc
    pi = np.zeros(n + 1)
    for weight, name in zip(weights, names):
        pi += weight * rows[name]
    pi = np.clip(pi, 0.0, None)
    return StateDistribution(pi / pi.sum(), Provenance.EXACT)


def stationary_mean(dist: StateDistribution) -> float:
    """Expected corn fraction ``sum_k (k / N) pi_k`` under the distribution."""
    pi = _as_probabilities(dist)
    n = pi.shape[0] - 1
    if n < 1:
        raise ParameterError("distribution must cover at least two states")
    return float(pi @ np.arange(n + 1)) / n


def write_kernel_csv(kernel: TransitionKernel, path) -> None:
    r"""Export the kernel; header ``from\to,0,...,N``, one row per state."""
    n = kernel.n_states - 1
    header = "from\\to," + ",".join(str(k) for k in range(n + 1))
    rows = (
        str(i) + "," + ",".join(fmt(v) for v in kernel.matrix[i])
        for i in range(n + 1)
    )
    write_csv(path, header, rows)


def write_distribution_csv(dist: StateDistribution, path) -> None:
    """Export a state distribution with columns ``state,probability``."""
    pi = dist.probabilities
    rows = (f"{k},{fmt(pi[k])}" for k in range(pi.shape[0]))
    write_csv(path, "state,probability", rows)
