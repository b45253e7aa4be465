"""Pure-Python fallback for the trajectory inner loop.

Must stay step-for-step identical to the compiled ``_simcore`` module: one
uniform per period, inverted through the per-block binomial CDF with a
lower-bound binary search. ``bisect_left`` and the C lower bound agree on
every float input, so both backends produce byte-identical trajectories.
"""

from __future__ import annotations

from bisect import bisect_left


def simulate_counts(uniforms, cdfs, block_index, start, out):
    """Fill ``out`` with the state path; ``out[0]`` is ``start``.

    ``uniforms`` has one entry per transition, ``cdfs`` one row per block,
    ``block_index`` maps each state to its block row. ``out`` must have
    ``len(uniforms) + 1`` slots.
    """
    rows = [row.tolist() for row in cdfs]
    blocks = block_index.tolist()
    state = int(start)
    out[0] = state
    path = []
    append = path.append
    for u in uniforms.tolist():
        state = bisect_left(rows[blocks[state]], u)
        append(state)
    out[1:] = path
