# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled inner loop for the trajectory recursion.

Mirrors ``_simcore_py.simulate_counts`` exactly; both consume one uniform
per period and invert the per-block binomial CDF with a lower-bound binary
search, so the two backends produce byte-identical trajectories.
"""


cdef inline Py_ssize_t _lower_bound(const double[:] cdf, double x) noexcept nogil:
    cdef Py_ssize_t lo = 0
    cdef Py_ssize_t hi = cdf.shape[0]
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def simulate_counts(const double[::1] uniforms, const double[:, ::1] cdfs,
                    const long long[::1] block_index, long long start,
                    long long[::1] out):
    """Fill ``out`` with the state path; ``out[0]`` is ``start``."""
    cdef Py_ssize_t n_steps = uniforms.shape[0]
    cdef Py_ssize_t state = start
    cdef Py_ssize_t t
    out[0] = state
    with nogil:
        for t in range(n_steps):
            state = _lower_bound(cdfs[block_index[state]], uniforms[t])
            out[t + 1] = state
