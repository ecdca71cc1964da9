# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Monte Carlo loop for the escalating Bell-measurement protocol.

Must stay bit-for-bit equivalent to ``_mc_py.py``.
"""

from libc.math cimport cos, fabs, ldexp, M_PI
from libc.stdint cimport int64_t, uint64_t


cdef inline uint64_t _splitmix64(uint64_t x) noexcept nogil:
    cdef uint64_t z = x + 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


def outcome_code(uint64_t seed, uint64_t trial, uint64_t step):
    """Outcome pair code in 0..15 for (seed, trial, step)."""
    cdef uint64_t base = _splitmix64(_splitmix64(seed) ^ trial)
    return <int>(_splitmix64(base ^ step) >> 60)


def simulate_trials(int n, long long trials, uint64_t seed, double[::1] step_ebits, long long first_trial=0):
    cdef double alpha = ldexp(M_PI, -n)
    cdef double sum_e = 0.0, sumsq_e = 0.0, sum_b = 0.0, sumsq_b = 0.0
    cdef double e, b, fid, min_fid = 1.0
    cdef long long t, step1_success = 0
    cdef int k, code, a, bb
    cdef int64_t net
    cdef uint64_t base
    hist = [0] * (n + 1)
    cdef long long[64] h
    for k in range(n + 1):
        h[k] = 0
    cdef uint64_t hseed = _splitmix64(seed)

    with nogil:
        for t in range(first_trial, first_trial + trials):
            e = 0.0
            b = 0.0
            if n == 1:
                net = 1
                k = 0
            else:
                net = 0
                base = _splitmix64(hseed ^ <uint64_t>t)
                k = 1
                while True:
                    code = <int>(_splitmix64(base ^ <uint64_t>k) >> 60)
                    a = code >> 2
                    bb = code & 3
                    e = e + step_ebits[k - 1]
                    if k < n:
                        b = b + 1.0
                    if (a >> 1) == (bb >> 1):
                        net = net + (<int64_t>1 << (k - 1))
                        if k == 1:
                            step1_success += 1
                        break
                    net = net - (<int64_t>1 << (k - 1))
                    if k == n:
                        break
                    k += 1
            h[k] += 1
            sum_e += e
            sumsq_e += e * e
            sum_b += b
            sumsq_b += b * b
            fid = fabs(cos(<double>(net - 1) * alpha))
            if fid < min_fid:
                min_fid = fid

    for k in range(n + 1):
        hist[k] = h[k]
    return {
        "sum_ebits": sum_e,
        "sumsq_ebits": sumsq_e,
        "sum_bits": sum_b,
        "sumsq_bits": sumsq_b,
        "steps_histogram": hist,
        "step1_success": step1_success,
        "min_fidelity": min_fid,
    }
