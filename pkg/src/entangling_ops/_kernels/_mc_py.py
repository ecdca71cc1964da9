"""Pure-Python mirror of ``_mc.pyx``; used when the extension is not built."""

import math

MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    z = (x + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def outcome_code(seed: int, trial: int, step: int) -> int:
    """Outcome pair code in 0..15 for (seed, trial, step)."""
    base = _splitmix64(_splitmix64(seed & MASK64) ^ (trial & MASK64))
    return _splitmix64(base ^ step) >> 60


def simulate_trials(n, trials, seed, step_ebits, first_trial=0):
    alpha = math.ldexp(math.pi, -n)
    sum_e = sumsq_e = sum_b = sumsq_b = 0.0
    min_fid = 1.0
    step1_success = 0
    hist = [0] * (n + 1)
    hseed = _splitmix64(seed & MASK64)
    step_ebits = [float(x) for x in step_ebits]

    for t in range(first_trial, first_trial + trials):
        e = 0.0
        b = 0.0
        if n == 1:
            net, k = 1, 0
        else:
            net = 0
            base = _splitmix64(hseed ^ (t & MASK64))
            k = 1
            while True:
                code = _splitmix64(base ^ k) >> 60
                e = e + step_ebits[k - 1]
                if k < n:
                    b = b + 1.0
                if (code >> 3) == ((code & 3) >> 1):
                    net += 1 << (k - 1)
                    if k == 1:
                        step1_success += 1
                    break
                net -= 1 << (k - 1)
                if k == n:
                    break
                k += 1
        hist[k] += 1
        sum_e += e
        sumsq_e += e * e
        sum_b += b
        sumsq_b += b * b
        fid = abs(math.cos((net - 1) * alpha))
        if fid < min_fid:
            min_fid = fid

    return {
        "sum_ebits": sum_e,
        "sumsq_ebits": sumsq_e,
        "sum_bits": sum_b,
        "sumsq_bits": sumsq_b,
        "steps_histogram": hist,
        "step1_success": step1_success,
        "min_fidelity": min_fid,
    }
