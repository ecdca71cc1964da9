import math
import subprocess
import sys
from collections import Counter

import numpy as np
import pytest

from entangling_ops import _kernels
from entangling_ops._kernels import get_backend, python_impl
from entangling_ops.protocol import monte_carlo
from entangling_ops.states import resource_entropy

compiled = pytest.mark.skipif(_kernels.compiled_impl is None, reason="extension not built")


def _step_ebits(n):
    a = math.pi / 2**n
    return np.array([resource_entropy(a * 2 ** (k - 1)) for k in range(1, n + 1)])


def test_splitmix_reference_values():
    # published splitmix64 outputs for state 0: first increment then mix
    assert python_impl._splitmix64(0) == 0xE220A8397B1DCDAF


@compiled
@pytest.mark.parametrize("n", [1, 2, 4, 9])
def test_backends_identical(n):
    a = python_impl.simulate_trials(n, 2000, 42, _step_ebits(n))
    b = _kernels.compiled_impl.simulate_trials(n, 2000, 42, _step_ebits(n))
    assert a == b


@compiled
def test_outcome_codes_identical():
    for t in range(50):
        for k in range(1, 6):
            assert python_impl.outcome_code(5, t, k) == _kernels.compiled_impl.outcome_code(5, t, k)


@compiled
def test_summary_identical_across_backends():
    assert monte_carlo(6, 3000, 3, "python").to_dict() == monte_carlo(6, 3000, 3, "cython").to_dict()


def test_outcome_code_uniform():
    counts = Counter(python_impl.outcome_code(1, t, 1) for t in range(16000))
    assert set(counts) == set(range(16))
    # chi-square with 15 dof; 37.7 is the 0.999 quantile
    chi2 = sum((c - 1000) ** 2 / 1000 for c in counts.values())
    assert chi2 < 37.7


def test_chunking_with_first_trial():
    kern = get_backend()
    e = _step_ebits(5)
    whole = kern.simulate_trials(5, 1000, 8, e)
    a = kern.simulate_trials(5, 400, 8, e, 0)
    b = kern.simulate_trials(5, 600, 8, e, 400)
    merged = [x + y for x, y in zip(a["steps_histogram"], b["steps_histogram"])]
    assert merged == list(whole["steps_histogram"])
    assert a["sum_bits"] + b["sum_bits"] == whole["sum_bits"]
    assert a["sum_ebits"] + b["sum_ebits"] == pytest.approx(whole["sum_ebits"], rel=1e-12)  # summation order differs


def test_n1_kernel():
    r = get_backend().simulate_trials(1, 5, 0, np.zeros(1))
    assert r["sum_ebits"] == 0 and r["sum_bits"] == 0 and list(r["steps_histogram"]) == [5, 0]
    assert r["min_fidelity"] == 1.0


def test_get_backend_errors():
    with pytest.raises(ValueError):
        get_backend("fortran")
    assert get_backend("python") is python_impl


def test_fallback_when_extension_missing():
    code = (
        "import sys; sys.modules['entangling_ops._kernels._mc'] = None\n"
        "import entangling_ops as eo\n"
        "assert eo.BACKEND == 'python', eo.BACKEND\n"
        "print(eo.monte_carlo(4, 1000, 7).mean_ebits)\n"
    )
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert float(out.stdout) == pytest.approx(monte_carlo(4, 1000, 7).mean_ebits, abs=1e-12)
