"""Escalating Bell-measurement protocol for the gates ``U(pi/2**N)``.

Step ``k`` consumes the resource state for phase ``2**(k-1) * alpha_N``.
Both parties Bell-measure their halves together with the data qubits and
apply the Pauli matching their outcome; the net gate is ``U(+phase)`` when
the first outcome indices agree and ``U(-phase)`` otherwise.  After ``k``
failures the data has seen ``U(-(2**k - 1) alpha_N)``, so the ladder always
terminates at ``k = N`` with the right gate up to a global phase.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from . import _kernels
from .errors import NumericDomainError
from .gates import binary_phase, phase_gate
from .operator import Operator, operator_to_json
from .states import BELL_PAULIS, PAULI_NAMES, PureState, bell_state, resource_entropy, resource_state

OUTCOMES = [(1, 1), (1, 2), (2, 1), (2, 2)]
MAX_MONTE_CARLO_N = 62
_MASK64 = (1 << 64) - 1


def gate_fidelity(target: Operator, actual: Operator) -> float:
    """Phase-insensitive overlap ``|tr(target^dagger actual)| / dim``."""
    return abs(np.trace(target.data.conj().T @ actual.data)) / target.dim


def _decode(code: int):
    return OUTCOMES[code >> 2], OUTCOMES[code & 3]


# -- outcome sources --------------------------------------------------------

class ScriptedOutcomes:
    """Replays a fixed list of ``((i1, i2), (j1, j2))`` outcome pairs."""

    def __init__(self, script: Iterable):
        self._script = [(tuple(a), tuple(b)) for a, b in script]
        self._pos = 0

    def __call__(self, k: int):
        if self._pos >= len(self._script):
            raise IndexError("outcome script exhausted")
        pair = self._script[self._pos]
        self._pos += 1
        return pair

    @classmethod
    def from_successes(cls, flags: Sequence[bool]) -> ScriptedOutcomes:
        return cls([((1, 1), (1, 1)) if ok else ((1, 1), (2, 1)) for ok in flags])


class CounterOutcomes:
    """Outcomes derived from ``(seed, trial, step)``; matches the Monte Carlo kernel."""

    def __init__(self, seed: int, trial: int = 0):
        self.seed = seed & _MASK64
        self.trial = trial

    def __call__(self, k: int):
        return _decode(_kernels.outcome_code(self.seed, self.trial, k))


def _as_source(source):
    if source is None:
        return CounterOutcomes(0)
    if isinstance(source, (int, np.integer)):
        return CounterOutcomes(int(source))
    if isinstance(source, np.random.Generator):
        return lambda k: _decode(int(source.integers(16)))
    if callable(source):
        return source
    return ScriptedOutcomes(source)


def _validate_outcome(pair):
    try:
        a, b = pair
        a, b = tuple(a), tuple(b)
    except (TypeError, ValueError):
        raise NumericDomainError(f"malformed outcome pair {pair!r}") from None
    if a not in BELL_PAULIS or b not in BELL_PAULIS:
        raise NumericDomainError(f"Bell outcome indices must lie in {{1,2}}, got {pair!r}")
    return a, b


# -- records ----------------------------------------------------------------

@dataclass(frozen=True)
class StepRecord:
    k: int
    resource_phase: float
    outcome_a: tuple[int, int]
    outcome_b: tuple[int, int]
    success: bool
    corrections: tuple[str, str]
    ebits_consumed: float
    classical_bits: int
    raw_outcome_bits: int = 2

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "resource_phase": self.resource_phase,
            "outcome_a": list(self.outcome_a),
            "outcome_b": list(self.outcome_b),
            "success": self.success,
            "corrections": list(self.corrections),
            "ebits_consumed": self.ebits_consumed,
            "classical_bits": self.classical_bits,
            "raw_outcome_bits": self.raw_outcome_bits,
        }


@dataclass(frozen=True)
class ProtocolTrace:
    target_n: int
    steps: list[StepRecord]
    total_ebits: float
    total_classical_bits_per_direction: int
    effective_unitary: Operator
    fidelity_with_target: float

    def to_dict(self) -> dict:
        return {
            "target_n": self.target_n,
            "steps": [s.to_dict() for s in self.steps],
            "total_ebits": self.total_ebits,
            "total_classical_bits_per_direction": self.total_classical_bits_per_direction,
            "fidelity_with_target": self.fidelity_with_target,
            "effective_unitary": operator_to_json(self.effective_unitary),
        }


# -- fast path ----------------------------------------------------------------

def simulate_step(cumulative: Operator, k: int, alpha_n: float, outcome_source, n: int | None = None):
    """One rung of the ladder using the proven ``+/-U`` rule.

    ``n`` (defaults to the ``N`` with ``alpha_n = pi/2**N``) only affects the
    classical-bit ledger: the last rung needs no communication.
    """
    if n is None:
        n = round(math.log2(math.pi / alpha_n))
    if not 1 <= k <= n:
        raise NumericDomainError(f"step index {k} outside 1..{n}")
    source = _as_source(outcome_source)
    a, b = _validate_outcome(source(k))
    phase = math.ldexp(alpha_n, k - 1)
    success = a[0] == b[0]
    applied = phase_gate(phase if success else -phase)
    record = StepRecord(
        k=k,
        resource_phase=phase,
        outcome_a=a,
        outcome_b=b,
        success=success,
        corrections=(PAULI_NAMES[a], PAULI_NAMES[b]),
        ebits_consumed=resource_entropy(phase),
        classical_bits=1 if k < n else 0,
    )
    return record, applied @ cumulative


def run_protocol(n: int, outcome_source=None) -> ProtocolTrace:
    """Implement ``U(pi/2**n)`` with unit probability.

    ``outcome_source`` may be an integer seed, a numpy Generator, a callable
    ``k -> (outcome_a, outcome_b)`` or a list of outcome pairs.
    """
    if n < 1:
        raise NumericDomainError("n must be at least 1")
    alpha = binary_phase(n)
    target = phase_gate(alpha)
    if n == 1:
        # U(pi/2) = -i X x X is local: no resource, no communication
        return ProtocolTrace(1, [], 0.0, 0, target, 1.0)
    source = _as_source(outcome_source)
    cumulative = Operator(np.eye(4), (2, 2))
    steps = []
    for k in range(1, n + 1):
        record, cumulative = simulate_step(cumulative, k, alpha, source, n)
        steps.append(record)
        if record.success:
            break
    return ProtocolTrace(
        target_n=n,
        steps=steps,
        total_ebits=math.fsum(s.ebits_consumed for s in steps),
        total_classical_bits_per_direction=sum(s.classical_bits for s in steps),
        effective_unitary=cumulative,
        fidelity_with_target=gate_fidelity(target, cumulative),
    )


# -- exact state-vector path --------------------------------------------------

@dataclass(frozen=True)
class Branch:
    outcome_a: tuple[int, int]
    outcome_b: tuple[int, int]
    probability: float
    state: PureState  # corrected A1B1 state
    success: bool


def bell_measurement_branches(psi_in: PureState | np.ndarray, resource_phase: float) -> list[Branch]:
    """All 16 branches of one rung, simulated on six qubits.

    Register order is A1 A2 A3 B1 B2 B3; ``psi_in`` occupies A3 B3 and the
    resource state A1 A2 B1 B2.  A2A3 and B2B3 are projected onto Bell states
    and A1, B1 receive the matching Pauli corrections.
    """
    phi = psi_in.amplitudes if isinstance(psi_in, PureState) else np.asarray(psi_in, dtype=complex)
    res = resource_state(resource_phase).amplitudes.reshape(2, 2, 2, 2)  # a1 a2 b1 b2
    full = np.einsum("pqrs,tu->pqtrsu", res, phi.reshape(2, 2))  # a1 a2 a3 b1 b2 b3
    branches = []
    for oa, ob in itertools.product(OUTCOMES, OUTCOMES):
        ba = bell_state(*oa).amplitudes.reshape(2, 2).conj()
        bb = bell_state(*ob).amplitudes.reshape(2, 2).conj()
        out = np.einsum("qt,su,pqtrsu->pr", ba, bb, full)
        out = np.kron(BELL_PAULIS[oa].data, BELL_PAULIS[ob].data) @ out.reshape(4)
        prob = float(np.vdot(out, out).real)
        branches.append(Branch(oa, ob, prob, PureState(out, (2, 2), normalize=True), oa[0] == ob[0]))
    return branches


# -- expectation values and constants ----------------------------------------

def f_series(n: int) -> float:
    """``(1/pi) sum_{k=1}^{n} 2**k E(psi_{pi/2**k})``."""
    if n < 1:
        raise NumericDomainError("n must be at least 1")
    return math.fsum(math.ldexp(resource_entropy(binary_phase(k)), k) for k in range(1, n + 1)) / math.pi


def f_infinity(tol: float = 1e-12) -> float:
    """Limit of :func:`f_series`; terms decay like ``k 2**-k``."""
    if not tol > 0:
        raise NumericDomainError("tol must be positive")
    terms = []
    k = 1
    while True:
        term = math.ldexp(resource_entropy(binary_phase(k)), k) / math.pi
        terms.append(term)
        # the k=1 term is exactly zero (local gate), so never stop before k=3
        if k >= 3 and term < tol:
            break
        k += 1
    return math.fsum(terms)


def capability_maximand(x: float) -> float:
    """Entangling-rate integrand ``2 sqrt(x(1-x)) log2((1-x)/x)``."""
    return 2 * math.sqrt(x * (1 - x)) * math.log2((1 - x) / x)


def capability_constant() -> float:
    """Maximal entangling rate of ``X x X`` in ebits per unit time (about 1.9123)."""
    res = minimize_scalar(
        lambda x: -capability_maximand(x),
        bounds=(1e-12, 0.5),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return -float(res.fun)


def capability_ratio() -> float:
    return f_infinity(1e-12) / capability_constant()


def expected_classical_bits(n: int) -> float:
    """Per-direction bits averaged over the ladder, ``2 - (1/2)**(n-2)``."""
    return 2.0 - math.ldexp(1.0, 2 - n)


@dataclass(frozen=True)
class CostReport:
    n: int
    expected_ebits: float
    f_n: float
    expected_classical_bits_per_direction: float
    expected_classical_bits_total: float
    capability: float
    ratio: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def expected_cost(n: int) -> CostReport:
    if n < 1:
        raise NumericDomainError("n must be at least 1")
    alpha = binary_phase(n)
    by_attempt = math.fsum(math.ldexp(resource_entropy(binary_phase(n - k + 1)), 1 - k) for k in range(1, n + 1))
    fn = f_series(n)
    if abs(by_attempt - alpha * fn) > 1e-12:
        raise NumericDomainError(f"expected-cost forms disagree: {by_attempt!r} vs {alpha * fn!r}")
    bits = expected_classical_bits(n)
    capability = capability_constant() * alpha
    return CostReport(
        n=n,
        expected_ebits=by_attempt,
        f_n=fn,
        expected_classical_bits_per_direction=bits,
        expected_classical_bits_total=2 * bits,
        capability=capability,
        ratio=by_attempt / capability,
    )


# -- Monte Carlo --------------------------------------------------------------

@dataclass(frozen=True)
class MonteCarloSummary:
    n: int
    trials: int
    seed: int
    mean_ebits: float
    se_ebits: float
    mean_classical_bits: float
    se_classical_bits: float
    step1_success_rate: float
    se_step1_success_rate: float
    steps_histogram: list[int] = field(default_factory=list)
    min_fidelity: float = 1.0
    backend: str = ""

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out.pop("backend")
        return out


def _mean_se(total: float, total_sq: float, count: int) -> tuple[float, float]:
    mean = total / count
    if count < 2:
        return mean, 0.0
    var = max(0.0, (total_sq - count * mean * mean) / (count - 1))
    return mean, math.sqrt(var / count)


def monte_carlo(n: int, trials: int, seed: int, backend: str | None = None) -> MonteCarloSummary:
    """Run ``trials`` independent protocol instances with the fast path.

    Trial ``t`` draws its outcomes from ``(seed, t, step)`` alone, so any
    split of the trial range reproduces the same per-trial results.
    """
    if n < 1 or n > MAX_MONTE_CARLO_N:
        raise NumericDomainError(f"n must lie in 1..{MAX_MONTE_CARLO_N}")
    if trials < 1:
        raise NumericDomainError("trials must be at least 1")
    kern = _kernels.get_backend(backend)
    step_ebits = np.array([resource_entropy(math.ldexp(binary_phase(n), k - 1)) for k in range(1, n + 1)])
    raw = kern.simulate_trials(n, trials, seed & _MASK64, step_ebits)
    mean_e, se_e = _mean_se(raw["sum_ebits"], raw["sumsq_ebits"], trials)
    mean_b, se_b = _mean_se(raw["sum_bits"], raw["sumsq_bits"], trials)
    if n == 1:
        p1, se1 = 1.0, 0.0
    else:
        p1 = raw["step1_success"] / trials
        se1 = math.sqrt(p1 * (1 - p1) / trials)
    return MonteCarloSummary(
        n=n,
        trials=trials,
        seed=seed,
        mean_ebits=mean_e,
        se_ebits=se_e,
        mean_classical_bits=mean_b,
        se_classical_bits=se_b,
        step1_success_rate=p1,
        se_step1_success_rate=se1,
        steps_histogram=list(raw["steps_histogram"]),
        min_fidelity=raw["min_fidelity"],
        backend="cython" if kern is _kernels.compiled_impl else "python",
    )
