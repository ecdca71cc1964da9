"""Two-qubit phase gates, Pauli decomposition and the canonical interaction form."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import DimensionError, NotHermitianError, NumericDomainError
from .operator import I2, PAULIS, SIGMA_X, Operator, expm_hermitian, matrix_to_json, tensor

XX = tensor(SIGMA_X, SIGMA_X)
_PAULI_MATS = [p.data for p in PAULIS]
_ALL_PAULIS = [I2.data] + _PAULI_MATS


def phase_gate(alpha: float) -> Operator:
    """``exp(-i alpha X x X) = cos(alpha) 1 - i sin(alpha) X x X``."""
    return Operator(math.cos(alpha) * np.eye(4) - 1j * math.sin(alpha) * XX.data, (2, 2))


def binary_phase(n: int) -> float:
    """``pi / 2**n``."""
    return math.ldexp(math.pi, -n)


def _check_two_qubit_hermitian(h: Operator) -> None:
    if h.dim != 4:
        raise DimensionError(f"expected a 4x4 two-qubit operator, got dimension {h.dim}")
    if not h.is_hermitian():
        raise NotHermitianError("two-qubit Hamiltonian must be Hermitian")


@dataclass(frozen=True)
class PauliDecomposition:
    identity_coefficient: float
    local_a: np.ndarray
    local_b: np.ndarray
    gamma: np.ndarray

    def reconstruct(self) -> Operator:
        h = self.identity_coefficient * np.eye(4, dtype=complex)
        for j, s in enumerate(_PAULI_MATS):
            h = h + self.local_a[j] * np.kron(s, I2.data) + self.local_b[j] * np.kron(I2.data, s)
            for k, t in enumerate(_PAULI_MATS):
                h = h + self.gamma[j, k] * np.kron(s, t)
        return Operator(h, (2, 2))

    def interaction(self) -> Operator:
        """Only the ``sum_jk gamma_jk sigma_j x sigma_k`` part."""
        return PauliDecomposition(0.0, np.zeros(3), np.zeros(3), self.gamma).reconstruct()


def pauli_decompose(h: Operator) -> PauliDecomposition:
    _check_two_qubit_hermitian(h)
    c = np.empty((4, 4))
    for j, s in enumerate(_ALL_PAULIS):
        for k, t in enumerate(_ALL_PAULIS):
            c[j, k] = np.trace(h.data @ np.kron(s, t)).real / 4
    return PauliDecomposition(float(c[0, 0]), c[1:, 0].copy(), c[0, 1:].copy(), c[1:, 1:].copy())


def su2_lift(rot: np.ndarray) -> np.ndarray:
    """SU(2) element ``u`` with ``u sigma_k u^dagger = sum_j rot[j, k] sigma_j``.

    The double-cover sign is fixed by requiring ``Re tr u >= 0``.
    """
    x, y, z, w = Rotation.from_matrix(rot).as_quat(canonical=True)
    return w * np.eye(2) - 1j * (x * _PAULI_MATS[0] + y * _PAULI_MATS[1] + z * _PAULI_MATS[2])


@dataclass(frozen=True)
class CanonicalForm:
    """Interaction reduced to ``sum_k mu_k sigma_k x sigma_k`` by local unitaries.

    ``gamma = rot_a @ diag(mu) @ rot_b.T``.  The lifts undo the rotations:
    ``(su2_a x su2_b) H_gamma (su2_a x su2_b)^dagger = sum_k mu_k sigma_k x sigma_k``,
    i.e. ``su2_a`` is the lift of ``rot_a.T``.  ``mu[0] >= mu[1] >= |mu[2]|``;
    only ``mu[2]`` can be negative, which happens exactly when ``det(gamma) < 0``.
    """

    mu: np.ndarray
    rot_a: np.ndarray
    rot_b: np.ndarray
    su2_a: np.ndarray
    su2_b: np.ndarray

    @property
    def singular_values(self) -> np.ndarray:
        return np.abs(self.mu)

    def local_unitary(self) -> Operator:
        return Operator(np.kron(self.su2_a, self.su2_b), (2, 2))

    def hamiltonian(self) -> Operator:
        return Operator(sum(m * np.kron(s, s) for m, s in zip(self.mu, _PAULI_MATS)), (2, 2))

    def to_dict(self) -> dict:
        return {
            "mu": [float(m) for m in self.mu],
            "rot_a": self.rot_a.tolist(),
            "rot_b": self.rot_b.tolist(),
            "su2_a": matrix_to_json(self.su2_a),
            "su2_b": matrix_to_json(self.su2_b),
        }


def _polar_align(block: np.ndarray, rows: list[int]) -> np.ndarray:
    """Orthogonal ``q`` bringing the columns of ``block @ q`` closest to the axes ``rows``."""
    w, _, zt = np.linalg.svd(block[rows, :].T)
    return w @ zt


def _align_degenerate(u: np.ndarray, v: np.ndarray, s: np.ndarray, tol: float = 1e-9) -> None:
    # Within a block of equal singular values the SVD basis is arbitrary; rotate it
    # onto the coordinate axes in order so ties resolve by axis order.  A zero
    # block constrains neither side, so u and v are aligned independently there.
    scale = max(1.0, float(s[0]))
    k = 0
    while k < 3:
        g = [k]
        while g[-1] + 1 < 3 and abs(s[g[-1] + 1] - s[k]) <= tol * scale:
            g.append(g[-1] + 1)
        q = _polar_align(u[:, g], g)
        u[:, g] = u[:, g] @ q
        if s[k] <= tol * scale:
            v[:, g] = v[:, g] @ _polar_align(v[:, g], g)
        else:
            v[:, g] = v[:, g] @ q
        k = g[-1] + 1


def canonicalize(h: Operator) -> CanonicalForm:
    gamma = pauli_decompose(h).gamma
    u, s, vt = np.linalg.svd(gamma)
    u = u.copy()
    v = vt.T.copy()
    mu = s.copy()
    _align_degenerate(u, v, s)
    if np.linalg.det(u) < 0:
        u[:, 2] *= -1
        mu[2] *= -1
    if np.linalg.det(v) < 0:
        v[:, 2] *= -1
        mu[2] *= -1
    if mu[2] == 0.0:
        mu[2] = 0.0  # no signed zero
    return CanonicalForm(mu, u, v, su2_lift(u).conj().T, su2_lift(v).conj().T)


def commuting_factorization(mu, t: float) -> list[Operator]:
    """``[exp(-i mu_k t sigma_k x sigma_k) for k = x, y, z]``; the factors commute."""
    mu = np.asarray(mu, dtype=float)
    if mu.shape != (3,) or not np.all(np.isfinite(mu)):
        raise NumericDomainError("mu must be three finite numbers")
    out = []
    for m, s in zip(mu, _PAULI_MATS):
        out.append(Operator(math.cos(m * t) * np.eye(4) - 1j * math.sin(m * t) * np.kron(s, s), (2, 2)))
    return out


def canonical_unitary(mu, t: float) -> Operator:
    """``exp(-i t sum_k mu_k sigma_k x sigma_k)`` computed directly."""
    h = Operator(sum(m * np.kron(s, s) for m, s in zip(mu, _PAULI_MATS)), (2, 2))
    return expm_hermitian(h, t)


class PhaseApproximation(NamedTuple):
    phases: list[float]
    exponents: list[int]
    cost_bound: float
    residual: float


def binary_phase_approx(alpha: float, eps: float) -> PhaseApproximation:
    """Greedy, most-significant-first expansion ``alpha ~ sum_i pi/2**N_i`` with ``N_i >= 2``."""
    from .protocol import f_infinity

    if not 0 < alpha <= math.pi / 2:
        raise NumericDomainError(f"alpha must lie in (0, pi/2], got {alpha!r}")
    if not eps > 0:
        raise NumericDomainError("eps must be positive")
    slack = 4 * np.finfo(float).eps * alpha
    remaining = alpha
    exps = []
    n = 2
    while remaining > eps and n <= 1074:
        step = binary_phase(n)
        if step <= remaining + slack:
            exps.append(n)
            remaining -= step
        n += 1
    phases = [binary_phase(k) for k in exps]
    total = math.fsum(phases)
    return PhaseApproximation(phases, exps, f_infinity() * total, alpha - total)


def gate_cost(h: Operator, t: float) -> float:
    """Average ebits to implement ``exp(-i h t)`` with the escalating protocol."""
    from .protocol import f_infinity

    cf = canonicalize(h)
    return f_infinity() * abs(t) * float(np.sum(cf.singular_values))
