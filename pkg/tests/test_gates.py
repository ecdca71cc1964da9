import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entangling_ops.errors import DimensionError, NotHermitianError, NumericDomainError
from entangling_ops.gates import (
    XX,
    binary_phase,
    binary_phase_approx,
    canonical_unitary,
    canonicalize,
    commuting_factorization,
    gate_cost,
    pauli_decompose,
    phase_gate,
    su2_lift,
)
from entangling_ops.operator import I2, PAULIS, Operator, expm_hermitian, tensor
from entangling_ops.protocol import f_infinity
from entangling_ops.rand import random_hermitian, random_unitary

PAULI = [p.data for p in PAULIS]
FINF = 5.97931372777298


def _kk(m):
    return Operator(sum(x * np.kron(s, s) for x, s in zip(m, PAULI)), (2, 2))


# -- phase gates --------------------------------------------------------------------

def test_phase_gate_is_xx_exponential():
    for a in (0.0, 0.2, math.pi / 8, 1.3):
        assert phase_gate(a).allclose(expm_hermitian(XX, a).data, 1e-13)


def test_phase_gate_special_values():
    assert phase_gate(0).allclose(np.eye(4), 1e-15)
    assert phase_gate(math.pi / 2).allclose(-1j * XX.data, 1e-15)


@given(st.floats(-10, 10), st.floats(-10, 10))
def test_phase_gate_group_law(a, b):
    assert (phase_gate(a) @ phase_gate(b)).allclose(phase_gate(a + b).data, 1e-12)


def test_phase_gate_adjoint_and_unitarity():
    u = phase_gate(0.4)
    assert u.dag().allclose(phase_gate(-0.4).data, 1e-15)
    assert u.is_unitary()


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_binary_phase_power(n):
    u = phase_gate(binary_phase(n))
    p = np.linalg.matrix_power(u.data, 2**n)
    np.testing.assert_allclose(p, -np.eye(4), atol=1e-12)


def test_binary_phase_values():
    assert binary_phase(2) == math.pi / 4
    assert binary_phase(0) == math.pi


# -- Pauli decomposition ------------------------------------------------------------

def test_pauli_decompose_xx():
    pd = pauli_decompose(XX)
    expected = np.zeros((3, 3))
    expected[0, 0] = 1
    np.testing.assert_allclose(pd.gamma, expected, atol=1e-15)
    assert pd.identity_coefficient == 0
    assert not pd.local_a.any() and not pd.local_b.any()


def test_pauli_decompose_local_terms():
    h = Operator(2 * np.eye(4) + 0.5 * np.kron(PAULI[2], np.eye(2)) - 0.25 * np.kron(np.eye(2), PAULI[1]), (2, 2))
    pd = pauli_decompose(h)
    assert pd.identity_coefficient == pytest.approx(2)
    np.testing.assert_allclose(pd.local_a, [0, 0, 0.5], atol=1e-15)
    np.testing.assert_allclose(pd.local_b, [0, -0.25, 0], atol=1e-15)
    assert not pd.gamma.any()


def test_pauli_round_trip(rng):
    for _ in range(20):
        h = random_hermitian(4, rng, dims=(2, 2))
        assert pauli_decompose(h).reconstruct().allclose(h.data, 1e-12)


def test_pauli_decompose_errors():
    with pytest.raises(DimensionError):
        pauli_decompose(Operator(np.eye(3)))
    with pytest.raises(NotHermitianError):
        pauli_decompose(Operator(np.triu(np.ones((4, 4))), (2, 2)))


# -- canonical form -----------------------------------------------------------------

def test_canonicalize_xx_is_trivial():
    cf = canonicalize(XX)
    np.testing.assert_allclose(cf.mu, [1, 0, 0], atol=1e-14)
    np.testing.assert_allclose(cf.rot_a, np.eye(3), atol=1e-14)
    np.testing.assert_allclose(cf.rot_b, np.eye(3), atol=1e-14)


def test_canonicalize_diagonal_is_trivial():
    cf = canonicalize(_kk([3, 2, 1]))
    np.testing.assert_allclose(cf.mu, [3, 2, 1], atol=1e-13)
    np.testing.assert_allclose(cf.rot_a, np.eye(3), atol=1e-13)
    np.testing.assert_allclose(cf.local_unitary().data, np.eye(4), atol=1e-13)


def test_canonicalize_sorts():
    cf = canonicalize(_kk([0.1, 0.0, 0.7]))
    np.testing.assert_allclose(cf.mu, [0.7, 0.1, 0.0], atol=1e-13)
    assert not math.copysign(1, cf.mu[2]) < 0


def test_canonicalize_negative_determinant():
    cf = canonicalize(_kk([-1, -2, -3]))
    np.testing.assert_allclose(cf.mu, [3, 2, -1], atol=1e-13)
    assert np.linalg.det(pauli_decompose(_kk([-1, -2, -3])).gamma) < 0


def test_canonicalize_ignores_local_and_identity_parts():
    h = _kk([0.5, 0.3, 0.1]).data + 7 * np.eye(4) + np.kron(PAULI[0], np.eye(2))
    cf = canonicalize(Operator(h, (2, 2)))
    np.testing.assert_allclose(cf.mu, [0.5, 0.3, 0.1], atol=1e-13)


def test_su2_lift_adjoint_action(rng):
    for _ in range(20):
        q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
        if np.linalg.det(q) < 0:
            q[:, 0] *= -1
        u = su2_lift(q)
        assert abs(np.linalg.det(u) - 1) < 1e-12
        assert np.trace(u).real >= -1e-15
        for k in range(3):
            lhs = u @ PAULI[k] @ u.conj().T
            rhs = sum(q[j, k] * PAULI[j] for j in range(3))
            np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_canonicalize_random(rng):
    for _ in range(100):
        h = random_hermitian(4, rng, dims=(2, 2))
        pd = pauli_decompose(h)
        cf = canonicalize(h)
        mu = cf.mu
        assert mu[0] >= mu[1] - 1e-12 and mu[1] >= abs(mu[2]) - 1e-12
        assert np.linalg.det(cf.rot_a) == pytest.approx(1, abs=1e-12)
        assert np.linalg.det(cf.rot_b) == pytest.approx(1, abs=1e-12)
        np.testing.assert_allclose(cf.rot_a @ np.diag(mu) @ cf.rot_b.T, pd.gamma, atol=1e-12)
        np.testing.assert_allclose(np.sort(cf.singular_values), np.sort(np.linalg.svd(pd.gamma, compute_uv=False)), atol=1e-12)
        assert (mu[2] < 0) == (np.linalg.det(pd.gamma) < -1e-12) or abs(mu[2]) < 1e-12
        w = cf.local_unitary()
        assert (w @ pd.interaction() @ w.dag()).allclose(cf.hamiltonian().data, 1e-9)


def test_canonical_form_to_dict():
    d = canonicalize(XX).to_dict()
    assert set(d) == {"mu", "rot_a", "rot_b", "su2_a", "su2_b"}
    assert d["mu"] == [1.0, 0.0, 0.0]


# -- factorization --------------------------------------------------------------------

def test_factorization_matches_exponential(rng):
    for _ in range(20):
        mu = rng.standard_normal(3)
        t = float(rng.uniform(-2, 2))
        fx, fy, fz = commuting_factorization(mu, t)
        assert (fx @ fy @ fz).allclose(canonical_unitary(mu, t).data, 1e-10)
        for a, b in ((fx, fy), (fy, fz), (fx, fz)):
            assert (a @ b).allclose((b @ a).data, 1e-12)


def test_factorization_x_factor_is_phase_gate():
    fx, _, _ = commuting_factorization([0.3, 0, 0], 2.0)
    assert fx.allclose(phase_gate(0.6).data, 1e-14)


def test_factorization_domain():
    with pytest.raises(NumericDomainError):
        commuting_factorization([1, 2], 1.0)
    with pytest.raises(NumericDomainError):
        commuting_factorization([1, float("nan"), 0], 1.0)


def test_canonical_unitary_reproduces_original(rng):
    h = random_hermitian(4, rng, dims=(2, 2))
    pd = pauli_decompose(h)
    cf = canonicalize(h)
    w = cf.local_unitary()
    original = expm_hermitian(pd.interaction(), 0.7)
    assert (w.dag() @ canonical_unitary(cf.mu, 0.7) @ w).allclose(original.data, 1e-10)


# -- dyadic phase approximation ------------------------------------------------------

def _exact_greedy(alpha_over_pi: Fraction, eps_over_pi: Fraction):
    rem, n, out = alpha_over_pi, 2, []
    while rem > eps_over_pi:
        if Fraction(1, 2**n) <= rem:
            out.append(n)
            rem -= Fraction(1, 2**n)
        n += 1
    return out


def test_approx_exact_binary_phase():
    a = binary_phase_approx(math.pi / 4, 1e-12)
    assert a.exponents == [2] and a.residual == 0.0
    assert a.cost_bound == pytest.approx(FINF * math.pi / 4, abs=1e-9)


def test_approx_three_eighths():
    a = binary_phase_approx(3 * math.pi / 8, 1e-12)
    assert a.exponents == [2, 3]
    assert a.phases == [math.pi / 4, math.pi / 8]


def test_approx_half_pi():
    a = binary_phase_approx(math.pi / 2, 1e-9)
    assert a.exponents[:3] == [2, 3, 4]
    assert abs(a.residual) <= 1e-9


def test_approx_point_three_against_rational_oracle():
    a = binary_phase_approx(0.3, 1e-6)
    oracle = _exact_greedy(Fraction(0.3) / Fraction(math.pi), Fraction(1e-6) / Fraction(math.pi))
    assert a.exponents == oracle
    assert a.exponents == [4, 5, 10, 11, 12, 15, 19, 20, 21]
    assert 0 <= a.residual <= 1e-6
    assert all(x > y for x, y in zip(a.phases, a.phases[1:]))
    assert a.cost_bound == pytest.approx(f_infinity() * math.fsum(a.phases), rel=1e-14)


@settings(max_examples=60, deadline=None)
@given(st.floats(1e-3, math.pi / 2), st.sampled_from([1e-3, 1e-6, 1e-9]))
def test_approx_residual_bound(alpha, eps):
    a = binary_phase_approx(alpha, eps)
    assert abs(a.residual) <= eps
    assert all(n >= 2 for n in a.exponents)
    assert a.exponents == sorted(set(a.exponents))


def test_approx_domain():
    for alpha, eps in ((0.0, 1e-3), (-0.1, 1e-3), (2.0, 1e-3), (0.3, 0.0), (0.3, -1.0), (float("nan"), 1e-3)):
        with pytest.raises(NumericDomainError):
            binary_phase_approx(alpha, eps)


# -- cost -----------------------------------------------------------------------------

def test_gate_cost_xx():
    assert gate_cost(XX, 0.5) == pytest.approx(FINF * 0.5, abs=1e-9)


def test_gate_cost_local_is_free():
    assert gate_cost(tensor(PAULIS[2], I2), 3.0) == pytest.approx(0.0, abs=1e-12)


def test_gate_cost_xx_plus_yy():
    assert gate_cost(_kk([1, 1, 0]), 0.25) == pytest.approx(2 * FINF * 0.25, abs=1e-9)


def test_gate_cost_local_unitary_invariance(rng):
    h = random_hermitian(4, rng, dims=(2, 2))
    w = Operator(np.kron(random_unitary(2, rng).data, random_unitary(2, rng).data), (2, 2))
    assert gate_cost(w @ h @ w.dag(), 0.3) == pytest.approx(gate_cost(h, 0.3), abs=1e-10)
