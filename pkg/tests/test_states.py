import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entangling_ops.errors import DimensionError, NumericDomainError, ValidationError
from entangling_ops.operator import Operator, partial_trace
from entangling_ops.rand import random_pure, random_unitary
from entangling_ops.states import (
    PureState,
    basis_state,
    bell_state,
    entropy_of_entanglement,
    max_entangled,
    resource_entropy,
    resource_state,
    schmidt,
)

S2 = 1 / math.sqrt(2)
# binary entropy of cos^2(pi/8), evaluated by hand-written arithmetic
E_PI_8 = 0.6008760366928562


def _eq12(alpha):
    x = math.cos(alpha) ** 2
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def test_pure_state_validates_norm_and_dims():
    with pytest.raises(ValidationError):
        PureState([1, 1])
    with pytest.raises(DimensionError):
        PureState([1, 0, 0], (2, 2))
    assert PureState([1, 1], normalize=True).amplitudes[0] == pytest.approx(S2)


def test_max_entangled_two():
    np.testing.assert_allclose(max_entangled(2).amplitudes, [S2, 0, 0, S2])


def test_max_entangled_three():
    amp = max_entangled(3).amplitudes
    expected = np.zeros(9)
    expected[[0, 4, 8]] = 1 / math.sqrt(3)
    np.testing.assert_allclose(amp, expected)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_max_entangled_reduction(d):
    assert partial_trace(max_entangled(d).projector(), [0]).allclose(np.eye(d) / d)


def test_max_entangled_rejects_small_d():
    with pytest.raises(NumericDomainError):
        max_entangled(1)


@pytest.mark.parametrize(
    "idx, amp",
    [
        ((1, 1), [S2, 0, 0, S2]),
        ((1, 2), [0, S2, S2, 0]),
        ((2, 2), [S2, 0, 0, -S2]),
        ((2, 1), [0, 1j * S2, -1j * S2, 0]),
    ],
)
def test_bell_states(idx, amp):
    np.testing.assert_allclose(bell_state(*idx).amplitudes, amp, atol=1e-15)


def test_bell_basis_orthonormal():
    vecs = np.array([bell_state(i, j).amplitudes for i in (1, 2) for j in (1, 2)])
    np.testing.assert_allclose(vecs.conj() @ vecs.T, np.eye(4), atol=1e-10)


def test_bell_state_rejects_bad_indices():
    with pytest.raises(DimensionError):
        bell_state(0, 1)
    with pytest.raises(DimensionError):
        bell_state(1, 3)


def test_resource_state_at_zero():
    np.testing.assert_allclose(resource_state(0).amplitudes, np.kron(bell_state(1, 1).amplitudes, bell_state(1, 1).amplitudes))


def test_resource_state_at_half_pi_is_product():
    psi = resource_state(math.pi / 2)
    np.testing.assert_allclose(psi.amplitudes, -1j * np.kron(bell_state(1, 2).amplitudes, bell_state(1, 2).amplitudes), atol=1e-15)
    assert len(schmidt(psi, [0, 1]).coefficients) == 1
    assert entropy_of_entanglement(psi, [0, 1]) == 0.0


def test_resource_state_quarter_pi_one_ebit():
    assert entropy_of_entanglement(resource_state(math.pi / 4), [0, 1]) == pytest.approx(1.0, abs=1e-12)


def test_resource_state_eighth_pi():
    assert _eq12(math.pi / 8) == pytest.approx(E_PI_8, abs=1e-15)
    assert entropy_of_entanglement(resource_state(math.pi / 8), [0, 1]) == pytest.approx(E_PI_8, abs=1e-12)


def test_schmidt_product_state():
    plus = np.array([1, 1]) / math.sqrt(2)
    psi = PureState(np.kron([1, 0], plus), (2, 2))
    sf = schmidt(psi)
    np.testing.assert_allclose(sf.coefficients, [1.0])


def test_schmidt_max_entangled():
    np.testing.assert_allclose(schmidt(max_entangled(2)).coefficients, [S2, S2], atol=1e-14)


@pytest.mark.parametrize("alpha", np.linspace(0.01, math.pi / 4, 9))
def test_schmidt_of_resource_state(alpha):
    c = schmidt(resource_state(alpha), [0, 1]).coefficients
    np.testing.assert_allclose(c, [math.cos(alpha), math.sin(alpha)], atol=1e-12)


def test_schmidt_rejects_empty_side():
    with pytest.raises(DimensionError):
        schmidt(max_entangled(2), [0, 1])
    with pytest.raises(DimensionError):
        schmidt(max_entangled(2), [])


@given(st.integers(0, 2**31), st.sampled_from([((2, 3), [0]), ((2, 2, 2), [1]), ((2, 2, 2, 2), [0, 3]), ((3, 2, 2), [0, 2])]))
@settings(max_examples=40, deadline=None)
def test_schmidt_reconstructs_with_orthonormal_vectors(seed, case):
    dims, cut = case
    rng = np.random.default_rng(seed)
    psi = PureState(random_pure(math.prod(dims), rng), dims)
    sf = schmidt(psi, cut)
    assert np.all(np.diff(sf.coefficients) <= 0)
    assert abs(np.sum(sf.coefficients**2) - 1) <= 1e-10
    k = len(sf.coefficients)
    np.testing.assert_allclose(sf.left.conj().T @ sf.left, np.eye(k), atol=1e-10)
    np.testing.assert_allclose(sf.right.conj().T @ sf.right, np.eye(k), atol=1e-10)
    np.testing.assert_allclose(sf.reconstruct(dims), psi.amplitudes, atol=1e-10)


@given(st.integers(0, 2**31), st.sampled_from([((2, 3), [0]), ((2, 2, 2), [0, 1]), ((2, 2, 2, 2), [0, 1])]))
@settings(max_examples=40, deadline=None)
def test_entropy_bounds(seed, case):
    dims, cut = case
    psi = PureState(random_pure(math.prod(dims), np.random.default_rng(seed)), dims)
    d_left = math.prod(dims[i] for i in cut)
    d_right = math.prod(dims) // d_left
    e = entropy_of_entanglement(psi, cut)
    assert 0 <= e <= math.log2(min(d_left, d_right)) + 1e-12


def test_entropy_matches_closed_form_on_grid():
    for alpha in np.linspace(0, math.pi / 2, 100):
        assert entropy_of_entanglement(resource_state(alpha), [0, 1]) == pytest.approx(_eq12(alpha), abs=1e-9)
        assert resource_entropy(alpha) == pytest.approx(_eq12(alpha), abs=1e-12)


@given(st.integers(0, 2**31))
@settings(max_examples=25, deadline=None)
def test_entropy_local_unitary_invariance(seed):
    rng = np.random.default_rng(seed)
    psi = resource_state(rng.uniform(0, math.pi / 2))
    u = random_unitary(4, rng).data  # on A1A2
    v = random_unitary(4, rng).data  # on B1B2
    moved = psi.evolve(Operator(np.kron(u, v), psi.dims))
    assert entropy_of_entanglement(moved, [0, 1]) == pytest.approx(entropy_of_entanglement(psi, [0, 1]), abs=1e-9)


def test_entropy_strictly_decreasing_in_n():
    values = [entropy_of_entanglement(resource_state(math.pi / 2**n), [0, 1]) for n in range(2, 21)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_basis_state_and_json_round_trip():
    psi = basis_state([0, 1])
    np.testing.assert_array_equal(psi.amplitudes, [0, 1, 0, 0])
    back = PureState.from_json(psi.to_json())
    np.testing.assert_array_equal(back.amplitudes, psi.amplitudes)
    assert psi.to_json()["matrix"] == [[[0.0, 0.0]], [[1.0, 0.0]], [[0.0, 0.0]], [[0.0, 0.0]]]
