"""Pure states, Bell bases, Schmidt forms and entropy of entanglement."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionError, NumericDomainError, ValidationError
from .operator import (
    ATOL,
    I2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    Operator,
    hermitian_eig,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
)

SCHMIDT_CUTOFF = 1e-12

# Correction table indexed by the 1-based pair (i1, i2).
BELL_PAULIS = {
    (1, 1): I2,
    (1, 2): SIGMA_X,
    (2, 1): SIGMA_Y,
    (2, 2): SIGMA_Z,
}
PAULI_NAMES = {(1, 1): "I", (1, 2): "X", (2, 1): "Y", (2, 2): "Z"}


class PureState:
    """Normalized state vector with subsystem dimensions."""

    __slots__ = ("_amp", "_dims")

    def __init__(self, amplitudes, dims: Sequence[int] | None = None, normalize: bool = False):
        amp = np.array(amplitudes, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(amp)):
            raise ValidationError("amplitudes must be finite")
        dims = (amp.size,) if dims is None else tuple(int(d) for d in dims)
        if math.prod(dims) != amp.size:
            raise DimensionError(f"dims {dims} do not match vector length {amp.size}")
        norm = np.linalg.norm(amp)
        if normalize:
            if norm == 0:
                raise ValueError("cannot normalize the zero vector")
            amp = amp / norm
        elif abs(norm - 1.0) > ATOL:
            raise ValidationError(f"state must have unit norm, got {norm!r}")
        amp.setflags(write=False)
        self._amp = amp
        self._dims = dims

    @property
    def amplitudes(self) -> np.ndarray:
        return self._amp

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    def __repr__(self) -> str:
        return f"PureState(dims={list(self._dims)}, amplitudes={self._amp!r})"

    def projector(self) -> Operator:
        return Operator(np.outer(self._amp, self._amp.conj()), self._dims)

    def inner(self, other: PureState) -> complex:
        return complex(np.vdot(self._amp, other.amplitudes))

    def evolve(self, op: Operator) -> PureState:
        return PureState(op.data @ self._amp, self._dims, normalize=True)

    def to_json(self) -> dict:
        return {"dims": list(self._dims), "matrix": matrix_to_json(self._amp.reshape(-1, 1))}

    @classmethod
    def from_json(cls, obj: dict) -> PureState:
        col = matrix_from_json(obj["matrix"])
        return cls(col.reshape(-1), obj.get("dims"))


@dataclass(frozen=True)
class SchmidtForm:
    coefficients: np.ndarray
    left: np.ndarray  # columns are the left Schmidt vectors
    right: np.ndarray
    cut: tuple[tuple[int, ...], tuple[int, ...]]

    def reconstruct(self, dims: Sequence[int]) -> np.ndarray:
        """Rebuild the amplitude vector in the original subsystem order."""
        left, right = self.cut
        mat = (self.left * self.coefficients) @ self.right.T
        dims = tuple(dims)
        t = mat.reshape([dims[i] for i in left] + [dims[i] for i in right])
        order = list(left) + list(right)
        return t.transpose(np.argsort(order)).reshape(-1)


def basis_state(bits: Sequence[int], dims: Sequence[int] | None = None) -> PureState:
    dims = tuple(dims) if dims is not None else (2,) * len(bits)
    amp = np.zeros(math.prod(dims), dtype=complex)
    amp[np.ravel_multi_index(tuple(bits), dims)] = 1
    return PureState(amp, dims)


def max_entangled(d: int) -> PureState:
    """``(1/sqrt d) sum_i |i>|i>`` on ``d x d``."""
    if d < 2:
        raise NumericDomainError("max_entangled needs d >= 2")
    amp = np.zeros(d * d, dtype=complex)
    amp[np.arange(d) * (d + 1)] = 1 / math.sqrt(d)
    return PureState(amp, (d, d))


def bell_state(i1: int, i2: int) -> PureState:
    """Bell state ``(1 x sigma_{i1,i2}) |Phi>`` with the 1-based index table I, X, Y, Z."""
    if (i1, i2) not in BELL_PAULIS:
        raise DimensionError(f"Bell indices must lie in {{1,2}}, got ({i1}, {i2})")
    phi = max_entangled(2).amplitudes
    return PureState(np.kron(I2.data, BELL_PAULIS[i1, i2].data) @ phi, (2, 2))


PHI_PLUS = bell_state(1, 1)
PSI_PLUS = bell_state(1, 2)


def resource_state(alpha: float) -> PureState:
    """``cos a |Phi+>_{A1A2}|Phi+>_{B1B2} - i sin a |Psi+>_{A1A2}|Psi+>_{B1B2}``.

    Subsystems are ordered A1, A2, B1, B2.
    """
    phi = PHI_PLUS.amplitudes
    psi = PSI_PLUS.amplitudes
    amp = math.cos(alpha) * np.kron(phi, phi) - 1j * math.sin(alpha) * np.kron(psi, psi)
    return PureState(amp, (2, 2, 2, 2), normalize=True)


def _normalize_cut(dims: Sequence[int], cut) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = len(dims)
    if cut is None:
        if n < 2:
            raise DimensionError("a single-subsystem state has no bipartition")
        left = tuple(range(n // 2))
    else:
        left = tuple(sorted(int(i) for i in cut))
    if any(not 0 <= i < n for i in left) or len(set(left)) != len(left):
        raise DimensionError(f"invalid cut {cut!r} for {n} subsystems")
    right = tuple(i for i in range(n) if i not in left)
    if not left or not right:
        raise DimensionError("both sides of the cut must be non-empty")
    return left, right


def schmidt(psi: PureState, cut: Sequence[int] | None = None) -> SchmidtForm:
    """Schmidt decomposition across ``cut`` (the left subsystems; default: first half).

    Left vectors come from the eigendecomposition of the reduced state on the
    left side.  Each coefficient is the norm of the left vector's partial
    overlap with ``psi``, which stays accurate for tiny weights; coefficients
    under ``SCHMIDT_CUTOFF`` are discarded.
    """
    left, right = _normalize_cut(psi.dims, cut)
    dims = psi.dims
    dl = math.prod(dims[i] for i in left)
    dr = math.prod(dims[i] for i in right)
    mat = psi.amplitudes.reshape(dims).transpose(list(left) + list(right)).reshape(dl, dr)

    rho_left = Operator(mat @ mat.conj().T)
    _, vecs = hermitian_eig(rho_left)
    partner = vecs.conj().T @ mat  # row k: (<l_k| x 1)|psi>
    coeffs = np.linalg.norm(partner, axis=1)
    order = np.argsort(-coeffs, kind="stable")
    keep = [k for k in order if coeffs[k] >= SCHMIDT_CUTOFF]
    c = coeffs[keep]
    lvecs = vecs[:, keep]
    rvecs = (partner[keep] / c[:, None]).T
    return SchmidtForm(c, lvecs, rvecs, (left, right))


def binary_entropy(p: float) -> float:
    """Shannon entropy in bits of the distribution ``(p, 1-p)``."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def entropy_of_entanglement(psi: PureState, cut: Sequence[int] | None = None) -> float:
    """Entropy (ebits) of the squared Schmidt coefficients."""
    w = schmidt(psi, cut).coefficients ** 2
    w = w / w.sum()
    return float(max(0.0, -np.sum(w * np.log2(w))))


def resource_entropy(alpha: float) -> float:
    """Closed-form entanglement of ``resource_state(alpha)`` across A1A2 | B1B2."""
    # sin^2 directly, avoiding 1 - cos^2 cancellation for small angles
    return binary_entropy(math.sin(alpha) ** 2)


def reduced_state(psi: PureState, keep: Sequence[int]) -> Operator:
    return partial_trace(psi.projector(), keep)

