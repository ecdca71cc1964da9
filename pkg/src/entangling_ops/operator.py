"""Dense operators on small tensor-product spaces.

Subsystem 0 is the most significant tensor factor: the basis state
``|i_0 i_1 ... >`` sits at index ``sum_k i_k * prod(dims[k+1:])``.  Every
routine in the package relies on this single convention, including the
transposition basis used by :func:`partial_transpose`.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionError, NotHermitianError, ParseError, ValidationError

ATOL = 1e-10


class Operator:
    """Immutable square complex matrix tagged with subsystem dimensions."""

    __slots__ = ("_data", "_dims", "_labels")

    def __init__(self, data, dims: Sequence[int] | None = None, labels: Sequence[str] | None = None):
        arr = np.array(data, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionError(f"operator must be a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("operator entries must be finite")
        n = arr.shape[0]
        dims = (n,) if dims is None else tuple(int(d) for d in dims)
        if any(d < 1 for d in dims) or math.prod(dims) != n:
            raise DimensionError(f"dims {dims} do not multiply to matrix dimension {n}")
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != len(dims):
                raise DimensionError("one label per subsystem is required")
        arr.setflags(write=False)
        self._data = arr
        self._dims = dims
        self._labels = labels

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def dims(self) -> tuple[int, ...]:
        return self._dims

    @property
    def labels(self) -> tuple[str, ...] | None:
        return self._labels

    @property
    def dim(self) -> int:
        return self._data.shape[0]

    @property
    def num_subsystems(self) -> int:
        return len(self._dims)

    def __array__(self, dtype=None, copy=None):
        return self._data if dtype is None else self._data.astype(dtype)

    def __repr__(self) -> str:
        return f"Operator(dims={list(self._dims)}, labels={self._labels})\n{self._data!r}"

    # -- arithmetic; results keep dims/labels of the left operand ---------
    def _like(self, data) -> Operator:
        return Operator(data, self._dims, self._labels)

    def __matmul__(self, other: Operator) -> Operator:
        other = _as_matrix(other)
        if other.shape != self._data.shape:
            raise DimensionError(f"cannot multiply {self._data.shape} by {other.shape}")
        return self._like(self._data @ other)

    def __add__(self, other: Operator) -> Operator:
        other = _as_matrix(other)
        if other.shape != self._data.shape:
            raise DimensionError(f"cannot add {self._data.shape} and {other.shape}")
        return self._like(self._data + other)

    def __sub__(self, other: Operator) -> Operator:
        return self + (-1) * _as_matrix(other)

    def __mul__(self, scalar) -> Operator:
        return self._like(self._data * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> Operator:
        return self * -1

    def dag(self) -> Operator:
        return self._like(self._data.conj().T)

    def transpose(self) -> Operator:
        return self._like(self._data.T)

    def trace(self) -> complex:
        return complex(np.trace(self._data))

    def allclose(self, other, atol: float = ATOL) -> bool:
        other = _as_matrix(other)
        return other.shape == self._data.shape and bool(np.max(np.abs(self._data - other), initial=0.0) <= atol)

    def relabel(self, labels: Sequence[str] | None) -> Operator:
        return Operator(self._data, self._dims, labels)

    # -- structural predicates -------------------------------------------
    def is_hermitian(self, tol: float = ATOL) -> bool:
        return bool(np.max(np.abs(self._data - self._data.conj().T), initial=0.0) <= tol)

    def is_unitary(self, tol: float = ATOL) -> bool:
        eye = np.eye(self.dim)
        return bool(np.max(np.abs(self._data.conj().T @ self._data - eye), initial=0.0) <= tol)

    def is_positive_semidefinite(self, tol: float = ATOL) -> bool:
        if not self.is_hermitian(tol):
            return False
        return bool(np.linalg.eigvalsh(_hermitize(self._data))[0] >= -tol)


def _as_matrix(x) -> np.ndarray:
    return x.data if isinstance(x, Operator) else np.asarray(x, dtype=complex)


def _hermitize(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + a.conj().T)


def _check_subsystems(op: Operator, idx: Iterable[int]) -> tuple[int, ...]:
    idx = tuple(int(i) for i in idx)
    n = op.num_subsystems
    for i in idx:
        if not 0 <= i < n:
            raise DimensionError(f"subsystem index {i} out of range for {n} subsystems")
    if len(set(idx)) != len(idx):
        raise DimensionError(f"repeated subsystem index in {idx}")
    return idx


def _pick(labels, idx):
    return None if labels is None else tuple(labels[i] for i in idx)


# -- constants ------------------------------------------------------------

def identity(dims: int | Sequence[int]) -> Operator:
    dims = (dims,) if isinstance(dims, (int, np.integer)) else tuple(dims)
    return Operator(np.eye(math.prod(dims)), dims)


I2 = Operator(np.eye(2))
SIGMA_X = Operator([[0, 1], [1, 0]])
SIGMA_Y = Operator([[0, -1j], [1j, 0]])
SIGMA_Z = Operator([[1, 0], [0, -1]])
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


# -- core operations --------------------------------------------------------

def tensor(*ops: Operator) -> Operator:
    """Kronecker product, first factor most significant; dims concatenate."""
    if not ops:
        raise DimensionError("tensor needs at least one operand")
    data = ops[0].data
    dims = list(ops[0].dims)
    labels = list(ops[0].labels) if ops[0].labels is not None else None
    for op in ops[1:]:
        data = np.kron(data, op.data)
        dims.extend(op.dims)
        if labels is not None and op.labels is not None:
            labels.extend(op.labels)
        else:
            labels = None
    return Operator(data, dims, labels)


def partial_trace(op: Operator, keep: Iterable[int]) -> Operator:
    """Trace out every subsystem not listed in ``keep`` (order of ``keep`` is ignored)."""
    keep = tuple(sorted(_check_subsystems(op, keep)))
    dims = op.dims
    n = len(dims)
    t = op.data.reshape(dims + dims)
    row = list(range(n))
    col = [i if i not in keep else n + i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    kept = tuple(dims[i] for i in keep)
    d = math.prod(kept)
    res = np.einsum(t, row + col, out).reshape(d, d)
    return Operator(res, kept if kept else (1,), _pick(op.labels, keep) if keep else None)


def partial_transpose(op: Operator, subsystems: Iterable[int]) -> Operator:
    """Transpose the selected tensor factors in the computational basis."""
    sel = _check_subsystems(op, subsystems)
    if not sel:
        return op
    dims = op.dims
    n = len(dims)
    axes = list(range(2 * n))
    for i in sel:
        axes[i], axes[n + i] = axes[n + i], axes[i]
    res = op.data.reshape(dims + dims).transpose(axes).reshape(op.dim, op.dim)
    return Operator(res, dims, op.labels)


def permute(op: Operator, order: Sequence[int]) -> Operator:
    """Reorder subsystems so that new subsystem ``k`` is old subsystem ``order[k]``."""
    order = _check_subsystems(op, order)
    if len(order) != op.num_subsystems:
        raise DimensionError("permutation must list every subsystem once")
    dims = op.dims
    n = len(dims)
    res = op.data.reshape(dims + dims).transpose(list(order) + [n + i for i in order])
    return Operator(res.reshape(op.dim, op.dim), [dims[i] for i in order], _pick(op.labels, order))


def embed(op: Operator, targets: Sequence[int], dims: Sequence[int], labels=None) -> Operator:
    """Lift ``op`` to act on ``targets`` of a register with ``dims``, identity elsewhere."""
    dims = tuple(int(d) for d in dims)
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets) or any(not 0 <= t < len(dims) for t in targets):
        raise DimensionError(f"bad target list {targets} for {len(dims)} subsystems")
    if op.dim != math.prod(dims[t] for t in targets):
        raise DimensionError(f"operator of dimension {op.dim} does not fit targets {targets}")
    rest = [i for i in range(len(dims)) if i not in targets]
    current = list(targets) + rest
    full = Operator(np.kron(op.data, np.eye(math.prod(dims[i] for i in rest))), [dims[i] for i in current])
    res = permute(full, [current.index(i) for i in range(len(dims))])
    return Operator(res.data, dims, labels)


def hermitian_eig(op: Operator) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvector columns of a Hermitian operator."""
    if not op.is_hermitian():
        raise NotHermitianError("hermitian_eig requires a Hermitian operator")
    vals, vecs = np.linalg.eigh(_hermitize(op.data))
    return vals[::-1].copy(), vecs[:, ::-1].copy()


def expm_hermitian(h: Operator, t: float) -> Operator:
    """Return ``exp(-i h t)`` through the spectral decomposition of ``h``."""
    vals, vecs = hermitian_eig(h)
    phases = np.exp(-1j * vals * t)
    return Operator((vecs * phases) @ vecs.conj().T, h.dims, h.labels)


# -- JSON codec ---------------------------------------------------------------

def matrix_to_json(mat) -> list:
    """Row-major list of rows; each entry is ``[re, im]``."""
    mat = np.atleast_2d(np.asarray(mat, dtype=complex))
    return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


def matrix_from_json(rows) -> np.ndarray:
    """Inverse of :func:`matrix_to_json`; a plain real matrix is accepted too."""
    try:
        arr = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix is not a rectangular array of [re, im] pairs: {exc}") from None
    if arr.ndim == 2:
        return arr.astype(complex)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ParseError(f"matrix entries must be [re, im] pairs, got array of shape {arr.shape}")
    return arr[..., 0] + 1j * arr[..., 1]


def operator_to_json(op: Operator) -> dict:
    out = {"dims": list(op.dims), "matrix": matrix_to_json(op.data)}
    if op.labels is not None:
        out["labels"] = list(op.labels)
    return out


def operator_from_json(obj: dict) -> Operator:
    if not isinstance(obj, dict) or "matrix" not in obj:
        raise ParseError("operator JSON needs a 'matrix' field")
    mat = matrix_from_json(obj["matrix"])
    return Operator(mat, obj.get("dims"), obj.get("labels"))
