"""Bipartite completely positive maps and their Choi operators.

A channel acts on A1 x B1.  Its Choi operator lives on A1 A2 B1 B2 (in that
order) and is obtained by feeding each party's half of a maximally entangled
pair through the map.  Normalization is such that a trace-preserving channel
has a unit-trace Choi operator; the reconstruction constants ``d**2`` and
``d**4`` follow from that choice.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DimensionError, NotHermitianError, ParseError, ValidationError
from .operator import (
    Operator,
    embed,
    hermitian_eig,
    matrix_from_json,
    matrix_to_json,
    partial_trace,
    partial_transpose,
    tensor,
)
from .states import max_entangled

CHANNEL_TOL = 1e-9
HERMITIAN_TOL = 1e-10
RANK_TOL = 1e-9
PPT_TOL = 1e-9

CHOI_LABELS = ("A1", "A2", "B1", "B2")


class TraceFlag(str, enum.Enum):
    TRACE_PRESERVING = "trace-preserving"
    TRACE_NON_INCREASING = "trace-non-increasing"
    UNNORMALIZED = "unnormalized"


class Classification(str, enum.Enum):
    SEPARABLE = "separable-by-construction"
    NPT_ENTANGLING = "NPT-entangling"
    PPT_UNDECIDED = "PPT-undecided"


def _kraus_gram(kraus: Sequence[Operator]) -> np.ndarray:
    return sum(k.data.conj().T @ k.data for k in kraus)


def _infer_trace_flag(gram: np.ndarray) -> TraceFlag:
    eye = np.eye(gram.shape[0])
    if np.max(np.abs(gram - eye)) <= CHANNEL_TOL:
        return TraceFlag.TRACE_PRESERVING
    if np.linalg.eigvalsh(eye - 0.5 * (gram + gram.conj().T))[0] >= -CHANNEL_TOL:
        return TraceFlag.TRACE_NON_INCREASING
    return TraceFlag.UNNORMALIZED


def _is_local_product(op: np.ndarray, d: int, tol: float = CHANNEL_TOL) -> bool:
    """True when ``op`` factors as ``A x B`` on ``d x d`` (operator-Schmidt rank <= 1)."""
    realigned = op.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    s = np.linalg.svd(realigned, compute_uv=False)
    return bool(s[1] <= tol * max(1.0, s[0]))


@dataclass(frozen=True)
class QuantumChannel:
    """Kraus representation ``rho -> sum_k O_k rho O_k^dagger`` on A1 x B1."""

    kraus: tuple[Operator, ...]
    d: int
    trace_flag: TraceFlag
    local_product: bool = False

    def __post_init__(self):
        if not self.kraus:
            raise DimensionError("a channel needs at least one Kraus operator")
        n = self.d * self.d
        for k in self.kraus:
            if k.dim != n:
                raise DimensionError(f"Kraus operator of dimension {k.dim}, expected {n}")
        gram = _kraus_gram(self.kraus)
        actual = _infer_trace_flag(gram)
        claimed = TraceFlag(self.trace_flag)
        ok = {
            TraceFlag.TRACE_PRESERVING: actual is TraceFlag.TRACE_PRESERVING,
            TraceFlag.TRACE_NON_INCREASING: actual is not TraceFlag.UNNORMALIZED,
            TraceFlag.UNNORMALIZED: True,
        }[claimed]
        if not ok:
            raise ValidationError(f"Kraus set is {actual.value} but was declared {claimed.value}")
        object.__setattr__(self, "trace_flag", claimed)

    @classmethod
    def from_kraus(cls, kraus, d: int | None = None, trace_flag=None) -> QuantumChannel:
        ops = []
        for k in kraus:
            arr = k.data if isinstance(k, Operator) else np.asarray(k, dtype=complex)
            if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
                raise DimensionError(f"Kraus operators must be square, got shape {arr.shape}")
            ops.append(arr)
        if not ops:
            raise DimensionError("a channel needs at least one Kraus operator")
        if d is None:
            d = int(round(np.sqrt(ops[0].shape[0])))
        if d < 1 or d * d != ops[0].shape[0]:
            raise DimensionError(f"Kraus dimension {ops[0].shape[0]} is not d**2 for d={d}")
        kraus_ops = tuple(Operator(o, (d, d), ("A1", "B1")) for o in ops)
        flag = _infer_trace_flag(_kraus_gram(kraus_ops)) if trace_flag is None else TraceFlag(trace_flag)
        local = all(_is_local_product(o, d) for o in ops)
        return cls(kraus_ops, d, flag, local)

    @classmethod
    def unitary(cls, u) -> QuantumChannel:
        return cls.from_kraus([u], trace_flag=TraceFlag.TRACE_PRESERVING)

    @classmethod
    def local_products(cls, pairs, trace_flag=None) -> QuantumChannel:
        """Channel with Kraus operators ``A_i x B_i``; separable by construction."""
        kraus = [np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)) for a, b in pairs]
        ch = cls.from_kraus(kraus, trace_flag=trace_flag)
        return cls(ch.kraus, ch.d, ch.trace_flag, True)

    def union(self, other: QuantumChannel) -> QuantumChannel:
        if other.d != self.d:
            raise DimensionError("cannot merge channels of different local dimension")
        return QuantumChannel.from_kraus(self.kraus + other.kraus, self.d, TraceFlag.UNNORMALIZED)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "trace_flag": self.trace_flag.value,
            "kraus": [matrix_to_json(k.data) for k in self.kraus],
        }

    @classmethod
    def from_json(cls, obj) -> QuantumChannel:
        if not isinstance(obj, dict):
            raise ParseError("channel JSON must be an object")
        missing = [k for k in ("d", "kraus") if k not in obj]
        if missing:
            raise ParseError(f"channel JSON is missing {missing}")
        if not isinstance(obj["kraus"], list):
            raise ParseError("'kraus' must be a list of matrices")
        kraus = [matrix_from_json(m) for m in obj["kraus"]]
        flag = obj.get("trace_flag")
        try:
            flag = None if flag is None else TraceFlag(flag)
        except ValueError:
            raise ParseError(f"unknown trace_flag {flag!r}") from None
        return cls.from_kraus(kraus, int(obj["d"]), flag)


@dataclass(frozen=True)
class ChoiOperator:
    """Positive operator on A1 A2 B1 B2 paired with a channel on A1 x B1."""

    op: Operator
    d: int
    local_product: bool = False

    def __post_init__(self):
        d = self.d
        if self.op.dims != (d, d, d, d):
            raise DimensionError(f"Choi operator needs dims {(d,) * 4}, got {self.op.dims}")
        if not self.op.is_hermitian(HERMITIAN_TOL):
            raise ValidationError("Choi operator is not Hermitian")
        if hermitian_eig(self.op)[0][-1] < -CHANNEL_TOL:
            raise ValidationError("Choi operator is not positive semidefinite")

    @property
    def eigenvalues(self) -> np.ndarray:
        return hermitian_eig(self.op)[0]

    def is_trace_preserving(self, tol: float = CHANNEL_TOL) -> bool:
        """The A2 B2 marginal is maximally mixed exactly when the channel preserves trace."""
        d = self.d
        marginal = partial_trace(self.op, (1, 3))
        return marginal.allclose(np.eye(d * d) / d**2, tol)


class ProjectionOutcome(NamedTuple):
    state: Operator | None
    probability: float


class PPTResult(NamedTuple):
    min_eigenvalue: float
    is_ppt: bool


@dataclass(frozen=True)
class EntanglingVerdict:
    ppt_min_eigenvalue: float
    classification: Classification
    rank: int
    is_unitary: bool

    def to_dict(self) -> dict:
        return {
            "ppt_min_eigenvalue": float(self.ppt_min_eigenvalue),
            "classification": self.classification.value,
            "rank": int(self.rank),
            "is_unitary": bool(self.is_unitary),
        }


def _check_input(rho: Operator, d: int) -> Operator:
    if rho.dim != d * d:
        raise DimensionError(f"input of dimension {rho.dim} does not match channel on {d}x{d}")
    return Operator(rho.data, (d, d), ("A1", "B1"))


def apply_channel(ch: QuantumChannel, rho: Operator) -> Operator:
    rho = _check_input(rho, ch.d)
    out = sum(k.data @ rho.data @ k.data.conj().T for k in ch.kraus)
    return Operator(out, rho.dims, rho.labels)


def choi_of_channel(ch: QuantumChannel) -> ChoiOperator:
    d = ch.d
    phi = max_entangled(d).projector()
    pp = tensor(phi, phi)  # A1 A2 B1 B2
    dims = (d, d, d, d)
    acc = np.zeros((d**4, d**4), dtype=complex)
    for k in ch.kraus:
        lifted = embed(k, (0, 2), dims).data
        acc += lifted @ pp.data @ lifted.conj().T
    return ChoiOperator(Operator(acc, dims, CHOI_LABELS), d, ch.local_product)


def channel_of_choi(e: ChoiOperator) -> QuantumChannel:
    """Kraus operators read off the eigenvectors of ``E``; inverse of :func:`choi_of_channel`."""
    d = e.d
    vals, vecs = hermitian_eig(e.op)
    kraus = []
    for lam, v in zip(vals, vecs.T):
        if lam <= RANK_TOL:
            continue
        # component [a1, a2, b1, b2] of (O x 1)|Phi>|Phi> is O[a1 b1, a2 b2] / d
        t = v.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
        kraus.append(d * np.sqrt(lam) * t)
    if not kraus:
        kraus = [np.zeros((d * d, d * d))]
    return QuantumChannel.from_kraus(kraus, d, TraceFlag.UNNORMALIZED)


def apply_via_choi(e: ChoiOperator, rho: Operator) -> Operator:
    """Rebuild the channel action: ``d**2 tr_{A2B2}(E (1 x rho^T)_{A2B2})``."""
    d = e.d
    rho = _check_input(rho, d)
    rho_t = partial_transpose(rho, (0, 1))
    lifted = embed(rho_t, (1, 3), e.op.dims)
    out = partial_trace(e.op @ lifted, (0, 2))
    return Operator(d**2 * out.data, (d, d), ("A1", "B1"))


def project_implement(e: ChoiOperator, rho_in: Operator) -> ProjectionOutcome:
    """Hold ``E`` on A1A2B1B2 and ``rho_in`` on A3B3; project A2A3 and B2B3 onto ``|Phi>``.

    Returns the normalized A1B1 state left behind and the probability of
    that outcome.  ``state`` is None when the outcome cannot occur.
    """
    d = e.d
    rho_in = _check_input(rho_in, d)
    big_e = e.op.data.reshape((d,) * 8)
    r = rho_in.data.reshape((d,) * 4)
    # <Phi|_{A2A3} <Phi|_{B2B3} (E x rho) |Phi>_{A2A3} |Phi>_{B2B3}
    post = np.einsum("aibjckdl,ijkl->abcd", big_e, r) / d**2
    post = post.reshape(d * d, d * d)
    prob = float(np.trace(post).real)
    if prob <= 1e-15:
        return ProjectionOutcome(None, 0.0)
    return ProjectionOutcome(Operator(post / prob, (d, d), ("A1", "B1")), prob)


def ppt_check(op: Operator, cut: Sequence[int] | None = None) -> PPTResult:
    """Smallest eigenvalue of the partial transpose on the cut's left side."""
    if not op.is_hermitian(HERMITIAN_TOL):
        raise NotHermitianError("ppt_check needs a Hermitian operator")
    if cut is None:
        cut = range(max(1, op.num_subsystems // 2))
    vals, _ = hermitian_eig(partial_transpose(op, cut))
    lo = float(vals[-1])
    return PPTResult(lo, lo >= -PPT_TOL)


def _is_product_across(op: Operator, left: Sequence[int], right: Sequence[int], tol: float = CHANNEL_TOL) -> bool:
    tr = op.trace()
    if abs(tr) <= tol:
        return False
    x = partial_trace(op, left)
    y = partial_trace(op, right)
    guess = np.kron(x.data, y.data) / tr
    # left/right are contiguous (A1A2 | B1B2) so no reordering is needed
    return bool(np.max(np.abs(op.data - guess)) <= tol)


def classify(e: ChoiOperator) -> EntanglingVerdict:
    ppt = ppt_check(e.op, (0, 1))
    vals = e.eigenvalues
    rank = int(np.sum(vals > RANK_TOL))
    unitary = rank == 1 and e.is_trace_preserving()
    if not ppt.is_ppt:
        label = Classification.NPT_ENTANGLING
    elif e.local_product or _is_product_across(e.op, (0, 1), (2, 3)):
        label = Classification.SEPARABLE
    else:
        label = Classification.PPT_UNDECIDED
    return EntanglingVerdict(ppt.min_eigenvalue, label, rank, unitary)
