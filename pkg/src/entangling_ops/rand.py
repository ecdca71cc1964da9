"""Random operators for tests, benchmarks and demos."""

from __future__ import annotations

import numpy as np

from .operator import Operator


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(dim: int, rng: np.random.Generator) -> Operator:
    """Haar-distributed unitary (QR of a Ginibre matrix with phase fix)."""
    q, r = np.linalg.qr(_ginibre(rng, dim, dim))
    d = np.diagonal(r)
    return Operator(q * (d / np.abs(d)))


def random_hermitian(dim: int, rng: np.random.Generator, dims=None) -> Operator:
    g = _ginibre(rng, dim, dim)
    return Operator((g + g.conj().T) / 2, dims)


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None, dims=None) -> Operator:
    g = _ginibre(rng, dim, rank or dim)
    rho = g @ g.conj().T
    return Operator(rho / np.trace(rho).real, dims)


def random_pure(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = _ginibre(rng, dim, 1)[:, 0]
    return v / np.linalg.norm(v)


def random_kraus(dim: int, n_kraus: int, rng: np.random.Generator) -> list[np.ndarray]:
    """Kraus set of a random trace-preserving map: blocks of a random isometry."""
    q, _ = np.linalg.qr(_ginibre(rng, n_kraus * dim, dim))
    return [q[k * dim:(k + 1) * dim] for k in range(n_kraus)]


def random_product_density(d: int, rng: np.random.Generator, terms: int = 3) -> Operator:
    """Random separable state on ``d x d``: a convex mix of product states."""
    weights = rng.dirichlet(np.ones(terms))
    rho = sum(w * np.kron(random_density(d, rng).data, random_density(d, rng).data) for w in weights)
    return Operator(rho, (d, d))
