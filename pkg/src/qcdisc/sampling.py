"""Random states, unitaries and channels for tests, searches and property suites."""

from __future__ import annotations

import numpy as np

from .linmat import dag


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def child_seeds(seed: int, count: int) -> list[np.random.SeedSequence]:
    """Independent per-task seeds derived by index, so results do not depend on scheduling."""
    return np.random.SeedSequence(seed).spawn(count)


def ginibre(rows: int, cols: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary (QR of a Ginibre matrix with phase correction)."""
    Q, R = np.linalg.qr(ginibre(d, d, rng))
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_isometry(d_in: int, d_out: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random isometry from ``d_in`` to ``d_out`` dimensions (``d_out >= d_in``)."""
    return random_unitary(d_out, rng)[:, :d_in]


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    v = ginibre(d, 1, rng)[:, 0]
    return v / np.linalg.norm(v)


def random_psd(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    G = ginibre(d, rank or d, rng)
    return G @ dag(G)


def random_state(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Random density matrix; full rank gives the Hilbert-Schmidt measure."""
    P = random_psd(d, rng, rank)
    return P / np.trace(P).real


def random_states(count: int, d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    G = (rng.standard_normal((count, d, rank or d)) + 1j * rng.standard_normal((count, d, rank or d)))
    P = G @ dag(G)
    return P / np.trace(P, axis1=-2, axis2=-1).real[:, None, None]


def random_pures(count: int, d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal((count, d)) + 1j * rng.standard_normal((count, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    G = ginibre(d, d, rng)
    return (G + dag(G)) / 2


def random_kraus(d_in: int, d_out: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Kraus operators of a random channel from a Haar-random Stinespring isometry."""
    rank = rank or d_in * d_out
    V = random_isometry(d_in, d_out * rank, rng)
    # rows of V are indexed by (k, b) with the Kraus index k most significant
    return V.reshape(rank, d_out, d_in)
