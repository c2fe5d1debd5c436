"""Dense complex linear algebra used by every divergence and channel routine.

Operators are plain ``numpy`` arrays.  Most routines accept stacks of
matrices with shape ``(..., d, d)`` so that batches of states can be handled
with a single LAPACK call.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .exceptions import DimError, DomainError, InvalidOperator

#: Relative eigenvalue cutoff defining the support of a PSD operator.
SUPPORT_TOL = 1e-10
#: Relative tolerance for the Hermiticity test.
HERMITIAN_TOL = 1e-10
#: Largest negative eigenvalue that is silently clipped when building a state.
PSD_REPAIR_TOL = 1e-10
TRACE_TOL = 1e-10


def dag(M: np.ndarray) -> np.ndarray:
    """Conjugate transpose over the last two axes."""
    return np.conj(np.swapaxes(M, -1, -2))


def _square(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim < 2 or M.shape[-1] != M.shape[-2]:
        raise DimError(f"expected square matrix, got shape {M.shape}")
    return M


def is_hermitian(M: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    M = _square(M)
    scale = 1.0 + np.linalg.norm(M, ord=2, axis=(-2, -1))
    err = np.linalg.norm(M - dag(M), ord=2, axis=(-2, -1))
    return bool(np.all(err <= tol * scale))


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + dag(M))


def herm_eig(M: np.ndarray, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix (or stack).

    Returns eigenvalues in descending order and the matching orthonormal
    eigenvectors as columns, so that ``M = V @ diag(w) @ V^dagger``.

    :param M: Hermitian matrix or stack of matrices.
    :param check: raise :class:`InvalidOperator` if ``M`` is not Hermitian.
    """
    M = _square(M)
    if check and not is_hermitian(M):
        raise InvalidOperator("matrix is not Hermitian within tolerance")
    w, V = np.linalg.eigh(hermitian_part(M))
    return w[..., ::-1], V[..., ::-1]


def support_mask(w: np.ndarray) -> np.ndarray:
    """Boolean mask of eigenvalues counted as part of the support.

    An eigenvalue is kept iff it exceeds ``SUPPORT_TOL * max(1, lambda_max)``.
    """
    w = np.asarray(w)
    top = np.maximum(1.0, np.max(w, axis=-1, keepdims=True))
    return w > SUPPORT_TOL * top


def reconstruct(w: np.ndarray, V: np.ndarray) -> np.ndarray:
    return (V * w[..., None, :]) @ dag(V)


def mat_fn(
    M: np.ndarray,
    f: Callable[[np.ndarray], np.ndarray],
    support_only: bool = False,
) -> np.ndarray:
    """Apply a real scalar function to the spectrum of a Hermitian matrix.

    With ``support_only`` the function is evaluated on the support eigenvalues
    only and the kernel is mapped to zero (generalized-inverse convention).
    """
    w, V = herm_eig(M)
    if support_only:
        mask = support_mask(w)
        with np.errstate(all="ignore"):
            vals = f(np.where(mask, w, 1.0))
        if not np.all(np.isfinite(vals[mask])):
            raise DomainError("function undefined on a support eigenvalue")
        fw = np.where(mask, vals, 0.0)
    else:
        with np.errstate(all="ignore"):
            fw = np.asarray(f(w), dtype=float)
        if not np.all(np.isfinite(fw)):
            raise DomainError("function undefined on an eigenvalue")
    return reconstruct(fw, V)


def psd_power(M: np.ndarray, power: float) -> np.ndarray:
    """``M**power`` on the support of a PSD matrix, zero on the kernel."""
    w, V = herm_eig(M, check=False)
    mask = support_mask(w)
    fw = np.where(mask, np.abs(np.where(mask, w, 1.0)) ** power, 0.0)
    return reconstruct(fw, V)


def sqrtm_psd(M: np.ndarray) -> np.ndarray:
    w, V = herm_eig(M, check=False)
    return reconstruct(np.sqrt(np.clip(w, 0.0, None)), V)


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of matrices (left factor is most significant)."""
    if not ops:
        raise DimError("kron needs at least one operand")
    out = np.asarray(ops[0])
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op))
    return out


def _as_dims(dims: Sequence[int], total: int) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if int(np.prod(dims)) != total:
        raise DimError(f"subsystem dims {dims} do not multiply to {total}")
    return dims


def partial_trace(M: np.ndarray, keep: int | Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    :param M: operator (or stack) on the tensor product of ``dims``.
    :param keep: index or indices of the factors to keep, in increasing order.
    :param dims: dimensions of the factors.
    """
    M = _square(M)
    dims = _as_dims(dims, M.shape[-1])
    keep = [keep] if np.isscalar(keep) else sorted(keep)
    n = len(dims)
    if any(k < 0 or k >= n for k in keep):
        raise DimError(f"keep={keep} out of range for {n} subsystems")
    batch = M.shape[:-2]
    T = M.reshape(batch + dims + dims)
    nb = len(batch)
    # einsum with explicit index lists; traced factors share an index
    row = list(range(nb, nb + n))
    col = [nb + n + i if i in keep else nb + i for i in range(n)]
    bidx = list(range(nb))
    out = bidx + [nb + i for i in keep] + [nb + n + i for i in keep]
    R = np.einsum(T, bidx + row + col, out)
    dk = int(np.prod([dims[i] for i in keep])) if keep else 1
    return R.reshape(batch + (dk, dk))


def permute_subsystems(M: np.ndarray, dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Reorder tensor factors of an operator: factor ``perm[k]`` moves to slot ``k``."""
    M = _square(M)
    dims = _as_dims(dims, M.shape[-1])
    n = len(dims)
    batch = M.shape[:-2]
    nb = len(batch)
    T = M.reshape(batch + dims + dims)
    axes = list(range(nb)) + [nb + p for p in perm] + [nb + n + p for p in perm]
    d = M.shape[-1]
    return np.transpose(T, axes).reshape(batch + (d, d))


def permutation_unitary(dims: Sequence[int], perm: Sequence[int]) -> np.ndarray:
    """Unitary ``P`` with ``P (x_0 ⊗ ... ⊗ x_{n-1}) = x_{perm[0]} ⊗ ...``."""
    dims = tuple(dims)
    d = int(np.prod(dims))
    idx = np.arange(d).reshape(dims)
    new_idx = np.transpose(idx, perm).reshape(-1)
    P = np.zeros((d, d))
    P[np.arange(d), new_idx] = 1.0
    return P


def schatten_norm(M: np.ndarray, p: float) -> float | np.ndarray:
    """Schatten p-norm (p >= 1, or ``np.inf`` for the operator norm)."""
    if not p >= 1:
        raise DomainError("Schatten norm needs p >= 1")
    s = np.linalg.svd(np.asarray(M), compute_uv=False)
    if np.isinf(p):
        out = np.max(s, axis=-1)
    else:
        out = np.sum(s**p, axis=-1) ** (1.0 / p)
    return float(out) if np.ndim(out) == 0 else out


def trace_norm_hermitian(M: np.ndarray) -> float | np.ndarray:
    """Trace norm of a Hermitian matrix via its eigenvalues."""
    out = np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(M))), axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def support_projector(M: np.ndarray) -> np.ndarray:
    """Orthogonal projector onto the support of a PSD matrix."""
    w, V = herm_eig(M)
    return reconstruct(support_mask(w).astype(float), V)


def support_basis(M: np.ndarray) -> np.ndarray:
    """Orthonormal basis (columns) of the support of a single PSD matrix."""
    w, V = herm_eig(M, check=False)
    return V[:, support_mask(w)]


def intersection_projector(P: np.ndarray, Q: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Projector onto the intersection of the ranges of two projectors."""
    w, V = herm_eig(P + Q, check=False)
    keep = w > 2.0 - tol
    return V[:, keep] @ dag(V[:, keep])


# --------------------------------------------------------------------------
# validation of states
# --------------------------------------------------------------------------


def as_hermitian(M: np.ndarray) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    _square(M)
    if not is_hermitian(M):
        raise InvalidOperator("operator is not Hermitian")
    return hermitian_part(M)


def as_density_matrix(M: np.ndarray) -> np.ndarray:
    """Validate a density matrix and repair round-off.

    Eigenvalues in ``[-1e-10, 0)`` are clipped to zero and the trace is
    renormalized; anything more negative, or a trace off by more than 1e-10,
    raises :class:`InvalidOperator`.
    """
    M = as_hermitian(M)
    tr = np.real(np.trace(M, axis1=-2, axis2=-1))
    if np.any(np.abs(tr - 1.0) > TRACE_TOL):
        raise InvalidOperator("density matrix must have unit trace")
    w, V = herm_eig(M, check=False)
    if np.any(w < -PSD_REPAIR_TOL):
        raise InvalidOperator("density matrix has a negative eigenvalue")
    if np.any(w < 0):
        w = np.clip(w, 0.0, None)
        w = w / np.sum(w, axis=-1, keepdims=True)
        M = reconstruct(w, V)
    return M


def as_psd(M: np.ndarray) -> np.ndarray:
    M = as_hermitian(M)
    if np.any(np.linalg.eigvalsh(M) < -PSD_REPAIR_TOL * (1 + np.abs(M).max())):
        raise DomainError("operator is not positive semidefinite")
    return M


def as_pure_state(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise InvalidOperator("pure state must have unit norm")
    return v


def ket(i: int, d: int) -> np.ndarray:
    v = np.zeros(d, dtype=complex)
    v[i] = 1.0
    return v


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v)
    return np.einsum("...i,...j->...ij", v, np.conj(v))


def maximally_entangled(d: int) -> np.ndarray:
    """Density matrix of ``sum_i |ii> / sqrt(d)`` on R ⊗ A (R first)."""
    v = np.eye(d, dtype=complex).reshape(-1) / np.sqrt(d)
    return projector(v)
