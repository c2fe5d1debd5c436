"""State divergences, distances and related inequalities.

All logarithms are base 2 and values are in bits.  Every divergence accepts
either a pair of density matrices or two broadcast-compatible stacks with
shape ``(..., d, d)``; scalar inputs give a Python ``float`` and stacks give an
array.  ``math.inf`` marks support or orthogonality violations.

Support of an operator follows :data:`qcdisc.linmat.SUPPORT_TOL`.  A pair is
treated as orthogonal when ``Tr[rho sigma] <= ORTHOGONAL_TOL`` and as a
support violation when the weight of ``rho`` outside the support of
``sigma`` exceeds ``LEAK_TOL``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .exceptions import DimError, DomainError
from .linmat import as_psd, dag, hermitian_part, support_mask
from .optimize import grid_refine_max

ORTHOGONAL_TOL = 1e-12
LEAK_TOL = 1e-9
EIG_NOISE = 64 * np.finfo(float).eps
LN2 = math.log(2.0)


# --------------------------------------------------------------------------
# kinds
# --------------------------------------------------------------------------

_PARAMETRIC = {"PETZ", "SANDWICHED", "LOG_EUCLIDEAN", "HILBERT"}
_PLAIN = {"RELATIVE", "MAX", "CHERNOFF", "CHERNOFF_FLAT", "TRACE_DIST", "FIDELITY", "C_DIST", "BURES"}


@dataclass(frozen=True)
class DivergenceKind:
    """Tag naming a state divergence, with its order parameter where one exists.

    ``FIDELITY`` denotes the divergence ``-log2 F`` (equal to the sandwiched
    order-1/2 divergence) and ``TRACE_DIST`` the trace distance.
    """

    tag: str
    alpha: float | None = None

    def __post_init__(self):
        if self.tag in _PLAIN:
            if self.alpha is not None:
                raise DomainError(f"{self.tag} takes no order parameter")
            return
        if self.tag not in _PARAMETRIC:
            raise DomainError(f"unknown divergence kind {self.tag!r}")
        a = self.alpha
        if a is None or np.isnan(a):
            raise DomainError(f"{self.tag} needs an order parameter")
        if self.tag == "PETZ" and not (0 <= a < np.inf):
            raise DomainError("Petz order must lie in [0, inf)")
        if self.tag == "SANDWICHED" and not a > 0:
            raise DomainError("sandwiched order must be positive")
        if self.tag == "LOG_EUCLIDEAN" and not (0 <= a < np.inf):
            raise DomainError("log-Euclidean order must lie in [0, inf)")
        if self.tag == "HILBERT" and not a >= 1:
            raise DomainError("Hilbert order must be >= 1")

    def __str__(self) -> str:
        return self.tag if self.alpha is None else f"{self.tag}({self.alpha:g})"

    @property
    def data_processing(self) -> bool:
        """Whether the kind is monotone under every channel."""
        a = self.alpha
        if self.tag == "PETZ":
            return 0 <= a <= 2
        if self.tag == "SANDWICHED":
            return a >= 0.5
        if self.tag == "LOG_EUCLIDEAN":
            return 0 <= a <= 1
        return True

    @property
    def subadditive(self) -> bool:
        """Monotone and sub-additive on tensor products (usable for the environment bound)."""
        if self.tag in ("RELATIVE", "MAX", "CHERNOFF", "TRACE_DIST", "FIDELITY"):
            return True
        if self.tag in ("PETZ", "SANDWICHED"):
            return self.data_processing
        return False


RELATIVE = DivergenceKind("RELATIVE")
MAX = DivergenceKind("MAX")
CHERNOFF = DivergenceKind("CHERNOFF")
CHERNOFF_FLAT = DivergenceKind("CHERNOFF_FLAT")
TRACE_DIST = DivergenceKind("TRACE_DIST")
FIDELITY = DivergenceKind("FIDELITY")
C_DIST = DivergenceKind("C_DIST")
BURES = DivergenceKind("BURES")


def petz(alpha: float) -> DivergenceKind:
    return DivergenceKind("PETZ", float(alpha))


def sandwiched(alpha: float) -> DivergenceKind:
    return DivergenceKind("SANDWICHED", float(alpha))


def log_euclidean(alpha: float) -> DivergenceKind:
    return DivergenceKind("LOG_EUCLIDEAN", float(alpha))


def hilbert(alpha: float) -> DivergenceKind:
    return DivergenceKind("HILBERT", float(alpha))


_ALIASES = {
    "relative": "RELATIVE", "umegaki": "RELATIVE", "max": "MAX", "dmax": "MAX",
    "petz": "PETZ", "sandwiched": "SANDWICHED", "log_euclidean": "LOG_EUCLIDEAN",
    "log-euclidean": "LOG_EUCLIDEAN", "flat": "LOG_EUCLIDEAN", "chernoff": "CHERNOFF",
    "chernoff_flat": "CHERNOFF_FLAT", "hilbert": "HILBERT", "trace": "TRACE_DIST",
    "trace_dist": "TRACE_DIST", "fidelity": "FIDELITY", "c_dist": "C_DIST",
    "c-distance": "C_DIST", "bures": "BURES",
}


def parse_kind(name: str, alpha: float | None = None) -> DivergenceKind:
    """Build a kind from a user-facing name such as ``"sandwiched"`` or ``"petz:0.5"``."""
    if ":" in name:
        name, a = name.split(":", 1)
        alpha = float(a)
    tag = _ALIASES.get(name.lower(), name.upper())
    if tag in _PARAMETRIC:
        return DivergenceKind(tag, None if alpha is None else float(alpha))
    return DivergenceKind(tag)


# --------------------------------------------------------------------------
# spectral helpers
# --------------------------------------------------------------------------


def _pair(rho, sigma):
    rho = np.asarray(rho, dtype=complex)
    sigma = np.asarray(sigma, dtype=complex)
    if rho.ndim < 2 or rho.shape[-1] != rho.shape[-2] or sigma.shape[-2:] != rho.shape[-2:]:
        raise DimError(f"incompatible operand shapes {rho.shape} and {sigma.shape}")
    return np.broadcast_arrays(rho, sigma)


def _out(x):
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


class _Spec(NamedTuple):
    w: np.ndarray
    V: np.ndarray
    mask: np.ndarray


def _spec(M: np.ndarray) -> _Spec:
    w, V = np.linalg.eigh(hermitian_part(M))
    mask = support_mask(w)
    return _Spec(np.clip(w, 0.0, None), V, mask)


def _overlap(a: _Spec, b: _Spec) -> np.ndarray:
    """``O[..., i, j] = |<a_i|b_j>|^2``."""
    return np.abs(dag(a.V) @ b.V) ** 2


def _above_noise(w: np.ndarray) -> np.ndarray:
    """Eigenvalues clear of rounding noise, a far smaller cut than the support threshold."""
    top = np.max(w, axis=-1, keepdims=True)
    return w > EIG_NOISE * np.maximum(1.0, top)


def _noise_sqrt(s: _Spec) -> np.ndarray:
    return _func_of(s, np.where(_above_noise(s.w), np.sqrt(s.w), 0.0))


def _masked_pow(s: _Spec, p: float) -> np.ndarray:
    base = np.where(s.mask, s.w, 1.0)
    return np.where(s.mask, base**p, 0.0)


def _leak(rs: _Spec, O: np.ndarray, ss: _Spec) -> np.ndarray:
    """Weight of rho outside the support of sigma."""
    inside = np.sum(O * ss.mask[..., None, :], axis=-1)
    return np.sum(rs.w * (1.0 - inside), axis=-1)


def _hs_overlap(rho, sigma) -> np.ndarray:
    return np.real(np.einsum("...ij,...ji->...", rho, sigma))


def _func_of(s: _Spec, vals: np.ndarray) -> np.ndarray:
    return (s.V * vals[..., None, :]) @ dag(s.V)


# --------------------------------------------------------------------------
# divergences
# --------------------------------------------------------------------------


def relative_entropy(rho, sigma):
    """Umegaki relative entropy ``Tr[rho (log rho - log sigma)]``; ``inf`` off support."""
    rho, sigma = _pair(rho, sigma)
    rs, ss = _spec(rho), _spec(sigma)
    O = _overlap(rs, ss)
    logw = np.where(rs.mask, np.log2(np.where(rs.mask, rs.w, 1.0)), 0.0)
    logm = np.where(ss.mask, np.log2(np.where(ss.mask, ss.w, 1.0)), 0.0)
    t1 = np.sum(rs.w * logw, axis=-1)
    t2 = np.einsum("...i,...ij,...j->...", rs.w, O, logm)
    val = t1 - t2
    val = np.where(_leak(rs, O, ss) > LEAK_TOL, np.inf, val)
    return _out(val)


def max_relative_entropy(rho, sigma):
    """``log2 || sigma^{-1/2} rho sigma^{-1/2} ||_inf`` with pseudo-inverse; ``inf`` off support."""
    rho, sigma = _pair(rho, sigma)
    ss = _spec(sigma)
    S = _func_of(ss, _masked_pow(ss, -0.5))
    top = np.linalg.eigvalsh(hermitian_part(S @ rho @ S))[..., -1]
    rs = _spec(rho)
    leak = _leak(rs, _overlap(rs, ss), ss)
    with np.errstate(divide="ignore"):
        val = np.log2(np.clip(top, 1e-300, None))
    val = np.where(leak > LEAK_TOL, np.inf, val)
    return _out(val)


def _petz_q(rs: _Spec, ss: _Spec, O: np.ndarray, alpha: float) -> np.ndarray:
    return np.einsum("...i,...ij,...j->...", _masked_pow(rs, alpha), O, _masked_pow(ss, 1.0 - alpha))


def petz_renyi(rho, sigma, alpha: float):
    """Petz-Renyi divergence ``log2 Tr[rho^a sigma^(1-a)] / (a-1)``.

    ``alpha = 0`` gives ``-log2 Tr[Pi_rho sigma]`` and ``alpha = 1`` the
    relative entropy.
    """
    if not alpha >= 0 or np.isinf(alpha):
        raise DomainError("Petz order must lie in [0, inf)")
    if alpha == 1:
        return relative_entropy(rho, sigma)
    rho, sigma = _pair(rho, sigma)
    rs, ss = _spec(rho), _spec(sigma)
    O = _overlap(rs, ss)
    if alpha == 0:
        q = np.einsum("...i,...ij,...j->...", rs.mask.astype(float), O, ss.w)
        with np.errstate(divide="ignore"):
            val = -np.log2(np.clip(q, 0.0, None))
        return _out(np.where(q <= ORTHOGONAL_TOL, np.inf, val))
    q = _petz_q(rs, ss, O, alpha)
    with np.errstate(divide="ignore"):
        val = np.log2(np.clip(q, 1e-300, None)) / (alpha - 1.0)
    if alpha < 1:
        bad = _hs_overlap(rho, sigma) <= ORTHOGONAL_TOL
    else:
        bad = _leak(rs, O, ss) > LEAK_TOL
    return _out(np.where(bad, np.inf, val))


def sandwiched_renyi(rho, sigma, alpha: float):
    """Sandwiched Renyi divergence; ``alpha = inf`` gives the max-relative entropy."""
    if not alpha > 0:
        raise DomainError("sandwiched order must be positive")
    if np.isinf(alpha):
        return max_relative_entropy(rho, sigma)
    if alpha == 1:
        return relative_entropy(rho, sigma)
    rho, sigma = _pair(rho, sigma)
    ss = _spec(sigma)
    gamma = (1.0 - alpha) / (2.0 * alpha)
    S = _func_of(ss, _masked_pow(ss, gamma))
    lam = np.clip(np.linalg.eigvalsh(hermitian_part(S @ rho @ S)), 0.0, None)
    # noise eigenvalues would otherwise contribute lam**alpha >> lam for alpha < 1
    lam = np.where(_above_noise(lam), lam, 0.0)
    q = np.sum(lam**alpha, axis=-1)
    with np.errstate(divide="ignore"):
        val = np.log2(np.clip(q, 1e-300, None)) / (alpha - 1.0)
    if alpha < 1:
        bad = _hs_overlap(rho, sigma) <= ORTHOGONAL_TOL
    else:
        rs = _spec(rho)
        bad = _leak(rs, _overlap(rs, ss), ss) > LEAK_TOL
    return _out(np.where(bad, np.inf, val))


class _FlatData(NamedTuple):
    log_rho: np.ndarray  # natural log of rho compressed to the common support
    log_sigma: np.ndarray
    empty: bool
    leak: float


def _flat_data(rho: np.ndarray, sigma: np.ndarray) -> _FlatData:
    rs, ss = _spec(rho), _spec(sigma)
    leak = float(_leak(rs, _overlap(rs, ss), ss))
    if rs.mask.all() and ss.mask.all():
        B = np.eye(rho.shape[-1], dtype=complex)
    else:
        Pr = _func_of(rs, rs.mask.astype(float))
        Ps = _func_of(ss, ss.mask.astype(float))
        w, V = np.linalg.eigh(hermitian_part(Pr + Ps))
        B = V[:, w > 2.0 - 1e-8]
    if B.shape[1] == 0:
        return _FlatData(np.zeros((0, 0)), np.zeros((0, 0)), True, leak)
    Lr = _func_of(rs, np.where(rs.mask, np.log(np.where(rs.mask, rs.w, 1.0)), 0.0))
    Ls = _func_of(ss, np.where(ss.mask, np.log(np.where(ss.mask, ss.w, 1.0)), 0.0))
    return _FlatData(dag(B) @ Lr @ B, dag(B) @ Ls @ B, False, leak)


def _flat_log2_q(fd: _FlatData, alphas: np.ndarray) -> np.ndarray:
    """``log2 Tr exp(a P ln(rho) P + (1-a) P ln(sigma) P)`` on the common support P."""
    alphas = np.asarray(alphas, dtype=float)
    if fd.empty:
        return np.full(alphas.shape, -np.inf)
    A = alphas[:, None, None] * fd.log_rho + (1.0 - alphas)[:, None, None] * fd.log_sigma
    ev = np.linalg.eigvalsh(hermitian_part(A))
    top = ev.max(axis=-1)
    return (top + np.log(np.sum(np.exp(ev - top[:, None]), axis=-1))) / LN2


def log_euclidean_renyi(rho, sigma, alpha: float):
    """Log-Euclidean Renyi divergence ``log2 Tr exp(a ln rho + (1-a) ln sigma) / (a-1)``.

    For singular inputs the value is the limit of the regularized expression,
    which equals the same formula compressed to the intersection of the two
    supports (and ``inf`` for orders above one when the support of ``rho`` is
    not inside that of ``sigma``).
    """
    if not alpha >= 0 or np.isinf(alpha):
        raise DomainError("log-Euclidean order must lie in [0, inf)")
    if alpha == 1:
        return relative_entropy(rho, sigma)
    rho, sigma = _pair(rho, sigma)
    if rho.ndim > 2:
        flat = [log_euclidean_renyi(r, s, alpha) for r, s in zip(rho.reshape(-1, *rho.shape[-2:]), sigma.reshape(-1, *sigma.shape[-2:]))]
        return np.array(flat).reshape(rho.shape[:-2])
    if alpha < 1 and _hs_overlap(rho, sigma) <= ORTHOGONAL_TOL:
        return math.inf
    fd = _flat_data(rho, sigma)
    if alpha > 1 and fd.leak > LEAK_TOL:
        return math.inf
    lq = float(_flat_log2_q(fd, np.array([alpha]))[0])
    if np.isneginf(lq):
        return math.inf
    return lq / (alpha - 1.0)


def log_euclidean_regularized(rho, sigma, alpha: float, eps: float) -> float:
    """Log-Euclidean value of the regularized pair ``(rho + eps I)/(1 + d eps)``, ``(sigma + eps I)/(1 + d eps)``."""
    rho, sigma = _pair(rho, sigma)
    d = rho.shape[-1]
    I = np.eye(d)
    return log_euclidean_renyi((rho + eps * I) / (1 + d * eps), (sigma + eps * I) / (1 + d * eps), alpha)


def petz_log2_q(rho, sigma):
    """Return ``a -> log2 Tr[rho^a sigma^(1-a)]`` (vectorized over ``a`` in ``[0, 1]``).

    Evaluated as a log-sum-exp over the joint spectrum, which keeps tiny
    eigenvalues accurate.  Orthogonal pairs give ``-inf``.
    """
    rho, sigma = _pair(rho, sigma)
    rs, ss = _spec(rho), _spec(sigma)
    O = _overlap(rs, ss)
    lw = np.where(rs.mask, np.log(np.where(rs.mask, rs.w, 1.0)), -np.inf)
    lm = np.where(ss.mask, np.log(np.where(ss.mask, ss.w, 1.0)), -np.inf)
    with np.errstate(divide="ignore"):
        lO = np.log(O)

    def log2_q(alphas):
        alphas = np.atleast_1d(np.asarray(alphas, dtype=float))[:, None, None]
        with np.errstate(invalid="ignore"):
            t = alphas * lw[None, :, None] + (1 - alphas) * lm[None, None, :] + lO[None]
        t = np.where(np.isnan(t), -np.inf, t).reshape(t.shape[0], -1)
        top = np.max(t, axis=1)
        safe = np.where(np.isfinite(top), top, 0.0)
        with np.errstate(divide="ignore"):
            return (safe + np.log(np.sum(np.exp(t - safe[:, None]), axis=1))) / LN2

    return log2_q


def _petz_exponents(rho, sigma) -> tuple[np.ndarray, np.ndarray]:
    """Terms of ``ln Tr[rho^a sigma^(1-a)] = ln sum_k exp(c_k + a s_k)`` on the common support."""
    rs, ss = _spec(rho), _spec(sigma)
    O = _overlap(rs, ss)
    keep = rs.mask[:, None] & ss.mask[None, :] & (O > 0)
    lw = np.log(np.where(rs.mask, rs.w, 1.0))[:, None]
    lm = np.log(np.where(ss.mask, ss.w, 1.0))[None, :]
    with np.errstate(divide="ignore"):
        c = (lm + np.log(O))[keep]
    slope = np.broadcast_to(lw - lm, O.shape)[keep]
    return c, slope


def chernoff(rho, sigma):
    """Chernoff divergence ``-min_{a in [0,1]} log2 Tr[rho^a sigma^(1-a)]``.

    The log-trace is convex in ``a``; its minimizer is found by safeguarded
    Newton steps on the derivative.
    """
    rho, sigma = _pair(rho, sigma)
    if rho.ndim > 2:
        return _loop(chernoff, rho, sigma)
    if _hs_overlap(rho, sigma) <= ORTHOGONAL_TOL:
        return math.inf
    c, slope = _petz_exponents(rho, sigma)
    if c.size == 0:
        return math.inf

    def parts(a):
        t = c + a * slope
        top = t.max()
        e = np.exp(t - top)
        z = e.sum()
        m1 = (e @ slope) / z
        m2 = (e @ slope**2) / z
        return top + math.log(z), m1, max(m2 - m1 * m1, 0.0)

    g0, d0, _ = parts(0.0)
    g1, d1, _ = parts(1.0)
    if d0 >= 0:
        return float(-g0 / LN2)
    if d1 <= 0:
        return float(-g1 / LN2)
    lo, hi, a = 0.0, 1.0, 0.5
    for _ in range(100):
        g, d, curv = parts(a)
        if d > 0:
            hi = a
        else:
            lo = a
        step = a - d / curv if curv > 0 else -1.0
        a_new = step if lo < step < hi else 0.5 * (lo + hi)
        if abs(a_new - a) <= 1e-15 or hi - lo <= 1e-15:
            a = a_new
            break
        a = a_new
    return float(-min(parts(a)[0], g0, g1) / LN2)


def chernoff_flat(rho, sigma):
    """Log-Euclidean Chernoff distance ``sup_{a in [0,1]} (1-a) D^flat_a``."""
    rho, sigma = _pair(rho, sigma)
    if rho.ndim > 2:
        return _loop(chernoff_flat, rho, sigma)
    if _hs_overlap(rho, sigma) <= ORTHOGONAL_TOL:
        return math.inf
    fd = _flat_data(rho, sigma)
    if fd.empty:
        return math.inf
    _, val = grid_refine_max(lambda a: -_flat_log2_q(fd, a), 0.0, 1.0)
    return val


def hilbert_alpha(rho, sigma, alpha: float):
    """Hilbert alpha-divergence ``a/(a-1) log2 sup Tr[L rho]/Tr[L sigma]`` over ``I/a <= L <= I``.

    The supremum is the root ``t`` of
    ``g(t) = Tr[rho - t sigma]/a + (1 - 1/a) Tr[(rho - t sigma)_+]``.
    """
    if not alpha >= 1:
        raise DomainError("Hilbert order must be >= 1")
    if np.isinf(alpha):
        return max_relative_entropy(rho, sigma)
    rho, sigma = _pair(rho, sigma)
    if alpha == 1:
        tn = np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(rho - sigma))), axis=-1)
        return _out(tn / (2 * LN2))
    if rho.ndim > 2:
        return _loop(lambda r, s: hilbert_alpha(r, s, alpha), rho, sigma)
    t_star = hilbert_ratio(rho, sigma, alpha)
    return alpha / (alpha - 1.0) * math.log2(t_star)


def hilbert_ratio(rho, sigma, alpha: float) -> float:
    """The supremum ``sup Tr[L rho]/Tr[L sigma]`` over ``I/alpha <= L <= I`` (``alpha > 1``)."""
    inv = 1.0 / alpha
    tr_r = float(np.trace(rho).real)
    tr_s = float(np.trace(sigma).real)

    def g(t):
        ev = np.linalg.eigvalsh(hermitian_part(rho - t * sigma))
        return inv * (tr_r - t * tr_s) + (1 - inv) * np.sum(ev[ev > 0])

    hi = alpha
    dm = max_relative_entropy(rho, sigma)
    if np.isfinite(dm):
        hi = min(hi, 2.0**dm)
    if g(1.0) <= 1e-15 or hi <= 1.0:
        return 1.0
    if g(hi) >= 0:
        return hi
    return brentq(g, 1.0, hi, xtol=1e-14, rtol=1e-15)


def _fidelity(rho, sigma):
    rs, ss = _spec(rho), _spec(sigma)
    sr, sq = _noise_sqrt(rs), _noise_sqrt(ss)
    s = np.linalg.svd(sr @ sq, compute_uv=False)
    return np.clip(np.sum(s, axis=-1) ** 2, 0.0, 1.0)


def fidelity(rho, sigma):
    """Uhlmann fidelity ``|| sqrt(rho) sqrt(sigma) ||_1^2``."""
    rho, sigma = _pair(rho, sigma)
    return _out(_fidelity(rho, sigma))


def trace_distance(rho, sigma):
    rho, sigma = _pair(rho, sigma)
    return _out(0.5 * np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(rho - sigma))), axis=-1))


def _root_fidelity_gap(rho, sigma) -> np.ndarray:
    """``1 - sqrt(F)`` without cancellation.

    With ``A = sqrt(rho)``, ``B = sqrt(sigma)`` and ``U`` the unitary aligning
    ``BU`` with ``A``, ``1 - ||AB||_1 = ||A - BU||_F^2 / 2`` for unit traces.
    """
    rho, sigma = _pair(rho, sigma)
    rs, ss = _spec(rho), _spec(sigma)
    A, B = _noise_sqrt(rs), _noise_sqrt(ss)
    W, _, Vh = np.linalg.svd(A @ B)
    U = dag(Vh) @ dag(W)
    D = A - B @ U
    return np.clip(0.5 * np.sum(np.abs(D) ** 2, axis=(-2, -1)), 0.0, 1.0)


def c_distance(rho, sigma):
    u = _root_fidelity_gap(rho, sigma)
    return _out(np.sqrt(u * (2.0 - u)))


def bures_distance(rho, sigma):
    return _out(np.sqrt(2.0 * _root_fidelity_gap(rho, sigma)))


class Metrics(NamedTuple):
    trace_distance: float
    fidelity: float
    c_distance: float
    bures: float


def metrics(rho, sigma) -> Metrics:
    """Trace distance, fidelity, c-distance and Bures distance of a state pair."""
    rho, sigma = _pair(rho, sigma)
    F = _fidelity(rho, sigma)
    td = 0.5 * np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(rho - sigma))), axis=-1)
    u = _root_fidelity_gap(rho, sigma)
    return Metrics(_out(td), _out(F), _out(np.sqrt(u * (2.0 - u))), _out(np.sqrt(2.0 * u)))


def _loop(fn, rho, sigma):
    shape = rho.shape[:-2]
    d = rho.shape[-1]
    flat = [fn(r, s) for r, s in zip(rho.reshape(-1, d, d), sigma.reshape(-1, d, d))]
    return np.array(flat, dtype=float).reshape(shape)


def divergence(kind: DivergenceKind, rho, sigma):
    """Evaluate any :class:`DivergenceKind` on a state pair (or stacks)."""
    t, a = kind.tag, kind.alpha
    if t == "RELATIVE":
        return relative_entropy(rho, sigma)
    if t == "PETZ":
        return petz_renyi(rho, sigma, a)
    if t == "SANDWICHED":
        return sandwiched_renyi(rho, sigma, a)
    if t == "LOG_EUCLIDEAN":
        return log_euclidean_renyi(rho, sigma, a)
    if t == "MAX":
        return max_relative_entropy(rho, sigma)
    if t == "CHERNOFF":
        return chernoff(rho, sigma)
    if t == "CHERNOFF_FLAT":
        return chernoff_flat(rho, sigma)
    if t == "HILBERT":
        return hilbert_alpha(rho, sigma, a)
    if t == "TRACE_DIST":
        return trace_distance(rho, sigma)
    if t == "FIDELITY":
        F = np.asarray(fidelity(rho, sigma))
        with np.errstate(divide="ignore"):
            return _out(np.where(F <= 0, np.inf, -np.log2(np.clip(F, 1e-300, None))))
    if t == "C_DIST":
        return c_distance(rho, sigma)
    if t == "BURES":
        return bures_distance(rho, sigma)
    raise DomainError(f"unknown kind {kind}")


# --------------------------------------------------------------------------
# classical two-outcome divergences
# --------------------------------------------------------------------------


def _classical(kind: DivergenceKind, p: np.ndarray, q: np.ndarray) -> float | None:
    """Scalar formulas for commuting pairs; ``None`` when no shortcut applies."""
    t, a = kind.tag, kind.alpha
    supp_p = p > 0
    supp_q = q > 0
    if t == "RELATIVE" or (t in ("PETZ", "SANDWICHED", "LOG_EUCLIDEAN") and a == 1):
        if np.any(supp_p & ~supp_q):
            return math.inf
        return float(np.sum(p[supp_p] * np.log2(p[supp_p] / q[supp_p])))
    if t == "MAX" or (t == "SANDWICHED" and np.isinf(a)):
        if np.any(supp_p & ~supp_q):
            return math.inf
        return float(np.log2(np.max(p[supp_p] / q[supp_p])))
    if t in ("PETZ", "SANDWICHED", "LOG_EUCLIDEAN"):
        if a == 0:
            s = float(np.sum(q[supp_p]))
            return math.inf if s <= ORTHOGONAL_TOL else -math.log2(s)
        both = supp_p & supp_q
        if a < 1 and float(np.dot(p, q)) <= ORTHOGONAL_TOL:
            return math.inf
        if a > 1 and np.any(supp_p & ~supp_q):
            return math.inf
        s = float(np.sum(p[both] ** a * q[both] ** (1 - a)))
        return math.log2(s) / (a - 1)
    if t == "TRACE_DIST":
        return 0.5 * float(np.sum(np.abs(p - q)))
    return None


def binary_divergence(p: float, q: float, kind: DivergenceKind) -> float:
    """Divergence between the two-outcome states ``diag(p, 1-p)`` and ``diag(q, 1-q)``."""
    for x in (p, q):
        if not (0.0 <= x <= 1.0):
            raise DomainError("probabilities must lie in [0, 1]")
    pv = np.array([p, 1.0 - p])
    qv = np.array([q, 1.0 - q])
    v = _classical(kind, pv, qv)
    if v is not None:
        return v
    return divergence(kind, np.diag(pv).astype(complex), np.diag(qv).astype(complex))


# --------------------------------------------------------------------------
# divergence sphere and Fuchs-van de Graaf
# --------------------------------------------------------------------------


class SphereValue(NamedTuple):
    value: float
    alpha: float
    interior: bool


def divergence_sphere(rho, sigma, r: float) -> SphereValue:
    """``sup_{a in (0,1)} ((a-1)/a) (r - D^flat_a(rho||sigma))``.

    ``interior`` is true when the supremum is attained strictly inside the
    order interval.  Otherwise the returned value is the boundary limit (0 at
    ``a -> 1``) and no identification with the constrained relative-entropy
    minimization is claimed.
    """
    if not r > 0:
        raise DomainError("radius must be positive")
    rho, sigma = _pair(rho, sigma)
    if _hs_overlap(rho, sigma) <= ORTHOGONAL_TOL:
        return SphereValue(math.inf, 0.0, False)
    fd = _flat_data(rho, sigma)

    def obj(alphas):
        alphas = np.asarray(alphas, dtype=float)
        d_flat = _flat_log2_q(fd, alphas) / (alphas - 1.0)
        return (alphas - 1.0) / alphas * (r - d_flat)

    edge = 1e-6
    a_star, v = grid_refine_max(obj, edge, 1.0 - edge)
    # limit of the objective at a -> 1; zero when supp(rho) lies inside supp(sigma)
    limit = float(-_flat_log2_q(fd, np.array([1.0]))[0])
    if limit >= v:
        return SphereValue(limit, 1.0, False)
    interior = 10 * edge < a_star < 1.0 - 10 * edge
    return SphereValue(float(v), float(a_star), bool(interior))


class FvdGResult(NamedTuple):
    holds: bool
    slack: float


def fvdg_check(A, B) -> FvdGResult:
    """Check ``||A-B||_1^2 + 4 ||A^{1/2} B^{1/2}||_1^2 <= (Tr[A+B])^2`` for PSD ``A``, ``B``."""
    A = as_psd(A)
    B = as_psd(B)
    if A.shape != B.shape:
        raise DimError("operands must have equal shape")
    tn = float(np.sum(np.abs(np.linalg.eigvalsh(hermitian_part(A - B)))))
    sa = _func_of(_spec(A), np.sqrt(_spec(A).w))
    sb = _func_of(_spec(B), np.sqrt(_spec(B).w))
    cross = float(np.sum(np.linalg.svd(sa @ sb, compute_uv=False)))
    rhs = float(np.real(np.trace(A + B))) ** 2
    slack = rhs - (tn**2 + 4.0 * cross**2)
    return FvdGResult(slack >= -1e-10, slack)
