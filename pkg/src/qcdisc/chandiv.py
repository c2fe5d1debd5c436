"""Channel divergences: optimized over inputs, the Choi form of the max-divergence,
amortized lower-bound searches and the certified amortized upper bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import schur
from scipy.optimize import minimize, minimize_scalar

from . import divergences as dv
from .channels import (
    CqChannel,
    EnvParamChannel,
    QuantumChannel,
    ReplacerChannel,
    apply,
    apply_pure,
    channels_equal,
    choi,
    environment_state,
    seizing_strategy,
    shared_interaction,
)
from .divergences import DivergenceKind
from .exceptions import DimError, DomainError
from .linmat import as_psd, dag, hermitian_part, partial_trace
from .optimize import ordered_map, sphere_ascent
from .sampling import child_seeds, random_pure

EXACT = "EXACT"
HEURISTIC_LOWER = "HEURISTIC_LOWER"

DMAX_COLLAPSE = "DMAX_COLLAPSE"
HILBERT_COLLAPSE = "HILBERT_COLLAPSE"
FIDELITY_COLLAPSE = "FIDELITY_COLLAPSE"
CQ_COLLAPSE = "CQ_COLLAPSE"
ENV_PARAM = "ENV_PARAM"
REPLACER = "REPLACER"
UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Certification:
    """How a value was obtained: an exact rule, or a multistart search (a lower estimate)."""

    kind: str
    rule: str | None = None
    multistarts: int | None = None
    seed: int | None = None

    def __str__(self) -> str:
        if self.kind == EXACT:
            return f"EXACT({self.rule})"
        return f"HEURISTIC_LOWER(multistarts={self.multistarts}, seed={self.seed})"


@dataclass
class ChannelDivergenceResult:
    value: float
    optimizer_state: object
    certification: Certification


@dataclass(frozen=True)
class EnergyConstraint:
    """Average-energy constraint ``Tr[H rho_A] <= energy`` on channel inputs."""

    hamiltonian: np.ndarray
    energy: float

    def __post_init__(self):
        H = as_psd(self.hamiltonian)
        object.__setattr__(self, "hamiltonian", H)
        if self.energy < float(np.linalg.eigvalsh(H)[0]) - 1e-12:
            raise DomainError("energy below the ground-state energy: no feasible input")


@dataclass
class SearchOptions:
    """Settings for the multistart input searches."""

    multistarts: int = 32
    seed: int = 42
    fd_step: float = 1e-5
    tol: float = 1e-7
    max_iter: int = 300
    exploit_structure: bool = True
    restarts: int = 4
    nm_maxiter: int = 4000


@dataclass
class AmortizedUpper:
    value: float
    rule: str
    candidates: dict = field(default_factory=dict)


@dataclass
class AmortizedBoundBundle:
    lower: ChannelDivergenceResult
    upper: float
    rule: str


def _same_dims(N: QuantumChannel, M: QuantumChannel):
    if (N.dim_in, N.dim_out) != (M.dim_in, M.dim_out):
        raise DimError("channels must share input and output dimensions")


# --------------------------------------------------------------------------
# structure helpers
# --------------------------------------------------------------------------


def _cq_collapse_kind(kind: DivergenceKind) -> bool:
    t, a = kind.tag, kind.alpha
    if t in ("RELATIVE", "MAX", "FIDELITY"):
        return True
    if t == "PETZ":
        return 0 <= a <= 2
    if t == "SANDWICHED":
        return a >= 0.5
    return False


def _is_cq_pair(N, M) -> bool:
    return isinstance(N, CqChannel) and isinstance(M, CqChannel) and N.outputs.shape == M.outputs.shape


def cq_letter_values(kind: DivergenceKind, N: CqChannel, M: CqChannel) -> np.ndarray:
    """``kind(nu^x || mu^x)`` for every letter."""
    return np.array([dv.divergence(kind, a, b) for a, b in zip(N.outputs, M.outputs)], dtype=float)


def _seizable_pair(N, M) -> str | None:
    fam = getattr(N, "family", None)
    if fam in ("erasure", "dephasing") and getattr(M, "family", None) == fam and shared_interaction(N, M):
        return fam
    return None


def _is_gad_pair(N, M) -> bool:
    return getattr(N, "family", None) == "gad" and getattr(M, "family", None) == "gad"


def _phi_vector(a: int) -> np.ndarray:
    return np.eye(a, dtype=complex).reshape(-1) / np.sqrt(a)


def _basis_input(x: int, a: int) -> np.ndarray:
    v = np.zeros(a * a, dtype=complex)
    v[x] = 1.0  # |0>_R |x>_A
    return v


# --------------------------------------------------------------------------
# D_max in Choi form
# --------------------------------------------------------------------------


def dmax_channel(N: QuantumChannel, M: QuantumChannel) -> float:
    """Max-divergence of two channels, ``D_max(N(Phi) || M(Phi))``.

    The maximally entangled input attains the supremum over all inputs.  The
    normalized Choi states are used; the unnormalized form differs by the same
    factor in both arguments, which cancels in the max-divergence.
    """
    _same_dims(N, M)
    return dv.max_relative_entropy(choi(N), choi(M))


def dmax_bisection(N: QuantumChannel, M: QuantumChannel, tol: float = 1e-12) -> float:
    """Smallest ``lam`` with ``2^lam C_M - C_N >= 0`` by bisection (independent of the eigen-ratio form)."""
    CN, CM = choi(N), choi(M)
    # support containment from the Kraus ranges: Choi = sum_i |K_i>><<K_i| / d_in
    KN = np.stack([K.reshape(-1) for K in N.kraus], axis=1)
    KM = np.stack([K.reshape(-1) for K in M.kraus], axis=1)
    U, s, _ = np.linalg.svd(KM, full_matrices=False)
    keep = s**2 / N.dim_in > 1e-10 * max(1.0, s[0] ** 2 / N.dim_in)
    U = U[:, keep]
    outside = KN - U @ (dag(U) @ KN)
    if np.sum(np.abs(outside) ** 2) / N.dim_in > dv.LEAK_TOL:
        return math.inf

    def feasible(lam):
        ev = np.linalg.eigvalsh(hermitian_part(2.0**lam * CM - CN))
        return ev[0] >= -1e-14 * (1.0 + 2.0**lam)

    hi = 1.0
    while not feasible(hi):
        hi *= 2
        if hi > 128:
            return math.inf
    lo = -1.0 if feasible(-1.0) else 0.0
    if feasible(lo):
        lo = -64.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return hi


# --------------------------------------------------------------------------
# generalized channel divergence
# --------------------------------------------------------------------------


def _energy_projector(constraint: EnergyConstraint | None, a: int):
    if constraint is None:
        return None
    H = constraint.hamiltonian
    G = np.kron(np.eye(a), H)
    ev, V = np.linalg.eigh(G)
    ground = V[:, np.isclose(ev, ev[0], atol=1e-12)]
    E = constraint.energy

    def energy(x):
        return float(np.real(np.vdot(x, G @ x)))

    def project(x):
        if energy(x) <= E + 1e-12:
            return x
        g = ground @ (dag(ground) @ x)
        if np.linalg.norm(g) < 1e-12:
            g = ground[:, 0].astype(complex)
        g = g / np.linalg.norm(g)
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            y = (1 - mid) * x + mid * g
            y = y / np.linalg.norm(y)
            if energy(y) <= E:
                hi = mid
            else:
                lo = mid
        y = (1 - hi) * x + hi * g
        return y / np.linalg.norm(y)

    return project


def _input_objective(kind: DivergenceKind, N: QuantumChannel, M: QuantumChannel):
    a = N.dim_in

    def f(psis):
        return np.atleast_1d(dv.divergence(kind, apply_pure(N, psis, a), apply_pure(M, psis, a)))

    return f


def covariant_scan(kind: DivergenceKind, N: QuantumChannel, M: QuantumChannel, n_grid: int = 1001):
    """Maximize over the one-parameter family ``sqrt(z)|00> + sqrt(1-z)|11>`` of qubit inputs.

    For qubit channel pairs covariant under ``{I, Z}`` this family attains the
    channel divergence.  Returns ``(value, z)``.
    """
    if N.dim_in != 2:
        raise DimError("the covariant scan needs qubit inputs")
    f = _input_objective(kind, N, M)

    def psi(z):
        z = np.atleast_1d(z)
        v = np.zeros((len(z), 4), dtype=complex)
        v[:, 0] = np.sqrt(z)
        v[:, 3] = np.sqrt(1 - z)
        return v

    zs = np.linspace(0.0, 1.0, n_grid)
    vals = f(psi(zs))
    vals = np.where(np.isnan(vals), -np.inf, vals)
    k = int(np.argmax(vals))
    if np.isposinf(vals[k]):
        return math.inf, float(zs[k])
    best_z, best = float(zs[k]), float(vals[k])
    lo, hi = zs[max(k - 1, 0)], zs[min(k + 1, n_grid - 1)]
    res = minimize_scalar(lambda z: -f(psi(z))[0], bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    if np.isfinite(res.fun) and -res.fun > best:
        best_z, best = float(res.x), float(-res.fun)
    return best, best_z


def channel_divergence(
    kind: DivergenceKind,
    N: QuantumChannel,
    M: QuantumChannel,
    constraint: EnergyConstraint | None = None,
    opts: SearchOptions | None = None,
) -> ChannelDivergenceResult:
    """``sup_psi kind(N(psi) || M(psi))`` over pure inputs on ``R ⊗ A`` with ``|R| = |A|``.

    Exact rules are used for identical channels, the max-divergence, cq pairs,
    environment-seizable pairs and covariant qubit pairs; otherwise a
    multistart projected gradient ascent gives a lower estimate.
    """
    _same_dims(N, M)
    opts = opts or SearchOptions()
    a = N.dim_in
    project = _energy_projector(constraint, a)
    if channels_equal(N, M):
        start = _phi_vector(a) if project is None else project(_phi_vector(a))
        return ChannelDivergenceResult(0.0, start, Certification(EXACT, "identical"))
    if constraint is None and opts.exploit_structure:
        exact = _exact_channel_divergence(kind, N, M)
        if exact is not None:
            return exact
    f = _input_objective(kind, N, M)
    seeds = child_seeds(opts.seed, opts.multistarts)

    def run(i):
        rng = np.random.default_rng(seeds[i])
        x0 = _phi_vector(a) if i == 0 else random_pure(a * a, rng)
        return sphere_ascent(f, x0, opts.fd_step, opts.tol, opts.max_iter, project)

    results = ordered_map(run, list(range(opts.multistarts)))
    best_x, best_v = max(results, key=lambda r: (r[1] if not np.isnan(r[1]) else -np.inf))
    return ChannelDivergenceResult(
        float(best_v), best_x, Certification(HEURISTIC_LOWER, None, opts.multistarts, opts.seed)
    )


def _exact_channel_divergence(kind, N, M) -> ChannelDivergenceResult | None:
    a = N.dim_in
    if kind.tag == "MAX" or (kind.tag == "SANDWICHED" and np.isinf(kind.alpha)):
        return ChannelDivergenceResult(dmax_channel(N, M), _phi_vector(a), Certification(EXACT, "choi"))
    if _is_cq_pair(N, M) and _cq_collapse_kind(kind):
        vals = cq_letter_values(kind, N, M)
        x = int(np.argmax(vals))
        return ChannelDivergenceResult(float(vals[x]), _basis_input(x, a), Certification(EXACT, CQ_COLLAPSE))
    fam = _seizable_pair(N, M)
    if fam is not None and kind.subadditive:
        val = dv.divergence(kind, N.env_state, M.env_state)
        rho, r, _ = seizing_strategy(fam, N)
        w, V = np.linalg.eigh(rho)
        vec = np.kron(np.eye(a)[0], V[:, -1]) if r == 1 else _phi_vector(a)
        return ChannelDivergenceResult(float(val), vec, Certification(EXACT, "env_seizable"))
    if _is_gad_pair(N, M) and kind.data_processing:
        val, z = covariant_scan(kind, N, M)
        vec = np.array([np.sqrt(z), 0, 0, np.sqrt(1 - z)], dtype=complex)
        return ChannelDivergenceResult(val, vec, Certification(EXACT, "covariance_scan"))
    return None


# --------------------------------------------------------------------------
# amortized divergence
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _upper_indices(d: int):
    return np.triu_indices(d, 1)


def _state_from_params(x: np.ndarray, d: int) -> np.ndarray:
    """``V diag(softmax(w)) V^dagger`` with ``V = exp(i H)``; ``d*d + d`` real parameters."""
    h = x[: d * d]
    w = x[d * d : d * d + d]
    iu = _upper_indices(d)
    n_off = len(iu[0])
    H = np.diag(h[:d].astype(complex))
    H[iu] = h[d : d + n_off] + 1j * h[d + n_off : d + 2 * n_off]
    H = H + np.triu(H, 1).conj().T
    lam, U = np.linalg.eigh(H)
    V = (U * np.exp(1j * lam)) @ dag(U)
    p = np.exp(w - w.max())
    p /= p.sum()
    return (V * p) @ dag(V)


def _params_for_pure(psi: np.ndarray, d: int, weight: float = 30.0) -> np.ndarray:
    """Parameters whose state is (numerically) the pure state ``psi``."""
    # unitary whose first column is psi, then its Hermitian logarithm
    M = np.eye(d, dtype=complex)
    M[:, 0] = psi
    Q, R = np.linalg.qr(M)
    Q[:, 0] *= np.vdot(Q[:, 0], psi) / abs(np.vdot(Q[:, 0], psi))
    T, Z = schur(Q, output="complex")
    H = hermitian_part((Z * np.angle(np.diag(T))) @ dag(Z))
    iu = np.triu_indices(d, 1)
    h = np.concatenate([np.real(np.diag(H)), H[iu].real, H[iu].imag])
    wv = np.zeros(d)
    wv[0] = weight
    return np.concatenate([h, wv])


def amortized_objective(kind: DivergenceKind, N: QuantumChannel, M: QuantumChannel, rho, sigma, r_dim: int):
    """``kind(N(rho)||M(sigma)) - kind(rho||sigma)``; NaN for the invalid ``inf - inf``."""
    d_in = np.asarray(dv.divergence(kind, rho, sigma), dtype=float)
    d_out = np.asarray(dv.divergence(kind, apply(N, rho, r_dim), apply(M, sigma, r_dim)), dtype=float)
    with np.errstate(invalid="ignore"):
        val = d_out - d_in
    val = np.where(np.isposinf(d_in) & np.isposinf(d_out), np.nan, val)
    return float(val) if val.ndim == 0 else val


def amortized_samples(
    kind: DivergenceKind,
    N: QuantumChannel,
    M: QuantumChannel,
    r_dim: int,
    count: int,
    rng: np.random.Generator,
    rho: np.ndarray | None = None,
    sigma: np.ndarray | None = None,
) -> np.ndarray:
    """Amortized objective on random input pairs (random ranks); invalid samples are NaN."""
    from .sampling import random_states

    d = r_dim * N.dim_in
    if rho is None:
        ranks = rng.integers(1, d + 1, size=2)
        rho = random_states(count, d, rng, rank=int(ranks[0]))
        sigma = random_states(count, d, rng, rank=int(ranks[1]))
    return np.atleast_1d(amortized_objective(kind, N, M, rho, sigma, r_dim))


def amortized_lower_search(
    kind: DivergenceKind,
    N: QuantumChannel,
    M: QuantumChannel,
    r_dim_cap: int | None = None,
    opts: SearchOptions | None = None,
) -> ChannelDivergenceResult:
    """Lower estimate of the amortized divergence by searching over input pairs on ``R ⊗ A``.

    The search is seeded with ``rho = sigma = psi`` where ``psi`` optimizes the
    plain channel divergence, so the result never falls below it.  Further
    starts run Nelder-Mead on the spectral parameterization of both states.
    """
    _same_dims(N, M)
    opts = opts or SearchOptions()
    a = N.dim_in
    # the reference must hold the plain optimizer, so |R| >= |A|
    r = max(r_dim_cap or 2 * a, a)
    d = r * a
    plain = channel_divergence(kind, N, M, opts=opts)
    psi = np.zeros((r, a), dtype=complex)
    psi[:a] = plain.optimizer_state.reshape(a, a)  # |R| = a embedded in the first a levels of R
    psi = psi.reshape(-1)
    seed_rho = np.outer(psi, psi.conj())
    best_v = float(plain.value)
    best_pair = (seed_rho, seed_rho)
    if np.isposinf(best_v):
        return ChannelDivergenceResult(best_v, best_pair, Certification(HEURISTIC_LOWER, None, opts.restarts, opts.seed))
    n_par = d * d + d

    def obj(x):
        rho = _state_from_params(x[:n_par], d)
        sigma = _state_from_params(x[n_par:], d)
        v = amortized_objective(kind, N, M, rho, sigma, r)
        if np.isnan(v):
            return 1e6
        return -v

    seeds = child_seeds(opts.seed + 1, opts.restarts)

    def run(i):
        rng = np.random.default_rng(seeds[i])
        if i == 0:
            p = _params_for_pure(psi, d)
            x0 = np.concatenate([p, p + 1e-3 * rng.standard_normal(n_par)])
        else:
            x0 = rng.standard_normal(2 * n_par)
        res = minimize(obj, x0, method="Nelder-Mead", options={"maxiter": opts.nm_maxiter, "maxfev": 3 * opts.nm_maxiter, "xatol": 1e-9, "fatol": 1e-12, "adaptive": True})
        return res.x, -float(res.fun)

    for x, v in ordered_map(run, list(range(opts.restarts))):
        if v > best_v:
            best_v = v
            best_pair = (_state_from_params(x[:n_par], d), _state_from_params(x[n_par:], d))
    return ChannelDivergenceResult(best_v, best_pair, Certification(HEURISTIC_LOWER, None, opts.restarts, opts.seed))


def amortized_upper(
    kind: DivergenceKind,
    N: QuantumChannel,
    M: QuantumChannel,
    constraint: EnergyConstraint | None = None,
    opts: SearchOptions | None = None,
) -> AmortizedUpper:
    """Tightest certified upper bound on the amortized divergence, with its rule tag.

    Every applicable collapse is evaluated and the minimum is returned; with
    no applicable rule the value is ``inf`` and the tag ``UNKNOWN``.
    Bounds for the unconstrained amortized divergence also bound the
    energy-constrained one.
    """
    _same_dims(N, M)
    opts = opts or SearchOptions()
    t, a = kind.tag, kind.alpha
    cands: dict[str, float] = {}
    if channels_equal(N, M) and kind.data_processing:
        return AmortizedUpper(0.0, "IDENTICAL", {"IDENTICAL": 0.0})
    if t == "MAX" or (t in ("SANDWICHED", "RELATIVE") and (a is None or a >= 1)):
        # the max-divergence collapse bounds every sandwiched order >= 1
        cands[DMAX_COLLAPSE] = dmax_channel(N, M)
    if t in ("HILBERT", "TRACE_DIST"):
        cands[HILBERT_COLLAPSE] = channel_divergence(kind, N, M, opts=opts).value
    if t in ("C_DIST", "BURES"):
        cands[FIDELITY_COLLAPSE] = channel_divergence(kind, N, M, opts=opts).value
    if _is_cq_pair(N, M) and _cq_collapse_kind(kind):
        cands[CQ_COLLAPSE] = float(np.max(cq_letter_values(kind, N, M)))
    if kind.subadditive and shared_interaction(N, M):
        cands[ENV_PARAM] = float(dv.divergence(kind, environment_state(N), environment_state(M)))
    if isinstance(M, ReplacerChannel) and (t == "RELATIVE" or (t == "SANDWICHED" and a > 1)):
        c = constraint if t == "RELATIVE" else None
        cands[REPLACER] = channel_divergence(kind, N, M, constraint=c, opts=opts).value
    if not cands:
        return AmortizedUpper(math.inf, UNKNOWN, {})
    rule = min(cands, key=lambda k: cands[k])
    return AmortizedUpper(float(cands[rule]), rule, cands)


def amortized_bounds(kind, N, M, r_dim_cap=None, opts=None) -> AmortizedBoundBundle:
    lower = amortized_lower_search(kind, N, M, r_dim_cap, opts)
    up = amortized_upper(kind, N, M, opts=opts)
    return AmortizedBoundBundle(lower, up.value, up.rule)


# --------------------------------------------------------------------------
# generalized amplitude damping grids
# --------------------------------------------------------------------------


@dataclass
class GadCell:
    p1: float
    p2: float
    lower: float
    upper: float
    diff: float
    dmax: float
    env_upper: float | None


def bound_gap(upper: float, lower: float) -> float:
    """``upper - lower``, taken as 0 when both bounds are ``+inf``."""
    if np.isposinf(upper) and np.isposinf(lower):
        return 0.0
    return float(upper - lower)


def gad_bounds_grid(eta1: float, eta2: float, p_grid) -> list[GadCell]:
    """Stein bracket for pairs of generalized amplitude damping channels over a grid of ``(p1, p2)``.

    lower: relative-entropy channel divergence (covariant one-parameter scan);
    upper: the max-divergence, and for ``eta1 == eta2`` also the environment
    bound ``d(p1||p2)``.
    """
    from .channels import make_gad

    rows = []
    for p1 in p_grid:
        for p2 in p_grid:
            N, M = make_gad(eta1, p1), make_gad(eta2, p2)
            if channels_equal(N, M):
                lower = 0.0
            else:
                lower, _ = covariant_scan(dv.RELATIVE, N, M)
            dmax = dmax_channel(N, M)
            env = dv.binary_divergence(float(p1), float(p2), dv.RELATIVE) if eta1 == eta2 else None
            upper = dmax if env is None else min(dmax, env)
            rows.append(GadCell(float(p1), float(p2), float(lower), float(upper), bound_gap(upper, lower), float(dmax), env))
    return rows
