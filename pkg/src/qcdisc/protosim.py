"""Finite-n adaptive channel discrimination: run, optimize and audit protocols.

A protocol with ``n`` rounds feeds a state on ``R_1 ⊗ A_1`` to the unknown
channel, processes ``R_i ⊗ B_i`` into ``R_{i+1} ⊗ A_{i+1}`` with an adaptor
channel between rounds, and ends with a two-outcome measurement ``{Q, I-Q}``
on ``R_n ⊗ B_n`` where ``Q`` votes for the first channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import divergences as dv
from .chandiv import UNKNOWN, AmortizedUpper
from .channels import QuantumChannel, apply, apply_pure, lifted_kraus
from .exceptions import DimError, DomainError, InvalidOperator, Unsupported
from .exponents import CHERNOFF, STEIN, Setting
from .linmat import dag, hermitian_part, kron, partial_trace, permutation_unitary
from .optimize import ordered_map, sphere_ascent
from .sampling import child_seeds, random_isometry, random_pure

MAX_ROUNDS = 3
MAX_TOTAL_DIM = 64
MEASUREMENT_TOL = 1e-9


@dataclass
class AdaptiveStrategy:
    """Initial state, adaptors between rounds and (optionally) the final measurement."""

    n: int
    memory_dims: list[int]
    initial_state: np.ndarray
    adaptors: list[QuantumChannel]
    final_measurement: np.ndarray | None = None

    def validate(self, N: QuantumChannel):
        a, b = N.dim_in, N.dim_out
        R = self.memory_dims
        if len(R) != self.n or len(self.adaptors) != self.n - 1:
            raise DimError("a strategy needs one memory per round and one adaptor between rounds")
        if self.initial_state.shape != (R[0] * a, R[0] * a):
            raise DimError(f"initial state must act on R_1 ⊗ A_1 of dimension {R[0] * a}")
        for i, ad in enumerate(self.adaptors):
            if (ad.dim_in, ad.dim_out) != (R[i] * b, R[i + 1] * a):
                raise DimError(f"adaptor {i + 1} must map dimension {R[i] * b} to {R[i + 1] * a}")
        if self.final_measurement is not None:
            Q = self.final_measurement
            if Q.shape != (R[-1] * b, R[-1] * b):
                raise DimError("the measurement must act on R_n ⊗ B_n")
            ev = np.linalg.eigvalsh(hermitian_part(Q))
            if ev[0] < -MEASUREMENT_TOL or ev[-1] > 1 + MEASUREMENT_TOL:
                raise InvalidOperator("the measurement operator must satisfy 0 <= Q <= I")


@dataclass
class EnergyLedger:
    energies: list[float]
    average: float


@dataclass
class ProtocolOutcome:
    """Type I error ``alpha_n`` (rejecting the first channel) and type II error ``beta_n``."""

    alpha_n: float
    beta_n: float
    final_states: tuple[np.ndarray, np.ndarray]
    trajectory: list[tuple[np.ndarray, int]] = field(default_factory=list)
    measurement: np.ndarray | None = None
    ledger: EnergyLedger | None = None
    extras: dict = field(default_factory=dict)

    def symmetric_error(self, p: float = 0.5) -> float:
        return p * self.alpha_n + (1 - p) * self.beta_n


@dataclass
class ProtocolOptions:
    """Settings for the see-saw strategy search and the non-adaptive baseline."""

    multistarts: int = 16
    seed: int = 42
    outer_rounds: int = 20
    inner_steps: int = 10
    tol: float = 1e-8
    penalty: float = 10.0
    baseline_starts: int = 8


# --------------------------------------------------------------------------
# measurements
# --------------------------------------------------------------------------


def helstrom_measurement(rho: np.ndarray, tau: np.ndarray, p: float = 0.5) -> np.ndarray:
    """Projector onto the positive part of ``p rho - (1-p) tau``."""
    w, V = np.linalg.eigh(hermitian_part(p * rho - (1 - p) * tau))
    Vp = V[:, w > 0]
    return Vp @ dag(Vp)


def _tr(A, B) -> float:
    """``Re Tr[A B]``."""
    return float(np.real(np.einsum("ij,ji->", A, B)))


def _errors(Q, rho, tau) -> tuple[float, float]:
    alpha = 1.0 - _tr(Q, rho)
    beta = _tr(Q, tau)
    return min(max(alpha, 0.0), 1.0), min(max(beta, 0.0), 1.0)


def neyman_pearson_test(rho: np.ndarray, tau: np.ndarray, eps: float, xtol: float = 1e-10) -> np.ndarray:
    """Test with type I error at most ``eps`` and the smallest type II error.

    Searches the multiplier ``t`` of the projector ``{rho - t tau > 0}`` on a
    log scale (16 trial points per pass), then mixes the two bracketing
    projectors so that the type I error equals ``eps``.
    """
    if not 0 < eps < 1:
        raise DomainError("the type I cap must lie in (0, 1)")
    rho, tau = hermitian_part(rho), hermitian_part(tau)

    def projs(xs):
        t = (2.0**xs)[:, None, None]
        w, V = np.linalg.eigh((rho[None] - t * tau[None]) / (1.0 + t))
        Qs = (V * (w > 1e-14)[:, None, :]) @ dag(V)
        alphas = 1.0 - np.real(np.einsum("kij,ji->k", Qs, rho))
        return Qs, alphas

    # t -> inf limit: the part of the support of rho orthogonal to tau
    wt, Vt = np.linalg.eigh(tau)
    K = Vt[:, wt <= 1e-10 * max(1.0, wt[-1])]
    w, U = np.linalg.eigh(hermitian_part(dag(K) @ rho @ K))
    Kp = K @ U[:, w > 1e-14]
    Q_inf = Kp @ dag(Kp)
    if _errors(Q_inf, rho, tau)[0] <= eps:
        return Q_inf
    lo, hi = -30.0, 30.0
    Qs, al = projs(np.array([lo, hi]))
    if al[1] <= eps:
        Q_lo, a_lo, Q_hi = Qs[1], al[1], Q_inf
        a_hi = _errors(Q_inf, rho, tau)[0]
        gamma = (eps - a_lo) / (a_hi - a_lo)
        return (1 - gamma) * Q_lo + gamma * Q_hi
    Q_lo, Q_hi, a_lo, a_hi = Qs[0], Qs[1], al[0], al[1]
    while hi - lo > xtol:
        xs = np.linspace(lo, hi, 18)[1:-1]
        Qs, al = projs(xs)
        ok = np.nonzero(al <= eps)[0]
        k = ok[-1] + 1 if len(ok) else 0
        if len(ok):
            lo, Q_lo, a_lo = xs[k - 1], Qs[k - 1], al[k - 1]
        if k < len(xs):
            hi, Q_hi, a_hi = xs[k], Qs[k], al[k]
    gamma = 0.0 if a_hi <= a_lo else (eps - a_lo) / (a_hi - a_lo)
    return (1 - gamma) * Q_lo + gamma * Q_hi


def np_rescale(Q: np.ndarray, rho: np.ndarray, eps: float) -> np.ndarray:
    """Shrink ``Q -> lam Q`` so the type I error rises to ``eps`` (no change if already above)."""
    alpha = _errors(Q, rho, rho)[0]
    if alpha >= eps:
        return Q
    return (1.0 - eps) / (1.0 - alpha) * Q


def _measure(mode: Setting, rho, tau) -> np.ndarray:
    if mode.tag == CHERNOFF:
        return helstrom_measurement(rho, tau, mode.parameter)
    if mode.tag == STEIN:
        return neyman_pearson_test(rho, tau, mode.parameter)
    raise Unsupported(f"protocols support CHERNOFF and STEIN modes, not {mode.tag}")


def _value(mode: Setting, alpha: float, beta: float) -> float:
    """Objective to minimize: symmetric error, or type II error for the Stein mode."""
    if mode.tag == CHERNOFF:
        p = mode.parameter
        return p * alpha + (1 - p) * beta
    return beta


def error_exponent(mode: Setting, outcome: ProtocolOutcome, n: int) -> float:
    """``-(1/n) log2`` of the mode's error (symmetric error, or ``beta_n`` in the Stein mode)."""
    v = _value(mode, outcome.alpha_n, outcome.beta_n)
    return math.inf if v <= 0 else -math.log2(v) / n


# --------------------------------------------------------------------------
# running a strategy
# --------------------------------------------------------------------------


def _trajectory(ch: QuantumChannel, rho1, adaptors, dims):
    """Inputs ``s_i`` (on ``R_i A_i``) and outputs ``o_i`` (on ``R_i B_i``) of every round."""
    s, o = [rho1], []
    for i in range(len(dims)):
        o.append(apply(ch, s[i], dims[i]))
        if i < len(dims) - 1:
            s.append(adaptors[i](o[i]))
    return s, o


def run_protocol(
    N: QuantumChannel,
    M: QuantumChannel,
    strategy: AdaptiveStrategy,
    p: float = 0.5,
    hamiltonian: np.ndarray | None = None,
) -> ProtocolOutcome:
    """Evolve both hypotheses through the strategy and evaluate the final test.

    Without a final measurement the Helstrom projector for prior ``p`` is
    used.  With ``hamiltonian`` the per-round input energies of the first
    hypothesis are recorded.
    """
    if (N.dim_in, N.dim_out) != (M.dim_in, M.dim_out):
        raise DimError("channels must share input and output dimensions")
    strategy.validate(N)
    dims = strategy.memory_dims
    sN, oN = _trajectory(N, strategy.initial_state, strategy.adaptors, dims)
    _, oM = _trajectory(M, strategy.initial_state, strategy.adaptors, dims)
    rho, tau = oN[-1], oM[-1]
    Q = strategy.final_measurement
    if Q is None:
        Q = helstrom_measurement(rho, tau, p)
    alpha, beta = _errors(Q, rho, tau)
    traj = list(zip(sN, dims))
    ledger = energy_audit(traj, hamiltonian)[0] if hamiltonian is not None else None
    return ProtocolOutcome(alpha, beta, (rho, tau), traj, Q, ledger)


def energy_audit(trajectory, H: np.ndarray, E: float | None = None) -> tuple[EnergyLedger, bool]:
    """Per-round energies ``Tr[H rho_{A_i}]`` of a trajectory of ``(state on R_i A_i, |R_i|)`` pairs."""
    H = np.asarray(H)
    a = H.shape[0]
    energies = []
    for state, r in trajectory:
        rho_a = partial_trace(state, [1], [r, a])
        energies.append(_tr(H, rho_a))
    ledger = EnergyLedger(energies, float(np.mean(energies)))
    feasible = True if E is None else ledger.average <= E + 1e-9
    return ledger, feasible


# --------------------------------------------------------------------------
# strategy construction
# --------------------------------------------------------------------------


def env_dim_for(d_in: int, d_out: int) -> int:
    """Environment dimension of the adaptor isometries."""
    return max(1, math.ceil(2 * d_in / d_out))


def adaptor_from_isometry(V: np.ndarray, d_out: int) -> QuantumChannel:
    """Channel ``X -> Tr_env[V X V^dagger]`` for an isometry with rows ordered (environment, output)."""
    return QuantumChannel(V.reshape(-1, d_out, V.shape[1]), check=False)


def parallel_dims(a: int, b: int, n: int) -> list[int]:
    """Memory dimensions of the adaptive embedding of ``n`` parallel uses with reference ``|R| = a``."""
    return [(a * b) ** i * a * (a * a) ** (n - 1 - i) for i in range(n)]


def parallel_embedding(psi: np.ndarray, a: int, b: int, n: int) -> tuple[AdaptiveStrategy, list[np.ndarray]]:
    """Adaptive strategy reproducing the parallel input ``psi^{⊗n}`` (``psi`` on ``R ⊗ A``, ``|R| = a``).

    Memory ``R_i`` holds the finished outputs ``(R B)`` of earlier rounds, the
    reference of round ``i`` and the unused copies ``(R A)``; each adaptor is
    a permutation that files away ``B_i`` and brings ``A_{i+1}`` forward.
    Returns the strategy and the adaptor isometries.
    """
    dims = parallel_dims(a, b, n)
    # initial: (R1 A1)(R2 A2)... -> R1 (R2 A2)... A1
    labels = [(k, s) for k in range(n) for s in "RA"]
    target = [(0, "R")] + [(k, s) for k in range(1, n) for s in "RA"] + [(0, "A")]
    U = permutation_unitary([a] * (2 * n), [labels.index(t) for t in target])
    v = U @ kron(*([psi] * n))
    rho1 = np.outer(v, v.conj())
    sizes = {"R": a, "A": a, "B": b}
    adaptors, isos = [], []
    for i in range(n - 1):
        done = [(k, s) for k in range(i) for s in "RB"]
        src = done + [(i, "R")] + [(k, s) for k in range(i + 1, n) for s in "RA"] + [(i, "B")]
        dst = done + [(i, "R"), (i, "B"), (i + 1, "R")] + [(k, s) for k in range(i + 2, n) for s in "RA"] + [(i + 1, "A")]
        P = permutation_unitary([sizes[s] for _, s in src], [src.index(t) for t in dst]).astype(complex)
        f = env_dim_for(P.shape[1], P.shape[0])
        V = np.zeros((f * P.shape[0], P.shape[1]), dtype=complex)
        V[: P.shape[0]] = P
        isos.append(V)
        adaptors.append(adaptor_from_isometry(V, P.shape[0]))
    return AdaptiveStrategy(n, dims, rho1, adaptors), isos


# --------------------------------------------------------------------------
# see-saw optimization
# --------------------------------------------------------------------------


def _adjoint_lifted(ch: QuantumChannel, W: np.ndarray, r: int) -> np.ndarray:
    K = lifted_kraus(ch, r)
    return np.sum(dag(K) @ W @ K, axis=0)


def _polar(Y: np.ndarray) -> np.ndarray:
    U, _, Wh = np.linalg.svd(Y, full_matrices=False)
    return U @ Wh


class _Seesaw:
    """State of one see-saw run: pure initial vector and adaptor isometries."""

    def __init__(self, N, M, mode: Setting, dims, psi, isos, opts: ProtocolOptions):
        self.N, self.M, self.mode, self.dims, self.opts = N, M, mode, dims, opts
        self.a, self.b = N.dim_in, N.dim_out
        self.psi = psi / np.linalg.norm(psi)
        self.isos = list(isos)
        self.mu = opts.penalty

    def adaptors(self, isos=None):
        isos = self.isos if isos is None else isos
        return [adaptor_from_isometry(V, self.dims[i + 1] * self.a) for i, V in enumerate(isos)]

    def forward(self, psi=None, isos=None):
        psi = self.psi if psi is None else psi
        rho1 = np.outer(psi, psi.conj())
        ads = self.adaptors(isos)
        return _trajectory(self.N, rho1, ads, self.dims), _trajectory(self.M, rho1, ads, self.dims), ads

    def weights(self, Q, rho, tau):
        alpha, beta = _errors(Q, rho, tau)
        if self.mode.tag == CHERNOFF:
            p = self.mode.parameter
            return -p * Q, (1 - p) * Q
        excess = max(0.0, alpha - self.mode.parameter)
        return -2.0 * self.mu * excess * Q, Q

    def loss(self, Q, rho, tau):
        alpha, beta = _errors(Q, rho, tau)
        if self.mode.tag == CHERNOFF:
            return _value(self.mode, alpha, beta)
        return beta + self.mu * max(0.0, alpha - self.mode.parameter) ** 2

    def loss_at(self, Q, psi=None, isos=None):
        (sN, oN), (sM, oM), _ = self.forward(psi, isos)
        return self.loss(Q, oN[-1], oM[-1])

    def backward(self, Q):
        """Heisenberg weights on every round input, and Euclidean gradients for the isometries."""
        (sN, oN), (sM, oM), ads = self.forward()
        WN, WM = self.weights(Q, oN[-1], oM[-1])
        n = len(self.dims)
        grads = [np.zeros_like(V) for V in self.isos]
        w1 = 0.0
        for ch, W, outs in ((self.N, WN, oN), (self.M, WM, oM)):
            for i in range(n - 1, -1, -1):
                Ws = _adjoint_lifted(ch, W, self.dims[i])
                if i == 0:
                    w1 = w1 + Ws
                    break
                V = self.isos[i - 1]
                f = V.shape[0] // Ws.shape[0]
                grads[i - 1] += 2.0 * (np.kron(np.eye(f), Ws) @ V @ outs[i - 1])
                W = ads[i - 1].adjoint(Ws)
        return w1, grads

    def evaluate(self):
        (sN, oN), (sM, oM), _ = self.forward()
        Q = _measure(self.mode, oN[-1], oM[-1])
        alpha, beta = _errors(Q, oN[-1], oM[-1])
        return _value(self.mode, alpha, beta), Q

    def run(self):
        best_v, Q = self.evaluate()
        best = (self.psi.copy(), [V.copy() for V in self.isos])
        step = 1.0
        for _ in range(self.opts.outer_rounds):
            # initial state: exact minimizer of the linear loss for the fixed test
            w1, _ = self.backward(Q)
            ev, vecs = np.linalg.eigh(hermitian_part(w1))
            cand = vecs[:, 0]
            if self.loss_at(Q, psi=cand) <= self.loss_at(Q) + 1e-15:
                self.psi = cand
            # adaptors: Riemannian gradient steps on the isometries with Armijo backtracking
            for _ in range(self.opts.inner_steps if self.isos else 0):
                _, grads = self.backward(Q)
                rgrads = []
                for V, G in zip(self.isos, grads):
                    VG = dag(V) @ G
                    rgrads.append(G - V @ (VG + dag(VG)) / 2)
                gn2 = sum(float(np.real(np.vdot(g, g))) for g in rgrads)
                if gn2 < 1e-24:
                    break
                f0 = self.loss_at(Q)
                t = step
                moved = False
                for _ in range(30):
                    trial = [_polar(V - t * g) for V, g in zip(self.isos, rgrads)]
                    if self.loss_at(Q, isos=trial) <= f0 - 1e-4 * t * gn2:
                        self.isos, moved = trial, True
                        break
                    t *= 0.5
                if not moved:
                    break
                step = min(2 * t, 10.0)
            v, Q = self.evaluate()
            improved = best_v - v
            if v < best_v:
                best_v, best = v, (self.psi.copy(), [V.copy() for V in self.isos])
            self.mu *= 10.0
            if abs(improved) < self.opts.tol and improved >= 0:
                break
        self.psi, self.isos = best
        return best_v


def _strategy_from(psi, isos, dims, a, Q=None) -> AdaptiveStrategy:
    ads = [adaptor_from_isometry(V, dims[i + 1] * a) for i, V in enumerate(isos)]
    return AdaptiveStrategy(len(dims), list(dims), np.outer(psi, psi.conj()), ads, Q)


def _check_scale(a: int, b: int, dims) -> bool:
    return all(r * max(a, b) <= MAX_TOTAL_DIM for r in dims)


def optimize_strategy(
    N: QuantumChannel,
    M: QuantumChannel,
    n: int,
    mode: Setting | None = None,
    memory_cap: int = 8,
    opts: ProtocolOptions | None = None,
) -> tuple[AdaptiveStrategy, ProtocolOutcome]:
    """See-saw search for an adaptive strategy minimizing the mode's error.

    Alternates the optimal test for the current strategy (Helstrom, or
    Neyman-Pearson in the Stein mode) with descent on the initial state and
    the adaptor isometries.  Start 0 is the adaptive embedding of the
    optimized non-adaptive strategy, so the result is never worse than it.
    """
    mode = mode or Setting.chernoff(0.5)
    opts = opts or ProtocolOptions()
    if not 1 <= n <= MAX_ROUNDS:
        raise DomainError(f"rounds must lie in 1..{MAX_ROUNDS}")
    if not 1 <= memory_cap <= 8:
        raise DomainError("memory cap must lie in 1..8")
    a, b = N.dim_in, N.dim_out
    cap_dims = [min(memory_cap, MAX_TOTAL_DIM // max(a, b))] * n
    seeds = child_seeds(opts.seed, opts.multistarts)
    base = nonadaptive_baseline(N, M, n, mode, opts)
    pdims = parallel_dims(a, b, n)

    def run(i):
        rng = np.random.default_rng(seeds[i])
        if i == 0 and _check_scale(a, b, pdims):
            strat, isos = parallel_embedding(base.extras["psi"], a, b, n)
            w, V = np.linalg.eigh(strat.initial_state)
            psi, dims = V[:, -1], pdims
        else:
            dims = cap_dims
            psi = random_pure(dims[0] * a, rng)
            isos = []
            for k in range(n - 1):
                d_in, d_out = dims[k] * b, dims[k + 1] * a
                isos.append(random_isometry(d_in, env_dim_for(d_in, d_out) * d_out, rng))
        s = _Seesaw(N, M, mode, dims, psi, isos, opts)
        v = s.run()
        return v, s.psi, s.isos, dims

    results = ordered_map(run, list(range(opts.multistarts)))
    v, psi, isos, dims = min(results, key=lambda r: r[0])
    strat = _strategy_from(psi, isos, dims, a)
    out = run_protocol(N, M, strat)
    Q = _measure(mode, *out.final_states)
    strat.final_measurement = Q
    alpha, beta = _errors(Q, *out.final_states)
    outcome = ProtocolOutcome(alpha, beta, out.final_states, out.trajectory, Q, extras={"baseline": base, "value": _value(mode, alpha, beta)})
    return strat, outcome


def nonadaptive_baseline(
    N: QuantumChannel, M: QuantumChannel, n: int, mode: Setting | None = None, opts: ProtocolOptions | None = None
) -> ProtocolOutcome:
    """Best product strategy ``psi^{⊗n}`` (``|R| = |A|``) with the optimal test on the joint output."""
    mode = mode or Setting.chernoff(0.5)
    opts = opts or ProtocolOptions()
    if not 1 <= n <= MAX_ROUNDS:
        raise DomainError(f"rounds must lie in 1..{MAX_ROUNDS}")
    a = N.dim_in

    def outputs(psi):
        o_n, o_m = apply_pure(N, psi, a), apply_pure(M, psi, a)
        return kron(*([o_n] * n)), kron(*([o_m] * n))

    def value(psi):
        rho, tau = outputs(psi)
        return _value(mode, *_errors(_measure(mode, rho, tau), rho, tau))

    def f_batch(psis):
        return np.array([-value(p) for p in psis])

    seeds = child_seeds(opts.seed + 7, opts.baseline_starts)

    def run(i):
        rng = np.random.default_rng(seeds[i])
        x0 = np.eye(a, dtype=complex).reshape(-1) / np.sqrt(a) if i == 0 else random_pure(a * a, rng)
        return sphere_ascent(f_batch, x0, tol=1e-10, max_iter=200)

    results = ordered_map(run, list(range(opts.baseline_starts)))
    psi, _ = max(results, key=lambda r: r[1])
    rho, tau = outputs(psi)
    Q = _measure(mode, rho, tau)
    alpha, beta = _errors(Q, rho, tau)
    traj = [(np.outer(psi, psi.conj()), a)] * n
    return ProtocolOutcome(alpha, beta, (rho, tau), traj, Q, extras={"psi": psi, "value": _value(mode, alpha, beta)})


# --------------------------------------------------------------------------
# converse check
# --------------------------------------------------------------------------


def meta_converse_check(
    outcome: ProtocolOutcome, n: int, kind: dv.DivergenceKind, amortized_upper_value
) -> tuple[bool, float]:
    """Check ``d(1 - alpha_n || beta_n) <= n * upper`` for a certified amortized upper bound.

    Returns ``(holds, slack)`` with ``slack = n * upper - d``; the check
    passes for ``slack >= -1e-6``.
    """
    if isinstance(amortized_upper_value, AmortizedUpper):
        if amortized_upper_value.rule == UNKNOWN:
            raise Unsupported("no certified amortized upper bound for this pair")
        upper = amortized_upper_value.value
    else:
        upper = float(amortized_upper_value)
    lhs = dv.binary_divergence(1.0 - outcome.alpha_n, outcome.beta_n, kind)
    if np.isposinf(upper):
        return True, math.inf
    if np.isposinf(lhs):
        return False, -math.inf
    slack = n * upper - lhs
    return slack >= -1e-6, float(slack)
